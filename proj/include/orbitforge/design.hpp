// Core types for symmetric 2-(v,k,lambda) designs: parameters, bit-packed
// incidence matrices (rows = blocks, columns = points) and point/block
// permutation actions. All types are immutable after construction.
#pragma once

#include <vector>

#include "orbitforge/bitmatrix.hpp"
#include "orbitforge/errors.hpp"

namespace orbitforge {

struct DesignParams {
  int v = 0;
  int k = 0;
  int lambda = 0;

  // n = k - lambda, the order of the design.
  int order() const { return k - lambda; }

  friend bool operator==(const DesignParams& a, const DesignParams& b) {
    return a.v == b.v && a.k == b.k && a.lambda == b.lambda;
  }
  friend bool operator!=(const DesignParams& a, const DesignParams& b) { return !(a == b); }
};

// Checks lambda*(v-1) == k*(k-1), 2 <= k < v, positivity and the packed
// representation bound v <= 1024. Throws ParameterIdentityViolation.
DesignParams validate_params(long long v, long long k, long long lambda);

class IncidenceMatrix {
 public:
  IncidenceMatrix(DesignParams params, BitMatrix bits)
      : params_(params), bits_(std::move(bits)) {
    if (bits_.rows() != params_.v || bits_.cols() != params_.v)
      throw DegreeMismatch("incidence matrix must be v x v");
  }

  const DesignParams& params() const { return params_; }
  int v() const { return params_.v; }
  const BitMatrix& bits() const { return bits_; }

  bool at(int block, int point) const { return bits_.get(block, point); }

  friend bool operator==(const IncidenceMatrix& a, const IncidenceMatrix& b) {
    return a.params_ == b.params_ && a.bits_ == b.bits_;
  }
  friend bool operator!=(const IncidenceMatrix& a, const IncidenceMatrix& b) {
    return !(a == b);
  }

 private:
  DesignParams params_;
  BitMatrix bits_;
};

struct PermutationAction {
  std::vector<int> point_perm;
  std::vector<int> block_perm;

  int degree() const { return static_cast<int>(point_perm.size()); }

  friend bool operator==(const PermutationAction& a, const PermutationAction& b) {
    return a.point_perm == b.point_perm && a.block_perm == b.block_perm;
  }
};

PermutationAction identity_action(int v);
bool is_identity(const PermutationAction& a);
// compose(a, b): applies b first, then a (pointwise a[b[x]]).
PermutationAction compose(const PermutationAction& a, const PermutationAction& b);
PermutationAction inverse(const PermutationAction& a);
// Multiplicative order of the action (lcm of cycle lengths of both parts).
long long action_order(const PermutationAction& a);

// True iff every row has k ones, every column has k ones, and any two
// distinct rows share exactly lambda ones.
bool is_2design(const IncidenceMatrix& m);

// Bitwise complement of every row; a 2-(v, v-k, v-2k+lambda) design.
IncidenceMatrix complement(const IncidenceMatrix& m);

// result[block_perm[i]][point_perm[j]] = m[i][j].
IncidenceMatrix apply_action(const IncidenceMatrix& m, const PermutationAction& a);

// True iff a maps m to itself.
bool is_automorphism(const IncidenceMatrix& m, const PermutationAction& a);

}  // namespace orbitforge
