#include "orbitforge/design.hpp"

#include <numeric>
#include <string>

namespace orbitforge {

DesignParams validate_params(long long v, long long k, long long lambda) {
  if (v <= 0 || k <= 0 || lambda <= 0)
    throw ParameterIdentityViolation("parameters must be positive");
  if (!(2 <= k && k < v))
    throw ParameterIdentityViolation("need 2 <= k < v, got k=" + std::to_string(k) +
                                     " v=" + std::to_string(v));
  if (lambda * (v - 1) != k * (k - 1))
    throw ParameterIdentityViolation(
        "lambda*(v-1) != k*(k-1): " + std::to_string(lambda) + "*" + std::to_string(v - 1) +
        " != " + std::to_string(k) + "*" + std::to_string(k - 1));
  if (v > BitMatrix::kMaxDim)
    throw ParameterIdentityViolation("v exceeds packed representation bound " +
                                     std::to_string(BitMatrix::kMaxDim));
  return DesignParams{static_cast<int>(v), static_cast<int>(k), static_cast<int>(lambda)};
}

PermutationAction identity_action(int v) {
  PermutationAction a;
  a.point_perm.resize(v);
  a.block_perm.resize(v);
  std::iota(a.point_perm.begin(), a.point_perm.end(), 0);
  std::iota(a.block_perm.begin(), a.block_perm.end(), 0);
  return a;
}

bool is_identity(const PermutationAction& a) {
  for (int i = 0; i < a.degree(); ++i)
    if (a.point_perm[i] != i || a.block_perm[i] != i) return false;
  return true;
}

PermutationAction compose(const PermutationAction& a, const PermutationAction& b) {
  if (a.degree() != b.degree()) throw DegreeMismatch("compose: degree mismatch");
  int n = a.degree();
  PermutationAction r;
  r.point_perm.resize(n);
  r.block_perm.resize(n);
  for (int i = 0; i < n; ++i) {
    r.point_perm[i] = a.point_perm[b.point_perm[i]];
    r.block_perm[i] = a.block_perm[b.block_perm[i]];
  }
  return r;
}

PermutationAction inverse(const PermutationAction& a) {
  int n = a.degree();
  PermutationAction r;
  r.point_perm.resize(n);
  r.block_perm.resize(n);
  for (int i = 0; i < n; ++i) {
    r.point_perm[a.point_perm[i]] = i;
    r.block_perm[a.block_perm[i]] = i;
  }
  return r;
}

namespace {

long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

long long perm_order(const std::vector<int>& p) {
  int n = static_cast<int>(p.size());
  std::vector<char> seen(n, 0);
  long long ord = 1;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    long long len = 0;
    for (int j = i; !seen[j]; j = p[j]) {
      seen[j] = 1;
      ++len;
    }
    ord = lcm_ll(ord, len);
  }
  return ord;
}

}  // namespace

long long action_order(const PermutationAction& a) {
  return lcm_ll(perm_order(a.point_perm), perm_order(a.block_perm));
}

bool is_2design(const IncidenceMatrix& m) {
  const DesignParams& p = m.params();
  const BitMatrix& b = m.bits();
  for (int i = 0; i < p.v; ++i)
    if (b.row_popcount(i) != p.k) return false;
  std::vector<int> colsum(p.v, 0);
  for (int i = 0; i < p.v; ++i)
    for (int j = 0; j < p.v; ++j)
      if (b.get(i, j)) ++colsum[j];
  for (int j = 0; j < p.v; ++j)
    if (colsum[j] != p.k) return false;
  for (int i = 0; i < p.v; ++i)
    for (int j = i + 1; j < p.v; ++j)
      if (b.intersect_count(i, j) != p.lambda) return false;
  return true;
}

IncidenceMatrix complement(const IncidenceMatrix& m) {
  const DesignParams& p = m.params();
  DesignParams cp = validate_params(p.v, p.v - p.k, p.v - 2 * p.k + p.lambda);
  return IncidenceMatrix(cp, m.bits().complemented());
}

IncidenceMatrix apply_action(const IncidenceMatrix& m, const PermutationAction& a) {
  if (a.degree() != m.v() || static_cast<int>(a.block_perm.size()) != m.v())
    throw DegreeMismatch("apply_action: permutation degree != v");
  BitMatrix out(m.v(), m.v());
  for (int i = 0; i < m.v(); ++i)
    for (int j = 0; j < m.v(); ++j)
      if (m.at(i, j)) out.set(a.block_perm[i], a.point_perm[j], true);
  return IncidenceMatrix(m.params(), std::move(out));
}

bool is_automorphism(const IncidenceMatrix& m, const PermutationAction& a) {
  if (a.degree() != m.v()) return false;
  return apply_action(m, a) == m;
}

}  // namespace orbitforge
