// Orbit-length distributions for a prime-order automorphism and the orbit
// matrices satisfying the row-sum and orthogonality equations
//   sum_r gamma_ir                        = k
//   sum_r (Omega_j/omega_r) g_ir g_jr     = lambda*Omega_j + delta_ij*(k-lambda)
// together with the column-counting identity sum_i Omega_i g_ir = k*omega_r.
#pragma once

#include <functional>
#include <vector>

#include "orbitforge/design.hpp"

namespace orbitforge {

struct OrbitDistribution {
  DesignParams params;
  int p = 1;  // automorphism order: a prime, or 1 for the identity
  int f = 0;  // fixed points (= fixed blocks)
  int t = 0;  // orbit count, f + (v-f)/p
  std::vector<int> omega;  // point-orbit lengths, all 1s first, then ps
  std::vector<int> Omega;  // block-orbit lengths, same layout

  friend bool operator==(const OrbitDistribution& a, const OrbitDistribution& b) {
    return a.params == b.params && a.p == b.p && a.f == b.f && a.t == b.t &&
           a.omega == b.omega && a.Omega == b.Omega;
  }
};

// Checked construction for a single (p, f); arithmetic admissibility only.
OrbitDistribution make_distribution(const DesignParams& params, int p, int f);

// All admissible fixed-point counts, ascending: p | (v-f), f <= v-2(k-lambda)
// (f = v for p = 1), and every present row class has at least one candidate
// row. `min_fixed` additionally applies an external lower bound on f.
std::vector<OrbitDistribution> enumerate_distributions(const DesignParams& params, int p,
                                                       int min_fixed = 0);

struct OrbitMatrix {
  OrbitDistribution dist;
  std::vector<int> gamma;  // t x t, row-major; row i = block orbit, col r = point orbit

  int at(int i, int r) const { return gamma[static_cast<size_t>(i) * dist.t + r]; }

  friend bool operator==(const OrbitMatrix& a, const OrbitMatrix& b) {
    return a.dist == b.dist && a.gamma == b.gamma;
  }
};

// All rows (g_i1..g_it) with 0 <= g_ir <= omega_r, row sum k and the diagonal
// orthogonality equation, up to column permutations within equal-omega
// classes (entries sorted descending inside each class). Ordered descending.
std::vector<std::vector<int>> row_candidates(const OrbitDistribution& dist, int i);

// Eq. (1), Eq. (2) for all pairs, bounds, column counting, and for p=2 the
// evenness of fixed-block entries on 2-orbits.
bool verify_orbit_matrix(const OrbitMatrix& om);

struct OmSearchOptions {
  // Partitioned execution: split the tree by the completed choice of the
  // first `partition_rows` searched rows; run partition `partition_index`
  // (0-based) of `partition_count`.
  int partition_rows = 0;
  int partition_index = 0;
  int partition_count = 1;
};

// Emits one representative per equivalence class (row permutations within
// equal-Omega classes x column permutations within equal-omega classes); the
// representative is the lexicographically minimal matrix of its class and
// emission order is deterministic. p = 1 is refused above v = 13.
void build_orbit_matrices(const OrbitDistribution& dist,
                          const std::function<void(const OrbitMatrix&)>& emit,
                          const OmSearchOptions& opt = {});

// Lexicographically minimal gamma under the class-preserving group.
std::vector<int> om_canonical_gamma(const OrbitMatrix& om);
OrbitMatrix om_canonical(const OrbitMatrix& om);
bool om_equivalent(const OrbitMatrix& a, const OrbitMatrix& b);

}  // namespace orbitforge
