// Test-only brute-force reference implementations. These are deliberately
// naive and independent of the search/canonical machinery they are used to
// check: plain backtracking over rows, pairwise isomorphism tests by
// point-mapping search, automorphism counting by the same search.
#pragma once

#include <vector>

#include "orbitforge/design.hpp"

namespace orbitforge::oracle {

// All symmetric 2-(v,k,lambda) designs up to isomorphism, by exhaustive
// backtracking over row-sorted incidence matrices followed by naive isomorph
// rejection. Intended for v <= 11.
std::vector<IncidenceMatrix> classify_all(const DesignParams& params);

// Naive isomorphism test: backtracking point bijection with block-multiset
// consistency checks.
bool isomorphic_naive(const IncidenceMatrix& a, const IncidenceMatrix& b);

// |Aut| by counting point bijections from the design to itself.
long long aut_order_naive(const IncidenceMatrix& m);

// All automorphisms (point+block actions) of m, by the same search.
std::vector<PermutationAction> all_automorphisms_naive(const IncidenceMatrix& m);

// The standard Fano plane (7,3,1): blocks {i, i+1, i+3} mod 7.
IncidenceMatrix fano();

}  // namespace orbitforge::oracle
