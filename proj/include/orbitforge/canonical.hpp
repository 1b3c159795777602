// Canonical forms, isomorphism testing and automorphism groups for bit
// incidence structures (designs and their Hadamard extensions), via partition
// refinement with individualization backtracking.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbitforge/bitmatrix.hpp"
#include "orbitforge/design.hpp"
#include "orbitforge/perm.hpp"

namespace orbitforge {

struct CanonicalRecord {
  std::vector<uint8_t> key;
  unsigned long long aut_order = 1;
  std::vector<PermutationAction> aut_generators;
};

// Canonical data for a general rows x cols incidence structure with two
// vertex classes. Generators come as (row_perm, col_perm) pairs.
struct BipartiteCanonical {
  std::vector<uint8_t> key;
  unsigned long long aut_order = 1;
  std::vector<Perm> row_generators;
  std::vector<Perm> col_generators;
};

// Canonical labeling of `m` under row permutations respecting `row_colors`
// and column permutations respecting `col_colors`. Colors are arbitrary
// integers; smaller colors order first. The key is the packed canonical
// matrix (row-major, MSB-first), ceil(rows*cols/8) bytes.
BipartiteCanonical canonical_bipartite(const BitMatrix& m,
                                       const std::vector<int>& row_colors,
                                       const std::vector<int>& col_colors);

// canonical_bipartite with the initial classes refined by the triple
// intersection profiles of rows and columns (the first invariant that varies
// on pairwise-balanced structures). Used for designs and their extensions.
BipartiteCanonical canonical_incidence(const BitMatrix& m);

CanonicalRecord canonical_form(const IncidenceMatrix& m);

// True iff canonical keys agree. Throws ParamMismatch on unequal parameters.
bool are_isomorphic(const IncidenceMatrix& a, const IncidenceMatrix& b);

struct InvolutionClass {
  int fixed_points = 0;  // fixed points of the point permutation
  PermutationAction representative;
  unsigned long long class_size = 0;
};

// One entry per conjugacy class of order-2 elements of Aut(m), sorted by
// fixed-point count. Enumerates the group; throws ScaleGuard past
// `element_cap` elements.
std::vector<InvolutionClass> involution_census(const IncidenceMatrix& m,
                                               size_t element_cap = size_t{1} << 22);

std::string to_hex(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> from_hex(const std::string& hex);

// Decodes a canonical key back into the labeled canonical matrix.
IncidenceMatrix design_from_key(const DesignParams& params, const std::vector<uint8_t>& key);

}  // namespace orbitforge
