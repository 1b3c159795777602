// Indexing: expansion of an orbit matrix into the (0,1)-incidence matrices of
// all designs admitting the prescribed automorphism, and its inverse
// (compression of a design under a known involution).
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "orbitforge/design.hpp"
#include "orbitforge/orbit.hpp"

namespace orbitforge {

// Orbit matrix plus the standard concrete labeling: fixed points (blocks)
// get labels 0..f-1 in orbit order, each length-p orbit gets the next p
// consecutive labels.
class IndexingProblem {
 public:
  // Throws InvalidOrbitMatrix when the matrix fails verification.
  static IndexingProblem from_om(const OrbitMatrix& om);

  const OrbitMatrix& om() const { return om_; }

  // First concrete label of orbit r (point side; identical on the block side).
  int orbit_label(int r) const;

  // The induced automorphism mapping each labeled orbit cyclically.
  PermutationAction sigma() const;

 private:
  explicit IndexingProblem(OrbitMatrix om) : om_(std::move(om)) {}
  OrbitMatrix om_;
};

struct IndexOptions {
  // Pin the first free cell of each length-2 block orbit: the other choice
  // yields the sigma-image of the same design.
  bool mirror_reduction = true;
  // Override the 2^40 estimated-branch-node guard.
  bool force = false;
  // Partition the tree by the first `shard_depth` free-cell decisions.
  int shard_depth = 0;
  int shard_index = 0;
  int shard_count = 1;
};

// Emits every expansion; `branch` identifies the leaf by its free-cell
// decision bits. Supports p = 1 (all cells forced) and p = 2; throws
// UnsupportedOrder for p >= 3 and ScaleGuard when the free-cell estimate
// exceeds 2^40 without opt.force.
void index_orbit_matrix(const IndexingProblem& prob,
                        const std::function<void(const IncidenceMatrix&, const std::string&)>& emit,
                        const IndexOptions& opt = {});

// gamma_ir = points of point-orbit r on a representative block of block
// orbit i, under the orbits of `sigma`. sigma must be an order-2
// automorphism of m.
OrbitMatrix compress_design(const IncidenceMatrix& m, const PermutationAction& sigma);

// Search-tree pruning predicate: with `rows_filled` completed block rows and
// the next candidate row determined up to column `cols_filled`, keeps the
// node only if every fully determined pair meets in exactly lambda points,
// partially determined pairs in at most lambda, and no running column sum
// exceeds k.
bool prune_partial(const DesignParams& params, const BitMatrix& rows, int rows_filled,
                   const std::vector<uint64_t>& candidate, int cols_filled);

}  // namespace orbitforge
