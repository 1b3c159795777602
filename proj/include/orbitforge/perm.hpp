// Permutations on {0..n-1} and a Schreier-Sims stabilizer chain for computing
// group orders, membership and orbits from a generator set.
#pragma once

#include <cstdint>
#include <vector>

#include "orbitforge/errors.hpp"

namespace orbitforge {

using Perm = std::vector<int>;

namespace permutil {

Perm identity(int n);
bool is_identity(const Perm& p);
// compose(a, b): b first, then a.
Perm compose(const Perm& a, const Perm& b);
Perm inverse(const Perm& p);
long long order_of(const Perm& p);
int fixed_points(const Perm& p);

}  // namespace permutil

class PermGroup {
 public:
  explicit PermGroup(int degree) : n_(degree) {}

  int degree() const { return n_; }

  // Returns true if the group grew.
  bool add_generator(const Perm& g);

  bool contains(const Perm& g) const;

  unsigned long long order() const;

  // Union of the strong generators at every level.
  std::vector<Perm> strong_generators() const;

  // Orbits of the group on {0..n-1}, each sorted, ordered by minimum element.
  std::vector<std::vector<int>> orbits() const;

  // Full element enumeration by BFS closure; throws ScaleGuard past `cap`.
  std::vector<Perm> elements(size_t cap) const;

 private:
  struct Level {
    int base = -1;
    std::vector<Perm> gens;
    std::vector<int> orbit;           // discovery order
    std::vector<Perm> transversal;    // transversal[x] maps base -> x; empty if x not in orbit
  };

  void add_in_chain(size_t lvl, Perm g);
  void rebuild_level(size_t lvl);

  int n_;
  std::vector<Level> levels_;
};

}  // namespace orbitforge
