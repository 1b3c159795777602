#include "orbitforge/perm.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace orbitforge {

namespace permutil {

Perm identity(int n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

bool is_identity(const Perm& p) {
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    if (p[i] != i) return false;
  return true;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[b[i]];
  return r;
}

Perm inverse(const Perm& p) {
  Perm r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

long long order_of(const Perm& p) {
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
    ord = ord / std::gcd(ord, len) * len;
  }
  return ord;
}

int fixed_points(const Perm& p) {
  int f = 0;
  for (int i = 0; i < static_cast<int>(p.size()); ++i)
    if (p[i] == i) ++f;
  return f;
}

}  // namespace permutil

bool PermGroup::add_generator(const Perm& g) {
  if (static_cast<int>(g.size()) != n_) throw DegreeMismatch("PermGroup: wrong degree");
  if (contains(g)) return false;
  add_in_chain(0, g);
  return true;
}

bool PermGroup::contains(const Perm& g) const {
  Perm cur = g;
  for (const Level& L : levels_) {
    int x = cur[L.base];
    if (L.transversal[x].empty()) return false;
    cur = permutil::compose(permutil::inverse(L.transversal[x]), cur);
  }
  return permutil::is_identity(cur);
}

unsigned long long PermGroup::order() const {
  unsigned long long o = 1;
  for (const Level& L : levels_) o *= static_cast<unsigned long long>(L.orbit.size());
  return o;
}

std::vector<Perm> PermGroup::strong_generators() const {
  std::vector<Perm> out;
  for (const Level& L : levels_)
    for (const Perm& g : L.gens) out.push_back(g);
  return out;
}

std::vector<std::vector<int>> PermGroup::orbits() const {
  std::vector<int> parent(n_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Level& L : levels_)
    for (const Perm& g : L.gens)
      for (int i = 0; i < n_; ++i) {
        int a = find(i), b = find(g[i]);
        if (a != b) parent[a] = b;
      }
  std::vector<std::vector<int>> groups(n_);
  for (int i = 0; i < n_; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < n_; ++i)
    if (!groups[i].empty()) out.push_back(std::move(groups[i]));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::vector<Perm> PermGroup::elements(size_t cap) const {
  struct Hash {
    size_t operator()(const Perm& p) const {
      size_t h = 1469598103934665603ull;
      for (int x : p) h = (h ^ static_cast<size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  std::vector<Perm> gens = strong_generators();
  std::unordered_set<Perm, Hash> seen;
  std::vector<Perm> queue;
  Perm id = permutil::identity(n_);
  seen.insert(id);
  queue.push_back(id);
  for (size_t head = 0; head < queue.size(); ++head) {
    Perm cur = queue[head];
    for (const Perm& g : gens) {
      Perm next = permutil::compose(g, cur);
      if (seen.insert(next).second) {
        if (seen.size() > cap)
          throw ScaleGuard("group element enumeration exceeds cap " + std::to_string(cap));
        queue.push_back(std::move(next));
      }
    }
  }
  return queue;
}

void PermGroup::add_in_chain(size_t lvl, Perm g) {
  size_t l = lvl;
  while (l < levels_.size()) {
    int x = g[levels_[l].base];
    if (levels_[l].transversal[x].empty()) break;
    g = permutil::compose(permutil::inverse(levels_[l].transversal[x]), g);
    ++l;
  }
  if (permutil::is_identity(g)) return;
  if (l == levels_.size()) {
    Level L;
    for (int i = 0; i < n_; ++i)
      if (g[i] != i) {
        L.base = i;
        break;
      }
    L.transversal.assign(n_, Perm{});
    levels_.push_back(std::move(L));
  }
  levels_[l].gens.push_back(std::move(g));
  rebuild_level(l);
}

void PermGroup::rebuild_level(size_t lvl) {
  Level& L = levels_[lvl];
  L.orbit.clear();
  L.transversal.assign(n_, Perm{});
  L.orbit.push_back(L.base);
  L.transversal[L.base] = permutil::identity(n_);
  for (size_t head = 0; head < L.orbit.size(); ++head) {
    int x = L.orbit[head];
    for (const Perm& s : L.gens) {
      int y = s[x];
      if (L.transversal[y].empty()) {
        L.transversal[y] = permutil::compose(s, L.transversal[x]);
        L.orbit.push_back(y);
      }
    }
  }
  // Schreier generators keep the deeper chain consistent.
  for (size_t head = 0; head < L.orbit.size(); ++head) {
    int x = L.orbit[head];
    for (const Perm& s : L.gens) {
      Perm sg = permutil::compose(permutil::inverse(L.transversal[s[x]]),
                                  permutil::compose(s, L.transversal[x]));
      if (!permutil::is_identity(sg)) add_in_chain(lvl + 1, std::move(sg));
    }
  }
}

}  // namespace orbitforge
