#include "orbitforge/hadamard.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>
#include <unordered_set>

namespace orbitforge {

ThreeDesign::ThreeDesign(int t, BitMatrix blocks) : t_(t), blocks_(std::move(blocks)) {
  if (t_ < 2) throw NotHadamardParameters("need t >= 2");
  if (blocks_.rows() != 8 * t_ - 2 || blocks_.cols() != 4 * t_)
    throw DegreeMismatch("3-design block matrix must be (8t-2) x 4t");
}

ThreeDesign extend(const IncidenceMatrix& m) {
  const DesignParams& p = m.params();
  if ((p.v + 1) % 4 != 0) throw NotHadamardParameters("v is not 4t-1");
  int t = (p.v + 1) / 4;
  if (t < 2 || p.k != 2 * t - 1 || p.lambda != t - 1)
    throw NotHadamardParameters("parameters are not (4t-1, 2t-1, t-1)");

  int v = p.v;
  BitMatrix blocks(8 * t - 2, 4 * t);
  for (int i = 0; i < v; ++i) {
    for (int j = 0; j < v; ++j)
      if (m.at(i, j)) blocks.set(i, j, true);
    blocks.set(i, v, true);  // the new point joins every original block
    for (int j = 0; j < v; ++j)
      if (!m.at(i, j)) blocks.set(v + i, j, true);
  }
  return ThreeDesign(t, std::move(blocks));
}

IncidenceMatrix derive(const ThreeDesign& d, int point) {
  int n = d.point_count();
  if (point < 0 || point >= n) throw UnknownPoint("point out of range");
  int t = d.t();
  DesignParams p = validate_params(4 * t - 1, 2 * t - 1, t - 1);

  BitMatrix out(p.v, p.v);
  int row = 0;
  for (int i = 0; i < d.block_count(); ++i) {
    if (!d.blocks().get(i, point)) continue;
    if (row >= p.v) throw Error("derive: too many blocks through the point");
    int col = 0;
    for (int j = 0; j < n; ++j) {
      if (j == point) continue;
      if (d.blocks().get(i, j)) out.set(row, col, true);
      ++col;
    }
    ++row;
  }
  if (row != p.v) throw Error("derive: wrong number of blocks through the point");
  return IncidenceMatrix(p, std::move(out));
}

bool is_3design(const ThreeDesign& d) {
  int n = d.point_count();
  int target = d.lambda3();
  BitMatrix t = d.blocks().transposed();  // point -> blocks containing it
  int words = t.words_per_row();
  std::vector<uint64_t> tmp(words);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      for (int w = 0; w < words; ++w) tmp[w] = t.row(a)[w] & t.row(b)[w];
      for (int c = b + 1; c < n; ++c) {
        int cnt = 0;
        const uint64_t* rc = t.row(c);
        for (int w = 0; w < words; ++w) cnt += std::popcount(tmp[w] & rc[w]);
        if (cnt != target) return false;
      }
    }
  // Complementation closure: blocks pair up into partitions of the point set.
  std::unordered_set<std::string> seen;
  for (int i = 0; i < d.block_count(); ++i) {
    std::string bits(n, '0');
    for (int j = 0; j < n; ++j)
      if (d.blocks().get(i, j)) bits[j] = '1';
    seen.insert(bits);
  }
  for (int i = 0; i < d.block_count(); ++i) {
    std::string comp(n, '0');
    for (int j = 0; j < n; ++j)
      if (!d.blocks().get(i, j)) comp[j] = '1';
    if (!seen.count(comp)) return false;
  }
  return true;
}

CanonicalRecord canonical_form_3design(const ThreeDesign& d) {
  BipartiteCanonical bc = canonical_incidence(d.blocks());
  CanonicalRecord rec;
  rec.key = std::move(bc.key);
  rec.aut_order = bc.aut_order;
  for (size_t i = 0; i < bc.row_generators.size(); ++i) {
    PermutationAction a;
    a.block_perm = bc.row_generators[i];
    a.point_perm = bc.col_generators[i];
    rec.aut_generators.push_back(std::move(a));
  }
  return rec;
}

size_t ExtensionClassifier::KeyHash::operator()(const std::vector<uint8_t>& k) const {
  size_t h = 1469598103934665603ull;
  for (uint8_t b : k) h = (h ^ b) * 1099511628211ull;
  return h;
}

bool ExtensionClassifier::add(const IncidenceMatrix& design) {
  ThreeDesign ext = extend(design);
  CanonicalRecord rec = canonical_form_3design(ext);
  auto it = index_.find(rec.key);
  if (it != index_.end()) {
    ++classes_[it->second].inputs;
    return false;
  }
  ExtensionClass cls;
  // Orbits of Aut on points = isomorphism classes of derived designs.
  int n = ext.point_count();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const PermutationAction& g : rec.aut_generators)
    for (int i = 0; i < n; ++i) {
      int a = find(i), b = find(g.point_perm[i]);
      if (a != b) parent[a] = b;
    }
  int orbit_count = 0;
  for (int i = 0; i < n; ++i)
    if (find(i) == i) ++orbit_count;
  cls.derived_classes = orbit_count;
  cls.inputs = 1;
  cls.record = std::move(rec);
  index_.emplace(cls.record.key, classes_.size());
  classes_.push_back(std::move(cls));
  return true;
}

std::vector<ExtensionClass> ExtensionClassifier::finish() { return std::move(classes_); }

std::vector<ExtensionClass> classify_extensions(const std::vector<IncidenceMatrix>& designs) {
  ExtensionClassifier c;
  for (const IncidenceMatrix& d : designs) c.add(d);
  return c.finish();
}

ThreeDesign three_design_from_key(int t, const std::vector<uint8_t>& key) {
  return ThreeDesign(t, BitMatrix::from_packed_bits(8 * t - 2, 4 * t, key));
}

}  // namespace orbitforge
