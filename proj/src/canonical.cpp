#include "orbitforge/canonical.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace orbitforge {

namespace {

constexpr uint64_t kTagIndividualize = 0xA5ull << 56;
constexpr uint64_t kTagSplit = 0x5Bull << 56;
constexpr uint64_t kTagFragment = 0xC3ull << 56;
constexpr uint64_t kTagUniform = 0xD4ull << 56;

// Individualization-refinement search over the bipartite incidence structure.
// Vertices 0..R-1 are rows, R..R+C-1 are columns. The canonical form is the
// packed matrix of the leaf minimizing (refinement trace, key); automorphisms
// are found as leaves reproducing the minimal key.
class CanonSearch {
 public:
  CanonSearch(const BitMatrix& m, const std::vector<int>& row_colors,
              const std::vector<int>& col_colors)
      : m_(m),
        R_(m.rows()),
        C_(m.cols()),
        n_(m.rows() + m.cols()),
        rw_((m.rows() + 63) / 64),
        cw_((m.cols() + 63) / 64),
        aut_(m.rows() + m.cols()) {
    rowadj_.assign(static_cast<size_t>(R_) * cw_, 0);
    for (int r = 0; r < R_; ++r)
      std::copy(m.row(r), m.row(r) + cw_, rowadj_.begin() + static_cast<size_t>(r) * cw_);
    BitMatrix t = m.transposed();
    coladj_.assign(static_cast<size_t>(C_) * rw_, 0);
    for (int c = 0; c < C_; ++c)
      std::copy(t.row(c), t.row(c) + rw_, coladj_.begin() + static_cast<size_t>(c) * rw_);

    lab_.resize(n_);
    pos_.resize(n_);
    cell_of_.resize(n_);
    cell_end_.assign(n_, 0);
    init_partition(row_colors, col_colors);
  }

  BipartiteCanonical run() {
    worklist_.clear();
    for (int s = 0; s < n_; s = cell_end_[s]) worklist_.push_back(s);
    CmpState cmp = CmpState::kEqual;
    if (!refine(cmp)) return finish();  // cannot happen before a best exists
    descend(cmp, 0);
    return finish();
  }

 private:
  enum class CmpState { kEqual, kSmaller };

  struct Snapshot {
    std::vector<int> lab, pos, cell_of, cell_end;
    size_t trace_len;
  };

  void init_partition(const std::vector<int>& row_colors, const std::vector<int>& col_colors) {
    std::vector<int> rows(R_), cols(C_);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::stable_sort(rows.begin(), rows.end(),
                     [&](int a, int b) { return row_colors[a] < row_colors[b]; });
    std::stable_sort(cols.begin(), cols.end(),
                     [&](int a, int b) { return col_colors[a] < col_colors[b]; });
    for (int i = 0; i < R_; ++i) lab_[i] = rows[i];
    for (int i = 0; i < C_; ++i) lab_[R_ + i] = R_ + cols[i];
    for (int i = 0; i < n_; ++i) pos_[lab_[i]] = i;
    int s = 0;
    while (s < n_) {
      int e = s + 1;
      if (s < R_) {
        while (e < R_ && row_colors[lab_[e]] == row_colors[lab_[s]]) ++e;
      } else {
        while (e < n_ && col_colors[lab_[e] - R_] == col_colors[lab_[s] - R_]) ++e;
      }
      cell_end_[s] = e;
      for (int i = s; i < e; ++i) cell_of_[i] = s;
      s = e;
    }
  }

  // Appends one trace word; returns false when the branch is now strictly
  // greater than the best leaf and must be pruned.
  bool trace_push(uint64_t w, CmpState& cmp) {
    size_t i = trace_.size();
    trace_.push_back(w);
    if (!have_best_ || cmp == CmpState::kSmaller) return true;
    if (i >= best_trace_.size()) return false;  // longer than best: prune
    if (w < best_trace_[i]) {
      cmp = CmpState::kSmaller;
      return true;
    }
    return w == best_trace_[i];
  }

  // Equitable refinement driven by worklist_. Returns false on prune.
  bool refine(CmpState& cmp) {
    for (size_t head = 0; head < worklist_.size(); ++head) {
      int ws = worklist_[head];
      int we = cell_end_[ws];
      bool splitter_rows = ws < R_;
      // Mask of the splitter cell over its own side's id space.
      if (splitter_rows) {
        mask_.assign(rw_, 0);
        for (int p = ws; p < we; ++p) {
          int id = lab_[p];
          mask_[id >> 6] |= uint64_t{1} << (id & 63);
        }
      } else {
        mask_.assign(cw_, 0);
        for (int p = ws; p < we; ++p) {
          int id = lab_[p] - R_;
          mask_[id >> 6] |= uint64_t{1} << (id & 63);
        }
      }
      int tbegin = splitter_rows ? R_ : 0;
      int tend = splitter_rows ? n_ : R_;
      for (int ts = tbegin; ts < tend; ts = cell_end_[ts]) {
        int te = cell_end_[ts];
        if (te - ts == 1) continue;
        counts_.resize(te - ts);
        bool uniform = true;
        for (int p = ts; p < te; ++p) {
          const uint64_t* adj;
          int words;
          if (splitter_rows) {
            adj = coladj_.data() + static_cast<size_t>(lab_[p] - R_) * rw_;
            words = rw_;
          } else {
            adj = rowadj_.data() + static_cast<size_t>(lab_[p]) * cw_;
            words = cw_;
          }
          int cnt = 0;
          for (int w = 0; w < words; ++w) cnt += std::popcount(adj[w] & mask_[w]);
          counts_[p - ts] = cnt;
          if (cnt != counts_[0]) uniform = false;
        }
        if (uniform) {
          if (!trace_push(kTagUniform | (static_cast<uint64_t>(counts_[0]) << 24) |
                              static_cast<uint64_t>(ts),
                          cmp))
            return false;
          continue;
        }
        // Split: stable sort the slice by count ascending.
        scratch_.resize(te - ts);
        for (int i = 0; i < te - ts; ++i) scratch_[i] = i;
        std::stable_sort(scratch_.begin(), scratch_.end(),
                         [&](int a, int b) { return counts_[a] < counts_[b]; });
        newlab_.assign(lab_.begin() + ts, lab_.begin() + te);
        if (!trace_push(kTagSplit | (static_cast<uint64_t>(ws) << 24) |
                            static_cast<uint64_t>(ts),
                        cmp))
          return false;
        int frag_start = ts;
        for (int i = 0; i < te - ts; ++i) {
          lab_[ts + i] = newlab_[scratch_[i]];
          pos_[lab_[ts + i]] = ts + i;
        }
        for (int i = 0; i < te - ts;) {
          int j = i;
          int cv = counts_[scratch_[i]];
          while (j < te - ts && counts_[scratch_[j]] == cv) ++j;
          int fs = ts + i, fe = ts + j;
          cell_end_[fs] = fe;
          for (int p = fs; p < fe; ++p) cell_of_[p] = fs;
          if (!trace_push(kTagFragment | (static_cast<uint64_t>(cv) << 24) |
                              static_cast<uint64_t>(fe - fs),
                          cmp))
            return false;
          worklist_.push_back(fs);
          i = j;
          frag_start = fe;
        }
        (void)frag_start;
      }
    }
    worklist_.clear();
    return true;
  }

  int target_cell() const {
    int best = -1, best_size = n_ + 1;
    for (int s = 0; s < n_; s = cell_end_[s]) {
      int sz = cell_end_[s] - s;
      if (sz > 1 && sz < best_size) {
        best = s;
        best_size = sz;
      }
    }
    return best;
  }

  void descend(CmpState cmp, int depth) {
    ++nodes_;
    if (nodes_ > kNodeCap)
      throw Error("canonical search exceeded node cap; structure too hard");
    int tc = target_cell();
    if (tc < 0) {
      handle_leaf(cmp);
      return;
    }
    // Candidates in ascending vertex id for determinism.
    std::vector<int> cand(lab_.begin() + tc, lab_.begin() + cell_end_[tc]);
    std::sort(cand.begin(), cand.end());

    Snapshot snap{lab_, pos_, cell_of_, cell_end_, trace_.size()};
    std::vector<int> tried;
    for (int x : cand) {
      if (depth == 0 && !tried.empty() && root_orbit_pruned(x, tried)) continue;
      uint64_t epoch_before = best_epoch_;
      CmpState child_cmp = cmp;
      if (trace_push(kTagIndividualize | static_cast<uint64_t>(tc), child_cmp)) {
        individualize(tc, x);
        worklist_.clear();
        worklist_.push_back(tc);
        worklist_.push_back(tc + 1);
        if (refine(child_cmp)) descend(child_cmp, depth + 1);
      }
      // Restore node state.
      lab_ = snap.lab;
      pos_ = snap.pos;
      cell_of_ = snap.cell_of;
      cell_end_ = snap.cell_end;
      trace_.resize(snap.trace_len);
      if (best_epoch_ != epoch_before) cmp = CmpState::kEqual;  // best now extends our prefix
      if (depth == 0) tried.push_back(x);
    }
  }

  void individualize(int cell_start, int x) {
    int px = pos_[x];
    std::swap(lab_[cell_start], lab_[px]);
    pos_[lab_[px]] = px;
    pos_[lab_[cell_start]] = cell_start;
    int e = cell_end_[cell_start];
    cell_end_[cell_start] = cell_start + 1;
    cell_of_[cell_start] = cell_start;
    cell_end_[cell_start + 1] = e;
    for (int p = cell_start + 1; p < e; ++p) cell_of_[p] = cell_start + 1;
  }

  std::vector<uint8_t> leaf_key() const {
    BitMatrix canon(R_, C_);
    // lab_[i] for i<R_ are original rows in canonical order; columns likewise.
    for (int i = 0; i < R_; ++i) {
      const uint64_t* src = rowadj_.data() + static_cast<size_t>(lab_[i]) * cw_;
      for (int j = 0; j < C_; ++j) {
        int oc = lab_[R_ + j] - R_;
        if ((src[oc >> 6] >> (oc & 63)) & 1) canon.set(i, j, true);
      }
    }
    return canon.packed_bits();
  }

  void handle_leaf(CmpState cmp) {
    if (!have_best_) {
      have_best_ = true;
      best_trace_ = trace_;
      best_key_ = leaf_key();
      best_lab_ = lab_;
      ++best_epoch_;
      return;
    }
    if (cmp == CmpState::kSmaller ||
        (cmp == CmpState::kEqual && trace_.size() < best_trace_.size())) {
      best_trace_ = trace_;
      best_key_ = leaf_key();
      best_lab_ = lab_;
      ++best_epoch_;
      return;
    }
    if (trace_.size() != best_trace_.size()) return;
    std::vector<uint8_t> key = leaf_key();
    if (key < best_key_) {
      best_trace_ = trace_;
      best_key_ = std::move(key);
      best_lab_ = lab_;
      ++best_epoch_;
      return;
    }
    if (key != best_key_) return;
    // Leaf collision: the map sending best's vertex at each position to this
    // leaf's vertex at the same position is an automorphism.
    Perm g(n_);
    for (int i = 0; i < n_; ++i) g[best_lab_[i]] = lab_[i];
    if (aut_.add_generator(g)) {
      gen_store_.push_back(std::move(g));
      orbits_dirty_ = true;
    }
  }

  bool root_orbit_pruned(int x, const std::vector<int>& tried) {
    if (gen_store_.empty()) return false;
    if (orbits_dirty_) {
      uf_.resize(n_);
      std::iota(uf_.begin(), uf_.end(), 0);
      for (const Perm& g : gen_store_)
        for (int i = 0; i < n_; ++i) uf_union(i, g[i]);
      orbits_dirty_ = false;
    }
    int rx = uf_find(x);
    for (int y : tried)
      if (uf_find(y) == rx) return true;
    return false;
  }

  int uf_find(int x) {
    while (uf_[x] != x) x = uf_[x] = uf_[uf_[x]];
    return x;
  }
  void uf_union(int a, int b) {
    a = uf_find(a);
    b = uf_find(b);
    if (a != b) uf_[a] = b;
  }

  BipartiteCanonical finish() {
    BipartiteCanonical out;
    out.key = best_key_;
    out.aut_order = aut_.order();
    for (const Perm& g : aut_.strong_generators()) {
      Perm rp(R_), cp(C_);
      for (int i = 0; i < R_; ++i) rp[i] = g[i];
      for (int j = 0; j < C_; ++j) cp[j] = g[R_ + j] - R_;
      out.row_generators.push_back(std::move(rp));
      out.col_generators.push_back(std::move(cp));
    }
    return out;
  }

  static constexpr uint64_t kNodeCap = 200'000'000;

  const BitMatrix& m_;
  int R_, C_, n_, rw_, cw_;
  std::vector<uint64_t> rowadj_, coladj_;

  std::vector<int> lab_, pos_, cell_of_, cell_end_;
  std::vector<int> worklist_;
  std::vector<uint64_t> mask_;
  std::vector<int> counts_, scratch_, newlab_;

  std::vector<uint64_t> trace_, best_trace_;
  std::vector<uint8_t> best_key_;
  std::vector<int> best_lab_;
  bool have_best_ = false;
  uint64_t best_epoch_ = 0;
  uint64_t nodes_ = 0;

  PermGroup aut_;
  std::vector<Perm> gen_store_;
  std::vector<int> uf_;
  bool orbits_dirty_ = true;
};

// Distribution of triple intersection counts seen from each row / column;
// the first refinement invariant that varies on pairwise-balanced structures.
struct TripleProfiles {
  std::vector<int> row_colors, col_colors;
};

std::vector<int> rank_profiles(std::vector<std::vector<uint32_t>> profiles) {
  std::vector<std::vector<uint32_t>> sorted = profiles;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> colors(profiles.size());
  for (size_t i = 0; i < profiles.size(); ++i)
    colors[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), profiles[i]) - sorted.begin());
  return colors;
}

TripleProfiles triple_profiles(const BitMatrix& m) {
  int R = m.rows(), C = m.cols();
  int cw = m.words_per_row();
  BitMatrix t = m.transposed();
  int rw = t.words_per_row();

  TripleProfiles out;
  // Row side: histogram over triples of rows of |r_i & r_j & r_l|.
  {
    std::vector<std::vector<uint32_t>> hist(R, std::vector<uint32_t>(C + 1, 0));
    std::vector<uint64_t> tmp(cw);
    for (int i = 0; i < R; ++i)
      for (int j = i + 1; j < R; ++j) {
        for (int w = 0; w < cw; ++w) tmp[w] = m.row(i)[w] & m.row(j)[w];
        for (int l = j + 1; l < R; ++l) {
          int cnt = 0;
          const uint64_t* rl = m.row(l);
          for (int w = 0; w < cw; ++w) cnt += std::popcount(tmp[w] & rl[w]);
          ++hist[i][cnt];
          ++hist[j][cnt];
          ++hist[l][cnt];
        }
      }
    out.row_colors = rank_profiles(std::move(hist));
  }
  // Column side, dual.
  {
    std::vector<std::vector<uint32_t>> hist(C, std::vector<uint32_t>(R + 1, 0));
    std::vector<uint64_t> tmp(rw);
    for (int i = 0; i < C; ++i)
      for (int j = i + 1; j < C; ++j) {
        for (int w = 0; w < rw; ++w) tmp[w] = t.row(i)[w] & t.row(j)[w];
        for (int l = j + 1; l < C; ++l) {
          int cnt = 0;
          const uint64_t* rl = t.row(l);
          for (int w = 0; w < rw; ++w) cnt += std::popcount(tmp[w] & rl[w]);
          ++hist[i][cnt];
          ++hist[j][cnt];
          ++hist[l][cnt];
        }
      }
    out.col_colors = rank_profiles(std::move(hist));
  }
  return out;
}

bool triple_profiles_affordable(int R, int C) {
  auto c3 = [](long long n) { return n * (n - 1) * (n - 2) / 6; };
  long long ops = c3(R) * ((C + 63) / 64) + c3(C) * ((R + 63) / 64);
  return ops <= 50'000'000;
}

}  // namespace

BipartiteCanonical canonical_bipartite(const BitMatrix& m, const std::vector<int>& row_colors,
                                       const std::vector<int>& col_colors) {
  if (static_cast<int>(row_colors.size()) != m.rows() ||
      static_cast<int>(col_colors.size()) != m.cols())
    throw DegreeMismatch("canonical_bipartite: color vector size mismatch");
  CanonSearch search(m, row_colors, col_colors);
  return search.run();
}

BipartiteCanonical canonical_incidence(const BitMatrix& m) {
  std::vector<int> rc(m.rows(), 0), cc(m.cols(), 0);
  if (triple_profiles_affordable(m.rows(), m.cols())) {
    TripleProfiles prof = triple_profiles(m);
    rc = std::move(prof.row_colors);
    cc = std::move(prof.col_colors);
  }
  return canonical_bipartite(m, rc, cc);
}

CanonicalRecord canonical_form(const IncidenceMatrix& m) {
  BipartiteCanonical bc = canonical_incidence(m.bits());
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

bool are_isomorphic(const IncidenceMatrix& a, const IncidenceMatrix& b) {
  if (a.params() != b.params())
    throw ParamMismatch("are_isomorphic: designs have different parameters");
  return canonical_form(a).key == canonical_form(b).key;
}

std::vector<InvolutionClass> involution_census(const IncidenceMatrix& m, size_t element_cap) {
  CanonicalRecord rec = canonical_form(m);
  int v = m.v();
  PermGroup g(2 * v);
  for (const PermutationAction& a : rec.aut_generators) {
    Perm p(2 * v);
    for (int i = 0; i < v; ++i) p[i] = a.block_perm[i];
    for (int j = 0; j < v; ++j) p[v + j] = v + a.point_perm[j];
    g.add_generator(p);
  }
  std::vector<Perm> elements = g.elements(element_cap);
  std::vector<Perm> gens = g.strong_generators();

  struct Hash {
    size_t operator()(const Perm& p) const {
      size_t h = 1469598103934665603ull;
      for (int x : p) h = (h ^ static_cast<size_t>(x)) * 1099511628211ull;
      return h;
    }
  };

  std::vector<Perm> involutions;
  for (const Perm& e : elements)
    if (!permutil::is_identity(e) && permutil::is_identity(permutil::compose(e, e)))
      involutions.push_back(e);
  std::sort(involutions.begin(), involutions.end());

  std::vector<char> assigned(involutions.size(), 0);
  auto index_of = [&](const Perm& p) {
    auto it = std::lower_bound(involutions.begin(), involutions.end(), p);
    return static_cast<size_t>(it - involutions.begin());
  };

  std::vector<InvolutionClass> out;
  for (size_t i = 0; i < involutions.size(); ++i) {
    if (assigned[i]) continue;
    // Conjugation closure from involutions[i].
    std::vector<size_t> queue{i};
    assigned[i] = 1;
    for (size_t head = 0; head < queue.size(); ++head) {
      const Perm& cur = involutions[queue[head]];
      for (const Perm& s : gens) {
        Perm conj = permutil::compose(s, permutil::compose(cur, permutil::inverse(s)));
        size_t idx = index_of(conj);
        if (!assigned[idx]) {
          assigned[idx] = 1;
          queue.push_back(idx);
        }
      }
    }
    InvolutionClass cls;
    cls.class_size = queue.size();
    const Perm& rep = involutions[i];
    cls.representative.block_perm.assign(rep.begin(), rep.begin() + v);
    cls.representative.point_perm.resize(v);
    for (int j = 0; j < v; ++j) cls.representative.point_perm[j] = rep[v + j] - v;
    cls.fixed_points = permutil::fixed_points(cls.representative.point_perm);
    out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end(), [](const InvolutionClass& a, const InvolutionClass& b) {
    if (a.fixed_points != b.fixed_points) return a.fixed_points < b.fixed_points;
    return a.class_size < b.class_size;
  });
  return out;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 15]);
  }
  return out;
}

std::vector<uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2) throw FormatError("hex string has odd length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw FormatError("bad hex digit");
  };
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>((nib(hex[2 * i]) << 4) | nib(hex[2 * i + 1]));
  return out;
}

IncidenceMatrix design_from_key(const DesignParams& params, const std::vector<uint8_t>& key) {
  return IncidenceMatrix(params, BitMatrix::from_packed_bits(params.v, params.v, key));
}

}  // namespace orbitforge
