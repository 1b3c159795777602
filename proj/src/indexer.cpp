#include "orbitforge/indexer.hpp"

#include <algorithm>

namespace orbitforge {

IndexingProblem IndexingProblem::from_om(const OrbitMatrix& om) {
  if (!verify_orbit_matrix(om))
    throw InvalidOrbitMatrix("orbit matrix fails Eq.(1)/(2)/column verification");
  return IndexingProblem(om);
}

int IndexingProblem::orbit_label(int r) const {
  const OrbitDistribution& d = om_.dist;
  if (r < d.f) return r;
  return d.f + d.p * (r - d.f);
}

PermutationAction IndexingProblem::sigma() const {
  const OrbitDistribution& d = om_.dist;
  int v = d.params.v;
  PermutationAction a = identity_action(v);
  for (int r = d.f; r < d.t; ++r) {
    int base = orbit_label(r);
    for (int j = 0; j < d.p; ++j) {
      a.point_perm[base + j] = base + (j + 1) % d.p;
      a.block_perm[base + j] = base + (j + 1) % d.p;
    }
  }
  return a;
}

namespace {

// One length-2 block orbit row under expansion: concrete rows `b` and `b+1`.
struct FreeCell {
  int row_orbit;   // OM row index
  int col_orbit;   // OM column index
  bool first_in_row;
};

class IndexSearch {
 public:
  IndexSearch(const IndexingProblem& prob,
              const std::function<void(const IncidenceMatrix&, const std::string&)>& emit,
              const IndexOptions& opt)
      : prob_(prob), om_(prob.om()), d_(om_.dist), emit_(emit), opt_(opt),
        work_(d_.params.v, d_.params.v) {
    v_ = d_.params.v;
    lambda_ = d_.params.lambda;
    words_ = work_.words_per_row();
  }

  void run() {
    for (int i = d_.f; i < d_.t; ++i) {
      bool first = true;
      for (int r = d_.f; r < d_.t; ++r)
        if (om_.at(i, r) == 1) {
          free_cells_.push_back({i, r, first});
          first = false;
        }
    }
    long long effective = static_cast<long long>(free_cells_.size());
    if (opt_.mirror_reduction)
      for (const FreeCell& c : free_cells_)
        if (c.first_in_row) --effective;
    if (effective > 40 && !opt_.force)
      throw ScaleGuard("estimated 2^" + std::to_string(effective) +
                       " branch nodes; pass force to index anyway");
    place_row(0, 0);
  }

 private:
  void place_row(int i, size_t cell_idx) {
    if (i == d_.t) {
      if (opt_.shard_count > 1 && decisions_ < opt_.shard_depth &&
          prefix_val_ % opt_.shard_count != opt_.shard_index)
        return;
      emit_(IncidenceMatrix(d_.params, work_), std::string(branch_.begin(), branch_.end()));
      return;
    }
    int b = prob_.orbit_label(i);
    if (d_.Omega[i] == 1) {
      // Fixed block: every cell forced.
      std::fill(work_.row(b), work_.row(b) + words_, 0);
      for (int r = 0; r < d_.t; ++r) {
        int g = om_.at(i, r);
        if (g == 0) continue;
        int base = prob_.orbit_label(r);
        if (d_.omega[r] == 1) {
          work_.set(b, base, true);
        } else {
          for (int j = 0; j < d_.omega[r]; ++j) work_.set(b, base + j, true);
        }
      }
      if (!check_row(b, -1)) return;
      place_row(i + 1, cell_idx);
      return;
    }
    // Length-2 block orbit: lay down the forced cells of both rows, then
    // branch over the free cells left to right.
    int b2 = b + 1;
    std::fill(work_.row(b), work_.row(b) + words_, 0);
    std::fill(work_.row(b2), work_.row(b2) + words_, 0);
    for (int r = 0; r < d_.t; ++r) {
      int g = om_.at(i, r);
      if (g == 0) continue;
      int base = prob_.orbit_label(r);
      if (d_.omega[r] == 1) {
        work_.set(b, base, true);
        work_.set(b2, base, true);
      } else if (g == 2) {
        work_.set(b, base, true);
        work_.set(b, base + 1, true);
        work_.set(b2, base, true);
        work_.set(b2, base + 1, true);
      }
      // g == 1 cells are the free cells, handled below.
    }
    fill_free(i, b, cell_idx);
  }

  void fill_free(int i, int b, size_t idx) {
    if (idx == free_cells_.size() || free_cells_[idx].row_orbit != i) {
      if (!check_row(b, b + 1)) return;
      place_row(i + 1, idx);
      return;
    }
    const FreeCell& cell = free_cells_[idx];
    int x = prob_.orbit_label(cell.col_orbit);
    bool pin = opt_.mirror_reduction && cell.first_in_row;
    for (int choice = 0; choice < (pin ? 1 : 2); ++choice) {
      int xa = choice == 0 ? x : x + 1;
      int xb = choice == 0 ? x + 1 : x;
      work_.set(b, xa, true);
      work_.set(b + 1, xb, true);
      branch_.push_back(choice ? '1' : '0');
      uint64_t saved_prefix = prefix_val_;
      if (decisions_ < opt_.shard_depth) prefix_val_ |= static_cast<uint64_t>(choice) << decisions_;
      ++decisions_;
      bool shard_ok = true;
      if (opt_.shard_count > 1 && decisions_ == opt_.shard_depth)
        shard_ok = (prefix_val_ % opt_.shard_count) == static_cast<uint64_t>(opt_.shard_index);
      if (shard_ok) fill_free(i, b, idx + 1);
      --decisions_;
      prefix_val_ = saved_prefix;
      branch_.pop_back();
      work_.set(b, xa, false);
      work_.set(b + 1, xb, false);
    }
  }

  // Intersection checks for the newly completed concrete row(s). For an
  // orbit pair (b, b2) the sigma-symmetry makes |b2 ^ c| checks redundant
  // once |b ^ c| is checked against every earlier concrete row.
  bool check_row(int b, int b2) {
    const uint64_t* rb = work_.row(b);
    for (int c = 0; c < b; ++c)
      if (BitMatrix::intersect_count(rb, work_.row(c), words_) != lambda_) return false;
    if (b2 >= 0 &&
        BitMatrix::intersect_count(rb, work_.row(b2), words_) != lambda_)
      return false;
    return true;
  }

  const IndexingProblem& prob_;
  const OrbitMatrix& om_;
  const OrbitDistribution& d_;
  const std::function<void(const IncidenceMatrix&, const std::string&)>& emit_;
  const IndexOptions& opt_;
  BitMatrix work_;
  int v_, lambda_, words_;
  std::vector<FreeCell> free_cells_;
  std::vector<char> branch_;
  int decisions_ = 0;
  uint64_t prefix_val_ = 0;
};

}  // namespace

void index_orbit_matrix(const IndexingProblem& prob,
                        const std::function<void(const IncidenceMatrix&, const std::string&)>& emit,
                        const IndexOptions& opt) {
  int p = prob.om().dist.p;
  if (p > 2) throw UnsupportedOrder("indexing supports p = 1 and p = 2 only");
  if (opt.shard_count < 1 || opt.shard_index < 0 || opt.shard_index >= opt.shard_count ||
      opt.shard_depth < 0 || opt.shard_depth > 62)
    throw Error("bad shard spec");
  IndexSearch search(prob, emit, opt);
  search.run();
}

OrbitMatrix compress_design(const IncidenceMatrix& m, const PermutationAction& sigma) {
  if (sigma.degree() != m.v() || static_cast<int>(sigma.block_perm.size()) != m.v())
    throw NotAnAutomorphism("sigma has the wrong degree");
  if (!is_automorphism(m, sigma)) throw NotAnAutomorphism("sigma does not preserve the design");
  if (action_order(sigma) != 2) throw NotAnAutomorphism("sigma is not an involution");

  int v = m.v();
  auto orbits_of = [v](const std::vector<int>& perm) {
    std::vector<std::vector<int>> fixed, pairs;
    for (int x = 0; x < v; ++x) {
      if (perm[x] == x)
        fixed.push_back({x});
      else if (perm[x] > x)
        pairs.push_back({x, perm[x]});
    }
    std::vector<std::vector<int>> all = fixed;
    all.insert(all.end(), pairs.begin(), pairs.end());
    return all;
  };
  std::vector<std::vector<int>> point_orbits = orbits_of(sigma.point_perm);
  std::vector<std::vector<int>> block_orbits = orbits_of(sigma.block_perm);

  int fp = 0, fb = 0;
  for (const auto& o : point_orbits)
    if (o.size() == 1) ++fp;
  for (const auto& o : block_orbits)
    if (o.size() == 1) ++fb;
  if (fp != fb)
    throw NotAnAutomorphism("involution fixes unequal numbers of points and blocks");

  OrbitMatrix om;
  om.dist = make_distribution(m.params(), 2, fp);
  int t = om.dist.t;
  om.gamma.assign(static_cast<size_t>(t) * t, 0);
  for (int i = 0; i < t; ++i) {
    int rep = block_orbits[i][0];
    for (int r = 0; r < t; ++r) {
      int g = 0;
      for (int x : point_orbits[r]) g += m.at(rep, x) ? 1 : 0;
      om.gamma[static_cast<size_t>(i) * t + r] = g;
    }
  }
  if (!verify_orbit_matrix(om))
    throw Error("compress_design produced an invalid orbit matrix");
  return om;
}

bool prune_partial(const DesignParams& params, const BitMatrix& rows, int rows_filled,
                   const std::vector<uint64_t>& candidate, int cols_filled) {
  int words = rows.words_per_row();
  if (static_cast<int>(candidate.size()) != words)
    throw DegreeMismatch("prune_partial: candidate word count mismatch");
  // Completed rows are fully determined pairwise.
  for (int i = 0; i < rows_filled; ++i)
    for (int j = i + 1; j < rows_filled; ++j)
      if (rows.intersect_count(i, j) != params.lambda) return false;
  // Candidate against completed rows: exact when complete, bounded otherwise.
  std::vector<uint64_t> cand = candidate;
  if (cols_filled < params.v) {
    for (int c = cols_filled; c < params.v; ++c)
      cand[c >> 6] &= ~(uint64_t{1} << (c & 63));
  }
  for (int i = 0; i < rows_filled; ++i) {
    int inter = BitMatrix::intersect_count(cand.data(), rows.row(i), words);
    if (cols_filled >= params.v ? inter != params.lambda : inter > params.lambda) return false;
  }
  // Running column sums.
  for (int c = 0; c < params.v; ++c) {
    int s = 0;
    for (int i = 0; i < rows_filled; ++i) s += rows.get(i, c) ? 1 : 0;
    if (c < cols_filled && ((cand[c >> 6] >> (c & 63)) & 1)) ++s;
    if (s > params.k) return false;
  }
  return true;
}

}  // namespace orbitforge
