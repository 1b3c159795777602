#include "orbitforge/orbit.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace orbitforge {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_distribution(const OrbitDistribution& d) {
  const DesignParams& P = d.params;
  if (d.p != 1 && !is_prime(d.p)) throw Error("automorphism order must be prime (or 1)");
  if (d.p > P.v) throw Error("automorphism order exceeds v");
  if (d.f < 0 || d.f > P.v || (P.v - d.f) % d.p != 0)
    throw Error("fixed-point count not compatible with orbit structure");
  if (d.p > 1 && d.f > P.v - 2 * P.order())
    throw Error("fixed-point count exceeds v - 2(k-lambda)");
  if (d.t != d.f + (P.v - d.f) / d.p) throw Error("orbit count mismatch");
}

}  // namespace

OrbitDistribution make_distribution(const DesignParams& params, int p, int f) {
  OrbitDistribution d;
  d.params = params;
  d.p = p;
  d.f = f;
  d.t = f + (params.v - f) / p;
  d.omega.assign(d.t, p);
  d.Omega.assign(d.t, p);
  for (int i = 0; i < f; ++i) d.omega[i] = d.Omega[i] = 1;
  check_distribution(d);
  return d;
}

std::vector<OrbitDistribution> enumerate_distributions(const DesignParams& params, int p,
                                                       int min_fixed) {
  if (p < 1 || (p != 1 && !is_prime(p))) throw Error("p must be prime (or 1)");
  if (p > params.v) throw Error("p exceeds v");
  std::vector<OrbitDistribution> out;
  if (p == 1) {
    // Identity: everything fixed.
    if (params.v >= min_fixed) out.push_back(make_distribution(params, 1, params.v));
    return out;
  }
  int bound = params.v - 2 * params.order();
  for (int f = 0; f <= bound; ++f) {
    if ((params.v - f) % p != 0) continue;
    if (f < min_fixed) continue;
    OrbitDistribution d = make_distribution(params, p, f);
    // A present row class with no admissible rows rules the action out.
    if (f > 0 && row_candidates(d, 0).empty()) continue;
    if (f < params.v && row_candidates(d, d.t - 1).empty()) continue;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<std::vector<int>> row_candidates(const OrbitDistribution& dist, int i) {
  check_distribution(dist);
  if (i < 0 || i >= dist.t) throw Error("row index out of range");
  const DesignParams& P = dist.params;
  int p = dist.p;
  int f = dist.f;
  int t = dist.t;
  long long Oi = dist.Omega[i];
  // Scaled by p so (Omega_i/omega_r) stays integral.
  long long diag_target = p * (static_cast<long long>(P.lambda) * Oi + P.order());

  std::vector<std::vector<int>> out;
  // counts[v] = number of orbit-class columns carrying value v.
  std::vector<int> counts(p + 1, 0);
  int orbit_cols = t - f;

  // Choose the number of 1s on fixed columns, then the value multiset on the
  // p-orbit columns, highest value first.
  for (int a = std::min(f, P.k); a >= 0; --a) {
    long long diag_fixed = static_cast<long long>(p) * Oi * a;  // omega = 1, gamma in {0,1}
    if (diag_fixed > diag_target) continue;
    // DFS over values p..1 for the orbit columns.
    std::vector<int> chosen;
    auto rec = [&](auto&& self, int val, int used_cols, long long sum, long long diag) -> void {
      if (sum > P.k || diag > diag_target) return;
      if (val == 0) {
        if (sum == P.k && diag == diag_target) {
          std::vector<int> row;
          row.reserve(t);
          for (int r = 0; r < f; ++r) row.push_back(r < a ? 1 : 0);
          for (size_t idx = 0; idx < chosen.size(); ++idx) row.push_back(chosen[idx]);
          for (int r = used_cols; r < orbit_cols; ++r) row.push_back(0);
          out.push_back(std::move(row));
        }
        return;
      }
      int max_cnt = orbit_cols - used_cols;
      for (int c = 0; c <= max_cnt; ++c) {
        long long nsum = sum + static_cast<long long>(val) * c;
        // (Omega_i/omega) * val^2 per column, scaled by p; omega = p here.
        long long ndiag = diag + Oi * val * val * c;
        if (nsum > P.k || ndiag > diag_target) break;
        size_t mark = chosen.size();
        for (int j = 0; j < c; ++j) chosen.push_back(val);
        self(self, val - 1, used_cols + c, nsum, ndiag);
        chosen.resize(mark);
      }
    };
    rec(rec, p, 0, a, diag_fixed);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool verify_orbit_matrix(const OrbitMatrix& om) {
  const OrbitDistribution& d = om.dist;
  try {
    check_distribution(d);
  } catch (const Error&) {
    return false;
  }
  const DesignParams& P = d.params;
  int t = d.t;
  int p = d.p;
  if (static_cast<int>(om.gamma.size()) != t * t) return false;

  long long omega_sum = 0, Omega_sum = 0;
  for (int r = 0; r < t; ++r) omega_sum += d.omega[r];
  for (int i = 0; i < t; ++i) Omega_sum += d.Omega[i];
  if (omega_sum != P.v || Omega_sum != P.v) return false;

  for (int i = 0; i < t; ++i)
    for (int r = 0; r < t; ++r) {
      int g = om.at(i, r);
      if (g < 0 || g > d.omega[r]) return false;
      // A fixed block is a union of point orbits.
      if (p == 2 && d.Omega[i] == 1 && d.omega[r] == 2 && g == 1) return false;
    }

  for (int i = 0; i < t; ++i) {
    long long s = 0;
    for (int r = 0; r < t; ++r) s += om.at(i, r);
    if (s != P.k) return false;
  }

  // Orthogonality, scaled by p.
  for (int i = 0; i < t; ++i)
    for (int j = 0; j < t; ++j) {
      long long s = 0;
      for (int r = 0; r < t; ++r)
        s += (static_cast<long long>(p) * d.Omega[j] / d.omega[r]) * om.at(i, r) * om.at(j, r);
      long long target = static_cast<long long>(p) *
                         (static_cast<long long>(P.lambda) * d.Omega[j] +
                          (i == j ? P.order() : 0));
      if (s != target) return false;
    }

  for (int r = 0; r < t; ++r) {
    long long s = 0;
    for (int i = 0; i < t; ++i) s += static_cast<long long>(d.Omega[i]) * om.at(i, r);
    if (s != static_cast<long long>(P.k) * d.omega[r]) return false;
  }
  return true;
}

namespace {

// Lexicographically minimal matrix under row permutations within equal-Omega
// classes and column permutations within equal-omega classes. Branch and
// bound over output slots; the column partition refines as rows are placed.
class OmCanonizer {
 public:
  explicit OmCanonizer(const OrbitMatrix& om) : om_(om), t_(om.dist.t), f_(om.dist.f) {}

  std::vector<int> run() {
    std::vector<std::vector<int>> cells;
    if (f_ > 0) {
      std::vector<int> fixed(f_);
      for (int r = 0; r < f_; ++r) fixed[r] = r;
      cells.push_back(std::move(fixed));
    }
    if (t_ > f_) {
      std::vector<int> orbit(t_ - f_);
      for (int r = f_; r < t_; ++r) orbit[r - f_] = r;
      cells.push_back(std::move(orbit));
    }
    cur_.clear();
    dfs(0, cells, 0, /*equal=*/false);
    std::vector<int> flat;
    flat.reserve(static_cast<size_t>(t_) * t_);
    for (const auto& row : best_)
      flat.insert(flat.end(), row.begin(), row.end());
    return flat;
  }

 private:
  std::vector<int> minimized_row(int r, const std::vector<std::vector<int>>& cells) const {
    std::vector<int> out;
    out.reserve(t_);
    for (const auto& cell : cells) {
      size_t start = out.size();
      for (int c : cell) out.push_back(om_.at(r, c));
      std::sort(out.begin() + start, out.end());
    }
    return out;
  }

  // equal = true when the prefix rows coincide with best_'s prefix.
  void dfs(int slot, const std::vector<std::vector<int>>& cells, uint64_t used, bool equal) {
    if (slot == t_) {
      if (best_.empty() || !equal) {
        best_ = cur_;
        ++epoch_;
      }
      return;
    }
    int lo = slot < f_ ? 0 : f_;
    int hi = slot < f_ ? f_ : t_;

    std::vector<int> min_vec;
    std::vector<int> chosen;
    for (int r = lo; r < hi; ++r) {
      if (used & (uint64_t{1} << r)) continue;
      std::vector<int> mv = minimized_row(r, cells);
      if (min_vec.empty() || mv < min_vec) {
        min_vec = std::move(mv);
        chosen.assign(1, r);
      } else if (mv == min_vec) {
        chosen.push_back(r);
      }
    }

    bool child_equal = false;
    if (!best_.empty()) {
      if (equal) {
        if (min_vec > best_[slot]) return;
        child_equal = (min_vec == best_[slot]);
      }
    }

    cur_.push_back(min_vec);
    for (int r : chosen) {
      uint64_t epoch_before = epoch_;
      std::vector<std::vector<int>> next;
      for (const auto& cell : cells) {
        // Stable grouping by value, ascending; matches the sorted row.
        int maxval = 0;
        for (int c : cell) maxval = std::max(maxval, om_.at(r, c));
        for (int val = 0; val <= maxval; ++val) {
          std::vector<int> part;
          for (int c : cell)
            if (om_.at(r, c) == val) part.push_back(c);
          if (!part.empty()) next.push_back(std::move(part));
        }
      }
      dfs(slot + 1, next, used | (uint64_t{1} << r), child_equal);
      if (epoch_ != epoch_before) child_equal = true;  // best now shares our prefix
    }
    cur_.pop_back();
  }

  const OrbitMatrix& om_;
  int t_, f_;
  std::vector<std::vector<int>> cur_, best_;
  uint64_t epoch_ = 0;
};

std::string gamma_as_bytes(const std::vector<int>& gamma) {
  std::string s(gamma.size(), '\0');
  for (size_t i = 0; i < gamma.size(); ++i) s[i] = static_cast<char>(gamma[i]);
  return s;
}

// Backtracking construction of all orbit matrices for one distribution.
// Rows are searched orbit-class first (final indices f..t-1), then the fixed
// rows; inside each class the search keeps rows lexicographically
// non-increasing, and the very first searched row is taken column-sorted.
// Together with the final canonical dedup this yields one representative per
// equivalence class.
class OmSearch {
 public:
  OmSearch(const OrbitDistribution& dist, const std::function<void(const OrbitMatrix&)>& emit,
           const OmSearchOptions& opt)
      : d_(dist), emit_(emit), opt_(opt) {
    t_ = d_.t;
    f_ = d_.f;
    p_ = d_.p;
    k_ = d_.params.k;
    for (int i = f_; i < t_; ++i) slot_row_.push_back(i);
    for (int i = 0; i < f_; ++i) slot_row_.push_back(i);
    rows_.assign(t_, std::vector<int>(t_, 0));
    suffix_.assign(t_, std::vector<int>(t_ + 1, 0));
    colsum_.assign(t_, 0);
    suff_omega_.assign(t_ + 1, 0);
    for (int r = t_ - 1; r >= 0; --r) suff_omega_[r] = suff_omega_[r + 1] + d_.omega[r];
    rem_Omega_.assign(t_ + 1, 0);
    for (int s = t_ - 1; s >= 0; --s)
      rem_Omega_[s] = rem_Omega_[s + 1] + d_.Omega[slot_row_[s]];
  }

  void run() {
    if (t_ == 0) return;
    place_slot(0);
  }

 private:
  void place_slot(int slot) {
    if (slot == t_) {
      finish();
      return;
    }
    if (opt_.partition_rows > 0 && slot == opt_.partition_rows) {
      int64_t idx = prefix_counter_++;
      if (idx % opt_.partition_count != opt_.partition_index) return;
    }
    fill_cell(slot, 0, 0, 0);
  }

  void finish() {
    OrbitMatrix om;
    om.dist = d_;
    om.gamma.assign(static_cast<size_t>(t_) * t_, 0);
    for (int s = 0; s < t_; ++s) {
      int i = slot_row_[s];
      for (int r = 0; r < t_; ++r) om.gamma[static_cast<size_t>(i) * t_ + r] = rows_[s][r];
    }
    std::vector<int> canon = om_canonical_gamma(om);
    std::string key = gamma_as_bytes(canon);
    if (!seen_.insert(key).second) return;
    om.gamma = std::move(canon);
    emit_(om);
  }

  // DFS over the cells of the row at `slot`, column by column.
  void fill_cell(int slot, int col, long long rowsum, long long diag) {
    if (col == t_) {
      // Bounds made the equalities exact; record suffix sums and recurse.
      for (int r = t_ - 1; r >= 0; --r)
        suffix_[slot][r] = suffix_[slot][r + 1] + rows_[slot][r];
      place_slot(slot + 1);
      return;
    }
    if (col == 0) tied_now_ = true;
    int row_idx = slot_row_[slot];
    long long Oi = d_.Omega[row_idx];
    int omega = d_.omega[col];
    long long diag_target = p_ * (static_cast<long long>(d_.params.lambda) * Oi +
                                  d_.params.order());
    bool fixed_row = (Oi == 1);

    int class_slot0 = slot < (t_ - f_) ? 0 : (t_ - f_);
    bool have_prev = slot > class_slot0;
    bool tied = have_prev && tied_now_;
    long long pw_target = static_cast<long long>(p_) * d_.params.lambda;

    for (int g = omega; g >= 0; --g) {
      if (fixed_row && omega == p_ && p_ > 1 && g != 0 && g != p_) continue;  // orbit closure
      if (slot == 0 && col > 0 && col != f_ && g > rows_[0][col - 1]) continue;
      if (tied && g > rows_[slot - 1][col]) continue;

      long long nsum = rowsum + g;
      if (nsum > k_ || nsum + suff_omega_[col + 1] < k_) continue;
      long long ndiag = diag + (p_ * Oi / omega) * g * g;
      if (ndiag > diag_target || ndiag + p_ * Oi * suff_omega_[col + 1] < diag_target) continue;

      long long ncol = colsum_[col] + Oi * g;
      long long col_target = static_cast<long long>(k_) * omega;
      if (ncol > col_target) continue;
      if (ncol + static_cast<long long>(rem_Omega_[slot + 1]) * omega < col_target) continue;

      // Pairwise orthogonality with every earlier row, scaled by p:
      // term (p/omega)*g*g' is p*g*g' on fixed columns, g*g' on p-orbit ones.
      bool ok = true;
      long long scale = p_ / omega;
      for (int j = 0; j < slot; ++j) {
        long long npw = pw_[j] + scale * g * rows_[j][col];
        if (npw > pw_target ||
            npw + static_cast<long long>(p_) * suffix_[j][col + 1] < pw_target) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;

      rows_[slot][col] = g;
      for (int j = 0; j < slot; ++j) pw_[j] += scale * g * rows_[j][col];
      colsum_[col] = static_cast<int>(ncol);
      bool saved_tied = tied_now_;
      if (have_prev) tied_now_ = tied && (g == rows_[slot - 1][col]);

      fill_cell(slot, col + 1, nsum, ndiag);

      tied_now_ = saved_tied;
      colsum_[col] = static_cast<int>(ncol - Oi * g);
      for (int j = 0; j < slot; ++j) pw_[j] -= scale * g * rows_[j][col];
      rows_[slot][col] = 0;
    }
  }

  const OrbitDistribution& d_;
  const std::function<void(const OrbitMatrix&)>& emit_;
  const OmSearchOptions& opt_;
  int t_, f_, p_, k_;
  std::vector<int> slot_row_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<int>> suffix_;
  std::vector<int> colsum_;
  std::vector<int> suff_omega_;
  std::vector<int> rem_Omega_;
  std::vector<long long> pw_ = std::vector<long long>(BitMatrix::kMaxDim, 0);
  bool tied_now_ = true;
  int64_t prefix_counter_ = 0;
  std::unordered_set<std::string> seen_;
};

}  // namespace

void build_orbit_matrices(const OrbitDistribution& dist,
                          const std::function<void(const OrbitMatrix&)>& emit,
                          const OmSearchOptions& opt) {
  check_distribution(dist);
  if (dist.p == 1 && dist.params.v > 13)
    throw ScaleGuard("p=1 orbit matrix search refused for v > 13");
  if (opt.partition_count < 1 || opt.partition_index < 0 ||
      opt.partition_index >= opt.partition_count)
    throw Error("bad partition spec");
  OmSearch search(dist, emit, opt);
  search.run();
}

std::vector<int> om_canonical_gamma(const OrbitMatrix& om) {
  OmCanonizer c(om);
  return c.run();
}

OrbitMatrix om_canonical(const OrbitMatrix& om) {
  OrbitMatrix out;
  out.dist = om.dist;
  out.gamma = om_canonical_gamma(om);
  return out;
}

bool om_equivalent(const OrbitMatrix& a, const OrbitMatrix& b) {
  if (!(a.dist == b.dist)) return false;
  return om_canonical_gamma(a) == om_canonical_gamma(b);
}

}  // namespace orbitforge
