#include "oracle.hpp"

#include <algorithm>
#include <cstdint>

namespace orbitforge::oracle {

namespace {

// Candidate enumeration state: rows as 64-bit masks (v <= 13 here).
struct RowSearch {
  DesignParams p;
  std::vector<uint64_t> rows;
  std::vector<int> colsum;
  std::vector<std::vector<uint64_t>> out;

  void run() {
    // First row 1^k 0^(v-k): lex-largest weight-k row, so the row-sorted
    // normalization keeps it first. Column order is free at this point.
    uint64_t first = (uint64_t{1} << p.k) - 1;
    rows.push_back(first);
    for (int j = 0; j < p.k; ++j) colsum[j] = 1;
    extend(1);
  }

  void extend(int depth) {
    if (depth == p.v) {
      out.push_back(rows);
      return;
    }
    buildRow(depth, 0, 0, 0);
  }

  // DFS over the bits of row `depth`, column by column.
  void buildRow(int depth, int col, uint64_t acc, int ones) {
    if (col == p.v) {
      if (ones != p.k) return;
      for (int j = 0; j < depth; ++j)
        if (std::popcount(acc & rows[j]) != p.lambda) return;
      rows.push_back(acc);
      extend(depth + 1);
      rows.pop_back();
      return;
    }
    int rest = p.v - col - 1;
    // Keep rows non-increasing: acc must stay <= rows[depth-1] when the
    // shared prefix is still equal. Compare the prefix directly.
    uint64_t prefmask = (uint64_t{1} << col) - 1;
    bool tied = (acc & prefmask) == (rows[depth - 1] & prefmask);
    for (int bit = 1; bit >= 0; --bit) {
      if (bit && ones == p.k) continue;
      if (!bit && ones + rest + 1 < p.k) continue;
      if (tied && bit > (int)((rows[depth - 1] >> col) & 1)) continue;
      if (bit) {
        if (colsum[col] == p.k) continue;
        // Intersections with earlier rows must stay completable to lambda.
        bool ok = true;
        for (int j = 0; j < depth && ok; ++j) {
          uint64_t cand = acc | (uint64_t{1} << col);
          int inter = std::popcount(cand & rows[j]);
          if (inter > p.lambda) ok = false;
        }
        if (!ok) continue;
        ++colsum[col];
        buildRow(depth, col + 1, acc | (uint64_t{1} << col), ones + 1);
        --colsum[col];
      } else {
        // Column must still be completable to sum k.
        if (colsum[col] + (p.v - depth - 1) < p.k) continue;
        bool ok = true;
        for (int j = 0; j < depth && ok; ++j) {
          int inter = std::popcount(acc & rows[j]);
          int possible = inter + std::popcount(rows[j] >> (col + 1) << (col + 1));
          if (possible < p.lambda) ok = false;
        }
        if (!ok) continue;
        buildRow(depth, col + 1, acc, ones);
      }
    }
  }
};

IncidenceMatrix fromMasks(const DesignParams& p, const std::vector<uint64_t>& rows) {
  BitMatrix b(p.v, p.v);
  for (int i = 0; i < p.v; ++i)
    for (int j = 0; j < p.v; ++j)
      if ((rows[i] >> j) & 1) b.set(i, j, true);
  return IncidenceMatrix(p, std::move(b));
}

std::vector<uint64_t> blockMasks(const IncidenceMatrix& m) {
  std::vector<uint64_t> r(m.v());
  for (int i = 0; i < m.v(); ++i)
    for (int j = 0; j < m.v(); ++j)
      if (m.at(i, j)) r[i] |= uint64_t{1} << j;
  return r;
}

// Backtracking point-bijection search from a to b. Calls visit(point_perm)
// for every complete map whose translated block multiset equals b's; visit
// returns false to stop the search.
template <typename Visit>
bool mapSearch(const IncidenceMatrix& a, const IncidenceMatrix& b, Visit visit) {
  int v = a.v();
  std::vector<uint64_t> ablocks = blockMasks(a), bblocks = blockMasks(b);
  std::vector<uint64_t> bsorted = bblocks;
  std::sort(bsorted.begin(), bsorted.end());

  std::vector<int> img(v, -1);
  std::vector<char> used(v, 0);

  // Consistency check after mapping points 0..d-1: the multiset of
  // translated partial blocks of a must match b's partial blocks over the
  // image set.
  auto consistent = [&](int d) {
    uint64_t imgset = 0;
    for (int i = 0; i < d; ++i) imgset |= uint64_t{1} << img[i];
    std::vector<uint64_t> ta(v), tb(v);
    for (int i = 0; i < v; ++i) {
      uint64_t t = 0;
      for (int x = 0; x < d; ++x)
        if ((ablocks[i] >> x) & 1) t |= uint64_t{1} << img[x];
      ta[i] = t;
      tb[i] = bblocks[i] & imgset;
    }
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    return ta == tb;
  };

  struct Frame {
    int cand = 0;
  };
  std::vector<int> stack;
  // Recursive lambda via explicit recursion.
  bool stopped = false;
  auto rec = [&](auto&& self, int d) -> void {
    if (stopped) return;
    if (d == v) {
      std::vector<uint64_t> ta(v);
      for (int i = 0; i < v; ++i) {
        uint64_t t = 0;
        for (int x = 0; x < v; ++x)
          if ((ablocks[i] >> x) & 1) t |= uint64_t{1} << img[x];
        ta[i] = t;
      }
      std::vector<uint64_t> tsorted = ta;
      std::sort(tsorted.begin(), tsorted.end());
      if (tsorted == bsorted) {
        if (!visit(img, ta, bblocks)) stopped = true;
      }
      return;
    }
    for (int y = 0; y < v && !stopped; ++y) {
      if (used[y]) continue;
      img[d] = y;
      used[y] = 1;
      if (consistent(d + 1)) self(self, d + 1);
      used[y] = 0;
      img[d] = -1;
    }
  };
  rec(rec, 0);
  return stopped;
}

PermutationAction actionFromPointMap(const std::vector<int>& img,
                                     const std::vector<uint64_t>& translated,
                                     const std::vector<uint64_t>& bblocks) {
  int v = static_cast<int>(img.size());
  PermutationAction act;
  act.point_perm = img;
  act.block_perm.assign(v, -1);
  // Rows of a symmetric design are pairwise distinct, so the image block is
  // unique.
  for (int i = 0; i < v; ++i) {
    for (int j = 0; j < v; ++j) {
      if (translated[i] == bblocks[j]) {
        act.block_perm[i] = j;
        break;
      }
    }
  }
  return act;
}

}  // namespace

std::vector<IncidenceMatrix> classify_all(const DesignParams& params) {
  if (params.v > 13) throw Error("oracle::classify_all limited to v <= 13");
  RowSearch s;
  s.p = params;
  s.colsum.assign(params.v, 0);
  s.run();

  std::vector<IncidenceMatrix> reps;
  for (const auto& rows : s.out) {
    IncidenceMatrix cand = fromMasks(params, rows);
    if (!is_2design(cand)) continue;
    bool fresh = true;
    for (const auto& r : reps) {
      if (isomorphic_naive(cand, r)) {
        fresh = false;
        break;
      }
    }
    if (fresh) reps.push_back(cand);
  }
  return reps;
}

bool isomorphic_naive(const IncidenceMatrix& a, const IncidenceMatrix& b) {
  if (a.params() != b.params()) return false;
  return mapSearch(a, b, [](const std::vector<int>&, const std::vector<uint64_t>&,
                            const std::vector<uint64_t>&) { return false; });
}

long long aut_order_naive(const IncidenceMatrix& m) {
  long long count = 0;
  mapSearch(m, m,
            [&](const std::vector<int>&, const std::vector<uint64_t>&,
                const std::vector<uint64_t>&) {
              ++count;
              return true;
            });
  return count;
}

std::vector<PermutationAction> all_automorphisms_naive(const IncidenceMatrix& m) {
  std::vector<PermutationAction> out;
  mapSearch(m, m,
            [&](const std::vector<int>& img, const std::vector<uint64_t>& ta,
                const std::vector<uint64_t>& bb) {
              out.push_back(actionFromPointMap(img, ta, bb));
              return true;
            });
  return out;
}

IncidenceMatrix fano() {
  DesignParams p = validate_params(7, 3, 1);
  BitMatrix b(7, 7);
  for (int i = 0; i < 7; ++i) {
    b.set(i, i, true);
    b.set(i, (i + 1) % 7, true);
    b.set(i, (i + 3) % 7, true);
  }
  return IncidenceMatrix(p, std::move(b));
}

}  // namespace orbitforge::oracle
