#include "orbitforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "orbitforge/canonical.hpp"
#include "orbitforge/hadamard.hpp"
#include "orbitforge/indexer.hpp"
#include "orbitforge/io.hpp"
#include "orbitforge/orbit.hpp"
#include "orbitforge/store.hpp"

namespace orbitforge {

int effective_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("ORBITFORGE_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

std::string cmd_distributions(const DesignParams& params, int p, int min_fixed) {
  std::ostringstream os;
  std::vector<OrbitDistribution> dists = enumerate_distributions(params, p, min_fixed);
  for (const OrbitDistribution& d : dists) os << "f=" << d.f << " t=" << d.t << '\n';
  os << "distributions=" << dists.size() << '\n';
  return os.str();
}

namespace {

std::string stratum_path(const std::string& base, int f) {
  size_t dot = base.find_last_of('.');
  size_t slash = base.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "_f" + std::to_string(f);
  return base.substr(0, dot) + "_f" + std::to_string(f) + base.substr(dot);
}

}  // namespace

std::string cmd_om(const DesignParams& params, int p, int f, const std::string& out_path,
                   int min_fixed) {
  std::ostringstream os;
  std::vector<OrbitDistribution> dists;
  if (f >= 0) {
    dists.push_back(make_distribution(params, p, f));
  } else {
    dists = enumerate_distributions(params, p, min_fixed);
  }
  unsigned long long total = 0;
  for (const OrbitDistribution& d : dists) {
    std::vector<OrbitMatrix> oms;
    build_orbit_matrices(d, [&](const OrbitMatrix& om) { oms.push_back(om); });
    std::string path = dists.size() == 1 ? out_path : stratum_path(out_path, d.f);
    write_orbit_matrices(path, oms);
    os << "f=" << d.f << " oms=" << oms.size() << " out=" << path << '\n';
    total += oms.size();
  }
  os << "total_oms=" << total << '\n';
  return os.str();
}

std::string cmd_index(const std::string& om_file, const std::string& store_dir, int shard_index,
                      int shard_count, bool force, const std::string& designs_out, int threads,
                      IndexRunStats* out_stats) {
  std::vector<OrbitMatrix> oms = read_orbit_matrices(om_file);
  if (oms.empty()) throw Error("no orbit matrices in " + om_file);
  for (const OrbitMatrix& om : oms)
    if (!(om.dist.params == oms[0].dist.params) || om.dist.p != oms[0].dist.p ||
        om.dist.f != oms[0].dist.f)
      throw Error("orbit matrix file mixes strata; index them separately");
  if (shard_count < 1 || shard_index < 1 || shard_index > shard_count)
    throw Error("bad --shard i/n");

  DedupStore store(store_dir);
  RunManifest manifest;
  manifest.params = oms[0].dist.params;
  manifest.p = oms[0].dist.p;
  manifest.f = oms[0].dist.f;
  manifest.om_count = static_cast<int>(oms.size());
  manifest.shard_index = shard_index;
  manifest.shard_count = shard_count;
  store.init_manifest(manifest);

  std::vector<int> pending = store.pending_units();
  std::atomic<size_t> next{0};
  std::atomic<unsigned long long> indexed{0}, inserted{0};

  std::ofstream designs_os;
  std::mutex designs_mutex;
  bool designs_any = false;
  if (!designs_out.empty()) {
    designs_os.open(designs_out, std::ios::app);
    if (!designs_os) throw Error("cannot write " + designs_out);
    designs_any = designs_os.tellp() > 0;
  }

  int nthreads = effective_threads(threads);
  auto worker = [&]() {
    for (;;) {
      size_t idx = next.fetch_add(1);
      if (idx >= pending.size()) return;
      int om_id = pending[idx];
      IndexingProblem prob = IndexingProblem::from_om(oms[om_id]);
      IndexOptions opt;
      opt.force = force;
      index_orbit_matrix(prob, [&](const IncidenceMatrix& m, const std::string& branch) {
        CanonicalRecord rec = canonical_form(m);
        StoreRecord sr;
        sr.key.assign(rec.key.begin(), rec.key.end());
        sr.aut_order = rec.aut_order;
        sr.om_id = static_cast<uint32_t>(om_id);
        sr.branch = branch;
        ++indexed;
        if (store.insert(sr)) {
          ++inserted;
          if (designs_os.is_open()) {
            std::lock_guard<std::mutex> lock(designs_mutex);
            if (designs_any) designs_os << '\n';
            write_design(designs_os, m);
            designs_any = true;
          }
        }
      }, opt);
      store.mark_unit_done(om_id);
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  store.flush();

  bool can_finalize = store.pending_units().empty();
  if (can_finalize) store.finalize();

  IndexRunStats stats;
  stats.oms = oms.size();
  stats.indexed = indexed;
  stats.inserted = inserted;
  stats.duplicates = store.collisions();
  stats.finalized = can_finalize;
  if (out_stats) *out_stats = stats;

  std::ostringstream os;
  os << "oms=" << stats.oms << '\n'
     << "units_run=" << pending.size() << '\n'
     << "indexed=" << stats.indexed << '\n'
     << "inserted=" << stats.inserted << '\n'
     << "duplicates=" << stats.duplicates << '\n'
     << "designs=" << store.size() << '\n'
     << "finalized=" << (stats.finalized ? 1 : 0) << '\n';
  return os.str();
}

std::string cmd_stats(const std::string& store_dir) {
  DedupStore store(store_dir);
  if (!store.pending_units().empty())
    throw StoreIncomplete("store has unfinished work units");
  if (!store.finalized()) throw StoreIncomplete("store is not finalized");

  unsigned long long total = 0, gt2 = 0;
  std::map<unsigned long long, unsigned long long> hist;
  store.for_each_final([&](const StoreRecord& rec) {
    ++total;
    if (rec.aut_order > 2) ++gt2;
    ++hist[rec.aut_order];
  });
  std::ostringstream os;
  os << "designs=" << total << '\n' << "aut_gt2=" << gt2 << '\n';
  for (const auto& [order, count] : hist) os << "aut=" << order << " count=" << count << '\n';
  return os.str();
}

std::string cmd_overlap(const std::vector<std::string>& store_dirs) {
  if (store_dirs.size() < 2) throw Error("overlap needs at least two stores");
  std::vector<std::vector<std::string>> keys(store_dirs.size());
  for (size_t i = 0; i < store_dirs.size(); ++i) {
    DedupStore store(store_dirs[i]);
    store.for_each_final([&](const StoreRecord& rec) { keys[i].push_back(rec.key); });
    // final records arrive sorted (shards ordered by leading byte)
  }
  std::ostringstream os;
  os << "stores=" << store_dirs.size() << '\n';
  unsigned long long sum = 0;
  for (size_t i = 0; i < keys.size(); ++i) {
    os << "store_" << (i + 1) << "=" << store_dirs[i] << " size=" << keys[i].size() << '\n';
    sum += keys[i].size();
  }
  for (size_t i = 0; i < keys.size(); ++i)
    for (size_t j = i + 1; j < keys.size(); ++j) {
      size_t a = 0, b = 0, inter = 0;
      while (a < keys[i].size() && b < keys[j].size()) {
        if (keys[i][a] < keys[j][b])
          ++a;
        else if (keys[j][b] < keys[i][a])
          ++b;
        else {
          ++inter;
          ++a;
          ++b;
        }
      }
      os << "pair=" << (i + 1) << "," << (j + 1) << " intersection=" << inter << '\n';
    }
  // k-way union by merging the sorted lists.
  std::vector<size_t> pos(keys.size(), 0);
  unsigned long long uni = 0;
  for (;;) {
    const std::string* min_key = nullptr;
    for (size_t i = 0; i < keys.size(); ++i)
      if (pos[i] < keys[i].size() && (!min_key || keys[i][pos[i]] < *min_key))
        min_key = &keys[i][pos[i]];
    if (!min_key) break;
    std::string cur = *min_key;
    for (size_t i = 0; i < keys.size(); ++i)
      while (pos[i] < keys[i].size() && keys[i][pos[i]] == cur) ++pos[i];
    ++uni;
  }
  os << "union=" << uni << '\n';
  os << "sum_minus_union=" << (sum - uni) << '\n';
  return os.str();
}

std::string cmd_extend(const std::string& store_dir, const std::string& out_path) {
  DedupStore store(store_dir);
  RunManifest manifest = store.manifest();
  if (!store.finalized()) throw StoreIncomplete("store is not finalized");

  ExtensionClassifier classifier;
  unsigned long long inputs = 0;
  store.for_each_final([&](const StoreRecord& rec) {
    std::vector<uint8_t> key(rec.key.begin(), rec.key.end());
    IncidenceMatrix m = design_from_key(manifest.params, key);
    classifier.add(m);
    ++inputs;
  });
  std::vector<ExtensionClass> classes = classifier.finish();

  std::map<unsigned long long, unsigned long long> hist;
  unsigned long long derived_total = 0;
  for (const ExtensionClass& c : classes) {
    ++hist[c.record.aut_order];
    derived_total += c.derived_classes;
  }
  if (!out_path.empty()) {
    int t = (manifest.params.v + 1) / 4;
    std::vector<ThreeDesign> reps;
    reps.reserve(classes.size());
    for (const ExtensionClass& c : classes) reps.push_back(three_design_from_key(t, c.record.key));
    write_three_designs(out_path, reps);
  }
  std::ostringstream os;
  os << "inputs=" << inputs << '\n'
     << "extensions=" << classes.size() << '\n'
     << "derived_classes_total=" << derived_total << '\n';
  for (const auto& [order, count] : hist) os << "aut=" << order << " count=" << count << '\n';
  return os.str();
}

}  // namespace orbitforge
