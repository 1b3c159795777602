#include "orbitforge/store.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include <json.hpp>

#include "orbitforge/canonical.hpp"

namespace fs = std::filesystem;

namespace orbitforge {

std::vector<int> RunManifest::units() const {
  std::vector<int> out;
  for (int i = 0; i < om_count; ++i)
    if (i % shard_count == shard_index - 1) out.push_back(i);
  return out;
}

namespace {

std::string shard_name(int s) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%02x", s);
  return buf;
}

int shard_of(const std::string& key) {
  return key.empty() ? 0 : static_cast<unsigned char>(key[0]);
}

}  // namespace

DedupStore::DedupStore(const std::string& root)
    : root_(root), shard_(kShards), mutex_(kShards), log_(kShards), dirty_(kShards, 0) {
  fs::create_directories(fs::path(root_) / "logs");
  fs::create_directories(fs::path(root_) / "units");
  fs::create_directories(fs::path(root_) / "final");
  replay_logs();
}

DedupStore::~DedupStore() {
  try {
    flush();
  } catch (...) {
  }
}

void DedupStore::replay_logs() {
  for (int s = 0; s < kShards; ++s) {
    fs::path p = fs::path(root_) / "logs" / (shard_name(s) + ".log");
    if (!fs::exists(p)) continue;
    std::ifstream is(p);
    std::string line;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string hex, branch;
      unsigned long long aut;
      uint32_t om;
      if (!(ls >> hex >> aut >> om)) continue;  // tolerate a torn final line
      if (!(ls >> branch)) branch.clear();
      StoreRecord rec;
      try {
        std::vector<uint8_t> bytes = from_hex(hex);
        rec.key.assign(bytes.begin(), bytes.end());
      } catch (const Error&) {
        continue;
      }
      rec.aut_order = aut;
      rec.om_id = om;
      rec.branch = branch;
      insert_mem(rec);
    }
  }
  collisions_ = 0;  // replay does not count as collisions
}

bool DedupStore::insert_mem(const StoreRecord& rec) {
  int s = shard_of(rec.key);
  auto& map = shard_[s];
  auto it = map.find(rec.key);
  if (it == map.end()) {
    map.emplace(rec.key, Payload{rec.aut_order, rec.om_id, rec.branch});
    return true;
  }
  Payload& p = it->second;
  if (rec.om_id < p.om_id || (rec.om_id == p.om_id && rec.branch < p.branch)) {
    p.om_id = rec.om_id;
    p.branch = rec.branch;
  }
  return false;
}

bool DedupStore::insert(const StoreRecord& rec) {
  int s = shard_of(rec.key);
  std::lock_guard<std::mutex> lock(mutex_[s]);
  auto& map = shard_[s];
  auto it = map.find(rec.key);
  bool fresh = (it == map.end());
  bool log_it = fresh;
  if (fresh) {
    map.emplace(rec.key, Payload{rec.aut_order, rec.om_id, rec.branch});
  } else {
    ++collisions_;
    Payload& p = it->second;
    if (rec.om_id < p.om_id || (rec.om_id == p.om_id && rec.branch < p.branch)) {
      p.om_id = rec.om_id;
      p.branch = rec.branch;
      log_it = true;  // compaction keeps the provenance minimum
    }
  }
  if (log_it) {
    if (!log_[s].is_open()) {
      log_[s].open(fs::path(root_) / "logs" / (shard_name(s) + ".log"), std::ios::app);
      if (!log_[s]) throw Error("cannot append to store log");
    }
    std::vector<uint8_t> bytes(rec.key.begin(), rec.key.end());
    log_[s] << to_hex(bytes) << ' ' << rec.aut_order << ' ' << rec.om_id << ' ' << rec.branch
            << '\n';
    dirty_[s] = 1;
  }
  return fresh;
}

unsigned long long DedupStore::size() const {
  unsigned long long n = 0;
  for (int s = 0; s < kShards; ++s) {
    std::lock_guard<std::mutex> lock(mutex_[s]);
    n += shard_[s].size();
  }
  return n;
}

void DedupStore::flush() {
  for (int s = 0; s < kShards; ++s) {
    std::lock_guard<std::mutex> lock(mutex_[s]);
    if (dirty_[s] && log_[s].is_open()) {
      log_[s].flush();
      dirty_[s] = 0;
    }
  }
}

bool DedupStore::has_manifest() const { return fs::exists(fs::path(root_) / "manifest.json"); }

RunManifest DedupStore::manifest() const {
  std::ifstream is(fs::path(root_) / "manifest.json");
  if (!is) throw Error("store has no manifest");
  nlohmann::json j;
  is >> j;
  RunManifest m;
  m.params.v = j.at("v").get<int>();
  m.params.k = j.at("k").get<int>();
  m.params.lambda = j.at("lambda").get<int>();
  m.p = j.at("p").get<int>();
  m.f = j.at("f").get<int>();
  m.om_count = j.at("om_count").get<int>();
  m.shard_index = j.at("shard_index").get<int>();
  m.shard_count = j.at("shard_count").get<int>();
  return m;
}

void DedupStore::init_manifest(const RunManifest& m) {
  if (has_manifest()) {
    if (!(manifest() == m))
      throw Error("store manifest does not match this run; refusing to mix");
    return;
  }
  nlohmann::json j{{"v", m.params.v},          {"k", m.params.k},
                   {"lambda", m.params.lambda}, {"p", m.p},
                   {"f", m.f},                  {"om_count", m.om_count},
                   {"shard_index", m.shard_index}, {"shard_count", m.shard_count}};
  std::ofstream os(fs::path(root_) / "manifest.json");
  os << j.dump(2) << '\n';
}

bool DedupStore::unit_done(int om_id) const {
  return fs::exists(fs::path(root_) / "units" / ("om" + std::to_string(om_id) + ".done"));
}

void DedupStore::mark_unit_done(int om_id) {
  flush();
  std::ofstream os(fs::path(root_) / "units" / ("om" + std::to_string(om_id) + ".done"));
  os << "done\n";
}

std::vector<int> DedupStore::pending_units() const {
  std::vector<int> out;
  for (int u : manifest().units())
    if (!unit_done(u)) out.push_back(u);
  return out;
}

void DedupStore::finalize() {
  if (!pending_units().empty())
    throw StoreIncomplete("store has unfinished work units; cannot finalize");
  flush();
  for (int s = 0; s < kShards; ++s) {
    std::lock_guard<std::mutex> lock(mutex_[s]);
    std::vector<std::pair<std::string, const Payload*>> recs;
    recs.reserve(shard_[s].size());
    for (const auto& [key, payload] : shard_[s]) recs.emplace_back(key, &payload);
    std::sort(recs.begin(), recs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    fs::path p = fs::path(root_) / "final" / (shard_name(s) + ".rec");
    if (recs.empty()) {
      std::error_code ec;
      fs::remove(p, ec);
      continue;
    }
    std::ofstream os(p);
    for (const auto& [key, payload] : recs) {
      std::vector<uint8_t> bytes(key.begin(), key.end());
      os << to_hex(bytes) << ' ' << payload->aut_order << ' ' << payload->om_id << ' '
         << payload->branch << '\n';
    }
  }
  std::ofstream marker(fs::path(root_) / "final" / "FINALIZED");
  marker << size() << '\n';
}

bool DedupStore::finalized() const { return fs::exists(fs::path(root_) / "final" / "FINALIZED"); }

void DedupStore::for_each_final(const std::function<void(const StoreRecord&)>& fn) const {
  if (!finalized()) throw StoreIncomplete("store is not finalized");
  for (int s = 0; s < kShards; ++s) {
    fs::path p = fs::path(root_) / "final" / (shard_name(s) + ".rec");
    if (!fs::exists(p)) continue;
    std::ifstream is(p);
    std::string line;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string hex, branch;
      unsigned long long aut;
      uint32_t om;
      if (!(ls >> hex >> aut >> om)) throw FormatError("corrupt final record");
      ls >> branch;
      StoreRecord rec;
      std::vector<uint8_t> bytes = from_hex(hex);
      rec.key.assign(bytes.begin(), bytes.end());
      rec.aut_order = aut;
      rec.om_id = om;
      rec.branch = branch;
      fn(rec);
    }
  }
}

void DedupStore::absorb(const DedupStore& other) {
  for (int s = 0; s < kShards; ++s) {
    std::lock_guard<std::mutex> lock(other.mutex_[s]);
    for (const auto& [key, payload] : other.shard_[s]) {
      StoreRecord rec;
      rec.key = key;
      rec.aut_order = payload.aut_order;
      rec.om_id = payload.om_id;
      rec.branch = payload.branch;
      insert(rec);
    }
  }
}

}  // namespace orbitforge
