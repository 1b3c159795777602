// On-disk deduplication store: canonical keys in 256 prefix shards,
// append-only logs with idempotent insert, per-unit completion markers and a
// deterministic sorted compaction. Safe for concurrent producers.
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "orbitforge/design.hpp"

namespace orbitforge {

struct StoreRecord {
  std::string key;  // raw canonical key bytes
  unsigned long long aut_order = 1;
  uint32_t om_id = 0;
  std::string branch;
};

struct RunManifest {
  DesignParams params{};
  int p = 0;
  int f = 0;
  int om_count = 0;
  int shard_index = 1;  // 1-based, as on the command line
  int shard_count = 1;

  friend bool operator==(const RunManifest& a, const RunManifest& b) {
    return a.params == b.params && a.p == b.p && a.f == b.f && a.om_count == b.om_count &&
           a.shard_index == b.shard_index && a.shard_count == b.shard_count;
  }
  // Orbit-matrix ids this run is responsible for.
  std::vector<int> units() const;
};

class DedupStore {
 public:
  static constexpr int kShards = 256;

  // Opens (or creates) the store and replays existing logs.
  explicit DedupStore(const std::string& root);
  ~DedupStore();

  const std::string& root() const { return root_; }

  bool has_manifest() const;
  RunManifest manifest() const;
  // Writes the manifest, or verifies it matches the one already present.
  void init_manifest(const RunManifest& m);

  // Idempotent: an existing key only bumps the collision counter (keeps the
  // provenance-minimal record). Returns true when the key is new.
  bool insert(const StoreRecord& rec);

  unsigned long long collisions() const { return collisions_; }
  unsigned long long size() const;

  bool unit_done(int om_id) const;
  void mark_unit_done(int om_id);
  std::vector<int> pending_units() const;

  // Sorted compaction into final/; byte-identical for identical key sets.
  void finalize();
  bool finalized() const;

  // Iterates finalized records in shard order, sorted by key within a shard.
  void for_each_final(const std::function<void(const StoreRecord&)>& fn) const;

  // Pulls every record of `other` into this store's logs (shard merge).
  void absorb(const DedupStore& other);

  void flush();

 private:
  struct Payload {
    unsigned long long aut_order;
    uint32_t om_id;
    std::string branch;
  };

  void replay_logs();
  bool insert_mem(const StoreRecord& rec);  // no logging; returns "new key"

  std::string root_;
  std::vector<std::unordered_map<std::string, Payload>> shard_;
  mutable std::vector<std::mutex> mutex_;
  std::vector<std::ofstream> log_;
  std::vector<char> dirty_;
  std::atomic<unsigned long long> collisions_{0};
};

}  // namespace orbitforge
