// CLI-level orchestration of the four classification steps. Every command
// returns its report as text, one block of space-separated key=value tokens
// per line.
#pragma once

#include <string>
#include <vector>

#include "orbitforge/design.hpp"

namespace orbitforge {

// Worker count: `requested` (or hardware concurrency when 0), capped by the
// ORBITFORGE_THREADS environment variable.
int effective_threads(int requested = 0);

std::string cmd_distributions(const DesignParams& params, int p, int min_fixed = 0);

// Builds orbit matrices. f < 0 runs every admissible stratum (respecting
// min_fixed), writing one file per stratum with "_f<EFF>" appended before the
// extension.
std::string cmd_om(const DesignParams& params, int p, int f, const std::string& out_path,
                   int min_fixed = 0);

struct IndexRunStats {
  unsigned long long oms = 0;
  unsigned long long indexed = 0;
  unsigned long long inserted = 0;
  unsigned long long duplicates = 0;
  bool finalized = false;
};

std::string cmd_index(const std::string& om_file, const std::string& store_dir, int shard_index,
                      int shard_count, bool force, const std::string& designs_out = "",
                      int threads = 0, IndexRunStats* out_stats = nullptr);

std::string cmd_stats(const std::string& store_dir);

std::string cmd_overlap(const std::vector<std::string>& store_dirs);

std::string cmd_extend(const std::string& store_dir, const std::string& out_path = "");

}  // namespace orbitforge
