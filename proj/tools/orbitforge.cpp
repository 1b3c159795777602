// orbitforge: classification of symmetric 2-(v,k,lambda) designs with a
// prescribed prime-order automorphism, via orbit matrices and indexing.
//
//   dist     admissible fixed-point counts for (v,k,lambda) and p
//   om       construct orbit matrices for a stratum (or all strata)
//   index    expand orbit matrices into designs, deduplicated on disk
//   stats    design counts and automorphism-order histogram of a store
//   overlap  union / pairwise intersections of several stores
//   extend   Hadamard 3-design classification of a store's designs

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "orbitforge/errors.hpp"
#include "orbitforge/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"symmetric design classification via orbit matrices"};
  app.require_subcommand(1);

  long long v = 0, k = 0, lambda = 0;
  int p = 2;
  int fixed = -1;
  int min_fixed = 0;
  std::string shard = "1/1";
  std::string store_dir;
  std::vector<std::string> store_dirs;
  std::string out_path;
  bool force = false;
  int threads = 0;

  auto add_params = [&](CLI::App* cmd) {
    cmd->add_option("--v", v, "point count")->required();
    cmd->add_option("--k", k, "block size")->required();
    cmd->add_option("--lambda", lambda, "pair coverage")->required();
    cmd->add_option("--p", p, "automorphism order (prime, or 1)");
  };

  CLI::App* dist = app.add_subcommand("dist", "admissible fixed-point counts");
  add_params(dist);
  dist->add_option("--min-fixed", min_fixed, "external lower bound on f");

  CLI::App* om = app.add_subcommand("om", "construct orbit matrices");
  add_params(om);
  om->add_option("--fixed", fixed, "fixed-point count (omit to run all strata)");
  om->add_option("--min-fixed", min_fixed, "external lower bound on f");
  om->add_option("--out", out_path, "output OM file")->required();

  CLI::App* index = app.add_subcommand("index", "expand orbit matrices into designs");
  std::string om_file;
  index->add_option("--om", om_file, "orbit matrix file")->required();
  index->add_option("--store", store_dir, "dedup store directory")->required();
  index->add_option("--shard", shard, "i/n: process the i-th of n partitions of the OM list");
  index->add_option("--out", out_path, "also write first-seen designs to this file");
  index->add_flag("--force", force, "override the branch-node scale guard");
  index->add_option("--threads", threads, "worker threads (0 = auto)");

  CLI::App* stats = app.add_subcommand("stats", "report design counts for a store");
  stats->add_option("--store", store_dir, "dedup store directory")->required();

  CLI::App* overlap = app.add_subcommand("overlap", "compare several stores");
  overlap->add_option("--store", store_dirs, "store directories (repeat)")->required();

  CLI::App* extend = app.add_subcommand("extend", "classify Hadamard 3-design extensions");
  extend->add_option("--store", store_dir, "dedup store directory")->required();
  extend->add_option("--out", out_path, "write 3-design class representatives here");

  CLI11_PARSE(app, argc, argv);

  try {
    using namespace orbitforge;
    if (dist->parsed()) {
      std::cout << cmd_distributions(validate_params(v, k, lambda), p, min_fixed);
    } else if (om->parsed()) {
      std::cout << cmd_om(validate_params(v, k, lambda), p, fixed, out_path, min_fixed);
    } else if (index->parsed()) {
      size_t slash = shard.find('/');
      if (slash == std::string::npos) throw Error("--shard wants i/n");
      int si = std::stoi(shard.substr(0, slash));
      int sn = std::stoi(shard.substr(slash + 1));
      std::cout << cmd_index(om_file, store_dir, si, sn, force, out_path, threads);
    } else if (stats->parsed()) {
      std::cout << cmd_stats(store_dir);
    } else if (overlap->parsed()) {
      std::cout << cmd_overlap(store_dirs);
    } else if (extend->parsed()) {
      std::cout << cmd_extend(store_dir, out_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
