#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rocus/baseline.hpp"
#include "rocus/sampler.hpp"

namespace rocus {

struct ExperimentConfig {
  ControllerKind controller = ControllerKind::ds;
  BehaviorSpec spec;
  SamplerConfig sampler;
  int baseline_pool = 2000;
  int baseline_k = 20;
  std::filesystem::path output_dir;

  void validate() const;
};

// Parses the JSON config document. The ROCUS_SEED environment variable,
// when set, overrides the configured sampler seed.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

std::string controller_name(ControllerKind kind);
ControllerKind controller_from_name(const std::string& name);

// Atomic file write: temp file in the same directory, then rename.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

// Calibrates, runs the chain, and writes samples (JSONL), the prior set,
// plots, summary and a hash manifest into output_dir. Returns the list of
// artifact files written.
std::vector<std::string> run_experiment(const ExperimentConfig& config);

// Top-k counterpart: pool, selection, histogram CSV, plots, manifest.
std::vector<std::string> run_baseline_experiment(const ExperimentConfig& config);

// Rebuilds the SVG artifacts of an existing run directory from its JSONL
// files (trajectories are replayed from tasks and tapes).
std::vector<std::string> render_run(const std::filesystem::path& run_dir);

// Re-hashes every artifact listed in the manifest. Returns the mismatched
// or missing files (empty means the run verifies clean).
std::vector<std::string> verify_run(const std::filesystem::path& run_dir);

}  // namespace rocus
