#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "rocus/experiment.hpp"
#include "rocus/render.hpp"
#include "rocus/serialization.hpp"

namespace fs = std::filesystem;
using namespace rocus;

namespace {

// Per-run directories default to a timestamped folder under --out.
fs::path resolve_out_dir(const ExperimentConfig& config, const std::string& out,
                         const std::string& tag) {
  if (!out.empty()) return out;
  if (!config.output_dir.empty()) return config.output_dir;
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", std::localtime(&t));
  return fs::path("runs") / (tag + "-" + buf);
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Posterior sampling of tasks and trajectories that exhibit "
               "specified robot-controller behaviors on a 2D navigation domain"};
  app.require_subcommand(1);

  std::string config_path, out_dir, run_dir, task_json;

  // Per-field overrides shared by the run-style subcommands; empty or
  // negative values mean "keep whatever the config file says".
  struct Overrides {
    std::string controller, behavior, mode, direction;
    double target = std::numeric_limits<double>::quiet_NaN();
    double alpha = -1.0;
    long long n_samples = -1, burn_in = -1, thin = -1, n_prior = -1;
    long long pool = -1, k = -1;
    long long seed = -1;
    void apply(ExperimentConfig& config) const {
      if (!controller.empty())
        config.controller = controller_from_name(controller);
      if (!behavior.empty()) config.spec.behavior_id = behavior;
      if (!mode.empty()) {
        if (mode != "matching" && mode != "maximal")
          throw ConfigError("mode must be matching or maximal");
        config.spec.mode = mode == "matching" ? Mode::matching : Mode::maximal;
      }
      if (!direction.empty()) {
        if (direction != "max" && direction != "min")
          throw ConfigError("direction must be max or min");
        config.spec.sign = direction == "max" ? 1 : -1;
      }
      if (!std::isnan(target)) config.spec.target = target;
      if (alpha >= 0.0) config.spec.alpha = alpha;
      if (n_samples >= 0) config.sampler.n_samples = static_cast<int>(n_samples);
      if (burn_in >= 0) config.sampler.burn_in = static_cast<int>(burn_in);
      if (thin >= 0) config.sampler.thin = static_cast<int>(thin);
      if (n_prior >= 0) config.sampler.n_prior = static_cast<int>(n_prior);
      if (pool >= 0) config.baseline_pool = static_cast<int>(pool);
      if (k >= 0) config.baseline_k = static_cast<int>(k);
      if (seed >= 0) config.sampler.seed = static_cast<std::uint64_t>(seed);
      config.spec.validate();
      config.sampler.validate();
    }
  } overrides;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--controller", overrides.controller, "ds | rrt");
    cmd->add_option("--behavior", overrides.behavior, "behavior id");
    cmd->add_option("--mode", overrides.mode, "matching | maximal");
    cmd->add_option("--target", overrides.target, "matching target value");
    cmd->add_option("--direction", overrides.direction, "max | min (maximal)");
    cmd->add_option("--alpha", overrides.alpha, "posterior volume fraction");
    cmd->add_option("--n-samples", overrides.n_samples, "MH states to record");
    cmd->add_option("--burn-in", overrides.burn_in, "discarded prefix");
    cmd->add_option("--thin", overrides.thin, "thinning period");
    cmd->add_option("--n-prior", overrides.n_prior, "calibration rollouts");
    cmd->add_option("--pool", overrides.pool, "baseline pool size");
    cmd->add_option("--k", overrides.k, "baseline selection size");
    cmd->add_option("--seed", overrides.seed, "RNG seed");
  };

  auto* calibrate_cmd = app.add_subcommand(
      "calibrate", "Estimate the prior behavior marginal and the relaxation width");
  add_run_options(calibrate_cmd);

  auto* sample_cmd = app.add_subcommand(
      "sample", "Run the full experiment: calibration, MH chain, artifacts");
  add_run_options(sample_cmd);

  auto* baseline_cmd = app.add_subcommand(
      "baseline", "Score a prior pool and keep the top-k most extreme rollouts");
  add_run_options(baseline_cmd);

  auto* render_cmd =
      app.add_subcommand("render", "Rebuild the SVG plots of an existing run");
  render_cmd->add_option("--run", run_dir, "run directory")->required();
  render_cmd->add_option("--env-debug", task_json,
                         "also dump occupancy grid + star polygons for the "
                         "first posterior task to this file");

  auto* summarize_cmd = app.add_subcommand(
      "summarize", "Collect summary.csv rows from one or more run directories");
  std::vector<std::string> run_dirs;
  summarize_cmd->add_option("--runs", run_dirs, "run directories")->required();

  auto* verify_cmd = app.add_subcommand(
      "verify", "Check every artifact in a run directory against its manifest");
  verify_cmd->add_option("--run", run_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (calibrate_cmd->parsed()) {
    return guarded([&] {
      ExperimentConfig config = load_experiment_config(config_path);
      overrides.apply(config);
      config.output_dir = resolve_out_dir(config, out_dir, "calibrate");
      fs::create_directories(config.output_dir);
      const EnvParams env;
      Rng rng(config.sampler.seed + 0x9e3779b97f4a7c15ull);
      const MarginalStats stats = estimate_marginal(
          env, config.controller, find_behavior(config.spec.behavior_id),
          config.sampler.n_prior, rng, config.sampler.max_tape);
      const Calibration calib = calibrate(stats, config.spec);
      write_file_atomic(config.output_dir / "marginal.json",
                        Json{{"stats", marginal_to_json(stats)},
                             {"calibration", calibration_to_json(calib)}}
                                .dump() +
                            "\n");
      std::cout << "prior mean " << stats.mean << ", sigma " << calib.sigma
                << " -> " << (config.output_dir / "marginal.json").string()
                << "\n";
      return 0;
    });
  }

  if (sample_cmd->parsed()) {
    return guarded([&] {
      ExperimentConfig config = load_experiment_config(config_path);
      overrides.apply(config);
      config.output_dir = resolve_out_dir(config, out_dir, "sample");
      const auto files = run_experiment(config);
      for (const std::string& f : files)
        std::cout << (config.output_dir / f).string() << "\n";
      return 0;
    });
  }

  if (baseline_cmd->parsed()) {
    return guarded([&] {
      ExperimentConfig config = load_experiment_config(config_path);
      overrides.apply(config);
      config.output_dir = resolve_out_dir(config, out_dir, "baseline");
      const auto files = run_baseline_experiment(config);
      for (const std::string& f : files)
        std::cout << (config.output_dir / f).string() << "\n";
      return 0;
    });
  }

  if (render_cmd->parsed()) {
    return guarded([&] {
      const auto files = render_run(run_dir);
      for (const std::string& f : files)
        std::cout << (fs::path(run_dir) / f).string() << "\n";
      if (!task_json.empty()) {
        const fs::path samples = fs::path(run_dir) / "samples.jsonl";
        const fs::path source =
            fs::exists(samples) ? samples : fs::path(run_dir) / "baseline.jsonl";
        const std::string jsonl = read_file(source);
        const auto eol = jsonl.find('\n');
        if (eol == std::string::npos)
          throw ConfigError(source.string() + " is empty");
        const ChainSample first =
            chain_sample_from_json(Json::parse(jsonl.substr(0, eol)));
        write_file_atomic(task_json,
                          env_debug_json(first.task, EnvParams{}).dump() + "\n");
        std::cout << task_json << "\n";
      }
      return 0;
    });
  }

  if (summarize_cmd->parsed()) {
    return guarded([&] {
      std::vector<SummaryRow> rows;
      for (const std::string& dir : run_dirs) {
        const auto parsed = parse_summary(read_file(fs::path(dir) / "summary.csv"));
        rows.insert(rows.end(), parsed.begin(), parsed.end());
      }
      std::cout << summarize(rows);
      return 0;
    });
  }

  if (verify_cmd->parsed()) {
    return guarded([&] {
      const auto bad = verify_run(run_dir);
      if (bad.empty()) {
        std::cout << "ok: all artifacts match the manifest\n";
        return 0;
      }
      for (const std::string& b : bad) std::cerr << "mismatch: " << b << "\n";
      return 1;
    });
  }
  return 0;
}
