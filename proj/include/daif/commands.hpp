#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "daif/config.hpp"

namespace daif {

// Command implementations behind the CLI, callable directly from tests.
// Each writes its artifacts plus a manifest.json into `out` and throws
// ConfigError / DivergenceError / IoError on failure.

// Random-agent dataset: out/episodes/ep_NNNNN.csv, one file per episode.
void cmd_bootstrap(const PipelineConfig& cfg, const std::filesystem::path& out);

// Trains on an episode directory; writes out/checkpoint.json and
// out/loss.csv (one row per epoch).
void cmd_train(const PipelineConfig& cfg, const std::filesystem::path& data_dir,
               const std::filesystem::path& out);

// Scripted expert demonstration encoded through the trained posterior;
// writes out/preferred.json and out/demo_episode.csv.
void cmd_demo(const PipelineConfig& cfg, const std::filesystem::path& checkpoint,
              const std::filesystem::path& out);

// One full-depth plan evaluation from the configured start; writes
// out/branches.csv, out/trajectories.csv, out/plan_tree.json, out/plan.svg.
void cmd_plan(const PipelineConfig& cfg, const std::filesystem::path& checkpoint,
              const std::filesystem::path& preferred, const std::filesystem::path& out);

// Closed-loop runs, one per seed (concurrent across seeds); writes
// out/run_<seed>.csv and out/summary_<seed>.json per run plus a combined
// out/summary.json. An empty seed list runs the single master seed.
void cmd_run(const PipelineConfig& cfg, const std::filesystem::path& checkpoint,
             const std::filesystem::path& preferred, std::vector<std::uint64_t> seeds,
             const std::filesystem::path& out);

// Read-only digest of an output directory; writes <dir>/report.txt and
// returns its content.
std::string cmd_report(const std::filesystem::path& dir);

} // namespace daif
