#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "daif/config.hpp"
#include "daif/genmodel.hpp"
#include "daif/planner.hpp"

namespace daif {

// Shortest decimal string that parses back to the same double (what the
// JSON serializer emits), so artifacts are reproducible byte for byte.
std::string format_double(double v);

// Comment line placed above CSV headers so every artifact carries its
// provenance; loaders skip lines starting with '#'.
std::string provenance_line(const PipelineConfig& cfg);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// manifest.json: command, master seed, config hash, full config, timestamp.
// The timestamp lives only here; every other artifact is byte-stable.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const PipelineConfig& cfg);

// Episode files: "t,obs,action" rows; the terminal row has an empty action
// field because no action follows the last observation.
void save_episode(const Episode& ep, const std::filesystem::path& path,
                  const PipelineConfig& cfg);
Episode load_episode(const std::filesystem::path& path);
std::vector<Episode> load_episode_dir(const std::filesystem::path& dir);

void save_preferred(const DiagGaussian& preferred, const PipelineConfig& cfg,
                    const std::filesystem::path& path);
DiagGaussian load_preferred(const std::filesystem::path& path);

// A root-to-leaf path through the evaluation tree.
struct BranchPath {
    std::string policy;                        // e.g. "L-R-R"
    std::vector<const BranchEvaluation*> segs; // depth() nodes, root first
    double kl_total = 0.0;
    double entropy_total = 0.0;
    double g_value = 0.0; // kl_total + (1/rho) * entropy_total along the path
    bool selected = false;
};

// Flattens the evaluation tree into its 2^D leaf paths (depth-first, Left
// branch first) and marks the greedy selected path.
std::vector<BranchPath> enumerate_branches(const std::vector<BranchEvaluation>& roots,
                                           Action selected_root, double rho);

void write_branches_csv(const std::vector<BranchPath>& branches,
                        const std::filesystem::path& path, const PipelineConfig& cfg);
void write_trajectories_csv(const std::vector<BranchPath>& branches,
                            const std::filesystem::path& path, const PipelineConfig& cfg);

// Small self-contained SVG: one panel per branch, overlaying the N predicted
// position trajectories, goal line dashed.
std::string render_plan_svg(const std::vector<BranchPath>& branches, double goal_position);

} // namespace daif
