#include "daif/artifacts.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace daif {

using nlohmann::json;

std::string format_double(double v) {
    return json(v).dump();
}

std::string provenance_line(const PipelineConfig& cfg) {
    std::ostringstream os;
    os << "# config_hash=" << std::hex << config_hash(cfg) << std::dec << " seed=" << cfg.seed;
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path.string());
    out << content;
    if (!out) throw IoError("failed writing file: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read file: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const PipelineConfig& cfg) {
    std::ostringstream hash;
    hash << std::hex << config_hash(cfg);
    json j = {
        {"command", command},
        {"seed", cfg.seed},
        {"config_hash", hash.str()},
        {"config", json::parse(canonical_config(cfg))},
        {"created_at", std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count()},
    };
    write_text_file(dir / "manifest.json", j.dump(2) + "\n");
}

void save_episode(const Episode& ep, const std::filesystem::path& path,
                  const PipelineConfig& cfg) {
    ep.validate();
    std::ostringstream os;
    os << provenance_line(cfg) << "\n";
    os << "t,obs,action\n";
    for (int t = 0; t < ep.length(); ++t) {
        os << t << ',' << format_double(ep.observations[t]) << ',';
        if (t < static_cast<int>(ep.actions.size())) os << action_char(ep.actions[t]);
        os << '\n';
    }
    write_text_file(path, os.str());
}

Episode load_episode(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read episode: " + path.string());
    Episode ep;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true; // "t,obs,action"
            continue;
        }
        std::istringstream ls(line);
        std::string t_str, obs_str, action_str;
        std::getline(ls, t_str, ',');
        std::getline(ls, obs_str, ',');
        std::getline(ls, action_str);
        ep.observations.push_back(std::stod(obs_str));
        if (action_str == "L") {
            ep.actions.push_back(Action::Left);
        } else if (action_str == "R") {
            ep.actions.push_back(Action::Right);
        } else if (!action_str.empty()) {
            throw IoError("bad action '" + action_str + "' in " + path.string());
        }
    }
    ep.validate();
    return ep;
}

std::vector<Episode> load_episode_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("episode directory does not exist: " + dir.string());
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no episode files in " + dir.string());
    std::vector<Episode> eps;
    eps.reserve(files.size());
    for (const auto& f : files) {
        Episode ep = load_episode(f);
        ep.id = eps.size();
        eps.push_back(std::move(ep));
    }
    return eps;
}

void save_preferred(const DiagGaussian& preferred, const PipelineConfig& cfg,
                    const std::filesystem::path& path) {
    std::ostringstream hash;
    hash << std::hex << config_hash(cfg);
    json j = {
        {"mean", preferred.mean},
        {"std", preferred.std},
        {"seed", cfg.seed},
        {"config_hash", hash.str()},
    };
    write_text_file(path, j.dump(2) + "\n");
}

DiagGaussian load_preferred(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read preferred state: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("malformed preferred state " + path.string() + ": " + e.what());
    }
    return make_gaussian(j.at("mean").get<Vec>(), j.at("std").get<Vec>());
}

std::vector<BranchPath> enumerate_branches(const std::vector<BranchEvaluation>& roots,
                                           Action selected_root, double rho) {
    std::vector<BranchPath> out;

    // Greedy selected path: the chosen root action, then the most probable
    // child at every level (minimum G; softmax is monotone decreasing in G).
    std::vector<const BranchEvaluation*> selected;
    {
        const BranchEvaluation* node = nullptr;
        for (const BranchEvaluation& r : roots) {
            if (r.action == selected_root) node = &r;
        }
        while (node != nullptr) {
            selected.push_back(node);
            const BranchEvaluation* next = nullptr;
            for (const BranchEvaluation& c : node->children) {
                if (next == nullptr || c.g_value < next->g_value) next = &c;
            }
            node = next;
        }
    }

    std::vector<const BranchEvaluation*> stack;
    auto walk = [&](auto&& self, const BranchEvaluation& node) -> void {
        stack.push_back(&node);
        if (node.children.empty()) {
            BranchPath bp;
            bp.segs = stack;
            for (std::size_t i = 0; i < stack.size(); ++i) {
                if (i > 0) bp.policy += '-';
                bp.policy += action_char(stack[i]->action);
                bp.kl_total += stack[i]->kl_total;
                bp.entropy_total += stack[i]->entropy_total;
            }
            bp.g_value = bp.kl_total + bp.entropy_total / rho;
            bp.selected = stack == selected;
            out.push_back(std::move(bp));
        } else {
            for (const BranchEvaluation& c : node.children) self(self, c);
        }
        stack.pop_back();
    };
    for (const BranchEvaluation& r : roots) walk(walk, r);
    return out;
}

void write_branches_csv(const std::vector<BranchPath>& branches,
                        const std::filesystem::path& path, const PipelineConfig& cfg) {
    std::ostringstream os;
    os << provenance_line(cfg) << "\n";
    os << "branch_id,policy_sequence,kl_total,entropy_total,g_value,selected_flag\n";
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const BranchPath& b = branches[i];
        os << i << ',' << b.policy << ',' << format_double(b.kl_total) << ','
           << format_double(b.entropy_total) << ',' << format_double(b.g_value) << ','
           << (b.selected ? 1 : 0) << '\n';
    }
    write_text_file(path, os.str());
}

void write_trajectories_csv(const std::vector<BranchPath>& branches,
                            const std::filesystem::path& path, const PipelineConfig& cfg) {
    std::ostringstream os;
    os << provenance_line(cfg) << "\n";
    os << "branch_id,particle,t,obs_mean\n";
    for (std::size_t b = 0; b < branches.size(); ++b) {
        const std::size_t n = branches[b].segs.front()->obs_means.size();
        for (std::size_t i = 0; i < n; ++i) {
            int t = 1;
            for (const BranchEvaluation* seg : branches[b].segs) {
                for (double v : seg->obs_means[i]) {
                    os << b << ',' << i << ',' << t++ << ',' << format_double(v) << '\n';
                }
            }
        }
    }
    write_text_file(path, os.str());
}

std::string render_plan_svg(const std::vector<BranchPath>& branches, double goal_position) {
    constexpr int kPanelW = 260, kPanelH = 200, kPad = 34;
    constexpr double kYMin = -1.3, kYMax = 0.7;
    const int cols = static_cast<int>((branches.size() + 1) / 2);
    const int rows = branches.size() > 1 ? 2 : 1;

    int total_steps = 0;
    for (const BranchEvaluation* seg : branches.front().segs) {
        total_steps += static_cast<int>(seg->obs_means.front().size());
    }

    const int width = cols * (kPanelW + kPad) + kPad;
    const int height = rows * (kPanelH + kPad + 18) + kPad;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";

    for (std::size_t b = 0; b < branches.size(); ++b) {
        const BranchPath& br = branches[b];
        const int cx = kPad + static_cast<int>(b % cols) * (kPanelW + kPad);
        const int cy = kPad + static_cast<int>(b / cols) * (kPanelH + kPad + 18);
        auto xpix = [&](double t) { return cx + t / total_steps * kPanelW; };
        auto ypix = [&](double p) {
            double clamped = std::clamp(p, kYMin, kYMax);
            return cy + (kYMax - clamped) / (kYMax - kYMin) * kPanelH;
        };

        os << "<rect x=\"" << cx << "\" y=\"" << cy << "\" width=\"" << kPanelW
           << "\" height=\"" << kPanelH << "\" fill=\"white\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << cx << "\" y1=\"" << ypix(goal_position) << "\" x2=\""
           << cx + kPanelW << "\" y2=\"" << ypix(goal_position)
           << "\" stroke=\"green\" stroke-dasharray=\"4 3\"/>\n";

        const std::size_t n = br.segs.front()->obs_means.size();
        for (std::size_t i = 0; i < n; ++i) {
            os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.25\" "
                  "points=\"";
            int t = 1;
            for (const BranchEvaluation* seg : br.segs) {
                for (double v : seg->obs_means[i]) {
                    os << xpix(t++) << ',' << ypix(v) << ' ';
                }
            }
            os << "\"/>\n";
        }

        std::ostringstream label;
        label.precision(4);
        label << br.policy << (br.selected ? " *" : "") << "  KL=" << br.kl_total
              << " H=" << br.entropy_total << " G=" << br.g_value;
        os << "<text x=\"" << cx << "\" y=\"" << cy + kPanelH + 14 << "\">" << label.str()
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace daif
