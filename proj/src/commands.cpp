#include "daif/commands.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include <json.hpp>

#include "daif/agent.hpp"
#include "daif/artifacts.hpp"

namespace daif {

using nlohmann::json;

namespace {

std::filesystem::path ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    return dir;
}

std::string episode_filename(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "ep_%05d.csv", index);
    return buf;
}

GenerativeModel load_model(const std::filesystem::path& checkpoint) {
    if (!std::filesystem::exists(checkpoint)) {
        throw IoError("checkpoint not found: " + checkpoint.string());
    }
    return load_checkpoint(checkpoint);
}

} // namespace

void cmd_bootstrap(const PipelineConfig& cfg, const std::filesystem::path& out) {
    ensure_dir(out);
    auto ep_dir = ensure_dir(out / "episodes");
    Rng rng = Rng(cfg.seed).split(0xB007);
    std::vector<Episode> eps = collect_random(cfg.bootstrap_env(), cfg.episodes, rng);
    for (std::size_t i = 0; i < eps.size(); ++i) {
        save_episode(eps[i], ep_dir / episode_filename(static_cast<int>(i)), cfg);
    }
    write_manifest(out, "bootstrap", cfg);
}

void cmd_train(const PipelineConfig& cfg, const std::filesystem::path& data_dir,
               const std::filesystem::path& out) {
    ensure_dir(out);
    std::vector<Episode> dataset = load_episode_dir(data_dir / "episodes");
    GenerativeModel model(cfg.model_meta());
    std::vector<double> curve = train(model, dataset, cfg.train_config());

    std::ostringstream os;
    os << provenance_line(cfg) << "\n";
    os << "epoch,mean_loss\n";
    for (std::size_t e = 0; e < curve.size(); ++e) {
        os << e << ',' << format_double(curve[e]) << '\n';
    }
    write_text_file(out / "loss.csv", os.str());
    save_checkpoint(model, out / "checkpoint.json");
    write_manifest(out, "train", cfg);
}

void cmd_demo(const PipelineConfig& cfg, const std::filesystem::path& checkpoint,
              const std::filesystem::path& out) {
    ensure_dir(out);
    GenerativeModel model = load_model(checkpoint);
    Rng rng = Rng(cfg.seed).split(0xDE30);
    Episode demo = expert_demonstration(cfg.demo_env(), rng);
    Vec end_state = encode_sequence(model, demo, rng);
    DiagGaussian preferred =
        make_gaussian(end_state, Vec(end_state.size(), cfg.preferred_std));
    save_episode(demo, out / "demo_episode.csv", cfg);
    save_preferred(preferred, cfg, out / "preferred.json");
    write_manifest(out, "demo", cfg);
}

void cmd_plan(const PipelineConfig& cfg, const std::filesystem::path& checkpoint,
              const std::filesystem::path& preferred_path, const std::filesystem::path& out) {
    ensure_dir(out);
    GenerativeModel model = load_model(checkpoint);
    PlanConfig plan_cfg = cfg.plan_config(load_preferred(preferred_path));

    Rng rng = Rng(cfg.seed).split(0x91A2);
    MountainCar env(cfg.eval_env());
    double obs0 = env.reset(rng);
    std::vector<Vec> particles = init_particles(model, obs0, plan_cfg.rollouts, rng);
    PlanResult plan = select_policy(model, particles, plan_cfg, rng);

    std::vector<BranchPath> branches =
        enumerate_branches(plan.roots, plan.selected, plan_cfg.rho);
    write_branches_csv(branches, out / "branches.csv", cfg);
    write_trajectories_csv(branches, out / "trajectories.csv", cfg);
    write_text_file(out / "plan.svg", render_plan_svg(branches, cfg.goal_position));

    // Full recursive tree, for the recomputation-minded.
    auto tree_json = [&](auto&& self, const BranchEvaluation& ev) -> json {
        json j = {
            {"action", std::string(1, action_char(ev.action))},
            {"kl_total", ev.kl_total},
            {"entropy_total", ev.entropy_total},
            {"g_value", ev.g_value},
            {"step_kl", ev.step_kl},
            {"step_entropy", ev.step_entropy},
        };
        json children = json::array();
        for (const BranchEvaluation& c : ev.children) children.push_back(self(self, c));
        j["children"] = children;
        return j;
    };
    json roots = json::array();
    for (const BranchEvaluation& r : plan.roots) roots.push_back(tree_json(tree_json, r));
    json jt = {
        {"selected", std::string(1, action_char(plan.selected))},
        {"root_probs", plan.root_probs},
        {"seed", cfg.seed},
        {"tree", roots},
    };
    write_text_file(out / "plan_tree.json", jt.dump(2) + "\n");
    write_manifest(out, "plan", cfg);
}

void cmd_run(const PipelineConfig& cfg, const std::filesystem::path& checkpoint,
             const std::filesystem::path& preferred_path, std::vector<std::uint64_t> seeds,
             const std::filesystem::path& out) {
    ensure_dir(out);
    GenerativeModel model = load_model(checkpoint);
    PlanConfig plan_cfg = cfg.plan_config(load_preferred(preferred_path));
    if (seeds.empty()) seeds.push_back(cfg.seed);

    // The model and plan config are read-only here; one run per seed.
    std::vector<std::future<RunRecord>> futures;
    futures.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        futures.push_back(std::async(std::launch::async, [&, seed] {
            return run_active_inference(model, cfg.eval_env(), plan_cfg, seed);
        }));
    }

    json combined = json::array();
    for (std::size_t i = 0; i < futures.size(); ++i) {
        RunRecord rec = futures[i].get();
        std::ostringstream os;
        os << provenance_line(cfg) << "\n";
        os << "t,true_pos,true_vel,obs,action,replan_flag\n";
        for (const StepRecord& s : rec.steps) {
            os << s.t << ',' << format_double(s.true_position) << ','
               << format_double(s.true_velocity) << ',' << format_double(s.obs) << ',';
            if (s.action >= 0) os << action_char(static_cast<Action>(s.action));
            os << ',' << (s.replan ? 1 : 0) << '\n';
        }
        const std::string tag = std::to_string(rec.seed);
        write_text_file(out / ("run_" + tag + ".csv"), os.str());

        json replans = json::array();
        for (const ReplanEvent& ev : rec.replans) {
            replans.push_back({{"t", ev.t},
                               {"chosen", std::string(1, action_char(ev.chosen))},
                               {"root_g", ev.root_g},
                               {"root_probs", ev.root_probs}});
        }
        json summary = {
            {"goal_reached", rec.goal_reached},
            {"steps", rec.steps_taken},
            {"seed", rec.seed},
            {"replans", replans},
        };
        write_text_file(out / ("summary_" + tag + ".json"), summary.dump(2) + "\n");
        combined.push_back({{"seed", rec.seed},
                            {"goal_reached", rec.goal_reached},
                            {"steps", rec.steps_taken}});
    }
    write_text_file(out / "summary.json", combined.dump(2) + "\n");
    write_manifest(out, "run", cfg);
}

std::string cmd_report(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) {
        throw IoError("report: no such directory: " + dir.string());
    }
    std::ostringstream os;
    os << "report for " << dir.string() << "\n\n";

    if (std::filesystem::exists(dir / "summary.json")) {
        json runs = json::parse(read_text_file(dir / "summary.json"));
        int goals = 0;
        os << "runs:\n";
        os << "  seed        goal  steps\n";
        for (const auto& r : runs) {
            bool goal = r.at("goal_reached").get<bool>();
            goals += goal ? 1 : 0;
            os << "  " << r.at("seed").get<std::uint64_t>() << "\t" << (goal ? "yes" : "no ")
               << "\t" << r.at("steps").get<int>() << "\n";
        }
        os << "  goal rate: " << goals << "/" << runs.size() << "\n\n";
    }

    if (std::filesystem::exists(dir / "branches.csv")) {
        os << "branches:\n";
        std::istringstream in(read_text_file(dir / "branches.csv"));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            os << "  " << line << "\n";
        }
        os << "\n";
    }

    if (std::filesystem::exists(dir / "loss.csv")) {
        std::istringstream in(read_text_file(dir / "loss.csv"));
        std::string line, first_row, last_row;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'e') continue;
            if (first_row.empty()) first_row = line;
            last_row = line;
        }
        os << "training loss: first epoch [" << first_row << "], last epoch [" << last_row
           << "]\n";
    }

    std::string text = os.str();
    write_text_file(dir / "report.txt", text);
    return text;
}

} // namespace daif
