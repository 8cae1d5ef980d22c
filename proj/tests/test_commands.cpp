#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "daif/artifacts.hpp"
#include "daif/commands.hpp"

using namespace daif;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("daif_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

PipelineConfig tiny_config() {
    PipelineConfig cfg;
    cfg.episodes = 6;
    cfg.episode_steps = 12;
    cfg.epochs = 2;
    cfg.plan_k = 3;
    cfg.plan_depth = 2;
    cfg.plan_rollouts = 5;
    cfg.max_steps = 15;
    cfg.seed = 42;
    return cfg;
}

int count_files(const fs::path& dir, const std::string& ext) {
    int n = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ext) ++n;
    }
    return n;
}

} // namespace

TEST_CASE("config: file, overrides, and canonical hash") {
    TempDir tmp("config");
    std::ofstream(tmp.path / "cfg.json") << R"({"rho": 0.5, "seed": 9, "variant": "random"})";

    PipelineConfig cfg = load_config(tmp.path / "cfg.json", {"rho=2.0", "epochs=3"});
    CHECK(cfg.rho == 2.0); // override wins
    CHECK(cfg.epochs == 3);
    CHECK(cfg.seed == 9);
    CHECK(cfg.variant_enum() == Variant::RandomVelocity);

    SUBCASE("hash changes with config and survives round-trips") {
        PipelineConfig a = load_config(std::nullopt, {});
        PipelineConfig b = load_config(std::nullopt, {"rho=0.2"});
        CHECK(config_hash(a) != config_hash(b));
        CHECK(config_hash(a) == config_hash(load_config(std::nullopt, {})));
    }

    SUBCASE("unknown keys and bad values raise config errors") {
        CHECK_THROWS_AS(load_config(std::nullopt, {"not_a_key=1"}), ConfigError);
        CHECK_THROWS_AS(load_config(std::nullopt, {"epochs=banana"}), ConfigError);
        CHECK_THROWS_AS(load_config(std::nullopt, {"gibberish"}), ConfigError);
        std::ofstream(tmp.path / "bad.json") << "{nope";
        CHECK_THROWS_AS(load_config(tmp.path / "bad.json", {}), ConfigError);
    }

    SUBCASE("start_position accepts a number or \"random\"") {
        PipelineConfig r = load_config(std::nullopt, {"start_position=random"});
        CHECK_FALSE(r.start_position.has_value());
        PipelineConfig f = load_config(std::nullopt, {"start_position=-0.4"});
        CHECK(f.start_position == -0.4);
    }
}

TEST_CASE("bootstrap writes one csv per episode plus a manifest, reproducibly") {
    TempDir out1("boot1"), out2("boot2"), out3("boot3");
    PipelineConfig cfg = tiny_config();

    cmd_bootstrap(cfg, out1.path);
    cmd_bootstrap(cfg, out2.path);

    CHECK(count_files(out1.path / "episodes", ".csv") == cfg.episodes);
    CHECK(fs::exists(out1.path / "manifest.json"));

    for (int i = 0; i < cfg.episodes; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "ep_%05d.csv", i);
        CHECK(read_text_file(out1.path / "episodes" / name) ==
              read_text_file(out2.path / "episodes" / name));
    }

    SUBCASE("episode files round-trip through the loader") {
        auto eps = load_episode_dir(out1.path / "episodes");
        REQUIRE(static_cast<int>(eps.size()) == cfg.episodes);
        for (const Episode& ep : eps) {
            ep.validate();
            CHECK(ep.length() <= cfg.episode_steps + 1);
        }
    }

    SUBCASE("a different seed changes the artifacts and the manifest hash") {
        PipelineConfig other = cfg;
        other.seed = 43;
        cmd_bootstrap(other, out3.path);
        CHECK(read_text_file(out1.path / "episodes/ep_00000.csv") !=
              read_text_file(out3.path / "episodes/ep_00000.csv"));
        CHECK(config_hash(cfg) != config_hash(other));
    }
}

TEST_CASE("train emits a loss curve and a checkpoint that round-trips") {
    TempDir data("train_data"), out("train_out");
    PipelineConfig cfg = tiny_config();
    cmd_bootstrap(cfg, data.path);
    cmd_train(cfg, data.path, out.path);

    std::string loss = read_text_file(out.path / "loss.csv");
    int rows = 0;
    for (char c : loss) rows += c == '\n' ? 1 : 0;
    CHECK(rows == cfg.epochs + 2); // provenance + header + epochs

    GenerativeModel m = load_checkpoint(out.path / "checkpoint.json");
    CHECK(m.meta().variant == cfg.variant);
    auto tmp2 = out.path / "resaved.json";
    save_checkpoint(m, tmp2);
    GenerativeModel m2 = load_checkpoint(tmp2);
    CHECK(m.transition_net.params.layers[0].w.data == m2.transition_net.params.layers[0].w.data);
}

TEST_CASE("demo, plan, and run produce the documented artifacts") {
    TempDir data("pipe_data"), train_out("pipe_train"), demo_out("pipe_demo"),
        plan_out("pipe_plan"), run_out("pipe_run");
    PipelineConfig cfg = tiny_config();

    cmd_bootstrap(cfg, data.path);
    cmd_train(cfg, data.path, train_out.path);
    const fs::path ckpt = train_out.path / "checkpoint.json";

    cmd_demo(cfg, ckpt, demo_out.path);
    const fs::path pref = demo_out.path / "preferred.json";
    DiagGaussian preferred = load_preferred(pref);
    CHECK(preferred.dim() == 4);
    for (double s : preferred.std) CHECK(s == cfg.preferred_std);

    SUBCASE("plan: 2^D branches, one selected, G recomputable from the columns") {
        cmd_plan(cfg, ckpt, pref, plan_out.path);
        std::string branches = read_text_file(plan_out.path / "branches.csv");
        int rows = 0, selected = 0;
        std::istringstream in(branches);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 'b') continue;
            ++rows;
            std::istringstream ls(line);
            std::string id, policy, kl, ent, g, sel;
            std::getline(ls, id, ',');
            std::getline(ls, policy, ',');
            std::getline(ls, kl, ',');
            std::getline(ls, ent, ',');
            std::getline(ls, g, ',');
            std::getline(ls, sel, ',');
            selected += sel == "1" ? 1 : 0;
            CHECK(std::stod(g) ==
                  doctest::Approx(std::stod(kl) + std::stod(ent) / cfg.rho).epsilon(1e-9));
            CHECK(policy.size() == 3); // "X-Y" for depth 2
        }
        CHECK(rows == 4); // 2^2
        CHECK(selected == 1);
        CHECK(fs::exists(plan_out.path / "trajectories.csv"));
        CHECK(fs::exists(plan_out.path / "plan_tree.json"));
        std::string svg = read_text_file(plan_out.path / "plan.svg");
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("polyline") != std::string::npos);

        SUBCASE("identical invocation reproduces the csv byte for byte") {
            TempDir plan2("pipe_plan2");
            cmd_plan(cfg, ckpt, pref, plan2.path);
            CHECK(read_text_file(plan_out.path / "branches.csv") ==
                  read_text_file(plan2.path / "branches.csv"));
            CHECK(read_text_file(plan_out.path / "trajectories.csv") ==
                  read_text_file(plan2.path / "trajectories.csv"));
        }
    }

    SUBCASE("run: per-step csv with replan flags, summaries, and concurrency") {
        cmd_run(cfg, ckpt, pref, {101, 102}, run_out.path);
        CHECK(fs::exists(run_out.path / "run_101.csv"));
        CHECK(fs::exists(run_out.path / "summary_102.json"));

        std::string csv = read_text_file(run_out.path / "run_101.csv");
        std::istringstream in(csv);
        std::string line;
        int rows = 0, replans = 0;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#' || line[0] == 't') continue;
            ++rows;
            replans += line.back() == '1' ? 1 : 0;
        }
        auto summary = nlohmann::json::parse(read_text_file(run_out.path / "summary_101.json"));
        CHECK(rows == summary.at("steps").get<int>() + 1);
        CHECK(replans == (summary.at("steps").get<int>() + cfg.plan_k - 1) / cfg.plan_k);

        SUBCASE("concurrent multi-seed output equals a serial single-seed run") {
            TempDir solo("pipe_solo");
            cmd_run(cfg, ckpt, pref, {102}, solo.path);
            CHECK(read_text_file(solo.path / "run_102.csv") ==
                  read_text_file(run_out.path / "run_102.csv"));
        }
    }

    SUBCASE("report summarizes without mutating inputs") {
        cmd_run(cfg, ckpt, pref, {7}, run_out.path);
        auto before = read_text_file(run_out.path / "summary.json");
        std::string report = cmd_report(run_out.path);
        CHECK(report.find("goal rate") != std::string::npos);
        CHECK(read_text_file(run_out.path / "summary.json") == before);
        CHECK(fs::exists(run_out.path / "report.txt"));
    }

    SUBCASE("missing checkpoint is an i/o error") {
        CHECK_THROWS_AS(cmd_plan(cfg, train_out.path / "nope.json", pref, plan_out.path),
                        IoError);
    }
}

TEST_CASE("format_double strings parse back to the identical value") {
    Rng rng(55);
    for (int i = 0; i < 200; ++i) {
        double v = rng.normal() * std::pow(10.0, rng.uniform(-8.0, 8.0));
        CHECK(std::stod(format_double(v)) == v);
    }
}
