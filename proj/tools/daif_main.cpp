// daif — deep active inference on the mountain car.
//
// Pipeline: bootstrap -> train -> demo -> plan / run -> report.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "daif/commands.hpp"
#include "daif/errors.hpp"

namespace {

struct CommonOpts {
    std::optional<std::filesystem::path> config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::filesystem::path out = "out";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-c,--config", o.config, "JSON config file");
    cmd->add_option("-s,--set", o.overrides, "config override key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "master seed (overrides config)");
    cmd->add_option("-o,--out", o.out, "output directory");
}

daif::PipelineConfig resolve(const CommonOpts& o) {
    daif::PipelineConfig cfg = daif::load_config(o.config, o.overrides);
    if (o.seed.has_value()) cfg.seed = *o.seed;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep active inference agent for the mountain car task"};
    app.require_subcommand(1);

    CommonOpts boot_o, train_o, demo_o, plan_o, run_o;
    std::filesystem::path train_data, demo_ckpt, plan_ckpt, plan_pref, run_ckpt, run_pref,
        report_dir;
    std::vector<std::uint64_t> run_seeds;

    CLI::App* boot = app.add_subcommand("bootstrap", "collect random-agent episodes");
    add_common(boot, boot_o);

    CLI::App* tr = app.add_subcommand("train", "train the generative model by free-energy descent");
    add_common(tr, train_o);
    tr->add_option("-d,--data", train_data, "bootstrap output directory")->required();

    CLI::App* de = app.add_subcommand("demo", "expert demonstration and preferred-state encoding");
    add_common(de, demo_o);
    de->add_option("-k,--checkpoint", demo_ckpt, "model checkpoint")->required();

    CLI::App* pl = app.add_subcommand("plan", "evaluate the full policy tree once");
    add_common(pl, plan_o);
    pl->add_option("-k,--checkpoint", plan_ckpt, "model checkpoint")->required();
    pl->add_option("-p,--preferred", plan_pref, "preferred state JSON")->required();

    CLI::App* ru = app.add_subcommand("run", "closed-loop active inference episodes");
    add_common(ru, run_o);
    ru->add_option("-k,--checkpoint", run_ckpt, "model checkpoint")->required();
    ru->add_option("-p,--preferred", run_pref, "preferred state JSON")->required();
    ru->add_option("--seeds", run_seeds, "run one episode per seed, concurrently");

    CLI::App* re = app.add_subcommand("report", "summarize an output directory");
    re->add_option("dir", report_dir, "directory with artifacts")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (boot->parsed()) {
            daif::cmd_bootstrap(resolve(boot_o), boot_o.out);
        } else if (tr->parsed()) {
            daif::cmd_train(resolve(train_o), train_data, train_o.out);
        } else if (de->parsed()) {
            daif::cmd_demo(resolve(demo_o), demo_ckpt, demo_o.out);
        } else if (pl->parsed()) {
            daif::cmd_plan(resolve(plan_o), plan_ckpt, plan_pref, plan_o.out);
        } else if (ru->parsed()) {
            daif::cmd_run(resolve(run_o), run_ckpt, run_pref, run_seeds, run_o.out);
        } else if (re->parsed()) {
            std::cout << daif::cmd_report(report_dir);
        }
    } catch (const daif::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const daif::ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const daif::DivergenceError& e) {
        std::cerr << "numeric divergence: " << e.what() << "\n";
        return 3;
    } catch (const daif::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
