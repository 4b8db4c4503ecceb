// Command-line front end.
//
//   hsflow run             integrate the flow, write series.csv/snapshots.jsonl
//   hsflow audit           recompute diagnostics from stored snapshots
//   hsflow predict-limit   print the limit (v_inf, Qhat_inf) of the initial data
//   hsflow lemma-fuzz      randomized checks of the pointwise identities
//   hsflow linearize-audit finite-difference check of the linearized operator
//
// Exit status: 0 all checks pass, 1 an audit check failed, 2 error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hsflow/errors.hpp"
#include "hsflow/io.hpp"

namespace {

hsflow::RunSetup load_setup(const std::string& config_path,
                            const std::string& preset, const std::string& out,
                            std::uint64_t seed, bool seed_set, long trials,
                            bool trials_set) {
    hsflow::RunSetup s;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw hsflow::Error("cannot open config " + config_path);
        std::ostringstream buf;
        buf << f.rdbuf();
        s = hsflow::parse_config(buf.str());
    }
    if (!preset.empty()) {
        if (preset != "cosine" && preset != "skewed" && preset != "offdiag" &&
            preset != "constant")
            throw hsflow::Error("unknown preset '" + preset + "'");
        s.preset = preset;
    }
    if (!out.empty()) s.out_dir = out;
    if (seed_set) s.seed = seed;
    if (trials_set) s.trials = trials;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hypersymplectic flow simulator and verification lab"};
    app.require_subcommand(1);

    std::string config_path, preset, out_dir, snapshots_path;
    std::uint64_t seed = 0;
    long trials = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file");
        sub->add_option("--preset", preset, "initial data preset");
        sub->add_option("--out", out_dir, "output directory");
        return sub;
    };

    CLI::App* c_run = add_common(app.add_subcommand("run", "integrate the flow"));
    CLI::App* c_audit =
        add_common(app.add_subcommand("audit", "recompute diagnostics"));
    c_audit->add_option("--snapshots", snapshots_path, "snapshots.jsonl to audit")
        ->required();
    CLI::App* c_limit =
        add_common(app.add_subcommand("predict-limit", "print the flow limit"));
    CLI::App* c_fuzz =
        add_common(app.add_subcommand("lemma-fuzz", "randomized identity checks"));
    auto* seed_opt = c_fuzz->add_option("--seed", seed, "fuzz seed");
    auto* trials_opt = c_fuzz->add_option("--trials", trials, "trials per suite");
    CLI::App* c_lin = add_common(
        app.add_subcommand("linearize-audit", "finite-difference Jacobian check"));

    CLI11_PARSE(app, argc, argv);

    try {
        const hsflow::RunSetup setup =
            load_setup(config_path, preset, out_dir, seed, seed_opt->count() > 0,
                       trials, trials_opt->count() > 0);
        if (c_run->parsed()) return hsflow::cmd_run(setup);
        if (c_audit->parsed()) return hsflow::cmd_audit(setup, snapshots_path);
        if (c_limit->parsed()) return hsflow::cmd_predict_limit(setup);
        if (c_fuzz->parsed()) return hsflow::cmd_lemma_fuzz(setup);
        if (c_lin->parsed()) return hsflow::cmd_linearize_audit(setup);
    } catch (const hsflow::ConfigError& e) {
        std::cerr << "config error (line " << e.line << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
