// Command-line front end: one subcommand per experiment family.

#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "hdwalk/errors.hpp"
#include "hdwalk/harness.hpp"

using hdwalk::ExperimentKind;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitVerdict = 3;

ExperimentKind by_model(const std::string& model, ExperimentKind m1, ExperimentKind m2, ExperimentKind m3) {
    if (model.empty() || model == "iid") return m1;
    if (model == "rotinv") return m2;
    if (model == "axis") return m3;
    throw hdwalk::ConfigError("--model must be iid, rotinv or axis");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-dimensional random walk laboratory"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    std::map<std::string, std::string> flags;
    const std::pair<const char*, const char*> keys[] = {
        {"model", "iid | rotinv | axis"},
        {"law", "rademacher | gaussian | constant | twopoint:a | pareto:alpha | sign"},
        {"n", "number of steps"},
        {"d", "dimension"},
        {"ladder", "n1xd1,n2xd2,... for ladder experiments"},
        {"gamma", "target n/d in the proportional regime"},
        {"c", "target n/sqrt(d) for the simple walk"},
        {"alpha", "tail index for pareto laws given without one"},
        {"reps", "replicates"},
        {"seed", "master seed"},
        {"threads", "worker threads; results do not depend on it"},
        {"grid", "snapshot grid size"},
        {"out", "output file (default stdout)"},
        {"format", "csv | json"},
        {"ks-allowance", "override the calibrated KS bias allowance"},
        {"fixture", "override the calibrated top-rung bound"},
        {"terms", "spiral truncation terms"},
    };
    for (const auto& [key, help] : keys) {
        app.add_option_function<std::string>(
            std::string("--") + key, [&flags, key = key](const std::string& v) { flags[key] = v; }, help);
    }
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value file; flags override it");

    const std::map<std::string, std::string> subcommands = {
        {"simulate", "final squared-norm statistics of independent walks"},
        {"clt", "finite-variance limit theorems for ||S_n||^2"},
        {"stable", "heavy-tailed limit theorems for ||S_n||^2"},
        {"poisson", "simple symmetric walk on Z^d"},
        {"fwlln", "uniform law of large numbers for ||S_k||^2 along a ladder"},
        {"distortion", "distortion bound to the Wiener spiral along a ladder"},
        {"spiral", "truncation sweep of the spiral embedding"},
        {"align", "Gram-aligned Hausdorff bound to the spiral along a ladder"},
        {"brownian", "distortion of scaled d-dimensional Brownian motion"},
        {"probe-conjecture", "critical heavy-tailed regime against the conjectured convolution"},
        {"check-conditions", "empirical check of the increment conditions"},
    };
    for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        hdwalk::ExperimentConfig config;
        if (!config_path.empty()) config = hdwalk::load_config_file(config_path);
        for (const auto& [key, value] : flags) {
            std::string k = key;
            for (char& ch : k)
                if (ch == '-') ch = '_';
            config.set(k, value);
        }

        if (!app.get_subcommands().empty()) {
            const std::string sub = app.get_subcommands().front()->get_name();
            using K = ExperimentKind;
            if (sub == "simulate") config.experiment = K::Simulate;
            else if (sub == "clt") config.experiment = by_model(config.model, K::CltModel1, K::CltModel2, K::CltModel3);
            else if (sub == "stable")
                config.experiment = by_model(config.model, K::StableModel1, K::StableModel2, K::StableModel3);
            else if (sub == "poisson") config.experiment = K::PoissonSimpleRw;
            else if (sub == "fwlln") config.experiment = K::Fwlln;
            else if (sub == "distortion") config.experiment = K::DistortionLadder;
            else if (sub == "spiral") config.experiment = K::SpiralCheck;
            else if (sub == "align") config.experiment = K::AlignCheck;
            else if (sub == "brownian") config.experiment = K::BrownianInstance;
            else if (sub == "probe-conjecture") config.experiment = K::CriticalConjectureProbe;
            else if (sub == "check-conditions") config.experiment = K::Conditions;
        } else if (config_path.empty()) {
            std::cerr << app.help();
            return kExitConfig;
        }

        const hdwalk::Report report = hdwalk::run_experiment(config);
        if (config.output.empty()) {
            std::cout << hdwalk::render_report(report, config.format);
        } else {
            hdwalk::emit_report(report, config.format, config.output);
        }
        for (const auto& v : report.verdicts) {
            std::fprintf(stderr, "%s %s: statistic %.6g, threshold %.6g (N = %zu)\n", v.pass ? "PASS" : "FAIL",
                         v.name.c_str(), v.statistic, v.threshold, v.sample_size);
        }
        return report.all_pass() ? 0 : kExitVerdict;
    } catch (const hdwalk::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
