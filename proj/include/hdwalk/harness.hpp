#pragma once

// Experiment orchestration: configs, regime dispatch, replicate execution on a
// worker pool, aggregation and report emission.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdwalk/models.hpp"
#include "hdwalk/stats.hpp"

namespace hdwalk {

enum class ExperimentKind {
    CltModel1,
    CltModel2,
    CltModel3,
    StableModel1,
    StableModel2,
    StableModel3,
    PoissonSimpleRw,
    Fwlln,
    DistortionLadder,
    SpiralCheck,
    AlignCheck,
    BrownianInstance,
    CriticalConjectureProbe,
    Simulate,
    Conditions,
};

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

struct LadderRung {
    std::size_t n = 0;
    std::size_t d = 1;
    bool operator==(const LadderRung&) const = default;
};

std::vector<LadderRung> parse_ladder(const std::string& text);
std::string format_ladder(const std::vector<LadderRung>& ladder);

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Simulate;
    std::string model;  // iid | rotinv | axis; empty = experiment default
    std::string law;    // rademacher | gaussian | constant | twopoint:a | pareto:alpha | sign
    double alpha = 1.5;
    std::size_t n = 0;
    std::size_t d = 1;
    std::vector<LadderRung> ladder;
    std::optional<double> gamma;
    std::optional<double> c;
    std::size_t replicates = 1;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::size_t grid = 64;
    std::string output;
    OutputFormat format = OutputFormat::Csv;
    std::optional<double> ks_allowance;  // added to the null KS critical value
    std::optional<double> fixture;       // top-rung bound for ladder experiments
    std::size_t terms = 10000;           // spiral truncation

    /// key = value, keys as the CLI flags without dashes. ConfigError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    void validate() const;
};

/// Flat "key = value" document; '#' starts a comment.
ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

/// The walk model named by (model, law, alpha), with experiment-specific defaults.
ModelSpec resolve_model(const ExperimentConfig& config);

enum class Regime { Single, A, B, C, Critical };
std::string to_string(Regime regime);

struct RegimeEntry {
    ExperimentKind experiment;
    Regime regime;
    std::string condition;
    std::string normalization;
    std::string limit;
};

/// One entry per part of each limit theorem for ||S_n||^2, plus the critical probe.
const std::vector<RegimeEntry>& regime_table();
const RegimeEntry& regime_entry(ExperimentKind kind, Regime regime);

/// n/d <= 0.05 -> A, n/d >= 20 -> B, otherwise C (for the finite-variance models).
Regime classify_ratio(std::size_t n, std::size_t d);
/// log n / log d against the threshold exponent: below by > 0.1 -> B, above by > 0.1 -> A, else Critical.
Regime classify_stable(ExperimentKind kind, double alpha, std::size_t n, std::size_t d);
/// c = n / sqrt d: < 0.05 -> A, > 20 -> C, else B.
Regime classify_simple_walk(std::size_t n, std::size_t d);

/// Threshold exponent e with critical n ~ d^e for the stable experiments.
double stable_threshold_exponent(ExperimentKind kind, double alpha);

inline constexpr double kRatioLow = 0.05;
inline constexpr double kRatioHigh = 20.0;
inline constexpr double kStableExponentMargin = 0.1;
inline constexpr double kGammaTolerance = 0.1;

struct NamedSummary {
    std::string name;
    MomentSummary summary;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::string stream_scheme;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    bool rows_elided = false;
    std::size_t row_count = 0;
    std::vector<NamedSummary> aggregates;
    std::vector<std::pair<std::string, double>> scalars;
    std::vector<TestVerdict> verdicts;
    std::string histogram_of;
    Histogram histogram;
    std::vector<std::pair<double, double>> qq;

    // Excluded from the content comparison.
    std::size_t threads = 1;
    double wall_clock_seconds = 0.0;

    bool all_pass() const;
    double scalar(const std::string& name) const;
    const TestVerdict* verdict(const std::string& name) const;
};

inline constexpr double kRowElisionBytes = 1e8;

Report run_experiment(const ExperimentConfig& config);

/// Serialized report. With include_runtime = false the threads and wall-clock
/// fields are left out, so equal configs give identical strings.
std::string render_report(const Report& report, OutputFormat format, bool include_runtime = true);

/// Writes render_report to `path`; IoError names the path on failure.
void emit_report(const Report& report, OutputFormat format, const std::string& path);

}  // namespace hdwalk
