#include "hdwalk/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "hdwalk/calibration.hpp"
#include "hdwalk/errors.hpp"
#include "hdwalk/geometry.hpp"
#include "hdwalk/walk.hpp"

namespace hdwalk {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& experiment_names() {
    static const std::vector<std::pair<ExperimentKind, std::string>> names = {
        {ExperimentKind::CltModel1, "clt_model1"},
        {ExperimentKind::CltModel2, "clt_model2"},
        {ExperimentKind::CltModel3, "clt_model3"},
        {ExperimentKind::StableModel1, "stable_model1"},
        {ExperimentKind::StableModel2, "stable_model2"},
        {ExperimentKind::StableModel3, "stable_model3"},
        {ExperimentKind::PoissonSimpleRw, "poisson_simple_rw"},
        {ExperimentKind::Fwlln, "fwlln"},
        {ExperimentKind::DistortionLadder, "distortion_ladder"},
        {ExperimentKind::SpiralCheck, "spiral_check"},
        {ExperimentKind::AlignCheck, "align_check"},
        {ExperimentKind::BrownianInstance, "brownian_instance"},
        {ExperimentKind::CriticalConjectureProbe, "critical_conjecture_probe"},
        {ExperimentKind::Simulate, "simulate"},
        {ExperimentKind::Conditions, "conditions"},
    };
    return names;
}

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double x = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(x)) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a finite number, got '" + value + "'");
    }
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    try {
        if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
        std::size_t used = 0;
        const auto x = std::stoull(value, &used, 0);
        if (used != value.size()) throw std::invalid_argument(value);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a non-negative integer, got '" + value + "'");
    }
}

bool is_clt(ExperimentKind k) {
    return k == ExperimentKind::CltModel1 || k == ExperimentKind::CltModel2 || k == ExperimentKind::CltModel3;
}

bool is_stable(ExperimentKind k) {
    return k == ExperimentKind::StableModel1 || k == ExperimentKind::StableModel2 ||
           k == ExperimentKind::StableModel3;
}

bool is_ladder(ExperimentKind k) {
    return k == ExperimentKind::Fwlln || k == ExperimentKind::DistortionLadder || k == ExperimentKind::AlignCheck ||
           k == ExperimentKind::BrownianInstance;
}

// Runs body(i) for i in [0, count) on `threads` workers. The exception of the
// lowest failing index is rethrown so failures do not depend on scheduling.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    threads = std::max<std::size_t>(1, std::min(threads, count));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string rung_tag(const LadderRung& r) { return std::to_string(r.n) + "x" + std::to_string(r.d); }

struct RowTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::vector<double> column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) throw Error("report: no column " + name);
        const auto k = static_cast<std::size_t>(it - columns.begin());
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[k]);
        return out;
    }
};

void add_aggregate(Report& report, const std::string& name, const std::vector<double>& values) {
    if (values.size() >= 2) report.aggregates.push_back({name, moment_summary(values)});
}

void attach_plot_data(Report& report, const std::string& name, std::vector<double> values, const QuantileFn& quantile) {
    std::sort(values.begin(), values.end());
    if (values.empty()) return;
    report.histogram_of = name;
    report.histogram = make_histogram(values);
    if (quantile) report.qq = qq_pairs(values, quantile);
}

double ks_threshold(const ExperimentConfig& config, Regime regime, std::size_t n) {
    const double allowance = config.ks_allowance.value_or(calibration::ks_allowance(config.experiment, regime));
    return ks_critical_value(n, kVerdictConfidence) + allowance;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    for (const auto& [k, name] : experiment_names())
        if (k == kind) return name;
    return "unknown";
}

ExperimentKind parse_experiment(const std::string& name) {
    for (const auto& [k, n] : experiment_names())
        if (n == name) return k;
    throw ConfigError("config: unknown experiment '" + name + "'");
}

std::vector<LadderRung> parse_ladder(const std::string& text) {
    std::vector<LadderRung> ladder;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto x = item.find('x');
        if (x == std::string::npos) throw ConfigError("config: ladder entry '" + item + "' is not of the form NxD");
        LadderRung r;
        r.n = parse_unsigned("ladder", trim(item.substr(0, x)));
        r.d = parse_unsigned("ladder", trim(item.substr(x + 1)));
        if (r.d == 0) throw ConfigError("config: ladder entry '" + item + "' has d = 0");
        ladder.push_back(r);
    }
    return ladder;
}

std::string format_ladder(const std::vector<LadderRung>& ladder) {
    std::string out;
    for (const auto& r : ladder) {
        if (!out.empty()) out += ",";
        out += rung_tag(r);
    }
    return out;
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "experiment") experiment = parse_experiment(value);
    else if (key == "model") {
        if (value != "iid" && value != "rotinv" && value != "axis")
            throw ConfigError("config: model must be iid, rotinv or axis, got '" + value + "'");
        model = value;
    } else if (key == "law") law = value;
    else if (key == "alpha") alpha = parse_double(key, value);
    else if (key == "n") n = parse_unsigned(key, value);
    else if (key == "d") d = parse_unsigned(key, value);
    else if (key == "ladder") ladder = parse_ladder(value);
    else if (key == "gamma") gamma = parse_double(key, value);
    else if (key == "c") c = parse_double(key, value);
    else if (key == "reps" || key == "replicates") replicates = parse_unsigned(key, value);
    else if (key == "seed") seed = parse_unsigned(key, value);
    else if (key == "threads") threads = parse_unsigned(key, value);
    else if (key == "grid") grid = parse_unsigned(key, value);
    else if (key == "out" || key == "output") output = value;
    else if (key == "format") {
        if (value == "csv") format = OutputFormat::Csv;
        else if (value == "json") format = OutputFormat::Json;
        else throw ConfigError("config: format must be csv or json, got '" + value + "'");
    } else if (key == "ks_allowance") ks_allowance = parse_double(key, value);
    else if (key == "fixture") fixture = parse_double(key, value);
    else if (key == "terms") terms = parse_unsigned(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::validate() const {
    if (d == 0) throw ConfigError("config: d must be at least 1");
    if (replicates == 0) throw ConfigError("config: reps must be at least 1");
    if (threads == 0) throw ConfigError("config: threads must be at least 1");
    if (grid == 0) throw ConfigError("config: grid must be at least 1");
    if (terms == 0) throw ConfigError("config: terms must be at least 1");
    if (gamma && !(*gamma > 0.0)) throw ConfigError("config: gamma must be positive");
    if (c && !(*c > 0.0)) throw ConfigError("config: c must be positive");
    if (ks_allowance && *ks_allowance < 0.0) throw ConfigError("config: ks_allowance must be non-negative");
    for (const auto& r : ladder)
        if (r.d == 0) throw ConfigError("config: ladder dimensions must be at least 1");
}

ExperimentConfig parse_config_text(const std::string& text, ExperimentConfig base) {
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), std::move(base));
}

ModelSpec resolve_model(const ExperimentConfig& config) {
    std::string model = config.model;
    std::string law = config.law;
    switch (config.experiment) {
        case ExperimentKind::CltModel1:
        case ExperimentKind::StableModel1:
            if (!model.empty() && model != "iid") throw ConfigError("config: " + to_string(config.experiment) + " needs model iid");
            model = "iid";
            break;
        case ExperimentKind::CltModel2:
        case ExperimentKind::StableModel2:
        case ExperimentKind::CriticalConjectureProbe:
            if (!model.empty() && model != "rotinv")
                throw ConfigError("config: " + to_string(config.experiment) + " needs model rotinv");
            model = "rotinv";
            break;
        case ExperimentKind::CltModel3:
        case ExperimentKind::StableModel3:
        case ExperimentKind::PoissonSimpleRw:
            if (!model.empty() && model != "axis") throw ConfigError("config: " + to_string(config.experiment) + " needs model axis");
            model = "axis";
            break;
        default:
            if (model.empty()) model = "iid";
    }
    if (config.experiment == ExperimentKind::PoissonSimpleRw) {
        if (!law.empty() && law != "sign") throw ConfigError("config: poisson_simple_rw needs law sign");
        law = "sign";
    }
    if (is_stable(config.experiment) || config.experiment == ExperimentKind::CriticalConjectureProbe) {
        if (law.empty()) law = "pareto";
        if (law.rfind("pareto", 0) != 0) throw ConfigError("config: stable experiments need a pareto law");
    }
    if (law.empty()) law = model == "iid" ? "rademacher" : "twopoint:0.5";

    std::string name = law;
    std::optional<double> param;
    if (const auto colon = law.find(':'); colon != std::string::npos) {
        name = law.substr(0, colon);
        param = parse_double("law", law.substr(colon + 1));
    }
    try {
        if (model == "iid") {
            if (name == "rademacher") return ModelSpec::iid(ComponentLaw::rademacher());
            if (name == "gaussian") return ModelSpec::iid(ComponentLaw::gaussian());
            if (name == "pareto") return ModelSpec::iid(ComponentLaw::symmetric_pareto_squared(param.value_or(config.alpha)));
            throw ConfigError("config: law '" + law + "' is not available for iid components");
        }
        RadialLaw radial;
        if (name == "constant") radial = RadialLaw::constant();
        else if (name == "twopoint") radial = RadialLaw::two_point(param.value_or(0.5));
        else if (name == "pareto") radial = RadialLaw::pareto_squared(param.value_or(config.alpha));
        else if (name == "sign") radial = RadialLaw::symmetric_sign();
        else throw ConfigError("config: law '" + law + "' is not available for model " + model);
        return model == "rotinv" ? ModelSpec::rot_invariant(radial) : ModelSpec::axis_jumps(radial);
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

std::string to_string(Regime regime) {
    switch (regime) {
        case Regime::Single: return "single";
        case Regime::A: return "a";
        case Regime::B: return "b";
        case Regime::C: return "c";
        case Regime::Critical: return "critical";
    }
    return "?";
}

const std::vector<RegimeEntry>& regime_table() {
    using K = ExperimentKind;
    using R = Regime;
    static const std::vector<RegimeEntry> table = {
        {K::CltModel1, R::Single, "E xi^4 < inf", "sqrt(2n^2/d)", "N(0,1)"},
        {K::StableModel1, R::A, "n > d^((2-alpha)/(2alpha-2)+delta)", "sqrt(2n^2/d)", "N(0,1)"},
        {K::StableModel1, R::B, "n < d^((2-alpha)/(2alpha-2)-delta)", "d^-1 (nd)^(1/alpha) sigma(alpha)", "zeta_alpha"},
        {K::CltModel2, R::A, "n/d -> 0, R random", "sqrt(n)", "N(0,Var R^2)"},
        {K::CltModel2, R::B, "n/d -> inf or R deterministic", "sqrt(2n^2/d)", "N(0,1)"},
        {K::CltModel2, R::C, "n ~ gamma d", "sqrt(n)", "N(0,2gamma+Var R^2)"},
        {K::StableModel2, R::A, "n > d^(alpha/(2alpha-2)+delta)", "sqrt(2n^2/d)", "N(0,1)"},
        {K::StableModel2, R::B, "n < d^(alpha/(2alpha-2)-delta)", "n^(1/alpha) sigma(alpha)", "zeta_alpha"},
        {K::CltModel3, R::A, "n/d -> 0", "sqrt(n)", "N(0,Var R^2)"},
        {K::CltModel3, R::B, "n/d -> inf", "sqrt(2n^2/d)", "N(0,1)"},
        {K::CltModel3, R::C, "n ~ gamma d", "sqrt(n)", "N(0,2gamma+Var R^2)"},
        {K::StableModel3, R::A, "n > d^(alpha/(2alpha-2)+delta)", "sqrt(2n^2/d)", "N(0,1)"},
        {K::StableModel3, R::B, "n < d^(alpha/(2alpha-2)-delta)", "n^(1/alpha) sigma(alpha)", "zeta_alpha"},
        {K::PoissonSimpleRw, R::A, "n = o(sqrt d)", "none", "P(||S||^2 = n) -> 1"},
        {K::PoissonSimpleRw, R::B, "n ~ c sqrt d", "none", "3P' - P'', P',P'' ~ Poi(c^2/4)"},
        {K::PoissonSimpleRw, R::C, "n / sqrt d -> inf", "sqrt(2n^2/d)", "N(0,1)"},
        {K::CriticalConjectureProbe, R::Critical, "sqrt(2n^2/d) ~ gamma n^(1/alpha) sigma(alpha)", "sqrt(2n^2/d)",
         "N(0,1) + zeta_alpha / gamma (conjectured)"},
    };
    return table;
}

const RegimeEntry& regime_entry(ExperimentKind kind, Regime regime) {
    for (const auto& e : regime_table())
        if (e.experiment == kind && e.regime == regime) return e;
    throw ConfigError("config: " + to_string(kind) + " has no limit theorem for regime " + to_string(regime));
}

Regime classify_ratio(std::size_t n, std::size_t d) {
    const double r = static_cast<double>(n) / static_cast<double>(d);
    if (r <= kRatioLow) return Regime::A;
    if (r >= kRatioHigh) return Regime::B;
    return Regime::C;
}

double stable_threshold_exponent(ExperimentKind kind, double alpha) {
    if (kind == ExperimentKind::StableModel1) return (2.0 - alpha) / (2.0 * alpha - 2.0);
    return alpha / (2.0 * alpha - 2.0);
}

Regime classify_stable(ExperimentKind kind, double alpha, std::size_t n, std::size_t d) {
    if (d < 2 || n < 1) return Regime::Critical;
    const double e = std::log(static_cast<double>(n)) / std::log(static_cast<double>(d));
    const double thr = stable_threshold_exponent(kind, alpha);
    if (e > thr + kStableExponentMargin) return Regime::A;
    if (e < thr - kStableExponentMargin) return Regime::B;
    return Regime::Critical;
}

Regime classify_simple_walk(std::size_t n, std::size_t d) {
    const double c = static_cast<double>(n) / std::sqrt(static_cast<double>(d));
    if (c < kRatioLow) return Regime::A;
    if (c > kRatioHigh) return Regime::C;
    return Regime::B;
}

bool Report::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const TestVerdict& v) { return v.pass; });
}

double Report::scalar(const std::string& name) const {
    for (const auto& [k, v] : scalars)
        if (k == name) return v;
    throw Error("report: no scalar " + name);
}

const TestVerdict* Report::verdict(const std::string& name) const {
    for (const auto& v : verdicts)
        if (v.name == name) return &v;
    return nullptr;
}

namespace {

struct Context {
    const ExperimentConfig& config;
    Report& report;
};

std::uint64_t stream_index(std::size_t rung, std::size_t rep, std::size_t reps) {
    return static_cast<std::uint64_t>(rung) * reps + rep;
}

// ---------------------------------------------------------------------------
// Squared-norm experiments: one walk per replicate, final statistics only.

RowTable simulate_final(const ExperimentConfig& config, const ModelSpec& model) {
    const bool sparse = model.sparse();
    RowTable table;
    table.columns = {"replicate", "norm_sq", "t", "q", "cond_var", "sup_dev", "max_step", "clt_stat", "t_stat", "q_stat"};
    if (sparse) table.columns.insert(table.columns.end(), {"mu1", "mu2", "mu_ge3"});
    table.rows.assign(config.replicates, {});

    DiagonalNormalization norm;
    if (model.heavy_tailed()) {
        norm.kind = model.kind == ModelKind::IidComponents ? DiagonalScale::StableComponents : DiagonalScale::StableRadial;
        norm.alpha = model.tail_index();
    }
    WalkOptions options;
    options.keep_snapshots = false;
    options.keep_traces = false;

    parallel_for(config.replicates, config.threads, [&](std::size_t rep) {
        RandomStream stream = derive_stream({config.seed, stream_index(0, rep, config.replicates)});
        const WalkResult res = run_walk(model, config.n, config.d, options, stream);
        const WalkSummary& s = res.summary;
        NormalizedStats z;
        if (config.n >= 2) z = normalized_statistics(s, config.n, config.d, norm);
        std::vector<double> row = {static_cast<double>(rep), s.norm_sq_final, s.t_final, s.q_final,
                                   s.conditional_variance, s.sup_deviation, s.max_step_norm, z.clt_stat,
                                   z.t_stat, z.q_stat};
        if (sparse) {
            const OccupancyStats occ = s.occupancy.value_or(OccupancyStats{});
            row.insert(row.end(), {static_cast<double>(occ.mu1), static_cast<double>(occ.mu2),
                                   static_cast<double>(occ.mu_ge3)});
        }
        table.rows[rep] = std::move(row);
    });
    return table;
}

void aggregate_columns(Report& report, const RowTable& table, const std::vector<std::string>& skip) {
    for (const auto& col : table.columns) {
        if (std::find(skip.begin(), skip.end(), col) != skip.end()) continue;
        add_aggregate(report, col, table.column(col));
    }
}

void store_rows(Report& report, RowTable table) {
    report.columns = std::move(table.columns);
    report.row_count = table.rows.size();
    const double bytes = static_cast<double>(report.row_count) * static_cast<double>(report.columns.size()) * 24.0;
    if (bytes > kRowElisionBytes) {
        report.rows_elided = true;
    } else {
        report.rows = std::move(table.rows);
    }
}

std::vector<double> centred_over_sqrt_n(const RowTable& table, std::size_t n) {
    std::vector<double> v = table.column("norm_sq");
    const double nn = static_cast<double>(n);
    for (double& x : v) x = (x - nn) / std::sqrt(nn);
    return v;
}

void normal_verdict(Context& ctx, Regime regime, std::vector<double> stat, double variance, const std::string& stat_name) {
    const double sd = std::sqrt(variance);
    std::sort(stat.begin(), stat.end());
    const double ks = ks_one_sample(stat, [sd](double x) { return normal_cdf(x / sd); });
    ctx.report.scalars.emplace_back("limit_variance", variance);
    ctx.report.verdicts.push_back(make_verdict("ks_normal", ks, ks_threshold(ctx.config, regime, stat.size()), stat.size()));
    attach_plot_data(ctx.report, stat_name, std::move(stat), [sd](double p) { return sd * normal_quantile(p); });
}

void run_clt(Context& ctx, const ModelSpec& model) {
    const auto& cfg = ctx.config;
    if (model.heavy_tailed())
        throw ConfigError("config: " + to_string(cfg.experiment) + " needs E R^4 < inf; use the stable experiments for pareto laws");
    const ExperimentKind kind = cfg.experiment;

    Regime regime = Regime::Single;
    if (kind != ExperimentKind::CltModel1) {
        regime = classify_ratio(cfg.n, cfg.d);
        if (cfg.gamma) {
            const double ratio = static_cast<double>(cfg.n) / static_cast<double>(cfg.d);
            if (std::abs(ratio - *cfg.gamma) > kGammaTolerance * *cfg.gamma)
                throw ConfigError("config: gamma = " + format_number(*cfg.gamma) + " but n/d = " + format_number(ratio));
            regime = Regime::C;
        }
        if (kind == ExperimentKind::CltModel2 && model.radial.deterministic_square()) regime = Regime::B;
        if (kind == ExperimentKind::CltModel3 && model.radial.deterministic_square() && regime == Regime::A)
            throw ConfigError("config: clt_model3 with deterministic |R| and n/d -> 0 has a degenerate limit; use poisson_simple_rw");
    }
    const RegimeEntry& entry = regime_entry(kind, regime);
    ctx.report.config_echo.emplace_back("regime", to_string(regime));
    ctx.report.config_echo.emplace_back("limit", entry.limit);

    RowTable table = simulate_final(cfg, model);
    aggregate_columns(ctx.report, table, {"replicate"});

    if (cfg.n >= 2 && cfg.replicates >= 2) {
        const double var_r2 = model.kind == ModelKind::IidComponents ? 0.0 : model.radial.variance_of_square();
        const double gamma = cfg.gamma.value_or(static_cast<double>(cfg.n) / static_cast<double>(cfg.d));
        switch (regime) {
            case Regime::Single:
            case Regime::B:
                normal_verdict(ctx, regime, table.column("clt_stat"), 1.0, "clt_stat");
                break;
            case Regime::A:
                normal_verdict(ctx, regime, centred_over_sqrt_n(table, cfg.n), var_r2, "centred_over_sqrt_n");
                break;
            case Regime::C:
                ctx.report.scalars.emplace_back("gamma", gamma);
                normal_verdict(ctx, regime, centred_over_sqrt_n(table, cfg.n), 2.0 * gamma + var_r2, "centred_over_sqrt_n");
                break;
            case Regime::Critical:
                break;
        }
    }
    store_rows(ctx.report, std::move(table));
}

void run_stable(Context& ctx, const ModelSpec& model) {
    const auto& cfg = ctx.config;
    if (!model.heavy_tailed()) throw ConfigError("config: stable experiments need a pareto law");
    const double alpha = model.tail_index();
    const Regime regime = classify_stable(cfg.experiment, alpha, cfg.n, cfg.d);
    ctx.report.config_echo.emplace_back("regime", to_string(regime));
    ctx.report.scalars.emplace_back("threshold_exponent", stable_threshold_exponent(cfg.experiment, alpha));
    ctx.report.scalars.emplace_back("sigma_alpha", stable_scale_for_pareto(alpha));
    if (regime != Regime::Critical) ctx.report.config_echo.emplace_back("limit", regime_entry(cfg.experiment, regime).limit);

    RowTable table = simulate_final(cfg, model);
    aggregate_columns(ctx.report, table, {"replicate"});

    if (cfg.n >= 2 && cfg.replicates >= 2) {
        if (regime == Regime::A) {
            normal_verdict(ctx, regime, table.column("clt_stat"), 1.0, "clt_stat");
        } else if (regime == Regime::B) {
            const StableLawRef ref{alpha, 1.0};
            const std::vector<double> reference = stable_reference_sample(ref, kStableReferenceSize, cfg.seed);
            // (||S||^2 - n) / tau with the stable diagonal scale tau.
            std::vector<double> stat = table.column("norm_sq");
            const DiagonalNormalization norm{model.kind == ModelKind::IidComponents ? DiagonalScale::StableComponents
                                                                                     : DiagonalScale::StableRadial,
                                             alpha};
            const double tau = diagonal_scale(norm, cfg.n, cfg.d);
            for (double& x : stat) x = (x - static_cast<double>(cfg.n)) / tau;
            std::sort(stat.begin(), stat.end());
            const double ks = ks_two_sample(stat, reference);
            ctx.report.scalars.emplace_back("diagonal_scale", tau);
            ctx.report.scalars.emplace_back("off_diagonal_over_diagonal", off_diagonal_scale(cfg.n, cfg.d) / tau);
            ctx.report.scalars.emplace_back("ks_null_critical", ks_two_sample_critical_value(stat.size(), reference.size()));
            ctx.report.verdicts.push_back(make_verdict("ks_stable", ks, calibration::kStableKsThreshold, stat.size()));
            attach_plot_data(ctx.report, "stable_stat", std::move(stat),
                             [&reference](double p) { return sample_quantile(reference, p); });
        }
    }
    store_rows(ctx.report, std::move(table));
}

void run_poisson(Context& ctx, const ModelSpec& model) {
    const auto& cfg = ctx.config;
    const double c_eff = static_cast<double>(cfg.n) / std::sqrt(static_cast<double>(cfg.d));
    if (cfg.c && std::abs(c_eff - *cfg.c) > kGammaTolerance * *cfg.c)
        throw ConfigError("config: poisson_simple_rw needs n ~ c sqrt(d); c = " + format_number(*cfg.c) +
                          " but n / sqrt(d) = " + format_number(c_eff));
    const Regime regime = cfg.c ? Regime::B : classify_simple_walk(cfg.n, cfg.d);
    const double c = cfg.c.value_or(c_eff);
    ctx.report.config_echo.emplace_back("regime", to_string(regime));
    ctx.report.config_echo.emplace_back("limit", regime_entry(cfg.experiment, regime).limit);
    ctx.report.scalars.emplace_back("c_effective", c_eff);

    RowTable table = simulate_final(cfg, model);
    aggregate_columns(ctx.report, table, {"replicate"});
    const std::vector<double> norm_sq = table.column("norm_sq");
    std::vector<long long> excess(norm_sq.size());
    for (std::size_t i = 0; i < norm_sq.size(); ++i)
        excess[i] = std::llround(norm_sq[i]) - static_cast<long long>(cfg.n);

    if (cfg.replicates >= 2) {
        if (regime == Regime::A) {
            const auto hits = std::count(excess.begin(), excess.end(), 0LL);
            const double frac = static_cast<double>(hits) / static_cast<double>(excess.size());
            ctx.report.scalars.emplace_back("return_fraction", frac);
            ctx.report.verdicts.push_back(
                make_verdict("miss_fraction", 1.0 - frac, 1.0 - calibration::kReturnFraction, excess.size()));
        } else if (regime == Regime::B) {
            const PoissonDiffTable pmf = poisson_diff_pmf(c);
            const double tv = total_variation(excess, pmf);
            ctx.report.verdicts.push_back(make_verdict("tv_poisson_diff", tv, calibration::kPoissonTvThreshold, excess.size()));
            // No verdict: the same distance to the law obtained by counting
            // boxes with two steps directly, for comparison.
            ctx.report.scalars.emplace_back("tv_balanced_poisson_diff", total_variation(excess, balanced_poisson_diff_pmf(c)));
            // mu_2 against Poisson(c^2 / 2).
            const std::vector<double> mu2 = table.column("mu2");
            const double lambda = c * c / 2.0;
            std::map<long long, double> counts;
            for (double m : mu2) counts[std::llround(m)] += 1.0 / static_cast<double>(mu2.size());
            double tv2 = 0.0, covered = 0.0;
            const long long top = std::max<long long>(counts.empty() ? 0 : counts.rbegin()->first, 10 + 10 * static_cast<long long>(lambda));
            for (long long k = 0; k <= top; ++k) {
                const double p = std::exp(-lambda + static_cast<double>(k) * std::log(lambda) - std::lgamma(k + 1.0));
                covered += p;
                tv2 += std::abs((counts.count(k) ? counts[k] : 0.0) - p);
            }
            ctx.report.scalars.emplace_back("tv_mu2_poisson", 0.5 * (tv2 + std::max(0.0, 1.0 - covered)));
            std::vector<double> ex(excess.begin(), excess.end());
            attach_plot_data(ctx.report, "norm_sq_minus_n", std::move(ex), {});
        } else if (cfg.n >= 2) {
            normal_verdict(ctx, regime, table.column("clt_stat"), 1.0, "clt_stat");
        }
    }
    store_rows(ctx.report, std::move(table));
}

void run_simulate(Context& ctx, const ModelSpec& model) {
    RowTable table = simulate_final(ctx.config, model);
    aggregate_columns(ctx.report, table, {"replicate"});
    if (ctx.config.replicates >= 1) attach_plot_data(ctx.report, "norm_sq", table.column("norm_sq"), {});
    store_rows(ctx.report, std::move(table));
}

void run_probe(Context& ctx, const ModelSpec& model) {
    const auto& cfg = ctx.config;
    if (!model.heavy_tailed()) throw ConfigError("config: critical_conjecture_probe needs a pareto law");
    const double alpha = model.tail_index();
    const Regime regime = classify_stable(ExperimentKind::StableModel2, alpha, cfg.n, cfg.d);
    if (regime != Regime::Critical)
        throw ConfigError("config: critical_conjecture_probe needs log n / log d within " +
                          format_number(kStableExponentMargin) + " of alpha/(2alpha-2) = " +
                          format_number(stable_threshold_exponent(ExperimentKind::StableModel2, alpha)));
    if (cfg.n < 2) throw ConfigError("config: critical_conjecture_probe needs n >= 2");
    ctx.report.config_echo.emplace_back("regime", to_string(regime));
    ctx.report.config_echo.emplace_back("limit", regime_entry(cfg.experiment, Regime::Critical).limit);

    const double sigma = stable_scale_for_pareto(alpha);
    const double gamma = off_diagonal_scale(cfg.n, cfg.d) / (std::pow(static_cast<double>(cfg.n), 1.0 / alpha) * sigma);
    ctx.report.scalars.emplace_back("gamma", gamma);

    RowTable table = simulate_final(cfg, model);
    aggregate_columns(ctx.report, table, {"replicate"});
    std::vector<double> stat = table.column("clt_stat");
    std::sort(stat.begin(), stat.end());

    RandomStream aux = derive_stream({cfg.seed, kAuxiliaryStreamBase + 1});
    std::vector<double> conv(kStableReferenceSize);
    const StableLawRef ref{alpha, 1.0};
    for (double& x : conv) x = aux.gaussian() + sample_stable(ref, aux) / gamma;
    std::sort(conv.begin(), conv.end());

    if (!stat.empty()) {
        ctx.report.scalars.emplace_back("ks_vs_convolution", ks_two_sample(stat, conv));
        ctx.report.scalars.emplace_back("ks_vs_normal", ks_one_sample(stat, normal_cdf));
        attach_plot_data(ctx.report, "clt_stat", stat, [&conv](double p) { return sample_quantile(conv, p); });
    }
    store_rows(ctx.report, std::move(table));
}

// ---------------------------------------------------------------------------
// Ladder experiments.

std::vector<LadderRung> effective_ladder(const ExperimentConfig& cfg) {
    if (!cfg.ladder.empty()) return cfg.ladder;
    return {LadderRung{cfg.n, cfg.d}};
}

void ladder_verdicts(Context& ctx, const std::vector<LadderRung>& ladder, const std::vector<double>& medians,
                     const std::string& what, std::optional<double> top_fixture) {
    for (std::size_t r = 0; r < ladder.size(); ++r)
        ctx.report.scalars.emplace_back("median_" + what + "@" + rung_tag(ladder[r]), medians[r]);
    if (ladder.size() >= 2) {
        std::size_t bad = 0;
        for (std::size_t r = 1; r < medians.size(); ++r)
            if (!(medians[r] < medians[r - 1])) ++bad;
        ctx.report.verdicts.push_back(make_verdict("median_" + what + "_decreasing", static_cast<double>(bad), 0.0, ladder.size()));
    }
    if (top_fixture && std::isfinite(*top_fixture))
        ctx.report.verdicts.push_back(make_verdict("median_" + what + "_top_rung", medians.back(), *top_fixture, ctx.config.replicates));
}

void run_ladder(Context& ctx, const ModelSpec& model) {
    const auto& cfg = ctx.config;
    const auto ladder = effective_ladder(cfg);
    const ExperimentKind kind = cfg.experiment;
    const std::size_t reps = cfg.replicates;

    std::string what;
    RowTable table;
    table.columns = {"rung", "n", "d", "replicate"};
    switch (kind) {
        case ExperimentKind::Fwlln: what = "sup_dev"; table.columns.push_back("sup_dev"); break;
        case ExperimentKind::DistortionLadder:
            what = "gh_upper";
            table.columns.insert(table.columns.end(), {"gh_upper", "max_step_over_sqrt_n"});
            break;
        case ExperimentKind::AlignCheck: what = "hausdorff_upper"; table.columns.push_back("hausdorff_upper"); break;
        case ExperimentKind::BrownianInstance: what = "distortion"; table.columns.push_back("distortion"); break;
        default: throw Error("run_ladder: not a ladder experiment");
    }
    if (kind != ExperimentKind::BrownianInstance) {
        for (const auto& r : ladder)
            if ((kind == ExperimentKind::DistortionLadder || kind == ExperimentKind::AlignCheck) && r.n < 1)
                throw ConfigError("config: " + to_string(kind) + " needs n >= 1 on every rung");
    }
    table.rows.assign(ladder.size() * reps, {});

    std::vector<double> medians(ladder.size());
    double top_max_step = 0.0;
    for (std::size_t ri = 0; ri < ladder.size(); ++ri) {
        const LadderRung rung = ladder[ri];
        WalkOptions options;
        options.grid_size = cfg.grid;
        options.keep_traces = false;
        options.keep_snapshots = kind == ExperimentKind::DistortionLadder || kind == ExperimentKind::AlignCheck;

        PointCloud spiral(1);
        if (kind == ExperimentKind::AlignCheck) {
            WalkPath probe;
            probe.n = rung.n;
            probe.grid = snapshot_grid(rung.n, cfg.grid);
            spiral = SpiralRef{cfg.terms, snapshot_times(probe)}.embed();
        }

        parallel_for(reps, cfg.threads, [&](std::size_t rep) {
            RandomStream stream = derive_stream({cfg.seed, stream_index(ri, rep, reps)});
            std::vector<double> row = {static_cast<double>(ri), static_cast<double>(rung.n), static_cast<double>(rung.d),
                                       static_cast<double>(rep)};
            if (kind == ExperimentKind::BrownianInstance) {
                const PointCloud cloud = brownian_cloud(rung.d, cfg.grid, stream);
                row.push_back(spiral_distortion(cloud, uniform_times(cfg.grid)));
            } else {
                const WalkResult res = run_walk(model, rung.n, rung.d, options, stream);
                if (kind == ExperimentKind::Fwlln) {
                    row.push_back(res.summary.sup_deviation);
                } else if (kind == ExperimentKind::DistortionLadder) {
                    row.push_back(2.0 * path_distortion(res.path));
                    row.push_back(res.summary.max_step_norm / std::sqrt(static_cast<double>(rung.n)));
                } else {
                    row.push_back(align_and_hausdorff(*res.path.snapshots, spiral, calibration::kAlignEps).hausdorff_upper);
                }
            }
            table.rows[ri * reps + rep] = std::move(row);
        });

        std::vector<double> values;
        values.reserve(reps);
        for (std::size_t rep = 0; rep < reps; ++rep) values.push_back(table.rows[ri * reps + rep][4]);
        medians[ri] = median(values);
        add_aggregate(ctx.report, what + "@" + rung_tag(rung), values);
        if (kind == ExperimentKind::DistortionLadder && ri + 1 == ladder.size()) {
            for (std::size_t rep = 0; rep < reps; ++rep)
                top_max_step = std::max(top_max_step, table.rows[ri * reps + rep][5]);
        }
        if (ri + 1 == ladder.size()) attach_plot_data(ctx.report, what + "@" + rung_tag(rung), values, {});
    }

    std::optional<double> fixture = cfg.fixture;
    if (!fixture && kind != ExperimentKind::BrownianInstance)
        fixture = calibration::ladder_fixture(kind, model.describe(), ladder.back(), cfg.grid);
    ladder_verdicts(ctx, ladder, medians, what, fixture);

    if (kind == ExperimentKind::DistortionLadder) {
        ctx.report.scalars.emplace_back("max_step_over_sqrt_n@top", top_max_step);
        if (!model.heavy_tailed())
            ctx.report.verdicts.push_back(make_verdict("max_step_over_sqrt_n", top_max_step, calibration::kMaxStepBound, reps));
    }

    if (kind == ExperimentKind::AlignCheck) {
        // Exact-isometry control: permuted, sign-flipped, translated copy of one path.
        const LadderRung rung = ladder.front();
        WalkOptions options;
        options.grid_size = cfg.grid;
        options.keep_traces = false;
        RandomStream stream = derive_stream({cfg.seed, stream_index(0, 0, reps)});
        const WalkResult res = run_walk(model, rung.n, rung.d, options, stream);
        const PointCloud& a = *res.path.snapshots;
        RandomStream aux = derive_stream({cfg.seed, kAuxiliaryStreamBase + 2});
        std::vector<std::size_t> perm(a.dim());
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[aux.below(i)]);
        std::vector<double> flip(a.dim()), shift(a.dim());
        for (std::size_t i = 0; i < a.dim(); ++i) {
            flip[i] = aux.sign();
            shift[i] = aux.gaussian();
        }
        PointCloud b(a.dim());
        std::vector<double> p(a.dim());
        for (std::size_t k = 0; k < a.size(); ++k) {
            const auto src = a.point(k);
            for (std::size_t i = 0; i < a.dim(); ++i) p[i] = flip[i] * src[perm[i]] + shift[i];
            b.add(p);
        }
        const double diam = a.diameter();
        const double h = align_and_hausdorff(a, b, calibration::kAlignEps).hausdorff_upper;
        const double rel = diam > 0.0 ? h / diam : h;
        ctx.report.verdicts.push_back(make_verdict("isometry_control", rel, calibration::kIsometryRelativeBound, a.size()));
    }
    store_rows(ctx.report, std::move(table));
}

void run_spiral(Context& ctx) {
    const auto& cfg = ctx.config;
    RowTable table;
    table.columns = {"terms", "max_defect", "endpoint_defect", "bound"};
    const std::vector<double> times = uniform_times(cfg.grid);
    std::vector<std::size_t> sweep = {100, 1000};
    if (cfg.terms > 1000) sweep.push_back(cfg.terms);
    else sweep = {cfg.terms};
    for (std::size_t k : sweep) {
        const PointCloud cloud = SpiralRef{k, times}.embed();
        double worst = 0.0;
        for (std::size_t j = 0; j < times.size(); ++j)
            for (std::size_t i = 0; i < j; ++i)
                worst = std::max(worst, std::abs(squared_distance(cloud.point(j), cloud.point(i)) - (times[j] - times[i])));
        const VectorD w1 = spiral_embedding(1.0, k);
        const double endpoint = std::abs(squared_norm(std::span<const double>(w1)) - 1.0);
        const double bound = spiral_truncation_bound(k);
        table.rows.push_back({static_cast<double>(k), worst, endpoint, bound});
        ctx.report.verdicts.push_back(make_verdict("truncation@" + std::to_string(k), worst, bound, times.size()));
    }
    store_rows(ctx.report, std::move(table));
}

void run_conditions(Context& ctx, const ModelSpec& model) {
    const auto& cfg = ctx.config;
    RandomStream stream = derive_stream({cfg.seed, 0});
    const ConditionReport rep = check_conditions(model, cfg.d, cfg.replicates, stream);
    RowTable table;
    table.columns = {"check", "statistic", "threshold", "pass"};
    for (std::size_t i = 0; i < rep.checks.size(); ++i) {
        const auto& c = rep.checks[i];
        table.rows.push_back({static_cast<double>(i), c.statistic, c.threshold, c.pass ? 1.0 : 0.0});
        ctx.report.verdicts.push_back({c.name, c.statistic, c.threshold, c.pass, rep.sample_count});
    }
    ctx.report.scalars.emplace_back("norm_sq_mean", rep.norm_sq_mean);
    ctx.report.scalars.emplace_back("max_abs_correlation", rep.max_abs_correlation);
    ctx.report.scalars.emplace_back("tail_mass@10", rep.tail_mass[0]);
    ctx.report.scalars.emplace_back("tail_mass@100", rep.tail_mass[1]);
    ctx.report.scalars.emplace_back("max_second_moment", rep.max_second_moment);
    store_rows(ctx.report, std::move(table));
}

std::vector<std::pair<std::string, std::string>> echo(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, std::string>> e = {
        {"experiment", to_string(c.experiment)},
        {"model", c.model},
        {"law", c.law},
        {"alpha", format_number(c.alpha)},
        {"n", std::to_string(c.n)},
        {"d", std::to_string(c.d)},
        {"ladder", format_ladder(c.ladder)},
        {"gamma", c.gamma ? format_number(*c.gamma) : ""},
        {"c", c.c ? format_number(*c.c) : ""},
        {"reps", std::to_string(c.replicates)},
        {"seed", std::to_string(c.seed)},
        {"grid", std::to_string(c.grid)},
        {"terms", std::to_string(c.terms)},
        {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
        {"ks_allowance", c.ks_allowance ? format_number(*c.ks_allowance) : ""},
        {"fixture", c.fixture ? format_number(*c.fixture) : ""},
    };
    return e;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    Report report;
    report.config_echo = echo(config);
    report.threads = config.threads;
    report.stream_scheme =
        "mt19937_64 per replicate, seeded from splitmix64(seed, rung * reps + replicate); "
        "auxiliary streams at replicate index 0xA000000000000000 + tag";
    Context ctx{config, report};

    const ExperimentKind kind = config.experiment;
    if (kind == ExperimentKind::SpiralCheck) {
        run_spiral(ctx);
    } else if (kind == ExperimentKind::BrownianInstance) {
        run_ladder(ctx, ModelSpec::iid(ComponentLaw::gaussian()));
    } else {
        const ModelSpec model = resolve_model(config);
        report.config_echo.emplace_back("model_resolved", model.describe());
        if (is_clt(kind)) run_clt(ctx, model);
        else if (is_stable(kind)) run_stable(ctx, model);
        else if (kind == ExperimentKind::PoissonSimpleRw) run_poisson(ctx, model);
        else if (kind == ExperimentKind::CriticalConjectureProbe) run_probe(ctx, model);
        else if (is_ladder(kind)) run_ladder(ctx, model);
        else if (kind == ExperimentKind::Conditions) run_conditions(ctx, model);
        else run_simulate(ctx, model);
    }
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

namespace {

std::string render_csv(const Report& r, bool include_runtime) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(r.columns);
    for (const auto& row : r.rows) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double x : row) cells.push_back(format_number(x));
        line(cells);
    }
    for (const auto& [k, v] : r.config_echo) out += "# config," + k + "," + v + "\n";
    out += "# provenance,seed_scheme," + r.stream_scheme + "\n";
    out += "# rows," + std::to_string(r.row_count) + (r.rows_elided ? ",elided" : ",written") + "\n";
    out += "# aggregate,name,count,mean,variance,skewness,kurtosis,se_mean,se_variance\n";
    for (const auto& a : r.aggregates) {
        const auto& s = a.summary;
        out += "# aggregate," + a.name + "," + std::to_string(s.count) + "," + format_number(s.mean) + "," +
               format_number(s.variance) + "," + format_number(s.skewness) + "," + format_number(s.kurtosis) + "," +
               format_number(s.se_mean) + "," + format_number(s.se_variance) + "\n";
    }
    for (const auto& [k, v] : r.scalars) out += "# scalar," + k + "," + format_number(v) + "\n";
    out += "# verdict,name,statistic,threshold,pass,sample_size\n";
    for (const auto& v : r.verdicts)
        out += "# verdict," + v.name + "," + format_number(v.statistic) + "," + format_number(v.threshold) + "," +
               (v.pass ? "pass" : "fail") + "," + std::to_string(v.sample_size) + "\n";
    if (!r.histogram.counts.empty()) {
        out += "# histogram," + r.histogram_of + "," + r.histogram.rule + ",lo=" + format_number(r.histogram.lo) +
               ",width=" + format_number(r.histogram.width) + "\n# histogram_counts";
        for (auto c : r.histogram.counts) out += "," + std::to_string(c);
        out += "\n";
    }
    for (const auto& [x, y] : r.qq) out += "# qq," + format_number(x) + "," + format_number(y) + "\n";
    if (include_runtime)
        out += "# runtime,threads=" + std::to_string(r.threads) + ",wall_clock_seconds=" +
               format_number(r.wall_clock_seconds) + "\n";
    return out;
}

std::string render_json(const Report& r, bool include_runtime) {
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json cfg = ordered_json::object();
    for (const auto& [k, v] : r.config_echo) cfg[k] = v;
    j["config"] = cfg;
    j["provenance"] = {{"seed_scheme", r.stream_scheme}};
    j["columns"] = r.columns;
    j["rows"] = r.rows;
    j["row_count"] = r.row_count;
    j["rows_elided"] = r.rows_elided;
    ordered_json aggs = ordered_json::array();
    for (const auto& a : r.aggregates) {
        const auto& s = a.summary;
        aggs.push_back({{"name", a.name}, {"count", s.count}, {"mean", s.mean}, {"variance", s.variance},
                        {"skewness", s.skewness}, {"kurtosis", s.kurtosis}, {"se_mean", s.se_mean},
                        {"se_variance", s.se_variance}, {"se_skewness", s.se_skewness},
                        {"se_kurtosis", s.se_kurtosis}});
    }
    j["aggregates"] = aggs;
    ordered_json scalars = ordered_json::array();
    for (const auto& [k, v] : r.scalars) scalars.push_back({{"name", k}, {"value", v}});
    j["scalars"] = scalars;
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : r.verdicts)
        verdicts.push_back({{"name", v.name}, {"statistic", v.statistic}, {"threshold", v.threshold},
                            {"pass", v.pass}, {"sample_size", v.sample_size}});
    j["verdicts"] = verdicts;
    j["histogram"] = {{"of", r.histogram_of}, {"rule", r.histogram.rule}, {"lo", r.histogram.lo},
                      {"width", r.histogram.width}, {"counts", r.histogram.counts}};
    ordered_json qq = ordered_json::array();
    for (const auto& [x, y] : r.qq) qq.push_back({x, y});
    j["qq"] = qq;
    if (include_runtime) j["runtime"] = {{"threads", r.threads}, {"wall_clock_seconds", r.wall_clock_seconds}};
    return j.dump(1) + "\n";
}

}  // namespace

std::string render_report(const Report& report, OutputFormat format, bool include_runtime) {
    return format == OutputFormat::Json ? render_json(report, include_runtime) : render_csv(report, include_runtime);
}

void emit_report(const Report& report, OutputFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open report file " + path + " for writing");
    out << render_report(report, format, true);
    out.flush();
    if (!out) throw IoError("failed writing report file " + path);
}

}  // namespace hdwalk
