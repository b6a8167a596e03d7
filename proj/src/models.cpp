#include "hdwalk/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hdwalk/errors.hpp"

namespace hdwalk {

ComponentLaw ComponentLaw::symmetric_pareto_squared(double alpha) {
    ComponentLaw law{ComponentKind::SymmetricParetoSquared, alpha};
    law.validate();
    return law;
}

void ComponentLaw::validate() const {
    if (kind == ComponentKind::SymmetricParetoSquared && !(alpha > 1.0 && alpha < 2.0)) {
        throw ParameterError("SymmetricParetoSquared component law: alpha must lie in (1, 2), got " +
                             std::to_string(alpha));
    }
}

std::string ComponentLaw::describe() const {
    switch (kind) {
        case ComponentKind::Rademacher: return "rademacher";
        case ComponentKind::StandardGaussian: return "gaussian";
        case ComponentKind::SymmetricParetoSquared: {
            std::ostringstream os;
            os << "pareto:" << alpha;
            return os.str();
        }
    }
    return "?";
}

ModelSpec ModelSpec::iid(ComponentLaw law) {
    ModelSpec m;
    m.kind = ModelKind::IidComponents;
    m.component = law;
    m.validate();
    return m;
}

ModelSpec ModelSpec::rot_invariant(RadialLaw law) {
    ModelSpec m;
    m.kind = ModelKind::RotInvariant;
    m.radial = law;
    m.validate();
    return m;
}

ModelSpec ModelSpec::axis_jumps(RadialLaw law) {
    ModelSpec m;
    m.kind = ModelKind::AxisJumps;
    m.radial = law;
    m.validate();
    return m;
}

void ModelSpec::validate() const {
    if (kind == ModelKind::IidComponents) {
        component.validate();
    } else {
        radial.validate();
        if (kind == ModelKind::RotInvariant && radial.kind == RadialKind::SymmetricSign) {
            throw ParameterError("rotation-invariant model needs a nonnegative radial law; use 'constant'");
        }
    }
}

bool ModelSpec::heavy_tailed() const {
    return kind == ModelKind::IidComponents ? component.heavy_tailed() : radial.heavy_tailed();
}

double ModelSpec::tail_index() const {
    if (!heavy_tailed()) return 0.0;
    return kind == ModelKind::IidComponents ? component.alpha : radial.param;
}

std::string ModelSpec::describe() const {
    switch (kind) {
        case ModelKind::IidComponents: return "iid/" + component.describe();
        case ModelKind::RotInvariant: return "rotinv/" + radial.describe();
        case ModelKind::AxisJumps: return "axis/" + radial.describe();
    }
    return "?";
}

double inner_product(const Increment& x, std::span<const double> v) {
    if (const auto* sparse = std::get_if<SparseStep>(&x)) return sparse->value * v[sparse->axis];
    return dot(std::get<VectorD>(x), v);
}

double squared_norm(const Increment& x) {
    if (const auto* sparse = std::get_if<SparseStep>(&x)) return sparse->value * sparse->value;
    return squared_norm(std::span<const double>(std::get<VectorD>(x)));
}

// ---------------------------------------------------------------------------

IncrementSampler::IncrementSampler(ModelSpec model, std::size_t d)
    : model_(model), d_(d), inv_sqrt_d_(d > 0 ? 1.0 / std::sqrt(static_cast<double>(d)) : 0.0) {
    if (d == 0) throw ParameterError("increment sampler: dimension must be at least 1");
    model_.validate();
    if (model_.kind == ModelKind::IidComponents && model_.component.heavy_tailed()) {
        const double alpha = model_.component.alpha;
        pareto_coord_scale_ = std::sqrt(pareto_scale_xm(alpha)) * inv_sqrt_d_;
        pareto_exponent_ = -1.0 / (2.0 * alpha);
    }
}

double IncrementSampler::draw_dense(std::span<double> out, RandomStream& stream) {
    if (out.size() != d_) throw StructuralError("increment sampler: output buffer has wrong dimension");
    double norm_sq = 0.0;
    switch (model_.kind) {
        case ModelKind::IidComponents:
            switch (model_.component.kind) {
                case ComponentKind::Rademacher:
                    for (double& x : out) {
                        x = stream.sign() * inv_sqrt_d_;
                        norm_sq += x * x;
                    }
                    break;
                case ComponentKind::StandardGaussian:
                    for (double& x : out) {
                        x = stream.gaussian() * inv_sqrt_d_;
                        norm_sq += x * x;
                    }
                    break;
                case ComponentKind::SymmetricParetoSquared:
                    for (double& x : out) {
                        const double s = stream.sign();
                        x = s * pareto_coord_scale_ * std::exp(pareto_exponent_ * std::log(stream.uniform01()));
                        norm_sq += x * x;
                    }
                    break;
            }
            return norm_sq;
        case ModelKind::RotInvariant: {
            sample_unit_sphere_into(out, stream);
            const double r = sample_radial(model_.radial, stream);
            for (double& x : out) x *= r;
            // ||U|| = 1, so ||X||^2 = R^2 up to rounding in U.
            return r * r;
        }
        case ModelKind::AxisJumps: {
            const SparseStep step = draw_sparse(stream);
            std::fill(out.begin(), out.end(), 0.0);
            out[step.axis] = step.value;
            return step.value * step.value;
        }
    }
    return norm_sq;
}

SparseStep IncrementSampler::draw_sparse(RandomStream& stream) {
    if (model_.kind != ModelKind::AxisJumps) throw ParameterError("draw_sparse: model is not axis-jumping");
    SparseStep step;
    step.axis = static_cast<std::size_t>(stream.below(d_));
    step.value = sample_radial(model_.radial, stream);
    if (model_.radial.kind != RadialKind::SymmetricSign) step.value *= stream.sign();
    return step;
}

Increment IncrementSampler::draw(RandomStream& stream) {
    if (model_.kind == ModelKind::AxisJumps) return draw_sparse(stream);
    VectorD x(d_);
    draw_dense(x, stream);
    return x;
}

Increment sample_increment(const ModelSpec& model, std::size_t d, RandomStream& stream) {
    IncrementSampler sampler(model, d);
    return sampler.draw(stream);
}

// ---------------------------------------------------------------------------
// Conditions

bool ConditionReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.pass; });
}

namespace {

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
    }
    double mean(double n) const { return sum / n; }
    /// Standard error of the mean from the sample second moment.
    double se(double n) const {
        const double m = sum / n;
        const double var = std::max(0.0, sum_sq / n - m * m) * n / (n - 1.0);
        return std::sqrt(var / n);
    }
};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

}  // namespace

ConditionReport check_conditions(const DenseGenerator& generator, std::size_t d, std::size_t sample_count,
                                 RandomStream& stream) {
    if (d == 0) throw ParameterError("check_conditions: dimension must be at least 1");
    if (sample_count < 1000) throw ParameterError("check_conditions: need at least 1000 samples");

    std::vector<std::size_t> tracked;
    if (d <= kMaxTrackedCoordinates) {
        tracked.resize(d);
        for (std::size_t k = 0; k < d; ++k) tracked[k] = k;
    } else {
        tracked.resize(kMaxTrackedCoordinates);
        for (std::size_t i = 0; i < tracked.size(); ++i) tracked[i] = i * d / kMaxTrackedCoordinates;
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t all_pairs = d * (d - 1) / 2;
    if (d >= 2) {
        if (all_pairs <= kMaxCorrelationPairs) {
            for (std::size_t j = 0; j < d; ++j)
                for (std::size_t k = j + 1; k < d; ++k) pairs.emplace_back(j, k);
        } else {
            // always include (0, 1) so that adjacent-coordinate defects are seen
            pairs.emplace_back(0, 1);
            while (pairs.size() < kMaxCorrelationPairs) {
                const std::size_t j = stream.below(d);
                const std::size_t k = stream.below(d);
                if (j == k) continue;
                const auto p = std::minmax(j, k);
                if (std::find(pairs.begin(), pairs.end(), std::pair(p.first, p.second)) == pairs.end())
                    pairs.emplace_back(p.first, p.second);
            }
        }
    }

    std::vector<Moments> coord(tracked.size()), coord_sq(tracked.size());
    std::vector<double> pair_sum(pairs.size(), 0.0), pair_sum_sq(pairs.size(), 0.0);
    std::vector<double> pair_a_sq(pairs.size(), 0.0), pair_b_sq(pairs.size(), 0.0);
    Moments norm;
    std::array<Moments, 2> tail;

    ConditionReport report;
    report.sample_count = sample_count;
    report.dim = d;

    VectorD x(d);
    for (std::size_t s = 0; s < sample_count; ++s) {
        generator(stream, x);
        double nsq = 0.0;
        for (double v : x) nsq += v * v;
        norm.add(nsq);
        for (std::size_t t = 0; t < 2; ++t) tail[t].add(nsq > report.tail_levels[t] ? nsq : 0.0);
        for (std::size_t i = 0; i < tracked.size(); ++i) {
            const double v = x[tracked[i]];
            coord[i].add(v);
            coord_sq[i].add(v * v);
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const double a = x[pairs[p].first];
            const double b = x[pairs[p].second];
            pair_sum[p] += a * b;
            pair_sum_sq[p] += a * a * b * b;
            pair_a_sq[p] += a * a;
            pair_b_sq[p] += b * b;
        }
    }

    const double n = static_cast<double>(sample_count);
    const double target = 1.0 / static_cast<double>(d);
    report.target_second_moment = target;

    // centering and normalization
    double worst_a = 0.0;
    for (std::size_t i = 0; i < tracked.size(); ++i) {
        const double m = coord[i].mean(n);
        report.max_abs_mean_component = std::max(report.max_abs_mean_component, std::abs(m));
        const double se = coord[i].se(n);
        worst_a = std::max(worst_a, std::abs(m) / std::max(se, 1e-300));
    }
    report.norm_sq_mean = norm.mean(n);
    report.norm_sq_se = norm.se(n);
    const double norm_dev = std::abs(report.norm_sq_mean - 1.0);
    const double norm_z = norm_dev <= 1e-12 ? 0.0 : norm_dev / std::max(report.norm_sq_se, 1e-300);
    worst_a = std::max(worst_a, norm_z);
    report.checks[0] = {"centered", worst_a, kConditionSigmas, worst_a <= kConditionSigmas,
                        "max |mean component| " + fmt(report.max_abs_mean_component) + ", E||X||^2 " +
                            fmt(report.norm_sq_mean) + " +- " + fmt(report.norm_sq_se)};

    // uncorrelated components: studentized sample correlation of each pair
    double worst_b = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double denom = std::sqrt(pair_a_sq[p] * pair_b_sq[p]);
        if (denom == 0.0) continue;
        const double r = pair_sum[p] / denom;
        const double se = std::sqrt(pair_sum_sq[p]) / denom;
        report.max_abs_correlation = std::max(report.max_abs_correlation, std::abs(r));
        const double z = std::abs(r) <= 1e-12 ? 0.0 : std::abs(r) / std::max(se, 1e-300);
        worst_b = std::max(worst_b, z);
    }
    report.pairs_checked = pairs.size();
    report.checks[1] = {"uncorrelated", worst_b, kConditionSigmas, worst_b <= kConditionSigmas,
                        "max |corr| " + fmt(report.max_abs_correlation) + " over " + std::to_string(pairs.size()) +
                            " pairs"};

    // uniform integrability spot check
    for (std::size_t t = 0; t < 2; ++t) {
        report.tail_mass[t] = tail[t].mean(n);
        report.tail_se[t] = tail[t].se(n);
    }
    const double tail_stat = report.tail_mass[1] - kConditionSigmas * report.tail_se[1];
    report.checks[2] = {"uniformly_integrable", tail_stat, kTailMassBound, tail_stat <= kTailMassBound,
                        "tail mass " + fmt(report.tail_mass[0]) + " above 10, " + fmt(report.tail_mass[1]) +
                            " above 100"};

    // negligible components
    double worst_d = 0.0;
    for (std::size_t i = 0; i < tracked.size(); ++i) {
        const double m2 = coord_sq[i].mean(n);
        report.max_second_moment = std::max(report.max_second_moment, m2);
        // one-sided: only an excess over 1/d can violate negligibility, and the
        // lower tail of a self-normalized heavy-tailed mean is not studentizable
        const double dev = m2 - target;
        const double z = dev <= 1e-12 * target ? 0.0 : dev / std::max(coord_sq[i].se(n), 1e-300);
        worst_d = std::max(worst_d, z);
    }
    report.checks[3] = {"negligible", worst_d, kConditionSigmas, worst_d <= kConditionSigmas,
                        "max_k E X_k^2 " + fmt(report.max_second_moment) + " vs 1/d = " + fmt(target)};
    return report;
}

ConditionReport check_conditions(const ModelSpec& model, std::size_t d, std::size_t sample_count,
                                 RandomStream& stream) {
    IncrementSampler sampler(model, d);
    return check_conditions([&sampler](RandomStream& s, std::span<double> out) { sampler.draw_dense(out, s); }, d,
                            sample_count, stream);
}

}  // namespace hdwalk
