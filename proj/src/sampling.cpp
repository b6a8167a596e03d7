#include "hdwalk/sampling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hdwalk/errors.hpp"

namespace hdwalk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void check_stable_alpha(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0)) {
        throw ParameterError("stable law: alpha must lie in (1, 2], got " + std::to_string(alpha));
    }
}

}  // namespace

RandomStream derive_stream(SeedSpec spec) {
    const std::uint64_t a = splitmix64(spec.master_seed);
    const std::uint64_t b = splitmix64(a ^ splitmix64(spec.replicate_index + 0x632BE59BD9B4E019ULL));
    const std::uint64_t c = splitmix64(b + spec.replicate_index);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return RandomStream(seq);
}

void sample_unit_sphere_into(std::span<double> out, RandomStream& stream) {
    if (out.empty()) throw ParameterError("sample_unit_sphere: dimension must be at least 1");
    double norm_sq = 0.0;
    do {
        norm_sq = 0.0;
        for (double& x : out) {
            x = stream.gaussian();
            norm_sq += x * x;
        }
    } while (norm_sq == 0.0);
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : out) x *= inv;
}

VectorD sample_unit_sphere(std::size_t d, RandomStream& stream) {
    if (d == 0) throw ParameterError("sample_unit_sphere: dimension must be at least 1");
    VectorD u(d);
    sample_unit_sphere_into(u, stream);
    return u;
}

// ---------------------------------------------------------------------------
// Radial laws

RadialLaw RadialLaw::two_point(double a) {
    RadialLaw law{RadialKind::TwoPoint, a};
    law.validate();
    return law;
}

RadialLaw RadialLaw::pareto_squared(double alpha) {
    RadialLaw law{RadialKind::ParetoSquared, alpha};
    law.validate();
    return law;
}

void RadialLaw::validate() const {
    switch (kind) {
        case RadialKind::TwoPoint:
            if (!(param > 0.0 && param <= 1.0))
                throw ParameterError("TwoPoint radial law: a must lie in (0, 1], got " + std::to_string(param));
            break;
        case RadialKind::ParetoSquared:
            if (!(param > 1.0 && param < 2.0))
                throw ParameterError("ParetoSquared radial law: alpha must lie in (1, 2), got " + std::to_string(param));
            break;
        default:
            break;
    }
}

double RadialLaw::variance_of_square() const {
    switch (kind) {
        case RadialKind::TwoPoint:
            return param * param;
        case RadialKind::ParetoSquared:
            return std::numeric_limits<double>::infinity();
        default:
            return 0.0;
    }
}

std::string RadialLaw::describe() const {
    std::ostringstream os;
    switch (kind) {
        case RadialKind::Constant: os << "constant"; break;
        case RadialKind::TwoPoint: os << "twopoint:" << param; break;
        case RadialKind::SymmetricSign: os << "sign"; break;
        case RadialKind::ParetoSquared: os << "pareto:" << param; break;
    }
    return os.str();
}

double pareto_scale_xm(double alpha) { return (alpha - 1.0) / alpha; }

double sample_pareto_squared(double alpha, RandomStream& stream) {
    return pareto_scale_xm(alpha) * std::pow(stream.uniform01(), -1.0 / alpha);
}

double sample_radial(const RadialLaw& law, RandomStream& stream) {
    switch (law.kind) {
        case RadialKind::Constant:
            return 1.0;
        case RadialKind::TwoPoint:
            return std::sqrt(1.0 + law.param * stream.sign());
        case RadialKind::SymmetricSign:
            return stream.sign();
        case RadialKind::ParetoSquared:
            law.validate();
            return std::sqrt(sample_pareto_squared(law.param, stream));
    }
    return 1.0;
}

// ---------------------------------------------------------------------------
// Stable laws

double sample_stable(const StableLawRef& ref, RandomStream& stream) {
    check_stable_alpha(ref.alpha);
    if (!(ref.scale > 0.0) || !std::isfinite(ref.scale)) throw ParameterError("stable law: scale must be positive");

    const double alpha = ref.alpha;
    const double v = std::numbers::pi * (stream.uniform01() - 0.5);
    const double w = stream.exponential();

    // beta = +1
    const double tan_term = std::tan(std::numbers::pi * alpha / 2.0);
    const double b = std::atan(tan_term) / alpha;
    const double s = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
    const double x = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
    return ref.scale * x;
}

double stable_scale_for_pareto(double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw ParameterError("stable_scale_for_pareto: alpha must lie in (1, 2), got " + std::to_string(alpha));
    const double tail_constant = std::pow(pareto_scale_xm(alpha), alpha);
    const double sigma_pow =
        tail_constant * std::tgamma(2.0 - alpha) * std::cos(std::numbers::pi * alpha / 2.0) / (1.0 - alpha);
    return std::pow(sigma_pow, 1.0 / alpha);
}

}  // namespace hdwalk
