#pragma once

// Reproducible random sources. Every replicate owns a RandomStream derived
// from (master_seed, replicate_index) alone, so results never depend on the
// order in which replicates are scheduled.

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "hdwalk/linalg.hpp"

namespace hdwalk {

class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform01() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double gaussian() { return normal_(engine_); }
    double exponential() { return -std::log(uniform01()); }

    /// Fair +-1, drawn from a 64-bit buffer.
    double sign() {
        if (bits_left_ == 0) {
            bits_ = engine_();
            bits_left_ = 64;
        }
        const double s = (bits_ & 1u) ? 1.0 : -1.0;
        bits_ >>= 1;
        --bits_left_;
        return s;
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    std::uint64_t bits_ = 0;
    int bits_left_ = 0;
};

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t replicate_index = 0;
};

/// Counter-based derivation: the stream is a hash of (master_seed, replicate_index).
RandomStream derive_stream(SeedSpec spec);

/// Replicate index reserved for auxiliary streams (reference samples, pair subsets).
inline constexpr std::uint64_t kAuxiliaryStreamBase = 0xA000'0000'0000'0000ULL;

// ---------------------------------------------------------------------------

VectorD sample_unit_sphere(std::size_t d, RandomStream& stream);
/// Fills `out` with a uniform direction; returns nothing, ||out|| = 1.
void sample_unit_sphere_into(std::span<double> out, RandomStream& stream);

enum class RadialKind { Constant, TwoPoint, SymmetricSign, ParetoSquared };

/// Law of the radial factor R. All laws satisfy E R^2 = 1.
struct RadialLaw {
    RadialKind kind = RadialKind::Constant;
    double param = 0.0;  // a for TwoPoint, alpha for ParetoSquared

    static RadialLaw constant() { return {RadialKind::Constant, 0.0}; }
    static RadialLaw two_point(double a);
    static RadialLaw symmetric_sign() { return {RadialKind::SymmetricSign, 0.0}; }
    static RadialLaw pareto_squared(double alpha);

    void validate() const;
    /// Var(R^2); +inf for Pareto tails.
    double variance_of_square() const;
    bool deterministic_square() const { return kind == RadialKind::Constant || kind == RadialKind::SymmetricSign; }
    bool heavy_tailed() const { return kind == RadialKind::ParetoSquared; }
    std::string describe() const;
};

double sample_radial(const RadialLaw& law, RandomStream& stream);

/// W = x_m U^{-1/alpha} with x_m = (alpha-1)/alpha, so E W = 1 and P(W > w) = x_m^alpha w^{-alpha}.
double sample_pareto_squared(double alpha, RandomStream& stream);
double pareto_scale_xm(double alpha);

/// Zero-mean spectrally positive alpha-stable law S_alpha(scale, beta = 1, 0).
struct StableLawRef {
    double alpha = 1.5;
    double scale = 1.0;
};

/// Chambers-Mallows-Stuck draw. alpha in (1, 2]; alpha = 2 gives N(0, 2 scale^2).
double sample_stable(const StableLawRef& ref, RandomStream& stream);

/// Scale sigma(alpha) of the stable limit of (W_1 + ... + W_m - m) / m^{1/alpha}
/// for the ParetoSquared(alpha) variate W, from the tail constant x_m^alpha.
double stable_scale_for_pareto(double alpha);

}  // namespace hdwalk
