#pragma once

// Reference limit laws and the comparison statistics used for verdicts:
// Kolmogorov-Smirnov distances, total variation on the integers and moments.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hdwalk/sampling.hpp"

namespace hdwalk {

/// Phi(x) = erfc(-x / sqrt 2) / 2.
double normal_cdf(double x);
double normal_quantile(double p);

enum class LawKind { Normal, Stable, PoissonDiff };

struct LimitLaw {
    LawKind kind = LawKind::Normal;
    double variance = 1.0;  // Normal
    StableLawRef stable;    // Stable
    double c = 0.0;         // PoissonDiff: 3P' - P'' with P', P'' ~ Poisson(c^2 / 4)

    static LimitLaw normal(double variance = 1.0);
    static LimitLaw stable_law(StableLawRef ref);
    static LimitLaw poisson_diff(double c);

    void validate() const;
    std::string describe() const;
};

using Cdf = std::function<double(double)>;

/// D = max_i max(i/N - F(x_i), F(x_i) - (i-1)/N). ContractError if unsorted or empty.
double ks_one_sample(std::span<const double> sorted, const Cdf& cdf);

/// sup |F_a - F_b| by a linear merge of two sorted samples.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// P(K <= x) for the Kolmogorov distribution.
double kolmogorov_cdf(double x);
double kolmogorov_quantile(double p);

/// Level-`confidence` critical value of the one-sample statistic at sample
/// size n, using the finite-n correction c / (sqrt n + 0.12 + 0.11 / sqrt n).
double ks_critical_value(std::size_t n, double confidence = 0.999);

/// Same with the effective size n_a n_b / (n_a + n_b).
double ks_two_sample_critical_value(std::size_t na, std::size_t nb, double confidence = 0.999);

inline constexpr double kVerdictConfidence = 0.999;

struct PoissonDiffTable {
    double c = 0.0;
    long long lo = 0;            // = -J
    std::vector<double> p;       // p[k - lo], k = -J..3J

    long long hi() const { return lo + static_cast<long long>(p.size()) - 1; }
    double at(long long k) const;
    double mean() const;
    double variance() const;
    double total() const;
};

/// Exact pmf of 3P' - P''. The support half-width J is at least support_bound
/// and is widened until each Poisson tail beyond J is below 1e-13.
PoissonDiffTable poisson_diff_pmf(double c, long long support_bound = 0);
/// Law of 2P' - 2P'' with the same P', P''. A direct count of boxes holding two
/// steps gives ||S_n||^2 - n = sum over such boxes of (+-2), which has this limit.
PoissonDiffTable balanced_poisson_diff_pmf(double c, long long support_bound = 0);

/// (1/2) sum_k |empirical(k) - p(k)|, including mass outside the table.
double total_variation(std::span<const long long> sample, const PoissonDiffTable& table);

struct MomentSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double skewness = 0.0;
    double kurtosis = 0.0;  // excess
    double se_mean = 0.0;
    double se_variance = 0.0;
    double se_skewness = 0.0;
    double se_kurtosis = 0.0;
};

/// InsufficientDataError if fewer than two values.
MomentSummary moment_summary(std::span<const double> sample);

struct TestVerdict {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::size_t sample_size = 0;
};

TestVerdict make_verdict(std::string name, double statistic, double threshold, std::size_t sample_size);

/// Var Q_n against 2n(n-1)/d within 5 standard errors of the sample variance.
/// For n <= 1 every Q sample must be exactly zero.
TestVerdict variance_identity_check(std::span<const double> q_samples, std::size_t n, std::size_t d);

inline constexpr std::size_t kMinIdentitySamples = 1000;
inline constexpr double kIdentitySigmas = 5.0;

/// Type-7 (linear interpolation) quantile of a sorted sample.
double sample_quantile(std::span<const double> sorted, double p);

struct Histogram {
    double lo = 0.0;
    double width = 0.0;
    std::vector<std::size_t> counts;
    std::string rule;
};

inline constexpr std::size_t kMinHistogramBins = 20;
inline constexpr std::size_t kMaxHistogramBins = 2000;

/// Freedman-Diaconis bins with a floor of 20.
Histogram make_histogram(std::span<const double> sorted);

using QuantileFn = std::function<double(double)>;

/// Up to `points` pairs (empirical quantile, reference quantile) at p = (i + 1/2) / points.
std::vector<std::pair<double, double>> qq_pairs(std::span<const double> sorted, const QuantileFn& reference,
                                                std::size_t points = 200);

/// Sorted sample of `count` stable draws from an auxiliary stream of master_seed.
std::vector<double> stable_reference_sample(const StableLawRef& ref, std::size_t count, std::uint64_t master_seed,
                                            std::uint64_t tag = 0);

inline constexpr std::size_t kStableReferenceSize = 1'000'000;

}  // namespace hdwalk
