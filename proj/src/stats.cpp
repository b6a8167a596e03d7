#include "hdwalk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "hdwalk/errors.hpp"

namespace hdwalk {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0, 1)");
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

LimitLaw LimitLaw::normal(double variance) {
    LimitLaw law;
    law.kind = LawKind::Normal;
    law.variance = variance;
    law.validate();
    return law;
}

LimitLaw LimitLaw::stable_law(StableLawRef ref) {
    LimitLaw law;
    law.kind = LawKind::Stable;
    law.stable = ref;
    law.validate();
    return law;
}

LimitLaw LimitLaw::poisson_diff(double c) {
    LimitLaw law;
    law.kind = LawKind::PoissonDiff;
    law.c = c;
    law.validate();
    return law;
}

void LimitLaw::validate() const {
    switch (kind) {
        case LawKind::Normal:
            if (!(variance > 0.0) || !std::isfinite(variance)) throw ParameterError("LimitLaw: variance must be positive");
            break;
        case LawKind::Stable:
            if (!(stable.alpha > 1.0 && stable.alpha <= 2.0) || !(stable.scale > 0.0))
                throw ParameterError("LimitLaw: stable law needs alpha in (1, 2] and positive scale");
            break;
        case LawKind::PoissonDiff:
            if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("LimitLaw: Poisson difference needs c > 0");
            break;
    }
}

std::string LimitLaw::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case LawKind::Normal: os << "normal(var=" << variance << ")"; break;
        case LawKind::Stable: os << "stable(alpha=" << stable.alpha << ",scale=" << stable.scale << ")"; break;
        case LawKind::PoissonDiff: os << "poisson_diff(c=" << c << ")"; break;
    }
    return os.str();
}

double ks_one_sample(std::span<const double> sorted, const Cdf& cdf) {
    if (sorted.empty()) throw ContractError("ks_one_sample: empty sample");
    if (!std::is_sorted(sorted.begin(), sorted.end())) throw ContractError("ks_one_sample: sample is not sorted");
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ContractError("ks_two_sample: empty sample");
    if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end()))
        throw ContractError("ks_two_sample: samples must be sorted");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
}

double kolmogorov_cdf(double x) {
    if (x <= 0.0) return 0.0;
    if (x < 1.0) {
        // Theta-function form converges fast for small x.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double s = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double t = (2.0 * k - 1.0);
            s += std::exp(-t * t * pi2 / (8.0 * x * x));
        }
        return std::sqrt(2.0 * std::numbers::pi) / x * s;
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return 1.0 - 2.0 * s;
}

double kolmogorov_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("kolmogorov_quantile: p must lie in (0, 1)");
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double ks_critical_value(std::size_t n, double confidence) {
    if (n == 0) throw ContractError("ks_critical_value: n must be positive");
    const double rn = std::sqrt(static_cast<double>(n));
    return kolmogorov_quantile(confidence) / (rn + 0.12 + 0.11 / rn);
}

double ks_two_sample_critical_value(std::size_t na, std::size_t nb, double confidence) {
    if (na == 0 || nb == 0) throw ContractError("ks_two_sample_critical_value: sizes must be positive");
    const double ne = static_cast<double>(na) * static_cast<double>(nb) / static_cast<double>(na + nb);
    const double rn = std::sqrt(ne);
    return kolmogorov_quantile(confidence) / (rn + 0.12 + 0.11 / rn);
}

double PoissonDiffTable::at(long long k) const {
    if (k < lo || k > hi()) return 0.0;
    return p[static_cast<std::size_t>(k - lo)];
}

double PoissonDiffTable::total() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

double PoissonDiffTable::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += static_cast<double>(lo + static_cast<long long>(i)) * p[i];
    return s;
}

double PoissonDiffTable::variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double x = static_cast<double>(lo + static_cast<long long>(i)) - m;
        s += x * x * p[i];
    }
    return s;
}

namespace {

// Law of u P' - v P'' with P', P'' ~ Poi(c^2 / 4) independent.
PoissonDiffTable weighted_poisson_diff(double c, long long support_bound, long long u, long long v, const char* who) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError(std::string(who) + ": c must be positive");
    const double lambda = c * c / 4.0;
    const auto poi = [lambda](long long j) {
        return std::exp(-lambda + static_cast<double>(j) * std::log(lambda) - std::lgamma(static_cast<double>(j) + 1.0));
    };

    long long J = 0;
    double cdf = poi(0);
    while (1.0 - cdf >= 1e-13 && J < 100000) {
        ++J;
        cdf += poi(J);
    }
    // 1 - cdf suffers cancellation; a few extra terms make the tail bound safe.
    J = std::max(J + 5, support_bound);

    std::vector<double> w(static_cast<std::size_t>(J + 1));
    for (long long j = 0; j <= J; ++j) w[static_cast<std::size_t>(j)] = poi(j);

    PoissonDiffTable table;
    table.c = c;
    table.lo = -v * J;
    table.p.assign(static_cast<std::size_t>((u + v) * J + 1), 0.0);
    for (long long a = 0; a <= J; ++a)
        for (long long b = 0; b <= J; ++b)
            table.p[static_cast<std::size_t>(u * a - v * b + v * J)] += w[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)];
    return table;
}

}  // namespace

PoissonDiffTable poisson_diff_pmf(double c, long long support_bound) {
    return weighted_poisson_diff(c, support_bound, 3, 1, "poisson_diff_pmf");
}

PoissonDiffTable balanced_poisson_diff_pmf(double c, long long support_bound) {
    return weighted_poisson_diff(c, support_bound, 2, 2, "balanced_poisson_diff_pmf");
}

double total_variation(std::span<const long long> sample, const PoissonDiffTable& table) {
    if (sample.empty()) throw ContractError("total_variation: empty sample");
    std::vector<std::size_t> counts(table.p.size(), 0);
    std::size_t outside = 0;
    for (long long k : sample) {
        if (k < table.lo || k > table.hi()) ++outside;
        else ++counts[static_cast<std::size_t>(k - table.lo)];
    }
    const double n = static_cast<double>(sample.size());
    double tv = static_cast<double>(outside) / n;
    for (std::size_t i = 0; i < counts.size(); ++i) tv += std::abs(static_cast<double>(counts[i]) / n - table.p[i]);
    return 0.5 * tv;
}

MomentSummary moment_summary(std::span<const double> sample) {
    if (sample.size() < 2) throw InsufficientDataError("moment_summary: need at least two values");
    MomentSummary s;
    s.count = sample.size();
    const double n = static_cast<double>(s.count);
    double sum = 0.0;
    for (double x : sample) sum += x;
    s.mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : sample) {
        const double e = x - s.mean;
        const double e2 = e * e;
        m2 += e2;
        m3 += e2 * e;
        m4 += e2 * e2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = m2 * n / (n - 1.0);
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.kurtosis = m4 / (m2 * m2) - 3.0;
    }
    s.se_mean = std::sqrt(s.variance / n);
    s.se_variance = std::sqrt(std::max(0.0, m4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n);
    s.se_skewness = std::sqrt(6.0 / n);
    s.se_kurtosis = std::sqrt(24.0 / n);
    return s;
}

TestVerdict make_verdict(std::string name, double statistic, double threshold, std::size_t sample_size) {
    return {std::move(name), statistic, threshold, statistic <= threshold, sample_size};
}

TestVerdict variance_identity_check(std::span<const double> q_samples, std::size_t n, std::size_t d) {
    if (d == 0) throw ParameterError("variance_identity_check: d must be positive");
    if (q_samples.size() < kMinIdentitySamples)
        throw InsufficientDataError("variance_identity_check: need at least 1000 samples of Q_n");
    if (n <= 1) {
        double worst = 0.0;
        for (double q : q_samples) worst = std::max(worst, std::abs(q));
        return make_verdict("variance_identity", worst, 0.0, q_samples.size());
    }
    const double nn = static_cast<double>(n);
    const double target = 2.0 * nn * (nn - 1.0) / static_cast<double>(d);
    const MomentSummary m = moment_summary(q_samples);
    return make_verdict("variance_identity", std::abs(m.variance - target), kIdentitySigmas * m.se_variance,
                        q_samples.size());
}

double sample_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw ContractError("sample_quantile: empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * std::clamp(p, 0.0, 1.0);
    const auto i = static_cast<std::size_t>(std::floor(h));
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + (h - static_cast<double>(i)) * (sorted[i + 1] - sorted[i]);
}

Histogram make_histogram(std::span<const double> sorted) {
    Histogram h;
    if (sorted.empty()) return h;
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double iqr = sample_quantile(sorted, 0.75) - sample_quantile(sorted, 0.25);
    const double fd = 2.0 * iqr / std::cbrt(static_cast<double>(sorted.size()));
    std::size_t bins = kMinHistogramBins;
    if (fd > 0.0 && hi > lo) {
        const double want = std::ceil((hi - lo) / fd);
        bins = static_cast<std::size_t>(std::clamp(want, static_cast<double>(kMinHistogramBins),
                                                   static_cast<double>(kMaxHistogramBins)));
    }
    h.rule = "freedman-diaconis(min=" + std::to_string(kMinHistogramBins) + ",max=" +
             std::to_string(kMaxHistogramBins) + ",bins=" + std::to_string(bins) + ")";
    h.lo = lo;
    h.width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    h.counts.assign(bins, 0);
    for (double x : sorted) {
        auto b = static_cast<std::size_t>((x - lo) / h.width);
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

std::vector<std::pair<double, double>> qq_pairs(std::span<const double> sorted, const QuantileFn& reference,
                                                std::size_t points) {
    std::vector<std::pair<double, double>> out;
    if (sorted.empty() || points == 0) return out;
    points = std::min(points, sorted.size());
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(points);
        out.emplace_back(sample_quantile(sorted, p), reference(p));
    }
    return out;
}

std::vector<double> stable_reference_sample(const StableLawRef& ref, std::size_t count, std::uint64_t master_seed,
                                            std::uint64_t tag) {
    RandomStream stream = derive_stream({master_seed, kAuxiliaryStreamBase + tag});
    std::vector<double> out(count);
    for (double& x : out) x = sample_stable(ref, stream);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hdwalk
