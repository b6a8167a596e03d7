#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hdwalk/errors.hpp"
#include "hdwalk/stats.hpp"

using namespace hdwalk;

namespace {

// Composite Simpson integration of the standard normal density on [-12, x].
double normal_cdf_quadrature(double x) {
    const int n = 200000;
    const double a = -12.0, h = (x - a) / n;
    auto f = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
    double s = f(a) + f(x);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

double poisson(double lambda, int k) { return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0)); }

}  // namespace

TEST_SUITE("stat-tests") {

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    for (double x = -6; x <= 6; x += 0.37) CHECK(std::abs(normal_cdf(x) - (1.0 - normal_cdf(-x))) <= 1e-14);
    CHECK(std::abs(normal_cdf(1.959964) - 0.975) <= 1e-6);
    CHECK(std::abs(normal_cdf(1.959964) - normal_cdf_quadrature(1.959964)) <= 1e-10);
    CHECK(std::abs(normal_cdf(-0.7) - normal_cdf_quadrature(-0.7)) <= 1e-10);
    CHECK(normal_cdf(-8.0) <= 1e-14);
    CHECK(normal_cdf(8.0) >= 1.0 - 1e-14);
    double prev = 0.0;
    for (double x = -9; x <= 9; x += 0.01) {
        REQUIRE(normal_cdf(x) >= prev);
        prev = normal_cdf(x);
    }
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
}

TEST_CASE("one-sample KS") {
    std::vector<double> zeros(100, 0.0);
    CHECK(ks_one_sample(zeros, normal_cdf) == doctest::Approx(0.5));
    std::vector<double> one = {1.0};
    CHECK(ks_one_sample(one, [](double) { return 0.3; }) == doctest::Approx(0.7));
    std::vector<double> unsorted = {2.0, 1.0};
    CHECK_THROWS_AS(ks_one_sample(unsorted, normal_cdf), ContractError);
    CHECK_THROWS_AS(ks_one_sample(std::vector<double>{}, normal_cdf), ContractError);

    std::mt19937_64 rng(51);
    std::normal_distribution<double> g;
    std::vector<double> x(500);
    for (double& v : x) v = g(rng);
    std::sort(x.begin(), x.end());
    const double d0 = ks_one_sample(x, normal_cdf);
    std::vector<double> y = x;
    for (double& v : y) v = 3.0 * v - 2.0;
    CHECK(ks_one_sample(y, [](double t) { return normal_cdf((t + 2.0) / 3.0); }) == doctest::Approx(d0).epsilon(1e-12));
}

TEST_CASE("KS critical values agree with a null Monte Carlo") {
    // Null distribution of D at N = 200 and N = 10^4 from uniform samples.
    for (std::size_t n : {200u, 10000u}) {
        const std::size_t trials = n > 1000 ? 2000 : 20000;
        std::mt19937_64 rng(52 + n);
        std::uniform_real_distribution<double> u;
        std::vector<double> ds(trials), x(n);
        for (double& d : ds) {
            for (double& v : x) v = u(rng);
            std::sort(x.begin(), x.end());
            d = ks_one_sample(x, [](double t) { return t; });
        }
        std::sort(ds.begin(), ds.end());
        const double q99 = sample_quantile(ds, 0.99);
        const double formula99 = ks_critical_value(n, 0.99);
        CAPTURE(n);
        CHECK(formula99 == doctest::Approx(q99).epsilon(0.05));
        const double crit = ks_critical_value(n, 0.999);
        const double exceed = static_cast<double>(ds.end() - std::upper_bound(ds.begin(), ds.end(), crit)) / trials;
        CHECK(exceed <= 0.004);
    }
    CHECK(ks_critical_value(10000) == doctest::Approx(1.95 / 100).epsilon(0.01));
    CHECK(kolmogorov_cdf(kolmogorov_quantile(0.9)) == doctest::Approx(0.9).epsilon(1e-10));
}

TEST_CASE("two-sample KS") {
    std::vector<double> a = {1, 2, 3};
    CHECK(ks_two_sample(a, a) == 0.0);
    std::vector<double> lo = {1, 2}, hi = {5, 6, 7};
    CHECK(ks_two_sample(lo, hi) == 1.0);
    std::vector<double> ties_a = {1, 1, 2}, ties_b = {1, 2, 2};
    CHECK(ks_two_sample(ties_a, ties_b) == doctest::Approx(1.0 / 3.0));

    std::vector<double> x = stable_reference_sample({1.5, 1.0}, 100000, 53, 0);
    std::vector<double> y = stable_reference_sample({1.5, 1.0}, 100000, 53, 1);
    CHECK(ks_two_sample(x, y) <= 0.01);
    CHECK(ks_two_sample_critical_value(100000, 100000) == doctest::Approx(1.9495 * std::sqrt(2.0 / 100000)).epsilon(0.01));
}

TEST_CASE("Poisson difference pmf") {
    for (double c : {0.5, 1.0, 2.0}) {
        const PoissonDiffTable t = poisson_diff_pmf(c);
        CHECK(std::abs(t.total() - 1.0) <= 1e-10);
        CHECK(std::abs(t.mean() - c * c / 2.0) <= 1e-10);
        CHECK(std::abs(t.variance() - 2.5 * c * c) <= 1e-8);
        CHECK(t.hi() == 3 * -t.lo);
    }
    CHECK(poisson_diff_pmf(1e-4).at(0) >= 1.0 - 1e-7);

    // Direct double sum at 200 terms.
    const double lambda = 0.25;
    double p0 = 0.0;
    for (int j = 0; j < 200; ++j)
        if (3 * j < 200) p0 += poisson(lambda, j) * poisson(lambda, 3 * j);
    CHECK(std::abs(poisson_diff_pmf(1.0).at(0) - p0) <= 1e-14);
    double p2 = 0.0;  // 3a - b = 2
    for (int a = 1; a < 200; ++a)
        if (3 * a - 2 < 200) p2 += poisson(lambda, a) * poisson(lambda, 3 * a - 2);
    CHECK(std::abs(poisson_diff_pmf(1.0).at(2) - p2) <= 1e-14);

    CHECK(poisson_diff_pmf(1.0, 40).lo == -40);
    CHECK_THROWS_AS(poisson_diff_pmf(0.0), ParameterError);
}

TEST_CASE("balanced Poisson difference pmf") {
    for (double c : {0.5, 1.0, 2.0}) {
        const PoissonDiffTable t = balanced_poisson_diff_pmf(c);
        CHECK(std::abs(t.total() - 1.0) <= 1e-10);
        CHECK(std::abs(t.mean()) <= 1e-12);
        CHECK(std::abs(t.variance() - 2.0 * c * c) <= 1e-8);  // 4 * 2 * c^2 / 4
        CHECK(t.at(1) == 0.0);
        CHECK(t.at(-2) == t.at(2));
    }
    // P(2P' - 2P'' = 0) = exp(-2 lambda) I_0(2 lambda)
    const double lambda = 0.25;
    double p0 = 0.0;
    for (int j = 0; j < 100; ++j) p0 += poisson(lambda, j) * poisson(lambda, j);
    CHECK(std::abs(balanced_poisson_diff_pmf(1.0).at(0) - p0) <= 1e-14);
    CHECK_THROWS_AS(balanced_poisson_diff_pmf(-1.0), ParameterError);
}

TEST_CASE("total variation") {
    const PoissonDiffTable t = poisson_diff_pmf(1.0);
    std::vector<long long> all_zero(1000, 0);
    CHECK(total_variation(all_zero, t) == doctest::Approx(1.0 - t.at(0)));
    std::vector<long long> far(10, 1000000);
    CHECK(total_variation(far, t) == doctest::Approx(1.0));
}

TEST_CASE("moment summary") {
    std::vector<double> c(50, 3.0);
    const auto m = moment_summary(c);
    CHECK(m.variance == 0.0);
    CHECK(m.mean == 3.0);
    std::vector<double> pm;
    for (int i = 0; i < 500; ++i) pm.insert(pm.end(), {-1.0, 1.0});
    const auto mp = moment_summary(pm);
    CHECK(mp.mean == 0.0);
    CHECK(mp.variance == doctest::Approx(1000.0 / 999.0));
    CHECK_THROWS_AS(moment_summary(std::vector<double>{1.0}), InsufficientDataError);

    std::mt19937_64 rng(54);
    std::vector<double> r(1000000);
    for (double& x : r) x = (rng() & 1) ? 1.0 : -1.0;
    const double v = moment_summary(r).variance;
    CHECK(v >= 0.99);
    CHECK(v <= 1.01);
}

TEST_CASE("variance identity targets") {
    std::mt19937_64 rng(55);
    std::normal_distribution<double> g;
    std::vector<double> q(20000);
    for (double& x : q) x = std::sqrt(124.0) * g(rng);
    CHECK(variance_identity_check(q, 32, 16).pass);
    for (double& x : q) x = 6.0 * g(rng);
    CHECK(variance_identity_check(q, 10, 5).pass);
    for (double& x : q) x = 7.0 * g(rng);
    CHECK_FALSE(variance_identity_check(q, 10, 5).pass);
    std::vector<double> zeros(1000, 0.0);
    CHECK(variance_identity_check(zeros, 1, 7).pass);
    zeros[3] = 1e-3;
    CHECK_FALSE(variance_identity_check(zeros, 1, 7).pass);
    CHECK_THROWS_AS(variance_identity_check(std::vector<double>(10, 0.0), 5, 5), InsufficientDataError);
}

TEST_CASE("verdicts, histograms and qq pairs") {
    const TestVerdict v = make_verdict("x", 0.2, 0.2, 10);
    CHECK(v.pass);
    CHECK_FALSE(make_verdict("x", 0.3, 0.2, 10).pass);

    std::mt19937_64 rng(56);
    std::normal_distribution<double> g;
    std::vector<double> x(10000);
    for (double& t : x) t = g(rng);
    std::sort(x.begin(), x.end());
    const Histogram h = make_histogram(x);
    CHECK(h.counts.size() >= kMinHistogramBins);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == x.size());
    std::vector<double> few = {1, 2, 3};
    CHECK(make_histogram(few).counts.size() == kMinHistogramBins);

    const auto qq = qq_pairs(x, normal_quantile, 100);
    CHECK(qq.size() == 100);
    for (const auto& [emp, ref] : qq) CHECK(std::abs(emp - ref) < 0.15);
}

TEST_CASE("limit law validation") {
    CHECK_THROWS_AS(LimitLaw::normal(0.0), ParameterError);
    CHECK_THROWS_AS(LimitLaw::poisson_diff(-1.0), ParameterError);
    CHECK_THROWS_AS(LimitLaw::stable_law({1.0, 1.0}), ParameterError);
    CHECK(LimitLaw::normal(2.25).describe() == "normal(var=2.25)");
}

}
