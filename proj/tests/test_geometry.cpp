#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "hdwalk/errors.hpp"
#include "hdwalk/geometry.hpp"

using namespace hdwalk;

namespace {

PointCloud random_cloud(std::size_t count, std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    PointCloud c(dim);
    std::vector<double> p(dim);
    for (std::size_t i = 0; i < count; ++i) {
        for (double& x : p) x = g(rng);
        c.add(p);
    }
    return c;
}

double brute_hausdorff(const PointCloud& a, const PointCloud& b) {
    auto directed = [](const PointCloud& x, const PointCloud& y) {
        double worst = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double best = INFINITY;
            for (std::size_t j = 0; j < y.size(); ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < x.dim(); ++k) s += (x.point(i)[k] - y.point(j)[k]) * (x.point(i)[k] - y.point(j)[k]);
                best = std::min(best, std::sqrt(s));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

// Orthogonal change of coordinates: random permutation with sign flips, plus a translation.
PointCloud signed_permutation(const PointCloud& a, std::mt19937_64& rng, double shift_scale) {
    std::vector<std::size_t> perm(a.dim());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::normal_distribution<double> g;
    std::vector<double> sign(a.dim()), shift(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        sign[i] = (rng() & 1) ? 1.0 : -1.0;
        shift[i] = shift_scale * g(rng);
    }
    PointCloud b(a.dim());
    std::vector<double> p(a.dim());
    for (std::size_t k = 0; k < a.size(); ++k) {
        for (std::size_t i = 0; i < a.dim(); ++i) p[i] = sign[i] * a.point(k)[perm[i]] + shift[i];
        b.add(p);
    }
    return b;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("spiral metric") {
    CHECK(spiral_metric(0.3, 0.3) == 0.0);
    CHECK(spiral_metric(0.0, 1.0) == 1.0);
    CHECK(spiral_metric(0.25, 0.5) == 0.5);
    CHECK_THROWS_AS(spiral_metric(-0.1, 0.5), DomainError);
    CHECK_THROWS_AS(spiral_metric(0.1, 1.5), DomainError);
}

TEST_CASE("spiral embedding") {
    const VectorD w0 = spiral_embedding(0.0, 50);
    CHECK(std::all_of(w0.begin(), w0.end(), [](double x) { return x == 0.0; }));
    CHECK(std::abs(squared_norm(spiral_embedding(1.0, 10000)) - 1.0) <= 1e-3);
    CHECK_THROWS_AS(spiral_embedding(1.2, 10), DomainError);
}

TEST_CASE("spiral truncation sweep stays under the documented bound") {
    const std::vector<double> t = uniform_times(10);
    for (std::size_t k : {100u, 1000u, 10000u}) {
        const PointCloud c = SpiralRef{k, t}.embed();
        double worst = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j)
                worst = std::max(worst, std::abs(squared_distance(c.point(i), c.point(j)) - std::abs(t[i] - t[j])));
        CAPTURE(k);
        CHECK(worst <= spiral_truncation_bound(k));
        // The bound is not loose by more than a factor of 20.
        CHECK(worst >= spiral_truncation_bound(k) / 20);
    }
    CHECK_THROWS_AS((SpiralRef{10, {0.5, 0.2}}.validate()), ParameterError);
}

TEST_CASE("distortion of an orthonormal-step walk is zero") {
    const std::size_t n = 16;
    std::vector<Increment> xs;
    for (std::size_t i = 0; i < n; ++i) xs.emplace_back(SparseStep{i, 1.0});
    WalkOptions opt;
    opt.grid_size = n;
    const WalkResult r = run_walk_from_increments(xs, n, opt);
    CHECK(path_distortion(r.path) <= 1e-15);
}

TEST_CASE("distortion equals a brute-force pair loop and is rotation invariant") {
    std::mt19937_64 rng(41);
    RandomStream s = derive_stream({41, 0});
    WalkOptions opt;
    opt.grid_size = 8;
    const WalkResult r = run_walk(ModelSpec::iid(ComponentLaw::gaussian()), 40, 10, opt, s);
    const auto& snaps = *r.path.snapshots;
    double brute = 0.0;
    for (std::size_t i = 0; i < snaps.size(); ++i)
        for (std::size_t j = i + 1; j < snaps.size(); ++j) {
            double s2 = 0.0;
            for (std::size_t k = 0; k < snaps.dim(); ++k) s2 += std::pow(snaps.point(j)[k] - snaps.point(i)[k], 2);
            brute = std::max(brute, std::abs(std::sqrt(s2) - std::sqrt((r.path.grid[j] - r.path.grid[i]) / 40.0)));
        }
    CHECK(std::abs(path_distortion(r.path) - brute) <= 1e-12);

    WalkPath rotated = r.path;
    rotated.snapshots = signed_permutation(snaps, rng, 0.0);
    CHECK(path_distortion(rotated) == doctest::Approx(path_distortion(r.path)).epsilon(1e-12));

    WalkPath short_path = r.path;
    short_path.snapshots = snaps.subset(std::vector<std::size_t>{0});
    CHECK_THROWS_AS(path_distortion(short_path), ContractError);
}

TEST_CASE("hausdorff distance") {
    std::mt19937_64 rng(42);
    const PointCloud a = random_cloud(20, 3, rng);
    CHECK(hausdorff_distance(a, a) == 0.0);
    const auto z = PointCloud::from_rows({{0, 0}});
    const auto zv = PointCloud::from_rows({{0, 0}, {3, 4}});
    CHECK(hausdorff_distance(z, zv) == doctest::Approx(5.0));
    for (int t = 0; t < 20; ++t) {
        const PointCloud x = random_cloud(20, 4, rng);
        const PointCloud y = random_cloud(20, 4, rng);
        const PointCloud w = random_cloud(15, 4, rng);
        CHECK(std::abs(hausdorff_distance(x, y) - brute_hausdorff(x, y)) <= 1e-12);
        CHECK(hausdorff_distance(x, y) == hausdorff_distance(y, x));
        CHECK(hausdorff_distance(x, w) <= hausdorff_distance(x, y) + hausdorff_distance(y, w) + 1e-12);
    }
    CHECK_THROWS_AS(hausdorff_distance(z, random_cloud(2, 3, rng)), StructuralError);
}

TEST_CASE("eps nets") {
    std::mt19937_64 rng(43);
    const PointCloud a = random_cloud(30, 3, rng);
    CHECK(eps_net(a, a.diameter() * 1.01) == std::vector<std::size_t>{0});
    std::vector<std::size_t> all = eps_net(a, 1e-9);
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expect(30);
    std::iota(expect.begin(), expect.end(), 0);
    CHECK(all == expect);

    const auto line = PointCloud::from_rows({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    const auto net = eps_net(line, 1.5);
    CHECK(net.size() == 2);
    CHECK(net == std::vector<std::size_t>{0, 3});
    for (std::size_t p = 0; p < line.size(); ++p) {
        double nearest = INFINITY;
        for (std::size_t c : net) nearest = std::min(nearest, distance(line.point(p), line.point(c)));
        CHECK(nearest <= 1.5);
    }
    CHECK_THROWS_AS(eps_net(line, 0.0), ParameterError);
}

TEST_CASE("alignment of exact isometric copies") {
    std::mt19937_64 rng(44);
    for (auto corr : {Correspondence::ByIndex, Correspondence::GreedyMetric}) {
        const PointCloud a = random_cloud(25, 6, rng);
        const PointCloud b = signed_permutation(a, rng, 5.0);
        const AlignmentResult r = align_and_hausdorff(a, b, 1e-9, corr);
        CHECK(r.hausdorff_upper <= 1e-6 * a.diameter());
        CHECK(r.anchor_indices.size() == a.size());
    }
    const PointCloud a = random_cloud(12, 4, rng);
    CHECK(align_and_hausdorff(a, a, 1e-9).hausdorff_upper <= 1e-9);
}

TEST_CASE("alignment of two-point sets is the norm difference") {
    const auto a = PointCloud::from_rows({{0, 0, 0}, {1, 2, 2}});
    const auto b = PointCloud::from_rows({{0, 0}, {4, 0}});
    CHECK(align_and_hausdorff(a, b, 1e-9).hausdorff_upper == doctest::Approx(1.0).epsilon(1e-9));
    const auto single_a = PointCloud::from_rows({{1, 1}});
    const auto single_b = PointCloud::from_rows({{5, 5, 5}});
    CHECK(align_and_hausdorff(single_a, single_b, 0.1).hausdorff_upper == 0.0);
    const auto same_a = PointCloud::from_rows({{1, 1}, {1, 1}});
    CHECK(align_and_hausdorff(same_a, single_b, 0.1).hausdorff_upper == 0.0);
}

TEST_CASE("alignment is symmetric for matched nets") {
    std::mt19937_64 rng(45);
    const PointCloud a = random_cloud(15, 20, rng);
    const PointCloud b = random_cloud(15, 30, rng);
    const double ab = align_and_hausdorff(a, b, 1e-12).hausdorff_upper;
    const double ba = align_and_hausdorff(b, a, 1e-12).hausdorff_upper;
    CHECK(std::abs(ab - ba) <= 1e-9);

    // Rank-deficient Gram matrices: rounding in the null space enters through
    // the square root, so agreement is only at the sqrt(machine epsilon) level.
    const PointCloud c = random_cloud(15, 5, rng);
    const PointCloud e = random_cloud(15, 8, rng);
    CHECK(std::abs(align_and_hausdorff(c, e, 1e-12).hausdorff_upper - align_and_hausdorff(e, c, 1e-12).hausdorff_upper) <= 1e-6);
}

TEST_CASE("alignment to the spiral on a walk path is finite") {
    RandomStream s = derive_stream({46, 0});
    WalkOptions opt;
    opt.grid_size = 16;
    const WalkResult r = run_walk(ModelSpec::iid(ComponentLaw::rademacher()), 256, 256, opt, s);
    const PointCloud spiral = SpiralRef{2000, snapshot_times(r.path)}.embed();
    const AlignmentResult al = align_and_hausdorff(*r.path.snapshots, spiral, 1e-12);
    CHECK(std::isfinite(al.hausdorff_upper));
    CHECK(al.hausdorff_upper >= 0.0);
    // Aligned distance never exceeds the trivial bound from the distortion.
    CHECK(al.hausdorff_upper <= 2.0);
}

TEST_CASE("brownian cloud distortion shrinks with dimension") {
    auto median_distortion = [](std::size_t d) {
        std::vector<double> v;
        for (std::uint64_t r = 0; r < 32; ++r) {
            RandomStream s = derive_stream({47, r + 1000 * d});
            v.push_back(spiral_distortion(brownian_cloud(d, 64, s), uniform_times(64)));
        }
        std::sort(v.begin(), v.end());
        return v[16];
    };
    CHECK(median_distortion(1024) < median_distortion(64));
}

}
