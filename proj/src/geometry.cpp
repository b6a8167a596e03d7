#include "hdwalk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hdwalk/errors.hpp"

namespace hdwalk {

namespace {

void check_unit_time(double t, const char* who) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError(std::string(who) + ": time " + std::to_string(t) + " outside [0, 1]");
}

// Columns 1..m of the root of the anchored Gram matrix, with the anchor at 0.
PointCloud gram_coordinates(const PointCloud& cloud, std::span<const std::size_t> net) {
    const std::size_t m = net.size() - 1;
    PointCloud out(std::max<std::size_t>(m, 1));
    std::vector<double> zero(out.dim(), 0.0);
    out.add(zero);
    if (m == 0) return out;

    const PointCloud sub = cloud.subset(net);
    const GramMatrix root = psd_sqrt(gram_from_cloud(sub, 0));
    std::vector<double> column(m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < m; ++i) column[i] = root(i, j);
        out.add(column);
    }
    return out;
}

std::size_t relative_index(std::size_t i, std::size_t from_size, std::size_t to_size) {
    if (from_size <= 1 || to_size <= 1) return 0;
    const double pos = static_cast<double>(i) * static_cast<double>(to_size - 1) / static_cast<double>(from_size - 1);
    return std::min(to_size - 1, static_cast<std::size_t>(std::llround(pos)));
}

std::vector<std::size_t> greedy_metric_match(const PointCloud& a, const PointCloud& b,
                                             std::span<const std::size_t> net) {
    std::vector<std::size_t> matched;
    matched.reserve(net.size());
    matched.push_back(0);
    for (std::size_t i = 1; i < net.size(); ++i) {
        std::size_t best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < b.size(); ++c) {
            double cost = 0.0;
            for (std::size_t j = 0; j < i && cost < best_cost; ++j) {
                cost = std::max(cost, std::abs(distance(a.point(net[i]), a.point(net[j])) -
                                               distance(b.point(c), b.point(matched[j]))));
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        matched.push_back(best);
    }
    return matched;
}

double covering_radius(const PointCloud& cloud, std::span<const std::size_t> centers) {
    double radius = 0.0;
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t c : centers) nearest = std::min(nearest, squared_distance(cloud.point(p), cloud.point(c)));
        radius = std::max(radius, nearest);
    }
    return std::sqrt(radius);
}

}  // namespace

double spiral_metric(double s, double t) {
    check_unit_time(s, "spiral_metric");
    check_unit_time(t, "spiral_metric");
    return std::sqrt(std::abs(t - s));
}

VectorD spiral_embedding(double t, std::size_t terms) {
    check_unit_time(t, "spiral_embedding");
    if (terms == 0) throw ParameterError("spiral_embedding: need at least one term");
    const double pi = std::numbers::pi;
    const double lead = 2.0 * std::numbers::sqrt2 / pi;
    VectorD w(terms);
    for (std::size_t k = 1; k <= terms; ++k) {
        const double kk = static_cast<double>(k);
        w[k - 1] = lead * std::sin(pi * (kk - 0.5) * t) / (2.0 * kk - 1.0);
    }
    return w;
}

void SpiralRef::validate() const {
    if (truncation_terms == 0) throw ParameterError("SpiralRef: truncation_terms must be at least 1");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        check_unit_time(grid[i], "SpiralRef");
        if (i > 0 && grid[i] < grid[i - 1]) throw ParameterError("SpiralRef: grid must be sorted");
    }
}

PointCloud SpiralRef::embed() const {
    validate();
    PointCloud cloud(truncation_terms, "spiral");
    cloud.reserve(grid.size());
    for (double t : grid) cloud.add(spiral_embedding(t, truncation_terms));
    return cloud;
}

std::vector<double> uniform_times(std::size_t grid_size) {
    if (grid_size == 0) throw ParameterError("uniform_times: grid_size must be at least 1");
    std::vector<double> t(grid_size + 1);
    for (std::size_t j = 0; j <= grid_size; ++j) t[j] = static_cast<double>(j) / static_cast<double>(grid_size);
    return t;
}

double spiral_distortion(const PointCloud& points, std::span<const double> times) {
    if (points.size() != times.size())
        throw StructuralError("spiral_distortion: " + std::to_string(points.size()) + " points but " +
                              std::to_string(times.size()) + " times");
    double worst = 0.0;
    for (std::size_t j = 1; j < points.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double gap = std::sqrt(std::abs(times[j] - times[i]));
            worst = std::max(worst, std::abs(distance(points.point(j), points.point(i)) - gap));
        }
    }
    return worst;
}

std::vector<double> snapshot_times(const WalkPath& path) {
    std::vector<double> t(path.grid.size());
    const double nn = path.n > 0 ? static_cast<double>(path.n) : 1.0;
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = static_cast<double>(path.grid[j]) / nn;
    return t;
}

double path_distortion(const WalkPath& path) {
    if (!path.snapshots || path.snapshots->size() < 2)
        throw ContractError("path_distortion: path needs at least two snapshots");
    return spiral_distortion(*path.snapshots, snapshot_times(path));
}

PointCloud brownian_cloud(std::size_t d, std::size_t grid_size, RandomStream& stream) {
    if (d == 0 || grid_size == 0) throw ParameterError("brownian_cloud: d and grid_size must be positive");
    const double step_sd = std::sqrt(1.0 / static_cast<double>(grid_size)) / std::sqrt(static_cast<double>(d));
    PointCloud cloud(d, "brownian");
    cloud.reserve(grid_size + 1);
    std::vector<double> b(d, 0.0);
    cloud.add(b);
    for (std::size_t j = 0; j < grid_size; ++j) {
        for (double& x : b) x += step_sd * stream.gaussian();
        cloud.add(b);
    }
    return cloud;
}

double directed_hausdorff(const PointCloud& from, const PointCloud& to) {
    if (from.dim() != to.dim())
        throw StructuralError("hausdorff_distance: dimensions " + std::to_string(from.dim()) + " and " +
                              std::to_string(to.dim()) + " differ");
    if (from.empty() || to.empty()) throw ContractError("hausdorff_distance: empty cloud");
    double worst = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < to.size() && nearest > worst; ++j)
            nearest = std::min(nearest, squared_distance(from.point(i), to.point(j)));
        worst = std::max(worst, nearest);
    }
    return std::sqrt(worst);
}

double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

EpsNet build_eps_net(const PointCloud& a, double eps) {
    if (!(eps > 0.0)) throw ParameterError("eps_net: eps must be positive");
    if (a.empty()) throw ContractError("eps_net: empty cloud");
    EpsNet net;
    std::vector<double> gap(a.size(), std::numeric_limits<double>::infinity());
    std::size_t next = 0;
    for (;;) {
        net.indices.push_back(next);
        const auto centre = a.point(next);
        double far = -1.0;
        std::size_t far_index = 0;
        for (std::size_t p = 0; p < a.size(); ++p) {
            gap[p] = std::min(gap[p], distance(a.point(p), centre));
            if (gap[p] > far) {
                far = gap[p];
                far_index = p;
            }
        }
        net.covering_radius = far;
        if (far <= eps) break;
        next = far_index;
    }
    return net;
}

std::vector<std::size_t> eps_net(const PointCloud& a, double eps) { return build_eps_net(a, eps).indices; }

AlignmentResult align_and_hausdorff(const PointCloud& a, const PointCloud& b, double eps,
                                    Correspondence correspondence) {
    if (a.empty() || b.empty()) throw ContractError("align_and_hausdorff: empty cloud");
    const EpsNet net = build_eps_net(a, eps);

    AlignmentResult result;
    result.eps_used = eps;
    result.anchor_indices = net.indices;
    if (correspondence == Correspondence::ByIndex) {
        for (std::size_t i : net.indices) result.matched_indices.push_back(relative_index(i, a.size(), b.size()));
    } else {
        result.matched_indices = greedy_metric_match(a, b, net.indices);
    }

    const PointCloud aligned_a = gram_coordinates(a, result.anchor_indices);
    const PointCloud aligned_b = gram_coordinates(b, result.matched_indices);
    result.net_hausdorff = hausdorff_distance(aligned_a, aligned_b);
    result.covering_a = net.covering_radius;
    result.covering_b = covering_radius(b, result.matched_indices);
    result.hausdorff_upper = result.net_hausdorff + result.covering_a + result.covering_b;
    return result;
}

}  // namespace hdwalk
