#pragma once

// Metric geometry of walk paths: the Wiener spiral reference, distortion
// bounds, Hausdorff distances, epsilon-nets and Gram-root alignment.

#include <cstddef>
#include <span>
#include <vector>

#include "hdwalk/linalg.hpp"
#include "hdwalk/sampling.hpp"
#include "hdwalk/walk.hpp"

namespace hdwalk {

/// sqrt(|t - s|) on [0, 1]; DomainError outside.
double spiral_metric(double s, double t);

/// Truncated isometric realization of the spiral in R^K:
/// w_t = (2 sqrt 2 / pi) sum_{k=1}^K sin(pi (k - 1/2) t) / (2k - 1) e_k.
VectorD spiral_embedding(double t, std::size_t terms);

inline constexpr std::size_t kDefaultSpiralTerms = 10000;

/// Documented bound on | ||w_t - w_s||^2 - |t - s| | for the K-term series.
/// The constant is checked by the truncation sweep in the tests.
inline double spiral_truncation_bound(std::size_t terms) { return 1.0 / static_cast<double>(terms); }

struct SpiralRef {
    std::size_t truncation_terms = kDefaultSpiralTerms;
    std::vector<double> grid;

    void validate() const;
    PointCloud embed() const;
};

/// Uniform times j / grid_size, j = 0..grid_size.
std::vector<double> uniform_times(std::size_t grid_size);

/// max over i < j of | ||p_j - p_i|| - sqrt(t_j - t_i) | for points tagged with times.
double spiral_distortion(const PointCloud& points, std::span<const double> times);

/// Distortion of the snapshot map k_j / n -> S_{k_j} / sqrt(n). Twice this
/// bounds the Gromov-Hausdorff distance from the snapshots to the spiral grid.
double path_distortion(const WalkPath& path);

/// Times k_j / n of the snapshot grid.
std::vector<double> snapshot_times(const WalkPath& path);

/// (1/sqrt d)(B^1, ..., B^d) at t = j / grid_size for d independent standard
/// Brownian motions built from Gaussian increments.
PointCloud brownian_cloud(std::size_t d, std::size_t grid_size, RandomStream& stream);

double directed_hausdorff(const PointCloud& from, const PointCloud& to);
double hausdorff_distance(const PointCloud& a, const PointCloud& b);

struct EpsNet {
    std::vector<std::size_t> indices;  // selection order; indices[0] == 0
    double covering_radius = 0.0;      // max distance from a point to the net
};

EpsNet build_eps_net(const PointCloud& a, double eps);
std::vector<std::size_t> eps_net(const PointCloud& a, double eps);

enum class Correspondence {
    ByIndex,       // net point i of A <-> point of B at the same relative index
    GreedyMetric,  // each net point takes the B point best matching distances to earlier pairs
};

struct AlignmentResult {
    double hausdorff_upper = 0.0;
    std::vector<std::size_t> anchor_indices;   // net of A
    std::vector<std::size_t> matched_indices;  // partners in B
    double eps_used = 0.0;
    double net_hausdorff = 0.0;
    double covering_a = 0.0;
    double covering_b = 0.0;
};

/// Upper estimate of the Hausdorff distance between A and B up to isometry.
/// The matched nets are anchored at their first point, realized isometrically
/// in common coordinates as the columns of their Gram square roots, and
/// compared with the Hausdorff distance; the covering radii of both nets are
/// added on top.
AlignmentResult align_and_hausdorff(const PointCloud& a, const PointCloud& b, double eps,
                                    Correspondence correspondence = Correspondence::ByIndex);

}  // namespace hdwalk
