#pragma once

// Streaming simulation of S_k = X_1 + ... + X_k with the exact split
// ||S_k||^2 = T_k + Q_k into the diagonal sum T_k = sum ||X_i||^2 and the
// off-diagonal martingale Q_k = 2 sum <X_i, S_{i-1}>.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hdwalk/linalg.hpp"
#include "hdwalk/models.hpp"
#include "hdwalk/sampling.hpp"

namespace hdwalk {

struct WalkOptions {
    std::size_t grid_size = 64;
    bool keep_snapshots = true;
    bool keep_traces = true;
    std::size_t memory_budget_bytes = std::size_t{1} << 30;
};

struct OccupancyStats {
    std::size_t mu1 = 0;     // boxes with exactly one ball
    std::size_t mu2 = 0;     // exactly two
    std::size_t mu_ge3 = 0;  // three or more
};

struct WalkPath {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<std::size_t> grid;         // 0 = k_0 < ... < k_m = n
    std::optional<PointCloud> snapshots;   // S_{k_j} / sqrt(n)
    std::vector<double> norm_sq_trace;     // ||S_k||^2, k = 0..n (empty unless traces kept)
    std::vector<double> t_trace;
    std::vector<double> q_trace;
};

struct WalkSummary {
    double norm_sq_final = 0.0;
    double t_final = 0.0;
    double q_final = 0.0;
    double sup_deviation = 0.0;      // max_k | ||S_k||^2 / n - k / n |
    double max_step_norm = 0.0;      // max_i ||X_i||
    double conditional_variance = 0.0;  // (1/d) sum_{i=1}^{n-1} ||S_i||^2
    /// Largest |direct ||S_k||^2 - T_k - Q_k| / max(1, T_k) over snapshot steps.
    double max_decomposition_defect = 0.0;
    std::optional<OccupancyStats> occupancy;
};

struct WalkResult {
    WalkPath path;
    WalkSummary summary;
};

inline constexpr double kDecompositionTolerance = 1e-9;

/// Snapshot steps floor(j n / grid_size), j = 0..grid_size, deduplicated.
std::vector<std::size_t> snapshot_grid(std::size_t n, std::size_t grid_size);

WalkResult run_walk(const ModelSpec& model, std::size_t n, std::size_t d, const WalkOptions& options,
                    RandomStream& stream);

/// Same engine fed with explicit increments (all dense of dimension d, or sparse).
WalkResult run_walk_from_increments(std::span<const Increment> increments, std::size_t d,
                                    const WalkOptions& options);

/// max over k = 0..n of | norm_sq_trace[k] / n - k / n |; requires traces.
double sup_norm_deviation(const WalkPath& path);

enum class DiagonalScale {
    SqrtN,             // finite-variance squared norms: sqrt(n)
    StableRadial,      // rotation-invariant / axis models with Pareto R^2: n^{1/alpha} sigma(alpha)
    StableComponents,  // i.i.d. Pareto components: d^{-1} (n d)^{1/alpha} sigma(alpha)
};

struct DiagonalNormalization {
    DiagonalScale kind = DiagonalScale::SqrtN;
    double alpha = 0.0;
};

struct NormalizedStats {
    double clt_stat = 0.0;  // (||S_n||^2 - n) / sqrt(2 n^2 / d)
    double t_stat = 0.0;    // (T_n - n) / tau
    double q_stat = 0.0;    // Q_n / sqrt(2 n^2 / d)
};

double diagonal_scale(const DiagonalNormalization& norm, std::size_t n, std::size_t d);
double off_diagonal_scale(std::size_t n, std::size_t d);

NormalizedStats normalized_statistics(const WalkSummary& summary, std::size_t n, std::size_t d,
                                      const DiagonalNormalization& norm);

}  // namespace hdwalk
