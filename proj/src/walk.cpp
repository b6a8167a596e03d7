#include "hdwalk/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "hdwalk/errors.hpp"

namespace hdwalk {

std::vector<std::size_t> snapshot_grid(std::size_t n, std::size_t grid_size) {
    if (grid_size == 0) throw ParameterError("snapshot grid: grid_size must be at least 1");
    std::vector<std::size_t> grid;
    grid.reserve(grid_size + 1);
    for (std::size_t j = 0; j <= grid_size; ++j) {
        const auto k = static_cast<std::size_t>((static_cast<unsigned __int128>(j) * n) / grid_size);
        if (grid.empty() || k != grid.back()) grid.push_back(k);
    }
    return grid;
}

namespace {

struct Box {
    std::size_t count = 0;
    double value = 0.0;
};

class WalkAccumulator {
public:
    WalkAccumulator(std::size_t n, std::size_t d, const WalkOptions& options, bool sparse)
        : n_(n), d_(d), options_(options), sparse_(sparse) {
        if (d == 0) throw ParameterError("run_walk: dimension must be at least 1");
        path_.n = n;
        path_.d = d;
        path_.grid = snapshot_grid(n, options.grid_size);

        const bool dense_state = !sparse || options.keep_snapshots;
        std::size_t bytes = dense_state ? d * sizeof(double) : 0;
        if (options.keep_snapshots) bytes += path_.grid.size() * d * sizeof(double);
        if (options.keep_traces) bytes += 3 * (n + 1) * sizeof(double);
        if (sparse) bytes += std::min(n, d) * (sizeof(Box) + 2 * sizeof(std::size_t));
        if (bytes > options.memory_budget_bytes) {
            throw CapacityError("run_walk: n = " + std::to_string(n) + ", d = " + std::to_string(d) + " needs " +
                                std::to_string(bytes) + " bytes, budget is " +
                                std::to_string(options.memory_budget_bytes));
        }

        if (dense_state) state_.assign(d, 0.0);
        if (sparse) boxes_.reserve(std::min(n, d));
        if (options.keep_snapshots) {
            path_.snapshots.emplace(d, "walk");
            path_.snapshots->reserve(path_.grid.size());
        }
        if (options.keep_traces) {
            path_.norm_sq_trace.reserve(n + 1);
            path_.t_trace.reserve(n + 1);
            path_.q_trace.reserve(n + 1);
        }
        scale_ = n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0;
        record_step();
    }

    void push_dense(std::span<const double> x, double norm_sq_x) {
        const double y = dot(x, state_);
        for (std::size_t i = 0; i < d_; ++i) state_[i] += x[i];
        advance(y, norm_sq_x);
    }

    void push_sparse(const SparseStep& step) {
        if (step.axis >= d_) throw StructuralError("run_walk: sparse increment axis out of range");
        Box& box = boxes_[step.axis];
        const double y = step.value * box.value;
        box.value += step.value;
        ++box.count;
        if (!state_.empty()) state_[step.axis] += step.value;
        advance(y, step.value * step.value);
    }

    WalkResult finish() {
        if (k_ != n_) throw StructuralError("run_walk: walk finished after " + std::to_string(k_) + " of " +
                                            std::to_string(n_) + " steps");
        summary_.norm_sq_final = norm_sq_;
        summary_.t_final = t_;
        summary_.q_final = q_;
        summary_.max_step_norm = std::sqrt(max_step_sq_);
        summary_.conditional_variance = cond_var_sum_ / static_cast<double>(d_);
        if (sparse_) {
            OccupancyStats occ;
            for (const auto& [axis, box] : boxes_) {
                if (box.count == 1) ++occ.mu1;
                else if (box.count == 2) ++occ.mu2;
                else if (box.count >= 3) ++occ.mu_ge3;
            }
            summary_.occupancy = occ;
        }
        return {std::move(path_), summary_};
    }

private:
    void advance(double y, double norm_sq_x) {
        ++k_;
        q_ += 2.0 * y;
        t_ += norm_sq_x;
        norm_sq_ += 2.0 * y + norm_sq_x;
        max_step_sq_ = std::max(max_step_sq_, norm_sq_x);
        if (k_ < n_) cond_var_sum_ += norm_sq_;
        if (std::abs(norm_sq_ - t_ - q_) > kDecompositionTolerance * std::max(1.0, t_) || !std::isfinite(norm_sq_)) {
            throw Error("run_walk: decomposition ||S||^2 = T + Q violated at step " + std::to_string(k_));
        }
        record_step();
    }

    void record_step() {
        if (n_ > 0) {
            const double nn = static_cast<double>(n_);
            summary_.sup_deviation =
                std::max(summary_.sup_deviation, std::abs(norm_sq_ / nn - static_cast<double>(k_) / nn));
        }
        if (options_.keep_traces) {
            path_.norm_sq_trace.push_back(norm_sq_);
            path_.t_trace.push_back(t_);
            path_.q_trace.push_back(q_);
        }
        if (next_grid_ < path_.grid.size() && path_.grid[next_grid_] == k_) {
            ++next_grid_;
            check_direct_norm();
            if (options_.keep_snapshots) {
                path_.snapshots->add(state_);
                auto p = path_.snapshots->point(path_.snapshots->size() - 1);
                for (double& v : p) v *= scale_;
            }
        }
    }

    void check_direct_norm() {
        double direct = 0.0;
        if (!state_.empty()) {
            direct = squared_norm(std::span<const double>(state_));
        } else {
            for (const auto& [axis, box] : boxes_) direct += box.value * box.value;
        }
        const double defect = std::abs(direct - t_ - q_) / std::max(1.0, t_);
        summary_.max_decomposition_defect = std::max(summary_.max_decomposition_defect, defect);
    }

    std::size_t n_, d_;
    WalkOptions options_;
    bool sparse_;
    double scale_ = 1.0;

    std::vector<double> state_;
    std::unordered_map<std::size_t, Box> boxes_;

    std::size_t k_ = 0;
    std::size_t next_grid_ = 0;
    double norm_sq_ = 0.0, t_ = 0.0, q_ = 0.0;
    double max_step_sq_ = 0.0;
    double cond_var_sum_ = 0.0;

    WalkPath path_;
    WalkSummary summary_;
};

}  // namespace

WalkResult run_walk(const ModelSpec& model, std::size_t n, std::size_t d, const WalkOptions& options,
                    RandomStream& stream) {
    IncrementSampler sampler(model, d);
    WalkAccumulator acc(n, d, options, model.sparse());
    if (model.sparse()) {
        for (std::size_t k = 0; k < n; ++k) acc.push_sparse(sampler.draw_sparse(stream));
    } else {
        VectorD x(d);
        for (std::size_t k = 0; k < n; ++k) {
            const double norm_sq_x = sampler.draw_dense(x, stream);
            acc.push_dense(x, norm_sq_x);
        }
    }
    return acc.finish();
}

WalkResult run_walk_from_increments(std::span<const Increment> increments, std::size_t d,
                                    const WalkOptions& options) {
    const bool sparse = !increments.empty() && std::holds_alternative<SparseStep>(increments.front());
    WalkAccumulator acc(increments.size(), d, options, sparse);
    for (const Increment& inc : increments) {
        if (sparse != std::holds_alternative<SparseStep>(inc))
            throw StructuralError("run_walk: increments mix dense and sparse forms");
        if (sparse) {
            acc.push_sparse(std::get<SparseStep>(inc));
        } else {
            const auto& x = std::get<VectorD>(inc);
            if (x.size() != d) throw StructuralError("run_walk: increment of wrong dimension");
            acc.push_dense(x, squared_norm(std::span<const double>(x)));
        }
    }
    return acc.finish();
}

double sup_norm_deviation(const WalkPath& path) {
    if (path.norm_sq_trace.size() != path.n + 1)
        throw StructuralError("sup_norm_deviation: path was simulated without traces");
    if (path.n == 0) return 0.0;
    const double nn = static_cast<double>(path.n);
    double best = 0.0;
    for (std::size_t k = 0; k <= path.n; ++k)
        best = std::max(best, std::abs(path.norm_sq_trace[k] / nn - static_cast<double>(k) / nn));
    return best;
}

double off_diagonal_scale(std::size_t n, std::size_t d) {
    const double nn = static_cast<double>(n);
    return std::sqrt(2.0 * nn * nn / static_cast<double>(d));
}

double diagonal_scale(const DiagonalNormalization& norm, std::size_t n, std::size_t d) {
    const double nn = static_cast<double>(n);
    switch (norm.kind) {
        case DiagonalScale::SqrtN:
            return std::sqrt(nn);
        case DiagonalScale::StableRadial:
            return std::pow(nn, 1.0 / norm.alpha) * stable_scale_for_pareto(norm.alpha);
        case DiagonalScale::StableComponents: {
            const double dd = static_cast<double>(d);
            return std::pow(nn * dd, 1.0 / norm.alpha) / dd * stable_scale_for_pareto(norm.alpha);
        }
    }
    return 1.0;
}

NormalizedStats normalized_statistics(const WalkSummary& summary, std::size_t n, std::size_t d,
                                      const DiagonalNormalization& norm) {
    if (n < 2) throw ParameterError("normalized_statistics: normalization undefined for n < 2");
    if (d == 0) throw ParameterError("normalized_statistics: dimension must be at least 1");
    const double nn = static_cast<double>(n);
    const double q_scale = off_diagonal_scale(n, d);
    NormalizedStats out;
    out.clt_stat = (summary.norm_sq_final - nn) / q_scale;
    out.q_stat = summary.q_final / q_scale;
    out.t_stat = (summary.t_final - nn) / diagonal_scale(norm, n, d);
    return out;
}

}  // namespace hdwalk
