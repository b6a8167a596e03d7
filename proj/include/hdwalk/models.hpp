#pragma once

// Increment laws for the three walk models: i.i.d. components, rotation
// invariant directions, and jumps along a uniformly chosen coordinate axis.

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hdwalk/linalg.hpp"
#include "hdwalk/sampling.hpp"

namespace hdwalk {

enum class ComponentKind { Rademacher, StandardGaussian, SymmetricParetoSquared };

/// Law of one coordinate xi for i.i.d.-component increments: E xi = 0, E xi^2 = 1.
struct ComponentLaw {
    ComponentKind kind = ComponentKind::Rademacher;
    double alpha = 0.0;  // SymmetricParetoSquared only: xi = s * sqrt(W), W ~ ParetoSquared(alpha)

    static ComponentLaw rademacher() { return {ComponentKind::Rademacher, 0.0}; }
    static ComponentLaw gaussian() { return {ComponentKind::StandardGaussian, 0.0}; }
    static ComponentLaw symmetric_pareto_squared(double alpha);

    void validate() const;
    bool heavy_tailed() const { return kind == ComponentKind::SymmetricParetoSquared; }
    std::string describe() const;
};

enum class ModelKind { IidComponents, RotInvariant, AxisJumps };

struct ModelSpec {
    ModelKind kind = ModelKind::IidComponents;
    ComponentLaw component;  // IidComponents
    RadialLaw radial;        // RotInvariant, AxisJumps

    static ModelSpec iid(ComponentLaw law);
    static ModelSpec rot_invariant(RadialLaw law);
    /// The radial draw is given a uniform random sign unless the law is already
    /// SymmetricSign, so E R = 0 holds exactly with R^2 distributed as `law`.
    static ModelSpec axis_jumps(RadialLaw law);

    void validate() const;
    bool heavy_tailed() const;
    /// Tail index alpha of the squared-norm increments; 0 when E R^4 < infinity.
    double tail_index() const;
    bool sparse() const { return kind == ModelKind::AxisJumps; }
    std::string describe() const;
};

/// Model 3 increment: value * e_axis.
struct SparseStep {
    std::size_t axis = 0;
    double value = 0.0;
};

using Increment = std::variant<VectorD, SparseStep>;

double inner_product(const Increment& x, std::span<const double> v);
double squared_norm(const Increment& x);

/// Reusable per-worker increment generator. Every entry point consumes the
/// stream identically, so a walk built from `draw()` results matches a walk
/// simulated directly with the same stream.
class IncrementSampler {
public:
    IncrementSampler(ModelSpec model, std::size_t d);

    std::size_t dim() const { return d_; }
    const ModelSpec& model() const { return model_; }

    /// Dense models: fills `out` (size d) and returns ||x||^2.
    double draw_dense(std::span<double> out, RandomStream& stream);
    /// AxisJumps only.
    SparseStep draw_sparse(RandomStream& stream);
    Increment draw(RandomStream& stream);

private:
    ModelSpec model_;
    std::size_t d_;
    double inv_sqrt_d_;
    double pareto_coord_scale_ = 0.0;
    double pareto_exponent_ = 0.0;
};

Increment sample_increment(const ModelSpec& model, std::size_t d, RandomStream& stream);

// ---------------------------------------------------------------------------
// Empirical check of the centering, uncorrelatedness, uniform integrability
// and negligibility conditions.

struct ConditionCheck {
    std::string name;
    double statistic = 0.0;  // worst studentized deviation (or tail mass for UI)
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct ConditionReport {
    std::size_t sample_count = 0;
    std::size_t dim = 0;

    // centering / normalization
    double max_abs_mean_component = 0.0;
    double norm_sq_mean = 0.0;
    double norm_sq_se = 0.0;
    // uncorrelated components
    double max_abs_correlation = 0.0;
    std::size_t pairs_checked = 0;
    // uniform integrability spot check
    std::array<double, 2> tail_levels{10.0, 100.0};
    std::array<double, 2> tail_mass{};
    std::array<double, 2> tail_se{};
    // negligible components
    double max_second_moment = 0.0;
    double target_second_moment = 0.0;

    std::array<ConditionCheck, 4> checks;  // centering, uncorrelated, integrable, negligible
    bool all_pass() const;
};

inline constexpr double kConditionSigmas = 5.0;
/// Largest admissible E[||X||^2; ||X||^2 > 100].
inline constexpr double kTailMassBound = 0.25;
inline constexpr std::size_t kMaxCorrelationPairs = 100;
inline constexpr std::size_t kMaxTrackedCoordinates = 4096;

/// Fills a dense increment of dimension d.
using DenseGenerator = std::function<void(RandomStream&, std::span<double>)>;

ConditionReport check_conditions(const ModelSpec& model, std::size_t d, std::size_t sample_count,
                                 RandomStream& stream);
ConditionReport check_conditions(const DenseGenerator& generator, std::size_t d, std::size_t sample_count,
                                 RandomStream& stream);

}  // namespace hdwalk
