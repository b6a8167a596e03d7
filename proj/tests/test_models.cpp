#include <cmath>
#include <variant>
#include <vector>

#include "doctest.h"
#include "hdwalk/errors.hpp"
#include "hdwalk/models.hpp"

using namespace hdwalk;

namespace {

std::vector<ModelSpec> builtin_models() {
    return {
        ModelSpec::iid(ComponentLaw::rademacher()),
        ModelSpec::iid(ComponentLaw::gaussian()),
        ModelSpec::iid(ComponentLaw::symmetric_pareto_squared(1.5)),
        ModelSpec::rot_invariant(RadialLaw::constant()),
        ModelSpec::rot_invariant(RadialLaw::two_point(0.5)),
        ModelSpec::rot_invariant(RadialLaw::pareto_squared(1.5)),
        ModelSpec::axis_jumps(RadialLaw::symmetric_sign()),
        ModelSpec::axis_jumps(RadialLaw::constant()),
        ModelSpec::axis_jumps(RadialLaw::two_point(0.5)),
        ModelSpec::axis_jumps(RadialLaw::pareto_squared(1.5)),
    };
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("axis jumps have exactly one nonzero coordinate") {
    RandomStream s = derive_stream({21, 0});
    IncrementSampler sampler(ModelSpec::axis_jumps(RadialLaw::two_point(0.5)), 50);
    std::vector<double> x(50);
    for (int i = 0; i < 1000; ++i) {
        sampler.draw_dense(x, s);
        int nonzero = 0;
        for (double v : x) nonzero += v != 0.0;
        REQUIRE(nonzero == 1);
    }
    const Increment inc = sample_increment(ModelSpec::axis_jumps(RadialLaw::symmetric_sign()), 50, s);
    REQUIRE(std::holds_alternative<SparseStep>(inc));
    CHECK(std::get<SparseStep>(inc).axis < 50);
}

TEST_CASE("rotation invariant constant radius has unit norm") {
    RandomStream s = derive_stream({22, 0});
    for (int i = 0; i < 1000; ++i) {
        const Increment x = sample_increment(ModelSpec::rot_invariant(RadialLaw::constant()), 37, s);
        REQUIRE(std::abs(std::sqrt(squared_norm(x)) - 1.0) <= 1e-12);
    }
}

TEST_CASE("rademacher components give unit squared norm") {
    RandomStream s = derive_stream({23, 0});
    IncrementSampler sampler(ModelSpec::iid(ComponentLaw::rademacher()), 64);
    std::vector<double> x(64);
    for (int i = 0; i < 100000; ++i) REQUIRE(std::abs(sampler.draw_dense(x, s) - 1.0) <= 1e-14);
}

TEST_CASE("invalid models and dimensions") {
    RandomStream s = derive_stream({24, 0});
    CHECK_THROWS_AS(sample_increment(ModelSpec::iid(ComponentLaw::rademacher()), 0, s), ParameterError);
    CHECK_THROWS_AS(ModelSpec::rot_invariant(RadialLaw::symmetric_sign()), ParameterError);
    CHECK_THROWS_AS(ComponentLaw::symmetric_pareto_squared(2.5), ParameterError);
}

TEST_CASE("sparse and dense inner products agree exactly") {
    RandomStream s = derive_stream({25, 0});
    std::vector<double> v(40);
    for (double& x : v) x = s.gaussian();
    IncrementSampler sampler(ModelSpec::axis_jumps(RadialLaw::two_point(0.3)), 40);
    for (int i = 0; i < 1000; ++i) {
        const SparseStep step = sampler.draw_sparse(s);
        VectorD dense(40, 0.0);
        dense[step.axis] = step.value;
        REQUIRE(inner_product(Increment{step}, v) == inner_product(Increment{dense}, v));
        REQUIRE(squared_norm(Increment{step}) == squared_norm(Increment{dense}));
    }
}

TEST_CASE("conditions hold for every built-in model") {
    std::uint64_t idx = 0;
    for (const ModelSpec& model : builtin_models()) {
        for (std::size_t d : {4u, 32u, 256u}) {
            CAPTURE(model.describe());
            CAPTURE(d);
            RandomStream s = derive_stream({26, idx++});
            const ConditionReport rep = check_conditions(model, d, 100000, s);
            for (const auto& c : rep.checks) {
                CAPTURE(c.name);
                CAPTURE(c.detail);
                CHECK(c.pass);
            }
        }
    }
}

TEST_CASE("model 2 and 3 coordinates have variance 1/d") {
    for (const ModelSpec& model : {ModelSpec::rot_invariant(RadialLaw::two_point(0.5)),
                                   ModelSpec::axis_jumps(RadialLaw::two_point(0.5))}) {
        const std::size_t d = 16, n = 200000;
        RandomStream s = derive_stream({27, 0});
        IncrementSampler sampler(model, d);
        std::vector<double> sum(d, 0.0), sum_sq(d, 0.0), x(d);
        for (std::size_t i = 0; i < n; ++i) {
            sampler.draw_dense(x, s);
            for (std::size_t k = 0; k < d; ++k) {
                sum[k] += x[k] * x[k];
                sum_sq[k] += x[k] * x[k] * x[k] * x[k];
            }
        }
        for (std::size_t k = 0; k < d; ++k) {
            const double m = sum[k] / n;
            const double se = std::sqrt((sum_sq[k] / n - m * m) / n);
            CHECK(std::abs(m - 1.0 / d) <= 5 * se);
        }
    }
}

TEST_CASE("duplicated coordinate breaks the uncorrelated condition") {
    RandomStream s = derive_stream({28, 0});
    IncrementSampler sampler(ModelSpec::iid(ComponentLaw::gaussian()), 16);
    DenseGenerator broken = [&sampler](RandomStream& st, std::span<double> out) {
        sampler.draw_dense(out, st);
        out[1] = out[0];
    };
    const ConditionReport rep = check_conditions(broken, 16, 10000, s);
    CHECK_FALSE(rep.checks[1].pass);
    CHECK(rep.max_abs_correlation == doctest::Approx(1.0));
}

TEST_CASE("check_conditions needs enough samples") {
    RandomStream s = derive_stream({29, 0});
    CHECK_THROWS(check_conditions(ModelSpec::iid(ComponentLaw::rademacher()), 4, 10, s));
}

}
