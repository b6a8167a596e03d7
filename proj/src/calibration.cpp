#include "hdwalk/calibration.hpp"

#include <limits>

namespace hdwalk::calibration {

// Pilot at seed 4242 (4e4 replicates, 1e4 for the two slowest dense cells), KS
// against the limit law rounded up to a multiple of 0.005, at least 0.01.
// Sizes are the acceptance ones; see the README for the sources of the bias.
double ks_allowance(ExperimentKind kind, Regime regime) {
    struct Entry {
        ExperimentKind kind;
        Regime regime;
        double allowance;
    };
    static const Entry table[] = {
        {ExperimentKind::CltModel1, Regime::Single, 0.01},   // pilot 0.0051
        {ExperimentKind::CltModel2, Regime::A, 0.015},       // pilot 0.0113
        {ExperimentKind::CltModel2, Regime::B, 0.025},       // pilot 0.0245
        {ExperimentKind::CltModel2, Regime::C, 0.015},       // pilot 0.0150 (1e4 replicates)
        {ExperimentKind::CltModel3, Regime::A, 0.04},        // pilot 0.0357, lattice of spacing 1/sqrt(n)
        {ExperimentKind::CltModel3, Regime::B, 0.025},       // pilot 0.0205
        {ExperimentKind::CltModel3, Regime::C, 0.01},        // pilot 0.0077
        {ExperimentKind::PoissonSimpleRw, Regime::C, 0.03},  // pilot 0.0255
        {ExperimentKind::StableModel2, Regime::A, 0.055},    // pilot 0.0519, 0.0548 at 1e4
    };
    for (const Entry& e : table)
        if (e.kind == kind && e.regime == regime) return e.allowance;
    return kDefaultKsAllowance;
}

// Top rung 4096x4096, grid 64, 64 replicates. Pilot: 256 replicates at seed 777,
// bound = pilot median + 5 standard errors of a 64-replicate median.
double ladder_fixture(ExperimentKind kind, const std::string& model_description, LadderRung top, std::size_t grid) {
    if (!(top == kCalibratedTopRung) || grid != kCalibratedGrid) return std::numeric_limits<double>::infinity();
    struct Entry {
        ExperimentKind kind;
        const char* model;
        double bound;
    };
    static const Entry table[] = {
        {ExperimentKind::Fwlln, "iid/rademacher", 0.0324},
        {ExperimentKind::Fwlln, "rotinv/twopoint:0.5", 0.0372},
        {ExperimentKind::DistortionLadder, "iid/rademacher", 0.0429},
        {ExperimentKind::DistortionLadder, "rotinv/twopoint:0.5", 0.0483},
        {ExperimentKind::AlignCheck, "iid/rademacher", 0.0209},
        {ExperimentKind::AlignCheck, "rotinv/twopoint:0.5", 0.0245},
    };
    for (const Entry& e : table)
        if (e.kind == kind && model_description == e.model) return e.bound;
    return std::numeric_limits<double>::infinity();
}

}  // namespace hdwalk::calibration
