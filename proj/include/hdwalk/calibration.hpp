#pragma once

// Pilot-calibrated tolerances. Each value came from separate-seed pilot runs
// at larger replicate counts than the verdicts use; see the README for the
// procedure.

#include <cstddef>
#include <string>

#include "hdwalk/harness.hpp"

namespace hdwalk::calibration {

inline constexpr double kDefaultKsAllowance = 0.01;

/// Finite-(n, d) bias allowance added to the 99.9% null KS critical value.
double ks_allowance(ExperimentKind kind, Regime regime);

inline constexpr LadderRung kCalibratedTopRung{4096, 4096};
inline constexpr std::size_t kCalibratedGrid = 64;

/// Upper bound on the top-rung median for ladder experiments, keyed by the
/// model description (e.g. "iid/rademacher"). Returns +inf when uncalibrated,
/// including any top rung or grid other than the calibrated ones.
double ladder_fixture(ExperimentKind kind, const std::string& model_description, LadderRung top, std::size_t grid);

inline constexpr double kStableKsThreshold = 0.05;
inline constexpr double kPoissonTvThreshold = 0.02;
inline constexpr double kReturnFraction = 0.999;
inline constexpr double kMaxStepBound = 0.05;
inline constexpr double kIsometryRelativeBound = 1e-6;
inline constexpr double kAlignEps = 1e-12;

}  // namespace hdwalk::calibration
