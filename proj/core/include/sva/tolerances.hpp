#pragma once

// Numeric tolerances shared across the solver stack. Kept in one table so the
// module contracts and the tests agree on every threshold.
namespace sva::tol {

inline constexpr double kLpFeas       = 1e-7;   // LP primal/dual feasibility
inline constexpr double kLpDualityRel = 1e-6;   // relative primal/dual objective gap
inline constexpr double kIntegrality  = 1e-6;   // integrality rounding in the MIP engine
inline constexpr double kCutViolation = 1e-6;   // minimum violation for a lazy cut
inline constexpr double kPlanFeas     = 1e-6;   // plan/instance feasibility comparisons
inline constexpr double kProbSum      = 1e-9;   // scenario probabilities must sum to 1
inline constexpr double kDefaultEps   = 1e-4;   // decomposition relative termination gap
inline constexpr double kGapFloor     = 1e-12;  // denominator guard in relative gaps

}  // namespace sva::tol
