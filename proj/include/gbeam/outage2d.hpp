#pragma once

// Outage probability of a 2D positioning-assisted Gaussian beam.

#include "gbeam/geometry.hpp"
#include "gbeam/outage_types.hpp"

namespace gbeam {

/// Compares gamma_th with the side-lobe and boresight received powers.
OutageCase classify_case_2d(const LinkBudget& budget, const BeamPattern2D& beam);

/// Cross-range to range ratio at which the beam edge meets the threshold:
/// k = tan(sqrt(theta3db^2 / 1.2 * lg(Pmax Ae / ((4 pi d)^2 gamma_th)))).
///
/// Throws StateError outside the main-lobe regime and RegimeError when the
/// inner angle reaches pi/2.
double k_factor(const LinkBudget& budget, const BeamPattern2D& beam);

/// 2 Q(d k / sigma_x) in the main-lobe regime, 0 or 1 in the other two cases.
OutageEstimate outage_2d_closed(const LinkBudget& budget, const BeamPattern2D& beam,
                                const PositionError2D& err);

/// Beamwidth minimizing outage_2d_closed for a fixed total power.
/// Requires a total-power budget; throws RegimeError when the result is >= pi.
double optimal_theta_2d(const LinkBudget& budget);

/// Outage at optimal_theta_2d, evaluated in its reduced form.
OutageEstimate optimal_outage_2d(const LinkBudget& budget, const PositionError2D& err);

/// Second-order estimate of Pr(|x| >= k y) - Pr(|x| >= k d).
/// Throws StateError outside the main-lobe regime and
/// DegenerateCovarianceError when |rho| = 1.
double approx_error_2d(const LinkBudget& budget, const BeamPattern2D& beam,
                       const PositionError2D& err);

} // namespace gbeam
