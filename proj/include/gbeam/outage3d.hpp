#pragma once

// Outage probability and optimal beam of a 3D positioning-assisted Gaussian beam.
//
// The receiver sits at (0, d, 0). Only the cross-boresight covariance of
// (x, z) enters the asymptotic forms.

#include "gbeam/geometry.hpp"
#include "gbeam/outage_types.hpp"

#include <utility>

namespace gbeam {

/// Spread of the whitened quadratic form: the pointing-error radius follows
/// a Hoyt law with standard deviations lambda1 <= lambda2.
struct WhitenedQuadratic
{
    double lambda1;
    double lambda2;
    double q;     // lambda1 / lambda2
    double omega; // lambda1^2 + lambda2^2
};

struct OptimalBeam3D
{
    double theta3db_star;
    double phi3db_star;
    double m_star;
    double psi_star;
    double xi_star;
    double outage_star;

    BeamPattern3D beam() const { return {theta3db_star, phi3db_star, m_star}; }
};

OutageCase classify_case_3d(const LinkBudget& budget, const BeamPattern3D& beam);

/// Eigen-decomposes A, forms H^-1 = Y^-1/2 U^T (Sigma')^-1 U Y^-1/2 and
/// returns the square roots of the eigenvalues of H.
/// Throws DegenerateCovarianceError when Sigma' is singular.
WhitenedQuadratic whiten(const BeamPattern3D& beam, const PositionError3D& err);

/// Eigenvalues (xi1 >= xi2) of B = Omega^1/2 G^T A G Omega^1/2 with Sigma' = G Omega G^T.
std::pair<double, double> b_eigenvalues(const BeamPattern3D& beam, const PositionError3D& err);

/// Squared threshold radius s^2 = d^2 / 1.2 * lg(Pmax Ae / ((4 pi d)^2 gamma_th)).
/// Throws StateError outside the main-lobe regime.
double threshold_radius_sq(const LinkBudget& budget, const BeamPattern3D& beam);

/// Hoyt form (or its Rayleigh limit when lambda1 and lambda2 coincide) in the
/// main-lobe regime, 0 or 1 in the other two cases.
OutageEstimate outage_3d_closed(const LinkBudget& budget, const BeamPattern3D& beam,
                                const PositionError3D& err);

/// (1 / 2 pi) int_0^{2 pi} exp(-h / (2 (xi1 cos^2 a + xi2 sin^2 a))) da by adaptive quadrature.
/// Throws DomainError for non-positive xi or negative h, ComputationError when
/// the quadrature misses its tolerance.
double angular_outage(double h, double xi1, double xi2);

/// Exponent h of the angular form. With a total-power budget h depends on the
/// beam only through xi1 xi2 = |A| |Sigma'|; with a peak-power budget it is s^2.
double angular_exponent(const LinkBudget& budget, double xi1, double xi2,
                        const PositionError3D& err);

/// angular_outage(angular_exponent(budget, xi1, xi2, err), xi1, xi2).
double outage_3d_angular(const LinkBudget& budget, double xi1, double xi2,
                         const PositionError3D& err);

/// (1 / 2 pi) int_0^{2 pi} da / (xi cos^2 a + (K / xi) sin^2 a), evaluated numerically.
double appendix_g(double xi, double k);

/// Closed-form optimum for a fixed total power. Throws StateError for a
/// peak-power budget and RegimeError when theta* or phi* is not below pi.
OptimalBeam3D optimal_beam_3d(const LinkBudget& budget, const PositionError3D& err);

/// xi* (Sigma')^-1, the optimal quadratic form built directly from the covariance.
Eigen::Matrix2d optimal_beam_matrix(const LinkBudget& budget, const PositionError3D& err);

} // namespace gbeam
