#include "gbeam/outage3d.hpp"

#include "gbeam/errors.hpp"
#include "gbeam/specfun.hpp"
#include "link_detail.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gbeam {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureTol = 1e-14;
constexpr double kQuadratureMaxError = 1e-10;

const double kLobeRate = kGainExponent * std::numbers::ln10;

struct CrossCovariance
{
    Eigen::Matrix2d cov;
    double det;
};

CrossCovariance
cross_covariance_checked(const PositionError3D& err)
{
    const Eigen::Matrix2d cov = err.cross_covariance();
    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
    if (!(det > 1e-14 * cov(0, 0) * cov(1, 1))) {
        throw DegenerateCovarianceError("cross-boresight covariance of (x, z) is singular");
    }
    return {cov, det};
}

Eigen::Matrix2d
inverse_2x2(const Eigen::Matrix2d& m, double det)
{
    Eigen::Matrix2d inv;
    inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    return inv / det;
}

// Mean of f over a full period, using the quarter-period symmetry of f(alpha) = F(cos^2, sin^2).
template <class F>
double
quarter_period_mean(F f, const char* what)
{
    // The integrand is monotone on the quarter period, so any peak sits at an endpoint.
    static boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const double integral = integrator.integrate(f, 0.0, 0.5 * kPi, kQuadratureTol, &error, &l1);
    const double mean = integral * 2.0 / kPi;
    if (!std::isfinite(mean) || error > kQuadratureMaxError * std::max(l1, 1e-300)) {
        throw ComputationError(std::string(what) + ": relative quadrature error " +
                               std::to_string(error / l1) + " above tolerance");
    }
    return mean;
}

} // namespace

OutageCase
classify_case_3d(const LinkBudget& budget, const BeamPattern3D& beam)
{
    return detail::classify_by_peak(budget, resolve_peak_power(budget, beam));
}

WhitenedQuadratic
whiten(const BeamPattern3D& beam, const PositionError3D& err)
{
    const auto [cov, det] = cross_covariance_checked(err);

    const SymmetricEigen2 a = eigen_symmetric(beam.quadratic_form());
    const Eigen::Matrix2d u = rotation_2d(a.angle);
    const Eigen::Vector2d y_inv_sqrt(1.0 / std::sqrt(a.larger), 1.0 / std::sqrt(a.smaller));

    const Eigen::Matrix2d h_inv =
        y_inv_sqrt.asDiagonal() * u.transpose() * inverse_2x2(cov, det) * u * y_inv_sqrt.asDiagonal();
    const SymmetricEigen2 h = eigen_symmetric(h_inv);

    const double lambda1 = 1.0 / std::sqrt(h.larger);
    const double lambda2 = 1.0 / std::sqrt(h.smaller);
    return {lambda1, lambda2, lambda1 / lambda2, lambda1 * lambda1 + lambda2 * lambda2};
}

std::pair<double, double>
b_eigenvalues(const BeamPattern3D& beam, const PositionError3D& err)
{
    const auto [cov, det] = cross_covariance_checked(err);
    (void)det;
    const SymmetricEigen2 g = eigen_symmetric(cov);
    const Eigen::Matrix2d rot = rotation_2d(g.angle);
    const Eigen::Vector2d omega_sqrt(std::sqrt(g.larger), std::sqrt(g.smaller));

    const Eigen::Matrix2d b = omega_sqrt.asDiagonal() * rot.transpose() * beam.quadratic_form() *
                              rot * omega_sqrt.asDiagonal();
    const SymmetricEigen2 e = eigen_symmetric(b);
    return {e.larger, e.smaller};
}

double
threshold_radius_sq(const LinkBudget& budget, const BeamPattern3D& beam)
{
    const double pmax = resolve_peak_power(budget, beam);
    if (detail::classify_by_peak(budget, pmax) != OutageCase::MainLobeRegime) {
        throw StateError("threshold radius needs the main-lobe regime");
    }
    const double d = budget.distance();
    const double ratio = detail::peak_received_power(budget, pmax) / budget.gamma_th();
    return d * d / kGainExponent * std::log10(ratio);
}

OutageEstimate
outage_3d_closed(const LinkBudget& budget, const BeamPattern3D& beam, const PositionError3D& err)
{
    switch (classify_case_3d(budget, beam)) {
    case OutageCase::AlwaysConnected:
        return {0.0, EstimateMethod::Hoyt3D, 0.0};
    case OutageCase::AlwaysOutage:
        return {1.0, EstimateMethod::Hoyt3D, 0.0};
    case OutageCase::MainLobeRegime:
        break;
    }
    const double s2 = threshold_radius_sq(budget, beam);
    const WhitenedQuadratic w = whiten(beam, err);
    if (std::abs(1.0 - w.q) <= specfun::kHoytUnitGap) {
        const double lambda = 0.5 * (w.lambda1 + w.lambda2);
        return {std::exp(-s2 / (2.0 * lambda * lambda)), EstimateMethod::Rayleigh3D, 0.0};
    }
    return {specfun::hoyt_sf(std::sqrt(s2), w.q, w.omega), EstimateMethod::Hoyt3D, 0.0};
}

double
angular_outage(double h, double xi1, double xi2)
{
    if (!std::isfinite(h) || h < 0.0) {
        throw DomainError("angular exponent h must be finite and >= 0");
    }
    if (!std::isfinite(xi1) || !std::isfinite(xi2) || !(xi1 > 0.0) || !(xi2 > 0.0)) {
        throw DomainError("xi1 and xi2 must be positive and finite");
    }
    if (h == 0.0) {
        return 1.0;
    }
    if (xi1 == xi2) {
        return std::exp(-h / (2.0 * xi1));
    }
    const auto integrand = [=](double alpha) {
        const double c = std::cos(alpha);
        const double s = std::sin(alpha);
        return std::exp(-h / (2.0 * (xi1 * c * c + xi2 * s * s)));
    };
    return quarter_period_mean(integrand, "angular outage");
}

double
angular_exponent(const LinkBudget& budget, double xi1, double xi2, const PositionError3D& err)
{
    const double d = budget.distance();
    double ratio = 0.0;
    if (budget.has_total_power()) {
        const auto [cov, det] = cross_covariance_checked(err);
        (void)cov;
        ratio = kLobeRate * detail::power_margin(budget) * std::sqrt(xi1 * xi2) /
                (kPi * std::sqrt(det));
    } else {
        ratio = detail::peak_received_power(budget, *budget.peak_power()) / budget.gamma_th();
    }
    return d * d / kGainExponent * std::log10(ratio);
}

double
outage_3d_angular(const LinkBudget& budget, double xi1, double xi2, const PositionError3D& err)
{
    const double h = angular_exponent(budget, xi1, xi2, err);
    if (h < 0.0) {
        throw StateError("angular form needs the main-lobe regime (h = " + std::to_string(h) +
                         " < 0)");
    }
    return angular_outage(h, xi1, xi2);
}

double
appendix_g(double xi, double k)
{
    if (!std::isfinite(xi) || !std::isfinite(k) || !(xi > 0.0) || !(k > 0.0)) {
        throw DomainError("appendix_g needs xi > 0 and K > 0");
    }
    const double other = k / xi;
    const auto integrand = [=](double alpha) {
        const double c = std::cos(alpha);
        const double s = std::sin(alpha);
        return 1.0 / (xi * c * c + other * s * s);
    };
    return quarter_period_mean(integrand, "appendix_g");
}

OptimalBeam3D
optimal_beam_3d(const LinkBudget& budget, const PositionError3D& err)
{
    if (!budget.has_total_power()) {
        throw StateError("optimal beam needs a budget given by total power");
    }
    const auto [cov, det] = cross_covariance_checked(err);
    const double margin = detail::power_margin(budget);
    const double root_det = std::sqrt(det);
    const double e_pi = std::numbers::e * kPi;

    OptimalBeam3D opt{};
    opt.xi_star = e_pi * root_det / (kLobeRate * margin);
    opt.theta3db_star = std::sqrt(kLobeRate * margin * root_det / (e_pi * cov(1, 1)));
    opt.phi3db_star = std::sqrt(kLobeRate * margin * root_det / (e_pi * cov(0, 0)));
    // Off-diagonal of xi* (Sigma')^-1, which carries the opposite sign of Sigma'(1, 3).
    opt.m_star = -e_pi * cov(0, 1) / (kLobeRate * margin * root_det);
    opt.psi_star = 0.5 * std::atan2(2.0 * cov(0, 1), cov(0, 0) - cov(1, 1));
    const double d = budget.distance();
    opt.outage_star = std::exp(-margin * d * d / (2.0 * e_pi * root_det));

    if (!(opt.theta3db_star < kPi) || !(opt.phi3db_star < kPi)) {
        throw RegimeError("optimal beamwidths (" + std::to_string(opt.theta3db_star) + ", " +
                          std::to_string(opt.phi3db_star) +
                          ") rad are not below pi; the model does not apply");
    }
    return opt;
}

Eigen::Matrix2d
optimal_beam_matrix(const LinkBudget& budget, const PositionError3D& err)
{
    if (!budget.has_total_power()) {
        throw StateError("optimal beam needs a budget given by total power");
    }
    const auto [cov, det] = cross_covariance_checked(err);
    const double xi =
        std::numbers::e * kPi * std::sqrt(det) / (kLobeRate * detail::power_margin(budget));
    return xi * inverse_2x2(cov, det);
}

} // namespace gbeam
