#include "gbeam/outage2d.hpp"

#include "gbeam/errors.hpp"
#include "gbeam/specfun.hpp"
#include "link_detail.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gbeam {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double
two_q(double x)
{
    return std::min(1.0, 2.0 * specfun::gaussian_q(x));
}

} // namespace

std::string_view
to_string(OutageCase c)
{
    switch (c) {
    case OutageCase::AlwaysConnected:
        return "always_connected";
    case OutageCase::AlwaysOutage:
        return "always_outage";
    case OutageCase::MainLobeRegime:
        return "main_lobe";
    }
    return "unknown";
}

std::string_view
to_string(EstimateMethod m)
{
    switch (m) {
    case EstimateMethod::ClosedForm2D:
        return "closed_form_2d";
    case EstimateMethod::Hoyt3D:
        return "hoyt_3d";
    case EstimateMethod::Rayleigh3D:
        return "rayleigh_3d";
    case EstimateMethod::MonteCarlo:
        return "monte_carlo";
    case EstimateMethod::NumericalIntegral:
        return "numerical_integral";
    }
    return "unknown";
}

OutageCase
classify_case_2d(const LinkBudget& budget, const BeamPattern2D& beam)
{
    return detail::classify_by_peak(budget, resolve_peak_power(budget, beam));
}

double
k_factor(const LinkBudget& budget, const BeamPattern2D& beam)
{
    const double pmax = resolve_peak_power(budget, beam);
    if (detail::classify_by_peak(budget, pmax) != OutageCase::MainLobeRegime) {
        throw StateError("k_factor needs the main-lobe regime");
    }
    const double ratio = detail::peak_received_power(budget, pmax) / budget.gamma_th();
    const double theta = beam.theta3db();
    const double inner = std::sqrt(theta * theta / kGainExponent * std::log10(ratio));
    if (!(inner < kHalfPi)) {
        throw RegimeError("beam edge angle " + std::to_string(inner) +
                          " rad is not below pi/2; the small-angle model does not apply");
    }
    return std::tan(inner);
}

OutageEstimate
outage_2d_closed(const LinkBudget& budget, const BeamPattern2D& beam, const PositionError2D& err)
{
    switch (classify_case_2d(budget, beam)) {
    case OutageCase::AlwaysConnected:
        return {0.0, EstimateMethod::ClosedForm2D, 0.0};
    case OutageCase::AlwaysOutage:
        return {1.0, EstimateMethod::ClosedForm2D, 0.0};
    case OutageCase::MainLobeRegime:
        break;
    }
    const double k = k_factor(budget, beam);
    return {two_q(budget.distance() * k / err.sigma_x()), EstimateMethod::ClosedForm2D, 0.0};
}

double
optimal_theta_2d(const LinkBudget& budget)
{
    if (!budget.has_total_power()) {
        throw StateError("optimal beamwidth needs a budget given by total power");
    }
    const double rate = kGainExponent * std::numbers::ln10;
    const double theta =
        detail::power_margin(budget) * std::sqrt(rate / (std::numbers::e * std::numbers::pi));
    if (!(theta < std::numbers::pi)) {
        throw RegimeError("optimal beamwidth " + std::to_string(theta) +
                          " rad is not below pi; the model does not apply");
    }
    return theta;
}

OutageEstimate
optimal_outage_2d(const LinkBudget& budget, const PositionError2D& err)
{
    const BeamPattern2D beam(optimal_theta_2d(budget));
    if (classify_case_2d(budget, beam) == OutageCase::AlwaysConnected) {
        return {0.0, EstimateMethod::ClosedForm2D, 0.0};
    }
    const double inner =
        detail::power_margin(budget) / std::sqrt(2.0 * std::numbers::e * std::numbers::pi);
    if (!(inner < kHalfPi)) {
        throw RegimeError("optimal beam edge angle " + std::to_string(inner) +
                          " rad is not below pi/2; the small-angle model does not apply");
    }
    const double k = std::tan(inner);
    return {two_q(budget.distance() * k / err.sigma_x()), EstimateMethod::ClosedForm2D, 0.0};
}

double
approx_error_2d(const LinkBudget& budget, const BeamPattern2D& beam, const PositionError2D& err)
{
    const double k = k_factor(budget, beam);
    const double sx = err.sigma_x();
    const double sy = err.sigma_y();
    // sigma_x^2 (1 - rho^2) = |Sigma| / sigma_y^2
    const double det = err.sigma1() * err.sigma1() * err.sigma2() * err.sigma2();
    const double s2 = det / (sy * sy);
    const double one_minus_rho2 = s2 / (sx * sx);
    if (!(one_minus_rho2 > 0.0)) {
        throw DegenerateCovarianceError("approx_error_2d needs |rho| < 1");
    }
    const double s = std::sqrt(s2);
    const double kd = k * budget.distance();
    return k * k * kd * sy * sy / (std::sqrt(2.0 * std::numbers::pi) * s2 * s) *
           std::exp(-kd * kd / (2.0 * s2));
}

} // namespace gbeam
