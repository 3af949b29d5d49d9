#include "gbeam/errors.hpp"
#include "gbeam/outage2d.hpp"

#include <boost/math/distributions/normal.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace gbeam;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAe = 1e-4;
constexpr double kAm = 1e-4;
constexpr double kGamma = 1e-7;

LinkBudget
fig5_budget(double d)
{
    return LinkBudget::from_total_power(db_to_watts(25.0), kAe, d, kGamma, kAm);
}

// Tail of the standard normal from an independent implementation.
double
two_q_reference(double x)
{
    const boost::math::normal_distribution<double> n;
    return 2.0 * boost::math::cdf(boost::math::complement(n, x));
}

// Equation for k written out from the raw budget quantities.
double
k_reference(double pt, double d, double theta)
{
    const double pmax = pt * std::sqrt(1.2 * std::log(10.0)) / (theta * std::sqrt(kPi));
    const double ratio = pmax * kAe / (std::pow(4.0 * kPi * d, 2) * kGamma);
    return std::tan(std::sqrt(theta * theta / 1.2 * std::log10(ratio)));
}

std::size_t
argmin_on_theta_grid(const LinkBudget& budget, const PositionError2D& err, double lo, double hi,
                     double step, std::vector<double>& grid)
{
    grid.clear();
    std::size_t best = 0;
    double best_value = 2.0;
    for (int i = 0;; ++i) {
        const double theta = lo + step * i;
        if (theta > hi) {
            break;
        }
        grid.push_back(theta);
        const double v = outage_2d_closed(budget, BeamPattern2D(theta), err).value;
        if (v < best_value) {
            best_value = v;
            best = grid.size() - 1;
        }
    }
    return best;
}

} // namespace

TEST(Classify2D, ThresholdCases)
{
    const BeamPattern2D beam(0.1);
    EXPECT_EQ(classify_case_2d(fig5_budget(40.0), beam), OutageCase::MainLobeRegime);
    EXPECT_EQ(classify_case_2d(fig5_budget(40.0).with_threshold(1e-300), beam),
              OutageCase::AlwaysConnected);

    const double pmax = pmax_from_pt_2d(db_to_watts(25.0), beam);
    const double peak = pmax * kAe / std::pow(4.0 * kPi * 40.0, 2);
    EXPECT_EQ(classify_case_2d(fig5_budget(40.0).with_threshold(peak * 1.001), beam),
              OutageCase::AlwaysOutage);
    EXPECT_EQ(classify_case_2d(fig5_budget(40.0).with_threshold(peak * 0.999), beam),
              OutageCase::MainLobeRegime);
    EXPECT_EQ(classify_case_2d(fig5_budget(40.0).with_threshold(peak * kAm * 1.001), beam),
              OutageCase::MainLobeRegime);
    EXPECT_EQ(classify_case_2d(fig5_budget(40.0).with_threshold(peak * kAm * 0.999), beam),
              OutageCase::AlwaysConnected);
}

TEST(KFactor, Fig5Reference)
{
    const double pt = db_to_watts(25.0);
    const std::vector<std::pair<double, double>> table = {
        {20.0, 0.1186}, {30.0, 0.1052}, {40.0, 0.0947}, {60.0, 0.0775}, {80.0, 0.0625}, {120.0, 0.0310}};
    for (auto [d, k] : table) {
        const double value = k_factor(fig5_budget(d), BeamPattern2D(0.1));
        EXPECT_NEAR(value, k_reference(pt, d, 0.1), 1e-13) << "d=" << d;
        EXPECT_NEAR(value, k, 1e-4) << "d=" << d;
    }
}

TEST(KFactor, BoundaryAndUnitValue)
{
    const double d = 40.0;
    const double pmax = 1000.0;
    const double peak = pmax * kAe / std::pow(4.0 * kPi * d, 2);
    const auto at_peak = LinkBudget::from_peak_power(pmax, kAe, d, peak, kAm);
    EXPECT_LT(k_factor(at_peak, BeamPattern2D(0.1)), 1e-7);

    const auto budget = LinkBudget::from_peak_power(pmax, kAe, d, kGamma, kAm);
    const double lg = std::log10(peak / kGamma);
    const double theta = kPi / 4.0 * std::sqrt(1.2 / lg);
    EXPECT_NEAR(k_factor(budget, BeamPattern2D(theta)), 1.0, 1e-12);
}

TEST(KFactor, Errors)
{
    EXPECT_THROW(k_factor(fig5_budget(200.0), BeamPattern2D(0.1)), StateError);
    const auto huge = LinkBudget::from_peak_power(1e6, kAe, 1.0, kGamma, 1e-12);
    EXPECT_THROW(k_factor(huge, BeamPattern2D(3.0)), RegimeError);
    EXPECT_THROW(k_factor(huge, BeamPattern2D(3.0)), DomainError);
}

TEST(Outage2D, CasesShortCircuit)
{
    const PositionError2D err(1.5, 1.0, kPi / 4);
    const auto connected = outage_2d_closed(fig5_budget(40.0).with_threshold(1e-300), BeamPattern2D(0.1), err);
    EXPECT_EQ(connected.value, 0.0);
    EXPECT_EQ(connected.std_error, 0.0);
    EXPECT_EQ(connected.method, EstimateMethod::ClosedForm2D);
    EXPECT_EQ(outage_2d_closed(fig5_budget(200.0), BeamPattern2D(0.1), err).value, 1.0);
}

TEST(Outage2D, MatchesReferenceFormula)
{
    for (double d : {20.0, 40.0, 80.0, 120.0}) {
        for (const PositionError2D& err :
             {PositionError2D(1.5, 1.0, kPi / 4), PositionError2D(6.0, 4.0, 0.3), PositionError2D(1.0, 0.5, 0.0)}) {
            const double k = k_reference(db_to_watts(25.0), d, 0.1);
            EXPECT_NEAR(outage_2d_closed(fig5_budget(d), BeamPattern2D(0.1), err).value,
                        two_q_reference(d * k / err.sigma_x()), 1e-14);
        }
    }
}

TEST(Outage2D, PerfectPositioningLimit)
{
    const double v = outage_2d_closed(fig5_budget(40.0), BeamPattern2D(0.1), PositionError2D(1e-3, 1e-3, 0.0)).value;
    EXPECT_LT(v, 1e-300);
}

TEST(Outage2D, MonotoneInParameters)
{
    const BeamPattern2D beam(0.1);
    const PositionError2D err(1.5, 1.0, kPi / 4);
    double prev = 1.0;
    for (double pt_db = 18.0; pt_db <= 30.0; pt_db += 0.25) {
        const auto b = fig5_budget(40.0).with_total_power(db_to_watts(pt_db));
        const double v = outage_2d_closed(b, beam, err).value;
        EXPECT_LE(v, prev);
        EXPECT_GE(v, 0.0);
        prev = v;
    }
    prev = 0.0;
    for (double g = 2e-8; g <= 1e-6; g *= 1.1) {
        const double v = outage_2d_closed(fig5_budget(40.0).with_threshold(g), beam, err).value;
        EXPECT_GE(v, prev);
        EXPECT_LE(v, 1.0);
        prev = v;
    }
    prev = 0.0;
    for (double s = 0.5; s <= 8.0; s += 0.25) {
        const double v = outage_2d_closed(fig5_budget(40.0), beam, PositionError2D(s, 0.5, 0.0)).value;
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(OptimalTheta2D, Scaling)
{
    const double t40 = optimal_theta_2d(fig5_budget(40.0));
    EXPECT_NEAR(optimal_theta_2d(fig5_budget(80.0)), t40 / 4.0, 1e-15);
    const auto doubled = fig5_budget(40.0).with_total_power(2.0 * db_to_watts(25.0));
    EXPECT_NEAR(optimal_theta_2d(doubled), 2.0 * t40, 1e-14);
    const double margin = kAe * db_to_watts(25.0) / (std::pow(4.0 * kPi * 40.0, 2) * kGamma);
    EXPECT_NEAR(t40, margin * std::sqrt(1.2 * std::log(10.0) / (std::numbers::e * kPi)), 1e-14);
    EXPECT_NEAR(t40, 0.712, 1e-3);
    EXPECT_NEAR(optimal_theta_2d(fig5_budget(60.0)), 0.316, 1e-3);
}

TEST(OptimalTheta2D, Errors)
{
    EXPECT_THROW(optimal_theta_2d(LinkBudget::from_peak_power(10.0, kAe, 40.0, kGamma, kAm)), StateError);
    EXPECT_THROW(optimal_theta_2d(fig5_budget(40.0).with_total_power(1e4)), RegimeError);
}

TEST(OptimalTheta2D, MatchesGridArgmin)
{
    const PositionError2D err(1.5, 1.0, kPi / 4);
    for (double d : {40.0, 60.0}) {
        const auto budget = fig5_budget(d);
        std::vector<double> grid;
        const std::size_t best = argmin_on_theta_grid(budget, err, 0.02, 1.2, 1e-4, grid);
        EXPECT_NEAR(grid[best], optimal_theta_2d(budget), 1e-4) << "d=" << d;
    }
}

TEST(OptimalTheta2D, ArgminIndependentOfError)
{
    const auto budget = fig5_budget(40.0);
    std::vector<double> grid;
    const std::size_t a = argmin_on_theta_grid(budget, PositionError2D(1.5, 1.0, kPi / 4), 0.4, 1.0, 1e-4, grid);
    const std::size_t b = argmin_on_theta_grid(budget, PositionError2D(3.0, 1.0, 0.0), 0.4, 1.0, 1e-4, grid);
    const std::size_t c = argmin_on_theta_grid(budget, PositionError2D(2.0, 0.7, 1.1), 0.4, 1.0, 1e-4, grid);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
}

TEST(OptimalOutage2D, EqualsClosedFormAtOptimum)
{
    for (double d : {30.0, 40.0, 60.0, 80.0}) {
        for (const PositionError2D& err : {PositionError2D(1.5, 1.0, kPi / 4), PositionError2D(6.0, 4.0, 0.2)}) {
            const auto budget = fig5_budget(d);
            const double at_opt = outage_2d_closed(budget, BeamPattern2D(optimal_theta_2d(budget)), err).value;
            EXPECT_NEAR(optimal_outage_2d(budget, err).value, at_opt, 1e-12) << "d=" << d;
        }
    }
}

TEST(OptimalOutage2D, LargeErrorLimit)
{
    const double v = optimal_outage_2d(fig5_budget(60.0), PositionError2D(1e6, 1e6, 0.0)).value;
    EXPECT_GT(v, 0.999);
    EXPECT_LE(v, 1.0);
}

TEST(OptimalOutage2D, TangencyWithFixedBeam)
{
    const PositionError2D err(1.5, 1.0, kPi / 3);
    for (double theta : {0.1, 0.15}) {
        const double d = 40.0;
        const double per_watt = kAe / (std::pow(4.0 * kPi * d, 2) * kGamma) *
                                std::sqrt(1.2 * std::log(10.0) / (std::numbers::e * kPi));
        const double pt_tangent = theta / per_watt;
        const auto at = fig5_budget(d).with_total_power(pt_tangent);
        EXPECT_NEAR(optimal_theta_2d(at), theta, 1e-14);
        EXPECT_NEAR(outage_2d_closed(at, BeamPattern2D(theta), err).value,
                    optimal_outage_2d(at, err).value, 1e-10);
        for (double f : {0.7, 0.85, 1.15, 1.3}) {
            const auto b = fig5_budget(d).with_total_power(pt_tangent * f);
            EXPECT_LT(optimal_outage_2d(b, err).value, outage_2d_closed(b, BeamPattern2D(theta), err).value)
                << "theta=" << theta << " factor=" << f;
        }
    }
}

TEST(ApproxError2D, VanishesWithoutRangeUncertainty)
{
    const auto budget = fig5_budget(40.0);
    const double v = approx_error_2d(budget, BeamPattern2D(0.1), PositionError2D(3.0, 1e-9, 0.0));
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1e-15);
}

TEST(ApproxError2D, ReferenceFormula)
{
    const auto budget = fig5_budget(40.0);
    const PositionError2D err(2.5, 2.0, kPi / 6);
    const double k = k_factor(budget, BeamPattern2D(0.1));
    const double sx = err.sigma_x();
    const double sy = err.sigma_y();
    const double rho = err.rho();
    const double kd = k * 40.0;
    const double expected = std::pow(k, 3) * 40.0 * sy * sy /
                            (std::sqrt(2.0 * kPi) * std::pow(sx, 3) * std::pow(1.0 - rho * rho, 1.5)) *
                            std::exp(-kd * kd / (2.0 * sx * sx * (1.0 - rho * rho)));
    EXPECT_NEAR(approx_error_2d(budget, BeamPattern2D(0.1), err) / expected, 1.0, 1e-12);
}

TEST(ApproxError2D, DecaysWithDistanceAtFixedK)
{
    // Scaling the peak power by 4 per doubling of d keeps k fixed.
    const PositionError2D err(1.5, 1.0, kPi / 4);
    const BeamPattern2D beam(0.1);
    double prev = -1.0;
    for (double d : {40.0, 80.0, 160.0, 320.0}) {
        const double pmax = 3000.0 * (d / 40.0) * (d / 40.0);
        const auto budget = LinkBudget::from_peak_power(pmax, kAe, d, kGamma, kAm);
        const double kd = k_factor(budget, beam) * d;
        ASSERT_GT(kd / err.sigma_x(), 1.0);
        const double v = approx_error_2d(budget, beam, err);
        if (prev >= 0.0) {
            EXPECT_LT(v, prev) << "d=" << d;
        }
        prev = v;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(ApproxError2D, DecaysUnderCovarianceShrink)
{
    const auto budget = fig5_budget(40.0);
    const PositionError2D base(5.0, 4.0, 0.4);
    double prev = approx_error_2d(budget, BeamPattern2D(0.1), base);
    for (double c : {0.25, 0.0625, 0.015625}) {
        const double v = approx_error_2d(budget, BeamPattern2D(0.1), base.scaled(c));
        EXPECT_LT(v, prev) << "c=" << c;
        prev = v;
    }
    EXPECT_LT(prev, 1e-3);
}

TEST(ApproxError2D, NeedsMainLobeRegime)
{
    EXPECT_THROW(approx_error_2d(fig5_budget(200.0), BeamPattern2D(0.1), PositionError2D(1.0, 1.0, 0.0)),
                 StateError);
}
