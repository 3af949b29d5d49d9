// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "gbeam/errors.hpp"
#include "gbeam/montecarlo.hpp"
#include "gbeam/outage2d.hpp"
#include "gbeam/outage3d.hpp"
#include "gbeam/scenario.hpp"
#include "gbeam/specfun.hpp"

#include <Eigen/LU>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace gbeam;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAe = 1e-4;
constexpr double kAm = 1e-4;
constexpr double kGamma = 1e-7;
constexpr double kMcSlack = 5e-3;

struct Outcome
{
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            if (!detail.empty()) {
                detail += "; ";
            }
            detail += what;
        }
    }
};

std::string
fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

class Timer
{
  public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

LinkBudget
budget(double pt_db, double d)
{
    return LinkBudget::from_total_power(db_to_watts(pt_db), kAe, d, kGamma, kAm);
}

McConfig
mc(std::uint64_t samples, std::uint64_t seed)
{
    McConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    return cfg;
}

PositionError3D
rotated_error()
{
    return PositionError3D(2.5, 2.0, 1.5, kPi / 3, kPi / 6, kPi / 4);
}

// 1: 2D closed form against Monte-Carlo on the distance preset.
Outcome
criterion_1()
{
    Outcome out;
    Timer t;
    const Scenario s = figure_preset("fig5", "v1");
    const BeamPattern2D beam(*s.beam.theta3db);
    double worst = 0.0;
    for (double d : {20.0, 30.0, 40.0, 60.0, 80.0, 120.0, 160.0}) {
        const auto b = s.budget.with_distance(d);
        const double closed = outage_2d_closed(b, beam, *s.error2d).value;
        const auto sim = outage_2d_mc(b, beam, *s.error2d, mc(1'000'000, 100 + static_cast<int>(d)));
        const double gap = std::abs(closed - sim.value);
        worst = std::max(worst, gap / (3.0 * sim.std_error + kMcSlack));
        out.require(gap <= 3.0 * sim.std_error + kMcSlack, "d=" + fmt("%g", d) + " gap " + fmt("%.3g", gap));
    }
    const double elapsed = t.seconds();
    out.require(elapsed <= 60.0, "runtime " + fmt("%.1f", elapsed) + " s");
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("worst gap/bound ") + fmt("%.3f", worst) +
                  ", " + fmt("%.1f", elapsed) + " s";
    return out;
}

// 2: 3D closed form against Monte-Carlo, Hoyt grid and a Rayleigh scenario.
Outcome
criterion_2()
{
    Outcome out;
    Timer t;
    double worst = 0.0;
    int hoyt_rows = 0;
    const Scenario s = figure_preset("fig8", "circular");
    const BeamPattern3D beam = resolve_beam_3d(s);
    for (double pt_db : s.sweep->values()) {
        const auto b = s.budget.with_total_power(db_to_watts(pt_db));
        const auto closed = outage_3d_closed(b, beam, *s.error3d);
        if (classify_case_3d(b, beam) == OutageCase::MainLobeRegime) {
            hoyt_rows += closed.method == EstimateMethod::Hoyt3D;
        }
        const auto sim = outage_3d_mc(b, beam, *s.error3d, mc(1'000'000, 7));
        const double gap = std::abs(closed.value - sim.value);
        worst = std::max(worst, gap / (3.0 * sim.std_error + kMcSlack));
        out.require(gap <= 3.0 * sim.std_error + kMcSlack, "pt_db=" + fmt("%g", pt_db));
    }
    out.require(hoyt_rows > 0, "no Hoyt-branch rows");

    const PositionError3D iso(1.5, 1.5, 1.5, 0.3, 0.2, 0.1);
    const BeamPattern3D round(0.1, 0.1, 0.0);
    for (double d : {40.0, 80.0, 120.0, 160.0}) {
        const auto b = budget(20.0, d);
        const auto closed = outage_3d_closed(b, round, iso);
        out.require(closed.method == EstimateMethod::Rayleigh3D || classify_case_3d(b, round) != OutageCase::MainLobeRegime,
                    "symmetric scenario left the Rayleigh branch");
        const auto sim = outage_3d_mc(b, round, iso, mc(1'000'000, 8));
        const double gap = std::abs(closed.value - sim.value);
        worst = std::max(worst, gap / (3.0 * sim.std_error + kMcSlack));
        out.require(gap <= 3.0 * sim.std_error + kMcSlack, "rayleigh d=" + fmt("%g", d));
    }
    const double elapsed = t.seconds();
    out.require(elapsed <= 120.0, "runtime " + fmt("%.1f", elapsed) + " s");
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("worst gap/bound ") + fmt("%.3f", worst) +
                  ", " + fmt("%.1f", elapsed) + " s";
    return out;
}

// 3: Hoyt/Marcum path against the angular quadrature on random scenarios.
Outcome
criterion_3()
{
    Outcome out;
    Timer t;
    std::mt19937_64 rng(2027);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int done = 0;
    double worst = 0.0;
    while (done < 20) {
        std::array<double, 3> s{0.3 + 3.0 * u(rng), 0.3 + 3.0 * u(rng), 0.3 + 3.0 * u(rng)};
        std::sort(s.rbegin(), s.rend());
        const PositionError3D err(s[0], s[1], s[2], kPi * (2 * u(rng) - 1), kPi * (2 * u(rng) - 1),
                                  kPi * (2 * u(rng) - 1));
        const BeamPattern3D beam = beam3d_from_axes(kPi * (u(rng) - 0.5), 20.0 + 300.0 * u(rng),
                                                    20.0 + 300.0 * u(rng));
        const auto b = budget(14.0 + 12.0 * u(rng), 30.0 + 120.0 * u(rng));
        if (classify_case_3d(b, beam) != OutageCase::MainLobeRegime) {
            continue;
        }
        const auto [x1, x2] = b_eigenvalues(beam, err);
        const double gap = std::abs(outage_3d_closed(b, beam, err).value - outage_3d_angular(b, x1, x2, err));
        worst = std::max(worst, gap);
        out.require(gap <= 1e-8, "scenario " + std::to_string(done) + " gap " + fmt("%.2e", gap));
        ++done;
    }
    const double elapsed = t.seconds();
    out.require(elapsed <= 10.0, "runtime " + fmt("%.1f", elapsed) + " s");
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("max gap ") + fmt("%.2e", worst);
    return out;
}

// 4: the angular integral of Appendix A is 1 / sqrt(K) for every xi.
Outcome
criterion_4()
{
    Outcome out;
    double worst = 0.0;
    for (double xi : {0.05, 0.3, 1.0, 7.0, 40.0}) {
        for (double k : {0.5, 1.0, 4.0, 25.0}) {
            const double gap = std::abs(appendix_g(xi, k) - 1.0 / std::sqrt(k));
            worst = std::max(worst, gap);
            out.require(gap <= 1e-10, "xi=" + fmt("%g", xi) + " K=" + fmt("%g", k));
        }
    }
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("max gap ") + fmt("%.2e", worst);
    return out;
}

// 5: 2D optimum against a 1e-4 rad grid argmin, and error independence of the argmin.
Outcome
criterion_5()
{
    Outcome out;
    constexpr double step = 1e-4;
    const std::vector<PositionError2D> errors = {PositionError2D(1.5, 1.0, kPi / 4), PositionError2D(3.0, 1.0, 0.0),
                                                 PositionError2D(2.0, 1.2, 1.1)};
    const std::vector<std::pair<double, double>> pairs = {{40.0, 25.0}, {60.0, 25.0}, {80.0, 30.0}};
    std::ostringstream summary;
    for (auto [d, pt_db] : pairs) {
        const auto b = budget(pt_db, d);
        const double theta_star = optimal_theta_2d(b);
        std::vector<long> argmins;
        for (const auto& err : errors) {
            long best = -1;
            double best_value = 2.0;
            for (long i = 100; step * i < 1.5; ++i) {
                const double v = outage_2d_closed(b, BeamPattern2D(step * i), err).value;
                if (v < best_value) {
                    best_value = v;
                    best = i;
                }
            }
            argmins.push_back(best);
        }
        const double grid_theta = step * argmins[0];
        out.require(std::abs(grid_theta - theta_star) <= step * (1.0 + 1e-9),
                    "d=" + fmt("%g", d) + " argmin " + fmt("%.4f", grid_theta) + " vs " + fmt("%.5f", theta_star));
        out.require(std::all_of(argmins.begin(), argmins.end(), [&](long a) { return a == argmins[0]; }),
                    "argmin depends on the error at d=" + fmt("%g", d));
        summary << "d=" << d << ": theta*=" << fmt("%.5f", theta_star) << " grid=" << fmt("%.4f", grid_theta) << " ";
    }
    out.detail += (out.detail.empty() ? "" : "; ") + summary.str();
    return out;
}

struct GridArgmin
{
    double theta;
    double phi;
    double psi;
    double value;
};

GridArgmin
grid_argmin_3d(const LinkBudget& b, const PositionError3D& err, const OptimalBeam3D& opt, int n, double& dt,
               double& dp, double& ds)
{
    const double t0 = 0.7 * opt.theta3db_star;
    const double p0 = 0.7 * opt.phi3db_star;
    const double s0 = opt.psi_star - 0.3;
    dt = 0.6 * opt.theta3db_star / (n - 1);
    dp = 0.6 * opt.phi3db_star / (n - 1);
    ds = 0.6 / (n - 1);
    GridArgmin best{0, 0, 0, 2.0};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const double theta = t0 + dt * i;
                const double phi = p0 + dp * j;
                const double psi = s0 + ds * k;
                double v = 2.0;
                try {
                    v = outage_3d_closed(b, beam3d_from_rotation(theta, phi, psi), err).value;
                } catch (const DomainError&) {
                    continue;
                }
                if (v < best.value) {
                    best = {theta, phi, psi, v};
                }
            }
        }
    }
    return best;
}

// 6: 3D optimum against a three-axis grid, matrix identity and distance invariance.
Outcome
criterion_6()
{
    Outcome out;
    std::ostringstream summary;
    for (const char* variant : {"d80", "rotated"}) {
        const Scenario s = figure_preset("fig10", variant);
        const auto opt = optimal_beam_3d(s.budget, *s.error3d);
        double dt = 0, dp = 0, ds = 0;
        const auto g = grid_argmin_3d(s.budget, *s.error3d, opt, 61, dt, dp, ds);
        const double slack = 1.0 + 1e-9;
        out.require(std::abs(g.theta - opt.theta3db_star) <= dt * slack, std::string(variant) + " theta off grid");
        out.require(std::abs(g.phi - opt.phi3db_star) <= dp * slack, std::string(variant) + " phi off grid");
        out.require(std::abs(g.psi - opt.psi_star) <= ds * slack, std::string(variant) + " psi off grid");
        summary << variant << ": (" << fmt("%.4f", opt.theta3db_star) << "," << fmt("%.4f", opt.phi3db_star) << ","
                << fmt("%.4f", opt.psi_star) << ") grid (" << fmt("%.4f", g.theta) << "," << fmt("%.4f", g.phi)
                << "," << fmt("%.4f", g.psi) << ") ";

        const Eigen::Matrix2d expected = opt.xi_star * s.error3d->cross_covariance().inverse();
        const Eigen::Matrix2d built = opt.beam().quadratic_form();
        for (int r = 0; r < 2; ++r) {
            for (int c = 0; c < 2; ++c) {
                const double scale = std::max(std::abs(expected(r, c)), 1e-12 * expected.norm());
                out.require(std::abs(built(r, c) - expected(r, c)) <= 1e-10 * scale,
                            std::string(variant) + " A* entry mismatch");
            }
        }
    }
    const auto base = optimal_beam_3d(budget(20.0, 60.0), rotated_error()).outage_star;
    for (double d : {120.0, 240.0}) {
        const double v = optimal_beam_3d(budget(20.0, d), rotated_error()).outage_star;
        out.require(std::abs(v - base) <= 1e-12, "outage* changes at d=" + fmt("%g", d));
    }
    summary << "outage*=" << fmt("%.6g", base);
    out.detail += (out.detail.empty() ? "" : "; ") + summary.str();
    return out;
}

// 7: Jensen bound on the angular form for a fixed eigenvalue product.
Outcome
criterion_7()
{
    Outcome out;
    const Scenario s = figure_preset("fig8", "circular");
    const BeamPattern3D beam = resolve_beam_3d(s);
    const auto [x1, x2] = b_eigenvalues(beam, *s.error3d);
    const double k = x1 * x2;
    const auto at = [&](double ratio) {
        const double a = std::sqrt(k * ratio);
        return outage_3d_angular(s.budget, a, k / a, *s.error3d);
    };
    const double balanced = at(1.0);
    std::vector<double> ratios;
    for (double r = 0.05; r <= 20.0 * (1 + 1e-12); r *= std::pow(400.0, 1.0 / 80.0)) {
        ratios.push_back(r);
    }
    double prev_left = std::numeric_limits<double>::infinity();
    double prev_right = balanced;
    for (double r : ratios) {
        const double v = at(r);
        out.require(v >= balanced - 1e-15, "ratio " + fmt("%.3g", r) + " below the balanced value");
        if (r < 1.0) {
            out.require(v <= prev_left + 1e-15, "not decreasing towards 1 at ratio " + fmt("%.3g", r));
            prev_left = v;
        } else if (r > 1.0) {
            out.require(v >= prev_right - 1e-15, "not increasing away from 1 at ratio " + fmt("%.3g", r));
            prev_right = v;
        }
    }
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("K=") + fmt("%.4g", k) +
                  " balanced=" + fmt("%.6g", balanced) + " at 0.05: " + fmt("%.6g", at(0.05));
    return out;
}

// 8: the second-order error formula against Monte-Carlo, and both decay limits.
Outcome
criterion_8()
{
    Outcome out;
    std::ostringstream summary;
    const BeamPattern2D beam(0.1);
    const auto fig5 = budget(25.0, 40.0);
    const double kd = k_factor(fig5, beam) * 40.0;
    double zmin = 1e9, zmax = 0.0;
    int seed = 500;
    for (const PositionError2D& err :
         {PositionError2D(3.6, 3.6, 0.0), PositionError2D(2.5, 2.0, kPi / 6), PositionError2D(1.27, 1.27, 0.0)}) {
        const double z = kd / err.sigma_x();
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
        const double closed = approx_error_2d(fig5, beam, err);
        const auto sim = approx_error_mc_2d(fig5, beam, err, mc(10'000'000, seed++));
        const double tol = std::max(3.0 * sim.std_error, 0.3 * std::abs(closed));
        out.require(std::abs(sim.epsilon - closed) <= tol,
                    "kd/sigma_x=" + fmt("%.2f", z) + " closed " + fmt("%.3e", closed) + " mc " + fmt("%.3e", sim.epsilon));
        summary << "z=" << fmt("%.2f", z) << ": " << fmt("%.3e", closed) << " vs " << fmt("%.3e", sim.epsilon) << " ";
    }
    out.require(zmin <= 1.1 && zmax >= 2.9 && zmin >= 1.0 && zmax <= 3.0, "scenarios do not span kd/sigma_x in [1, 3]");

    const auto check_sequence = [&](const std::vector<McDifference>& seq, const std::string& label) {
        for (std::size_t i = 1; i < seq.size(); ++i) {
            const double noise = 3.0 * std::hypot(seq[i].std_error, seq[i - 1].std_error);
            out.require(std::abs(seq[i].epsilon) <= std::abs(seq[i - 1].epsilon) + noise,
                        label + " not decreasing at step " + std::to_string(i));
        }
        out.require(std::abs(seq.back().epsilon) < 1e-3, label + " final |eps| " + fmt("%.2e", seq.back().epsilon));
        summary << label << " final " << fmt("%.2e", seq.back().epsilon) << " ";
    };

    // 2D along distance: strictly decreasing closed form, MC decreasing within noise.
    {
        const PositionError2D err(5.0, 5.0, 0.0);
        std::vector<McDifference> seq;
        double prev_closed = std::numeric_limits<double>::infinity();
        for (double d : {50.0, 100.0, 200.0, 400.0}) {
            const auto b = budget(40.0, d);
            const double closed = approx_error_2d(b, beam, err);
            out.require(closed < prev_closed, "2D closed form not decreasing at d=" + fmt("%g", d));
            prev_closed = closed;
            seq.push_back(approx_error_mc_2d(b, beam, err, mc(10'000'000, seed++)));
        }
        out.require(prev_closed < 1e-3, "2D closed form along d ends above 1e-3");
        check_sequence(seq, "2D-d");
    }
    // 2D along covariance shrink.
    {
        const PositionError2D err(3.6, 3.6, 0.0);
        std::vector<McDifference> seq;
        double prev_closed = std::numeric_limits<double>::infinity();
        for (double c : {1.0, 0.25, 0.0625}) {
            const double closed = approx_error_2d(fig5, beam, err.scaled(c));
            out.require(closed < prev_closed, "2D closed form not decreasing at c=" + fmt("%g", c));
            prev_closed = closed;
            seq.push_back(approx_error_mc_2d(fig5, beam, err.scaled(c), mc(10'000'000, seed++)));
        }
        check_sequence(seq, "2D-shrink");
    }
    // 3D along distance with Pt scaled by d^2 so the angular threshold stays fixed.
    {
        const BeamPattern3D beam3(0.1, 0.1, 0.0);
        std::vector<McDifference> seq;
        for (double d : {50.0, 100.0, 200.0, 400.0}) {
            const auto b = LinkBudget::from_total_power(100.0 * (d / 50.0) * (d / 50.0), kAe, d, kGamma, kAm);
            seq.push_back(approx_error_mc_3d(b, beam3, rotated_error(), mc(10'000'000, seed++)));
        }
        check_sequence(seq, "3D-d");
    }
    // 3D along covariance shrink.
    {
        const BeamPattern3D beam3(0.1, 0.1, 0.0);
        std::vector<McDifference> seq;
        for (double c : {1.0, 0.25, 0.0625}) {
            seq.push_back(approx_error_mc_3d(budget(20.0, 50.0), beam3, rotated_error().scaled(c),
                                             mc(10'000'000, seed++)));
        }
        check_sequence(seq, "3D-shrink");
    }
    out.detail += (out.detail.empty() ? "" : "; ") + summary.str();
    return out;
}

std::vector<SweepRow>
closed_rows(const std::string& id, const std::string& variant)
{
    return run_sweep(figure_preset(id, variant), RunOptions{false});
}

// 9: qualitative shapes of the distance, power and rotation presets.
Outcome
criterion_9()
{
    Outcome out;
    std::ostringstream summary;
    bool literal_peak = true;

    std::vector<std::pair<std::string, std::string>> curves;
    for (const auto& v : figure_variants("fig5")) {
        curves.emplace_back("fig5", v);
    }
    curves.emplace_back("fig9", "circular");
    for (const auto& [id, v] : curves) {
        const auto rows = closed_rows(id, v);
        const double first = rows.front().outage_closed;
        const double last = rows.back().outage_closed;
        double lowest = 2.0;
        double highest = -1.0;
        for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
            lowest = std::min(lowest, rows[i].outage_closed);
            highest = std::max(highest, rows[i].outage_closed);
        }
        out.require(lowest < first && lowest < last, id + "/" + v + " has no interior valley");
        literal_peak = literal_peak && highest > first && highest > last;
        summary << id << "/" << v << " ends " << fmt("%.3g", first) << "," << fmt("%.3g", last) << " min "
                << fmt("%.3g", lowest) << " ";
    }

    const Scenario opt_curve = figure_preset("fig6", "optimal");
    for (const char* v : {"theta0.1", "theta0.15"}) {
        const Scenario fixed = figure_preset("fig6", v);
        const auto rows = run_sweep(fixed, RunOptions{false});
        const auto best = run_sweep(opt_curve, RunOptions{false});
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out.require(rows[i].outage_closed >= best[i].outage_closed - 1e-12,
                        std::string(v) + " below optimal at pt_db=" + fmt("%g", rows[i].axis_value));
        }
        const double theta = *fixed.beam.theta3db;
        const double per_watt = optimal_theta_2d(fixed.budget.with_total_power(1.0));
        const auto tangent = fixed.budget.with_total_power(theta / per_watt);
        const double gap = outage_2d_closed(tangent, BeamPattern2D(theta), *fixed.error2d).value -
                           optimal_outage_2d(tangent, *fixed.error2d).value;
        out.require(std::abs(gap) <= 1e-3, std::string(v) + " tangency gap " + fmt("%.2e", gap));
        summary << v << " tangency at " << fmt("%.2f", watts_to_db(theta / per_watt)) << " dBW gap "
                << fmt("%.1e", gap) << " ";
    }

    {
        const Scenario s = figure_preset("fig11");
        const auto rows = run_sweep(s, RunOptions{false});
        const double psi_star = optimal_beam_3d(s.budget, *s.error3d).psi_star;
        const double step = rows[1].axis_value - rows[0].axis_value;
        const auto it = std::min_element(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
            return a.outage_closed < b.outage_closed;
        });
        out.require(std::abs(std::remainder(it->axis_value - psi_star, 0.5 * kPi)) <= step * (1.0 + 1e-9),
                    "fig11 minimum at " + fmt("%.4f", it->axis_value) + " vs psi* " + fmt("%.4f", psi_star));
        summary << "fig11 argmin " << fmt("%.4f", it->axis_value) << " psi* " << fmt("%.4f", psi_star) << " ";
    }
    summary << "(interior maximum above both ends: " << (literal_peak ? "yes" : "no") << ")";
    out.detail += (out.detail.empty() ? "" : "; ") + summary.str();
    return out;
}

double
q_oracle(double x)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate([&](double u) { return std::exp(-0.5 * (x + u) * (x + u)); }) /
           std::sqrt(2.0 * kPi);
}

double
marcum_oracle(double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate(
        [&](double x) {
            const double z = a * x;
            return x * std::exp(-0.5 * (x - a) * (x - a)) * std::exp(-z) * boost::math::cyl_bessel_i(0, z);
        },
        b, std::max(a, b) + 40.0);
}

// 10: special functions against their quadrature, series and sampling oracles.
Outcome
criterion_10()
{
    Outcome out;
    double worst_q = 0.0;
    for (double x = 0.0; x <= 8.0; x += 0.25) {
        worst_q = std::max(worst_q, std::abs(specfun::gaussian_q(x) - q_oracle(x)));
    }
    out.require(worst_q <= 1e-12, "gaussian_q gap " + fmt("%.2e", worst_q));
    out.require(std::abs(specfun::gaussian_q(1.6448536) - 0.05) <= 1e-8, "gaussian_q 5% point");
    out.require(specfun::gaussian_q(40.0) <= 1e-300 && !std::isnan(specfun::gaussian_q(40.0)), "gaussian_q tail");

    double worst_i0 = 0.0;
    for (double x : {0.0, 1.0, 2.5, 10.0, 20.0}) {
        long double term = 1.0L;
        long double sum = 1.0L;
        for (int k = 1; k < 200; ++k) {
            term *= (x / 2.0L) * (x / 2.0L) / (static_cast<long double>(k) * k);
            sum += term;
        }
        worst_i0 = std::max(worst_i0, std::abs(specfun::bessel_i0(x) / static_cast<double>(sum) - 1.0));
    }
    out.require(worst_i0 <= 1e-13, "bessel_i0 relative gap " + fmt("%.2e", worst_i0));
    out.require(std::abs(specfun::bessel_i0(1.0) - 1.2660658) <= 1e-7, "bessel_i0(1)");

    double worst_m = 0.0;
    for (double a = 0.0; a <= 8.0; a += 0.5) {
        for (double b = 0.0; b <= 12.0; b += 0.5) {
            worst_m = std::max(worst_m, std::abs(specfun::marcum_q1(a, b) - marcum_oracle(a, b)));
        }
    }
    out.require(worst_m <= 1e-10, "marcum_q1 gap " + fmt("%.2e", worst_m));
    out.require(std::abs(specfun::marcum_q1(1.0, 2.0) - 0.269012) <= 1e-6, "marcum_q1(1, 2)");

    {
        const double q = 0.6, omega = 2.0, x = 1.0;
        const double l1 = std::sqrt(omega * q * q / (1 + q * q));
        const double l2 = std::sqrt(omega / (1 + q * q));
        std::mt19937_64 rng(99);
        std::normal_distribution<double> normal;
        const int n = 10'000'000;
        long hits = 0;
        for (int i = 0; i < n; ++i) {
            const double v1 = normal(rng);
            const double v2 = normal(rng);
            hits += std::hypot(l1 * v1, l2 * v2) <= x;
        }
        const double p = static_cast<double>(hits) / n;
        const double se = std::sqrt(p * (1 - p) / n);
        out.require(std::abs(specfun::hoyt_cdf(x, q, omega) - p) <= 3 * se, "hoyt_cdf vs sampling");
    }
    for (double x : {0.5, 1.0, 2.0}) {
        out.require(std::abs(specfun::hoyt_cdf(x, 0.999, 2.0) - (1 - std::exp(-x * x / 2))) <= 1e-3,
                    "hoyt near-unit shape");
    }
    double worst_seam = 0.0;
    for (double x : {0.1, 0.7, 1.5, 3.0, 6.0}) {
        worst_seam = std::max(worst_seam, std::abs(specfun::hoyt_sf(x, 1 - 1e-5, 2.0) - specfun::rayleigh_sf(x, 2.0)));
    }
    out.require(worst_seam <= 1e-6, "Hoyt/Rayleigh seam gap " + fmt("%.2e", worst_seam));
    out.detail += (out.detail.empty() ? "" : "; ") + std::string("Q ") + fmt("%.1e", worst_q) + ", I0 " +
                  fmt("%.1e", worst_i0) + ", Q1 " + fmt("%.1e", worst_m) + ", seam " + fmt("%.1e", worst_seam);
    return out;
}

// 11: identical CSV bytes across repeated runs and worker counts.
Outcome
criterion_11()
{
    Outcome out;
    Scenario s = figure_preset("fig8", "circular");
    s.mc.samples = 200'000;
    s.mc.batch = 16'384;
    s.mc.seed = 4242;
    std::vector<std::string> outputs;
    for (unsigned workers : {1u, 1u, 3u, 8u}) {
        s.mc.workers = workers;
        std::ostringstream csv;
        emit_csv(run_sweep(s), csv);
        outputs.push_back(csv.str());
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) {
        out.require(outputs[i] == outputs[0], "run " + std::to_string(i) + " differs");
    }
    out.detail += (out.detail.empty() ? "" : "; ") + std::to_string(outputs[0].size()) + " bytes, workers 1/1/3/8";
    return out;
}

} // namespace

int
main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"2D closed form vs Monte-Carlo", criterion_1},
        {"3D closed form vs Monte-Carlo", criterion_2},
        {"Hoyt vs angular integral", criterion_3},
        {"angular integral constancy", criterion_4},
        {"2D optimal beamwidth", criterion_5},
        {"3D optimal beam", criterion_6},
        {"Jensen bound", criterion_7},
        {"approximation error", criterion_8},
        {"figure shapes", criterion_9},
        {"special functions", criterion_10},
        {"determinism", criterion_11},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Timer t;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2zu %-30s %6.1fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    t.seconds(), o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
