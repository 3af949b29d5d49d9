#include "gbeam/errors.hpp"
#include "gbeam/scenario.hpp"

#include <functional>
#include <map>
#include <numbers>
#include <string>

// Caption values: Pt in dB relative to 1 W, Ae = 1 cm^2, am = 1e-4, gamma_th = 1e-7 W.
// Per-curve error parameters only appear in legends and are representative values.

namespace gbeam {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAe = 1e-4;
constexpr double kAm = 1e-4;
constexpr double kGamma = 1e-7;

LinkBudget
caption_budget(double pt_db, double d)
{
    return LinkBudget::from_total_power(db_to_watts(pt_db), kAe, d, kGamma, kAm);
}

Scenario
scenario_2d(double pt_db, double d, std::optional<double> theta, PositionError2D err,
            SweepSpec sweep)
{
    BeamSpec beam;
    beam.theta3db = theta;
    return Scenario{Mode::TwoD, caption_budget(pt_db, d), beam, err, std::nullopt, sweep, McConfig{}};
}

Scenario
scenario_3d(double pt_db, double d, BeamSpec beam, PositionError3D err, SweepSpec sweep)
{
    return Scenario{Mode::ThreeD, caption_budget(pt_db, d), beam, std::nullopt, err, sweep, McConfig{}};
}

BeamSpec
axes_beam(double theta, double phi, double psi)
{
    return BeamSpec{BeamForm::Axes, theta, phi, psi};
}

BeamSpec
optimal_beam()
{
    return BeamSpec{BeamForm::Direct, std::nullopt, std::nullopt, std::nullopt};
}

using Builder = std::function<Scenario()>;
using VariantTable = std::vector<std::pair<std::string, Builder>>;

const std::map<std::string, VariantTable>&
presets()
{
    static const std::map<std::string, VariantTable> table = [] {
        std::map<std::string, VariantTable> t;

        const SweepSpec d_sweep_2d{SweepAxis::Distance, 10.0, 150.0, 29};
        const auto fig5 = [=](double s1, double s2, double vp) {
            return [=] { return scenario_2d(25.0, 40.0, 0.1, PositionError2D(s1, s2, vp), d_sweep_2d); };
        };
        t["fig5"] = {
            {"v1", fig5(1.5, 1.0, kPi / 4)},
            {"v2", fig5(1.5, 1.0, 0.0)},
            {"v3", fig5(1.0, 0.5, kPi / 4)},
            {"v4", fig5(6.0, 4.0, kPi / 4)},
        };

        const SweepSpec pt_sweep_2d{SweepAxis::PtDb, 12.0, 26.0, 29};
        const PositionError2D fig6_err(1.5, 1.0, kPi / 3);
        t["fig6"] = {
            {"theta0.1", [=] { return scenario_2d(25.0, 40.0, 0.1, fig6_err, pt_sweep_2d); }},
            {"theta0.15", [=] { return scenario_2d(25.0, 40.0, 0.15, fig6_err, pt_sweep_2d); }},
            {"optimal", [=] { return scenario_2d(25.0, 40.0, std::nullopt, fig6_err, pt_sweep_2d); }},
        };

        const SweepSpec theta_sweep_2d{SweepAxis::Theta3db, 0.02, 1.2, 60};
        const PositionError2D fig7_err(1.5, 1.0, kPi / 4);
        t["fig7"] = {
            {"d40", [=] { return scenario_2d(25.0, 40.0, 0.1, fig7_err, theta_sweep_2d); }},
            {"d60", [=] { return scenario_2d(25.0, 60.0, 0.1, fig7_err, theta_sweep_2d); }},
        };

        const PositionError3D rotated_err(2.5, 2.0, 1.5, kPi / 3, kPi / 6, kPi / 4);
        const PositionError3D aligned_err(2.5, 2.0, 1.5, 0.0, 0.0, 0.0);

        const SweepSpec pt_sweep_3d{SweepAxis::PtDb, 12.0, 30.0, 37};
        t["fig8"] = {
            {"circular", [=] { return scenario_3d(20.0, 80.0, axes_beam(0.1, 0.1, 0.5), rotated_err, pt_sweep_3d); }},
            {"optimal", [=] { return scenario_3d(20.0, 80.0, optimal_beam(), rotated_err, pt_sweep_3d); }},
        };

        const SweepSpec d_sweep_3d{SweepAxis::Distance, 10.0, 230.0, 45};
        t["fig9"] = {
            {"circular", [=] { return scenario_3d(20.0, 80.0, axes_beam(0.1, 0.1, 0.5), rotated_err, d_sweep_3d); }},
        };

        const SweepSpec theta_sweep_3d{SweepAxis::Theta3db, 0.05, 0.5, 46};
        const BeamSpec fig10_beam{BeamForm::Rotation, 0.1, std::nullopt, std::nullopt};
        t["fig10"] = {
            {"d80", [=] { return scenario_3d(20.0, 80.0, fig10_beam, aligned_err, theta_sweep_3d); }},
            {"d60", [=] { return scenario_3d(20.0, 60.0, fig10_beam, aligned_err, theta_sweep_3d); }},
            {"rotated", [=] { return scenario_3d(20.0, 80.0, fig10_beam, rotated_err, theta_sweep_3d); }},
        };

        const SweepSpec psi_sweep{SweepAxis::Psi, -0.75, 0.75, 61};
        const BeamSpec fig11_beam{BeamForm::Rotation, std::nullopt, std::nullopt, 0.0};
        t["fig11"] = {
            {"d120", [=] { return scenario_3d(20.0, 120.0, fig11_beam, rotated_err, psi_sweep); }},
        };
        return t;
    }();
    return table;
}

} // namespace

std::vector<std::string>
figure_ids()
{
    return {"fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"};
}

std::vector<std::string>
figure_variants(std::string_view id)
{
    auto it = presets().find(std::string(id));
    if (it == presets().end()) {
        throw DomainError("unknown figure id '" + std::string(id) + "'");
    }
    std::vector<std::string> names;
    for (const auto& [name, builder] : it->second) {
        names.push_back(name);
    }
    return names;
}

Scenario
figure_preset(std::string_view id, std::string_view variant)
{
    auto it = presets().find(std::string(id));
    if (it == presets().end()) {
        throw DomainError("unknown figure id '" + std::string(id) + "'");
    }
    const auto& variants = it->second;
    if (variant.empty()) {
        return variants.front().second();
    }
    for (const auto& [name, builder] : variants) {
        if (name == variant) {
            return builder();
        }
    }
    throw DomainError("figure '" + std::string(id) + "' has no variant '" + std::string(variant) + "'");
}

} // namespace gbeam
