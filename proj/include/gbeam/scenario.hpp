#pragma once

// Scenario files, parameter sweeps and CSV output.

#include "gbeam/geometry.hpp"
#include "gbeam/montecarlo.hpp"
#include "gbeam/outage_types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gbeam {

enum class Mode
{
    TwoD,
    ThreeD,
};

enum class SweepAxis
{
    Distance,
    PtDb,
    Theta3db,
    Phi3db,
    Psi,
    GammaTh,
};

/// How the three 3D beam slots are read.
enum class BeamForm
{
    Direct,   // theta3db, phi3db, m
    Axes,     // principal widths theta3db, phi3db rotated by psi
    Rotation, // diagonal widths theta3db, phi3db with principal axes at psi
};

/// Beam description in which any slot may be left to the closed-form optimum.
/// An empty optional means "optimal".
struct BeamSpec
{
    BeamForm form = BeamForm::Direct;
    std::optional<double> theta3db;
    std::optional<double> phi3db;
    std::optional<double> third; // m for Direct, psi otherwise

    bool any_optimal(Mode mode) const;
};

struct SweepSpec
{
    SweepAxis axis = SweepAxis::Distance;
    double start = 0.0;
    double stop = 0.0;
    int points = 2;

    /// Linearly spaced axis values, start and stop included.
    std::vector<double> values() const;
};

struct Scenario
{
    Mode mode = Mode::TwoD;
    LinkBudget budget;
    BeamSpec beam;
    std::optional<PositionError2D> error2d;
    std::optional<PositionError3D> error3d;
    std::optional<SweepSpec> sweep;
    McConfig mc;
};

struct SweepRow
{
    double axis_value = 0.0;
    double outage_closed = 0.0; // NaN when the row failed
    double outage_mc = 0.0;     // NaN when Monte-Carlo was skipped or the row failed
    double mc_stderr = 0.0;
    std::string case_tag;       // outage case, or "regime_error" / "domain_error"
    bool optimal = false;
    std::string message;        // error text for failed rows
    double optimum_gap = 0.0;   // distance of the row's beam from the row's optimum, NaN if unknown
};

struct RunOptions
{
    bool monte_carlo = true;
};

std::string_view to_string(Mode mode);
std::string_view to_string(SweepAxis axis);
std::string_view to_string(BeamForm form);

/// Parses a line-oriented `key = value` document. Throws ParseError with the
/// offending line number for syntax errors, unknown or missing keys and
/// violated model invariants.
Scenario parse_scenario(std::string_view text);

/// Reads and parses a file; IoError when it cannot be opened.
Scenario load_scenario(const std::string& path);

/// Renders a scenario as a document that parse_scenario reads back unchanged.
std::string format_scenario(const Scenario& s);

/// Evaluates one sweep point (or the base scenario when axis_value is empty).
/// Model errors are recorded in the row rather than thrown.
SweepRow evaluate_point(const Scenario& s, std::optional<double> axis_value,
                        const RunOptions& opts = {});

/// Evaluates every sweep point in axis order and marks the rows whose beam is
/// closest to that row's closed-form optimum. Requires a sweep.
std::vector<SweepRow> run_sweep(const Scenario& s, const RunOptions& opts = {});

/// CSV with header `axis,outage_closed,outage_mc,mc_stderr,case,optimal` and
/// 12 significant digits. Throws DomainError for an empty row set.
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);

/// emit_csv into a file; IoError when the file cannot be written.
void write_csv(const std::vector<SweepRow>& rows, const std::string& path);

/// Scenario with the sweep axis set to `value` (a budget entry or a beam slot).
/// Throws DomainError when the axis does not apply to the scenario.
Scenario apply_axis(const Scenario& s, SweepAxis axis, double value);

/// Concrete beams with optimal slots resolved against the scenario's budget.
BeamPattern2D resolve_beam_2d(const Scenario& s);
BeamPattern3D resolve_beam_3d(const Scenario& s);

/// Figure presets: ids fig5..fig11, each with named curve variants.
std::vector<std::string> figure_ids();
std::vector<std::string> figure_variants(std::string_view id);
/// Empty variant selects the first one. Throws DomainError for unknown ids or variants.
Scenario figure_preset(std::string_view id, std::string_view variant = {});

} // namespace gbeam
