// gbeam_cli: outage evaluation, beam optimization, sweeps and figure presets.
//
// Exit codes: 0 success, 1 other failure (including failed mc-validate),
// 2 parse error, 3 every sweep row hit a model error, 4 I/O error.

#include "gbeam/errors.hpp"
#include "gbeam/outage2d.hpp"
#include "gbeam/outage3d.hpp"
#include "gbeam/scenario.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

enum ExitCode
{
    kOk = 0,
    kFailure = 1,
    kParse = 2,
    kRegime = 3,
    kIo = 4,
};

struct CommonOptions
{
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<unsigned> workers;
    bool no_mc = false;
};

void
add_common(CLI::App* cmd, CommonOptions& o, bool needs_config)
{
    auto* cfg = cmd->add_option("--config", o.config, "Scenario file");
    if (needs_config) {
        cfg->required();
    }
    cmd->add_option("--out", o.out, "Output file (default: stdout)");
    cmd->add_option("--seed", o.seed, "Monte-Carlo seed");
    cmd->add_option("--samples", o.samples, "Monte-Carlo samples per point");
    cmd->add_option("--workers", o.workers, "Monte-Carlo worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_flag("--no-mc", o.no_mc, "Closed forms only");
}

void
apply_overrides(gbeam::Scenario& s, const CommonOptions& o)
{
    if (o.seed) {
        s.mc.seed = *o.seed;
    }
    if (o.samples) {
        s.mc.samples = *o.samples;
        s.mc.batch = std::min<std::uint64_t>(s.mc.batch, s.mc.samples);
    }
    if (o.workers) {
        s.mc.workers = *o.workers;
    }
    s.mc.validate();
}

std::string
num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void
deliver(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw gbeam::IoError("cannot open '" + path + "' for writing");
    }
    f << text;
    f.flush();
    if (!f) {
        throw gbeam::IoError("failed writing '" + path + "'");
    }
}

bool
all_rows_failed(const std::vector<gbeam::SweepRow>& rows)
{
    for (const auto& r : rows) {
        if (r.message.empty()) {
            return false;
        }
    }
    return true;
}

int
emit_sweep(const gbeam::Scenario& s, const CommonOptions& o)
{
    gbeam::RunOptions run;
    run.monte_carlo = !o.no_mc;
    const auto rows = gbeam::run_sweep(s, run);
    std::ostringstream csv;
    gbeam::emit_csv(rows, csv);
    deliver(csv.str(), o.out);
    for (const auto& r : rows) {
        if (!r.message.empty()) {
            std::cerr << "axis " << num(r.axis_value) << ": " << r.message << "\n";
        }
    }
    return all_rows_failed(rows) ? kRegime : kOk;
}

int
cmd_outage(const CommonOptions& o)
{
    gbeam::Scenario s = gbeam::load_scenario(o.config);
    apply_overrides(s, o);
    gbeam::RunOptions run;
    run.monte_carlo = !o.no_mc;
    const gbeam::SweepRow row = gbeam::evaluate_point(s, std::nullopt, run);

    std::ostringstream out;
    out << "mode = " << gbeam::to_string(s.mode) << "\n"
        << "case = " << row.case_tag << "\n"
        << "outage_closed = " << num(row.outage_closed) << "\n"
        << "outage_mc = " << num(row.outage_mc) << "\n"
        << "mc_stderr = " << num(row.mc_stderr) << "\n";
    if (row.message.empty() && row.case_tag == gbeam::to_string(gbeam::OutageCase::MainLobeRegime)) {
        if (s.mode == gbeam::Mode::TwoD) {
            const auto beam = gbeam::resolve_beam_2d(s);
            out << "k = " << num(gbeam::k_factor(s.budget, beam)) << "\n"
                << "approx_error = " << num(gbeam::approx_error_2d(s.budget, beam, *s.error2d)) << "\n";
        } else {
            const auto beam = gbeam::resolve_beam_3d(s);
            const auto w = gbeam::whiten(beam, *s.error3d);
            out << "lambda1 = " << num(w.lambda1) << "\n"
                << "lambda2 = " << num(w.lambda2) << "\n"
                << "q = " << num(w.q) << "\n"
                << "omega = " << num(w.omega) << "\n";
        }
    }
    if (!row.message.empty()) {
        out << "error = " << row.message << "\n";
    }
    deliver(out.str(), o.out);
    return row.message.empty() ? kOk : (row.case_tag == "regime_error" ? kRegime : kFailure);
}

int
cmd_optimize(const CommonOptions& o)
{
    const gbeam::Scenario s = gbeam::load_scenario(o.config);
    std::ostringstream out;
    if (s.mode == gbeam::Mode::TwoD) {
        const double theta = gbeam::optimal_theta_2d(s.budget);
        const auto best = gbeam::optimal_outage_2d(s.budget, *s.error2d);
        out << "theta3db_star = " << num(theta) << "\n"
            << "outage_star = " << num(best.value) << "\n";
    } else {
        const auto opt = gbeam::optimal_beam_3d(s.budget, *s.error3d);
        out << "theta3db_star = " << num(opt.theta3db_star) << "\n"
            << "phi3db_star = " << num(opt.phi3db_star) << "\n"
            << "m_star = " << num(opt.m_star) << "\n"
            << "psi_star = " << num(opt.psi_star) << "\n"
            << "xi_star = " << num(opt.xi_star) << "\n"
            << "outage_star = " << num(opt.outage_star) << "\n";
    }
    deliver(out.str(), o.out);
    return kOk;
}

int
cmd_sweep(const CommonOptions& o)
{
    gbeam::Scenario s = gbeam::load_scenario(o.config);
    if (!s.sweep) {
        throw gbeam::ParseError(0, "config has no [sweep] section");
    }
    apply_overrides(s, o);
    return emit_sweep(s, o);
}

int
cmd_figure(const std::string& id, const std::string& variant, bool print_config,
           const CommonOptions& o)
{
    gbeam::Scenario s = gbeam::figure_preset(id, variant);
    apply_overrides(s, o);
    if (print_config) {
        deliver(gbeam::format_scenario(s), o.out);
        return kOk;
    }
    return emit_sweep(s, o);
}

int
cmd_mc_validate(const CommonOptions& o)
{
    gbeam::Scenario s = gbeam::load_scenario(o.config);
    apply_overrides(s, o);
    std::vector<gbeam::SweepRow> rows;
    if (s.sweep) {
        rows = gbeam::run_sweep(s);
    } else {
        rows.push_back(gbeam::evaluate_point(s, std::nullopt));
    }
    std::ostringstream out;
    out << "axis,outage_closed,outage_mc,mc_stderr,bound,status\n";
    int failures = 0;
    for (const auto& r : rows) {
        std::string status = "skip";
        double bound = std::nan("");
        if (r.message.empty()) {
            bound = 3.0 * r.mc_stderr + 5e-3;
            const bool ok = std::abs(r.outage_closed - r.outage_mc) <= bound;
            status = ok ? "pass" : "fail";
            failures += ok ? 0 : 1;
        }
        out << num(r.axis_value) << ',' << num(r.outage_closed) << ',' << num(r.outage_mc) << ','
            << num(r.mc_stderr) << ',' << num(bound) << ',' << status << '\n';
    }
    deliver(out.str(), o.out);
    std::cerr << (failures == 0 ? "mc-validate: all rows within bound\n"
                                : "mc-validate: " + std::to_string(failures) + " row(s) outside bound\n");
    return failures == 0 ? kOk : kFailure;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"Outage probability of positioning-assisted Gaussian beams"};
    app.require_subcommand(1);

    CommonOptions outage_opts, optimize_opts, sweep_opts, figure_opts, validate_opts;
    auto* outage = app.add_subcommand("outage", "Closed-form and Monte-Carlo outage of one scenario");
    add_common(outage, outage_opts, true);
    auto* optimize = app.add_subcommand("optimize", "Closed-form optimal beam for a scenario");
    add_common(optimize, optimize_opts, true);
    auto* sweep = app.add_subcommand("sweep", "Run the scenario's sweep and write CSV");
    add_common(sweep, sweep_opts, true);
    auto* figure = app.add_subcommand("figure", "Run a figure preset sweep");
    add_common(figure, figure_opts, false);
    std::string figure_id;
    std::string figure_variant;
    bool print_config = false;
    figure->add_option("id", figure_id, "fig5 ... fig11")->required();
    figure->add_option("--variant", figure_variant, "Curve variant (default: first)");
    figure->add_flag("--print-config", print_config, "Print the preset as a config file");
    auto* validate = app.add_subcommand("mc-validate", "Check closed forms against Monte-Carlo");
    add_common(validate, validate_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (*outage) {
            return cmd_outage(outage_opts);
        }
        if (*optimize) {
            return cmd_optimize(optimize_opts);
        }
        if (*sweep) {
            return cmd_sweep(sweep_opts);
        }
        if (*figure) {
            if (!figure_opts.config.empty()) {
                throw gbeam::ParseError(0, "figure takes no --config; use --print-config to export one");
            }
            return cmd_figure(figure_id, figure_variant, print_config, figure_opts);
        }
        if (*validate) {
            return cmd_mc_validate(validate_opts);
        }
    } catch (const gbeam::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const gbeam::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const gbeam::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return kRegime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}
