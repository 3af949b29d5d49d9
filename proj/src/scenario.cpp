#include "gbeam/scenario.hpp"

#include "gbeam/errors.hpp"
#include "gbeam/outage2d.hpp"
#include "gbeam/outage3d.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

namespace gbeam {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// document model

struct Entry
{
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

struct Document
{
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;

    const Entry* find(const std::string& section, const std::string& key) const
    {
        auto s = sections.find(section);
        if (s == sections.end()) {
            return nullptr;
        }
        auto e = s->second.find(key);
        return e == s->second.end() ? nullptr : &e->second;
    }

    int line_of(const std::string& section) const
    {
        auto it = section_lines.find(section);
        return it == section_lines.end() ? 0 : it->second;
    }
};

const std::map<std::string, std::set<std::string>>&
allowed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys = {
        {"", {"mode"}},
        {"budget", {"pt_db", "pt_w", "pmax_w", "ae_cm2", "ae_m2", "am", "gamma_th", "d"}},
        {"beam", {"form", "theta3db", "phi3db", "m", "psi"}},
        {"error", {"sigma1", "sigma2", "sigma3", "varphi", "varphi_x", "varphi_y", "varphi_z"}},
        {"sweep", {"axis", "start", "stop", "points"}},
        {"mc", {"samples", "seed", "batch", "workers"}},
    };
    return keys;
}

std::string
trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

Document
read_document(std::string_view text)
{
    Document doc;
    std::string current;
    doc.sections[current];
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view raw = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        const auto comment = raw.find_first_of("#;");
        if (comment != std::string_view::npos) {
            raw = raw.substr(0, comment);
        }
        const std::string line = trim(raw);
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError(line_no, "malformed section header '" + line + "'");
            }
            current = trim(std::string_view(line).substr(1, line.size() - 2));
            if (current.empty() || !allowed_keys().count(current)) {
                throw ParseError(line_no, "unknown section [" + current + "]");
            }
            if (doc.section_lines.count(current)) {
                throw ParseError(line_no, "section [" + current + "] appears twice");
            }
            doc.sections[current];
            doc.section_lines[current] = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) {
            throw ParseError(line_no, "missing key before '='");
        }
        if (value.empty()) {
            throw ParseError(line_no, "missing value for key '" + key + "'");
        }
        const auto& allowed = allowed_keys().at(current);
        if (!allowed.count(key)) {
            const std::string where = current.empty() ? "top level" : "[" + current + "]";
            throw ParseError(line_no, "unknown key '" + key + "' in " + where);
        }
        auto& section = doc.sections[current];
        if (section.count(key)) {
            throw ParseError(line_no, "duplicate key '" + key + "' (first set on line " +
                                          std::to_string(section[key].line) + ")");
        }
        section[key] = {value, line_no};
        if (end == text.size()) {
            break;
        }
    }
    return doc;
}

// ---------------------------------------------------------------------------
// values

bool
parse_plain_double(const std::string& s, double& out)
{
    if (s.empty()) {
        return false;
    }
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

// Accepts plain reals and the forms pi, pi/N, x*pi, x*pi/N (with optional sign).
bool
parse_real_text(const std::string& s, double& out)
{
    if (parse_plain_double(s, out)) {
        return true;
    }
    static const std::regex pi_form(R"(^([+-]?)(?:([0-9.eE+-]+)\s*\*\s*)?pi(?:\s*/\s*([0-9.eE+-]+))?$)");
    std::smatch m;
    if (!std::regex_match(s, m, pi_form)) {
        return false;
    }
    double factor = 1.0;
    if (m[2].matched && !parse_plain_double(m[2].str(), factor)) {
        return false;
    }
    double divisor = 1.0;
    if (m[3].matched && !parse_plain_double(m[3].str(), divisor)) {
        return false;
    }
    if (divisor == 0.0) {
        return false;
    }
    out = (m[1].str() == "-" ? -1.0 : 1.0) * factor * std::numbers::pi / divisor;
    return true;
}

double
real_value(const Entry& e, const std::string& key)
{
    double v = 0.0;
    if (!parse_real_text(e.value, v) || !std::isfinite(v)) {
        throw ParseError(e.line, key + ": expected a finite number, got '" + e.value + "'");
    }
    return v;
}

std::uint64_t
unsigned_value(const Entry& e, const std::string& key)
{
    std::uint64_t v = 0;
    const char* first = e.value.data();
    const char* last = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc() && ptr == last) {
        return v;
    }
    double d = 0.0;
    if (parse_plain_double(e.value, d) && d >= 0.0 && d <= 9007199254740992.0 &&
        d == std::floor(d)) {
        return static_cast<std::uint64_t>(d);
    }
    throw ParseError(e.line, key + ": expected a non-negative integer, got '" + e.value + "'");
}

const Entry&
require(const Document& doc, const std::string& section, const std::string& key)
{
    if (const Entry* e = doc.find(section, key)) {
        return *e;
    }
    const std::string where = section.empty() ? "top level" : "[" + section + "]";
    throw ParseError(doc.line_of(section), "missing required key '" + key + "' in " + where);
}

void
forbid(const Document& doc, const std::string& section, const std::string& key,
       const std::string& why)
{
    if (const Entry* e = doc.find(section, key)) {
        throw ParseError(e->line, "key '" + key + "' " + why);
    }
}

template <class F>
auto
checked(int line, const std::string& what, F make)
{
    try {
        return make();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& ex) {
        throw ParseError(line, what + ": " + ex.what());
    }
}

// Shortest %g rendering that reads back to the same double.
std::string
number_text(double v)
{
    char buf[40];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        double back = 0.0;
        if (parse_plain_double(buf, back) && back == v) {
            break;
        }
    }
    return buf;
}

// ---------------------------------------------------------------------------
// enum names

std::optional<SweepAxis>
axis_from_name(const std::string& name)
{
    static const std::map<std::string, SweepAxis> names = {
        {"d", SweepAxis::Distance},       {"pt_db", SweepAxis::PtDb},
        {"theta3db", SweepAxis::Theta3db}, {"phi3db", SweepAxis::Phi3db},
        {"psi", SweepAxis::Psi},          {"gamma_th", SweepAxis::GammaTh},
    };
    auto it = names.find(name);
    if (it == names.end()) {
        return std::nullopt;
    }
    return it->second;
}

// ---------------------------------------------------------------------------
// section readers

LinkBudget
read_budget(const Document& doc)
{
    const char* power_keys[] = {"pt_db", "pt_w", "pmax_w"};
    const Entry* power = nullptr;
    std::string power_key;
    for (const char* k : power_keys) {
        if (const Entry* e = doc.find("budget", k)) {
            if (power) {
                throw ParseError(e->line, std::string("give only one of pt_db, pt_w, pmax_w ('") +
                                              k + "' conflicts with '" + power_key + "')");
            }
            power = e;
            power_key = k;
        }
    }
    if (!power) {
        throw ParseError(doc.line_of("budget"), "missing power key in [budget]: one of pt_db, pt_w, pmax_w");
    }

    const Entry* ae_cm2 = doc.find("budget", "ae_cm2");
    const Entry* ae_m2 = doc.find("budget", "ae_m2");
    if (ae_cm2 && ae_m2) {
        throw ParseError(ae_m2->line, "give only one of ae_cm2, ae_m2");
    }
    if (!ae_cm2 && !ae_m2) {
        throw ParseError(doc.line_of("budget"), "missing aperture key in [budget]: ae_cm2 or ae_m2");
    }
    const Entry& ae_entry = ae_cm2 ? *ae_cm2 : *ae_m2;
    const double ae = real_value(ae_entry, ae_cm2 ? "ae_cm2" : "ae_m2") * (ae_cm2 ? 1e-4 : 1.0);

    const Entry& am = require(doc, "budget", "am");
    const Entry& gamma = require(doc, "budget", "gamma_th");
    const Entry& d = require(doc, "budget", "d");
    const double power_value = real_value(*power, power_key);
    const double am_v = real_value(am, "am");
    const double gamma_v = real_value(gamma, "gamma_th");
    const double d_v = real_value(d, "d");

    // Point the diagnostic at the most specific line we can.
    const auto blame = [&]() {
        if (!(d_v > 0.0)) {
            return d.line;
        }
        if (!(gamma_v > 0.0)) {
            return gamma.line;
        }
        if (!(am_v > 0.0) || am_v > 1.0) {
            return am.line;
        }
        if (!(ae > 0.0)) {
            return ae_entry.line;
        }
        return power->line;
    };
    return checked(blame(), "[budget]", [&]() {
        if (power_key == "pmax_w") {
            return LinkBudget::from_peak_power(power_value, ae, d_v, gamma_v, am_v);
        }
        const double pt = power_key == "pt_db" ? db_to_watts(power_value) : power_value;
        return LinkBudget::from_total_power(pt, ae, d_v, gamma_v, am_v);
    });
}

std::optional<double>
beam_slot(const Document& doc, const std::string& key, bool required_here)
{
    const Entry* e = doc.find("beam", key);
    if (!e) {
        if (required_here) {
            require(doc, "beam", key);
        }
        return std::nullopt;
    }
    if (e->value == "optimal") {
        return std::nullopt;
    }
    return real_value(*e, key);
}

} // namespace

// ---------------------------------------------------------------------------
// names

std::string_view
to_string(Mode mode)
{
    return mode == Mode::TwoD ? "2d" : "3d";
}

std::string_view
to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::Distance:
        return "d";
    case SweepAxis::PtDb:
        return "pt_db";
    case SweepAxis::Theta3db:
        return "theta3db";
    case SweepAxis::Phi3db:
        return "phi3db";
    case SweepAxis::Psi:
        return "psi";
    case SweepAxis::GammaTh:
        return "gamma_th";
    }
    return "unknown";
}

std::string_view
to_string(BeamForm form)
{
    switch (form) {
    case BeamForm::Direct:
        return "direct";
    case BeamForm::Axes:
        return "axes";
    case BeamForm::Rotation:
        return "rotation";
    }
    return "unknown";
}

bool
BeamSpec::any_optimal(Mode mode) const
{
    if (mode == Mode::TwoD) {
        return !theta3db;
    }
    return !theta3db || !phi3db || !third;
}

std::vector<double>
SweepSpec::values() const
{
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        out[static_cast<std::size_t>(i)] = i == points - 1 ? stop : start + (stop - start) * t;
    }
    return out;
}

// ---------------------------------------------------------------------------
// parsing

Scenario
parse_scenario(std::string_view text)
{
    const Document doc = read_document(text);

    const Entry& mode_entry = require(doc, "", "mode");
    Mode mode;
    if (mode_entry.value == "2d") {
        mode = Mode::TwoD;
    } else if (mode_entry.value == "3d") {
        mode = Mode::ThreeD;
    } else {
        throw ParseError(mode_entry.line, "mode must be '2d' or '3d', got '" + mode_entry.value + "'");
    }

    const LinkBudget budget = read_budget(doc);

    // sweep first: the swept beam slot may be omitted from [beam]
    std::optional<SweepSpec> sweep;
    if (doc.section_lines.count("sweep")) {
        SweepSpec sp;
        const Entry& axis = require(doc, "sweep", "axis");
        const auto parsed_axis = axis_from_name(axis.value);
        if (!parsed_axis) {
            throw ParseError(axis.line, "unknown sweep axis '" + axis.value +
                                            "' (d, pt_db, theta3db, phi3db, psi, gamma_th)");
        }
        sp.axis = *parsed_axis;
        if (mode == Mode::TwoD && (sp.axis == SweepAxis::Phi3db || sp.axis == SweepAxis::Psi)) {
            throw ParseError(axis.line, "sweep axis '" + axis.value + "' needs mode = 3d");
        }
        sp.start = real_value(require(doc, "sweep", "start"), "start");
        sp.stop = real_value(require(doc, "sweep", "stop"), "stop");
        const Entry& points = require(doc, "sweep", "points");
        const std::uint64_t n = unsigned_value(points, "points");
        if (n < 2 || n > 1'000'000) {
            throw ParseError(points.line, "points must lie in [2, 1000000]");
        }
        sp.points = static_cast<int>(n);
        sweep = sp;
    }
    const auto swept = [&](SweepAxis a) { return sweep && sweep->axis == a; };

    BeamSpec beam;
    std::optional<PositionError2D> error2d;
    std::optional<PositionError3D> error3d;
    const int beam_line = doc.line_of("beam");
    const int error_line = doc.line_of("error");

    if (mode == Mode::TwoD) {
        forbid(doc, "beam", "form", "only applies to mode = 3d");
        forbid(doc, "beam", "phi3db", "only applies to mode = 3d");
        forbid(doc, "beam", "m", "only applies to mode = 3d");
        forbid(doc, "beam", "psi", "only applies to mode = 3d");
        for (const char* k : {"sigma3", "varphi_x", "varphi_y", "varphi_z"}) {
            forbid(doc, "error", k, "only applies to mode = 3d");
        }
        beam.theta3db = beam_slot(doc, "theta3db", !swept(SweepAxis::Theta3db));
        if (swept(SweepAxis::Theta3db) && !doc.find("beam", "theta3db")) {
            beam.theta3db = sweep->start;
        }
        if (beam.theta3db) {
            const Entry* e = doc.find("beam", "theta3db");
            checked(e ? e->line : beam_line, "theta3db",
                    [&]() { return BeamPattern2D(*beam.theta3db); });
        }
        const Entry& s1 = require(doc, "error", "sigma1");
        const Entry& s2 = require(doc, "error", "sigma2");
        const Entry& vp = require(doc, "error", "varphi");
        const double s1v = real_value(s1, "sigma1");
        const double s2v = real_value(s2, "sigma2");
        const double vpv = real_value(vp, "varphi");
        const int line = !(s1v > 0.0) ? s1.line : (!(s2v > 0.0) ? s2.line : error_line);
        error2d = checked(line, "[error]", [&]() { return PositionError2D(s1v, s2v, vpv); });
    } else {
        forbid(doc, "error", "varphi", "only applies to mode = 2d (use varphi_x, varphi_y, varphi_z)");
        if (const Entry* f = doc.find("beam", "form")) {
            if (f->value == "direct") {
                beam.form = BeamForm::Direct;
            } else if (f->value == "axes") {
                beam.form = BeamForm::Axes;
            } else if (f->value == "rotation") {
                beam.form = BeamForm::Rotation;
            } else {
                throw ParseError(f->line, "beam form must be direct, axes or rotation, got '" +
                                              f->value + "'");
            }
        }
        const bool direct = beam.form == BeamForm::Direct;
        const std::string third_key = direct ? "m" : "psi";
        forbid(doc, "beam", direct ? "psi" : "m",
               direct ? "needs form = axes or rotation" : "only applies to form = direct");
        if (direct && swept(SweepAxis::Psi)) {
            throw ParseError(require(doc, "sweep", "axis").line,
                             "sweep axis 'psi' needs beam form = axes or rotation");
        }
        beam.theta3db = beam_slot(doc, "theta3db", !swept(SweepAxis::Theta3db));
        beam.phi3db = beam_slot(doc, "phi3db", !swept(SweepAxis::Phi3db));
        beam.third = beam_slot(doc, third_key, !swept(SweepAxis::Psi));
        if (swept(SweepAxis::Theta3db) && !doc.find("beam", "theta3db")) {
            beam.theta3db = sweep->start;
        }
        if (swept(SweepAxis::Phi3db) && !doc.find("beam", "phi3db")) {
            beam.phi3db = sweep->start;
        }
        if (swept(SweepAxis::Psi) && !doc.find("beam", "psi")) {
            beam.third = sweep->start;
        }
        if (beam.form == BeamForm::Axes && beam.any_optimal(mode)) {
            for (const char* k : {"theta3db", "phi3db", "psi"}) {
                const Entry* e = doc.find("beam", k);
                if (e && e->value == "optimal") {
                    throw ParseError(e->line, std::string(k) +
                                                  ": 'optimal' needs beam form = direct or rotation");
                }
            }
        }
        if (!beam.any_optimal(mode)) {
            const Entry* e = doc.find("beam", third_key);
            checked(e ? e->line : beam_line, "[beam]", [&]() {
                switch (beam.form) {
                case BeamForm::Direct:
                    return BeamPattern3D(*beam.theta3db, *beam.phi3db, *beam.third);
                case BeamForm::Axes:
                    return beam3d_from_axes(*beam.third, 1.0 / (*beam.theta3db * *beam.theta3db),
                                            1.0 / (*beam.phi3db * *beam.phi3db));
                case BeamForm::Rotation:
                    break;
                }
                return beam3d_from_rotation(*beam.theta3db, *beam.phi3db, *beam.third);
            });
        }
        const Entry& s1 = require(doc, "error", "sigma1");
        const Entry& s2 = require(doc, "error", "sigma2");
        const Entry& s3 = require(doc, "error", "sigma3");
        const double v1 = real_value(s1, "sigma1");
        const double v2 = real_value(s2, "sigma2");
        const double v3 = real_value(s3, "sigma3");
        const double ax = real_value(require(doc, "error", "varphi_x"), "varphi_x");
        const double ay = real_value(require(doc, "error", "varphi_y"), "varphi_y");
        const double az = real_value(require(doc, "error", "varphi_z"), "varphi_z");
        int line = error_line;
        if (!(v1 > 0.0) || v1 < v2) {
            line = s1.line;
        } else if (!(v2 > 0.0) || v2 < v3) {
            line = s2.line;
        } else if (!(v3 > 0.0)) {
            line = s3.line;
        }
        error3d = checked(line, "[error]", [&]() { return PositionError3D(v1, v2, v3, ax, ay, az); });
    }

    if (beam.any_optimal(mode) && !budget.has_total_power()) {
        throw ParseError(beam_line, "an optimal beam slot needs a total-power budget (pt_db or pt_w)");
    }
    if (sweep && sweep->axis == SweepAxis::PtDb && !budget.has_total_power()) {
        throw ParseError(require(doc, "sweep", "axis").line,
                         "sweep axis 'pt_db' needs a total-power budget (pt_db or pt_w)");
    }

    McConfig mc;
    if (const Entry* e = doc.find("mc", "samples")) {
        mc.samples = unsigned_value(*e, "samples");
    }
    if (const Entry* e = doc.find("mc", "seed")) {
        mc.seed = unsigned_value(*e, "seed");
    }
    if (const Entry* e = doc.find("mc", "batch")) {
        mc.batch = unsigned_value(*e, "batch");
    } else {
        mc.batch = std::min(mc.batch, mc.samples);
    }
    if (const Entry* e = doc.find("mc", "workers")) {
        const std::uint64_t w = unsigned_value(*e, "workers");
        if (w < 1 || w > 1024) {
            throw ParseError(e->line, "workers must lie in [1, 1024]");
        }
        mc.workers = static_cast<unsigned>(w);
    }
    checked(doc.line_of("mc"), "[mc]", [&]() {
        mc.validate();
        return 0;
    });

    return Scenario{mode, budget, beam, error2d, error3d, sweep, mc};
}

Scenario
load_scenario(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("cannot read config file '" + path + "'");
    }
    return parse_scenario(buf.str());
}

std::string
format_scenario(const Scenario& s)
{
    std::ostringstream out;
    const auto slot = [](const std::optional<double>& v) {
        return v ? number_text(*v) : std::string("optimal");
    };
    out << "mode = " << to_string(s.mode) << "\n\n[budget]\n";
    if (s.budget.has_total_power()) {
        out << "pt_w = " << number_text(s.budget.total_power()) << "\n";
    } else {
        out << "pmax_w = " << number_text(*s.budget.peak_power()) << "\n";
    }
    out << "ae_m2 = " << number_text(s.budget.ae()) << "\n"
        << "am = " << number_text(s.budget.am()) << "\n"
        << "gamma_th = " << number_text(s.budget.gamma_th()) << "\n"
        << "d = " << number_text(s.budget.distance()) << "\n\n[beam]\n";
    if (s.mode == Mode::TwoD) {
        out << "theta3db = " << slot(s.beam.theta3db) << "\n";
    } else {
        out << "form = " << to_string(s.beam.form) << "\n"
            << "theta3db = " << slot(s.beam.theta3db) << "\n"
            << "phi3db = " << slot(s.beam.phi3db) << "\n"
            << (s.beam.form == BeamForm::Direct ? "m" : "psi") << " = " << slot(s.beam.third)
            << "\n";
    }
    out << "\n[error]\n";
    if (s.mode == Mode::TwoD) {
        const auto& e = *s.error2d;
        out << "sigma1 = " << number_text(e.sigma1()) << "\n"
            << "sigma2 = " << number_text(e.sigma2()) << "\n"
            << "varphi = " << number_text(e.varphi()) << "\n";
    } else {
        const auto& e = *s.error3d;
        out << "sigma1 = " << number_text(e.sigma1()) << "\n"
            << "sigma2 = " << number_text(e.sigma2()) << "\n"
            << "sigma3 = " << number_text(e.sigma3()) << "\n"
            << "varphi_x = " << number_text(e.varphi_x()) << "\n"
            << "varphi_y = " << number_text(e.varphi_y()) << "\n"
            << "varphi_z = " << number_text(e.varphi_z()) << "\n";
    }
    if (s.sweep) {
        out << "\n[sweep]\n"
            << "axis = " << to_string(s.sweep->axis) << "\n"
            << "start = " << number_text(s.sweep->start) << "\n"
            << "stop = " << number_text(s.sweep->stop) << "\n"
            << "points = " << s.sweep->points << "\n";
    }
    out << "\n[mc]\n"
        << "samples = " << s.mc.samples << "\n"
        << "seed = " << s.mc.seed << "\n"
        << "batch = " << s.mc.batch << "\n"
        << "workers = " << s.mc.workers << "\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// evaluation

Scenario
apply_axis(const Scenario& s, SweepAxis axis, double value)
{
    Scenario out = s;
    switch (axis) {
    case SweepAxis::Distance:
        out.budget = s.budget.with_distance(value);
        break;
    case SweepAxis::PtDb:
        out.budget = s.budget.with_total_power(db_to_watts(value));
        break;
    case SweepAxis::GammaTh:
        out.budget = s.budget.with_threshold(value);
        break;
    case SweepAxis::Theta3db:
        out.beam.theta3db = value;
        break;
    case SweepAxis::Phi3db:
        if (s.mode != Mode::ThreeD) {
            throw DomainError("phi3db axis needs a 3D scenario");
        }
        out.beam.phi3db = value;
        break;
    case SweepAxis::Psi:
        if (s.mode != Mode::ThreeD || s.beam.form == BeamForm::Direct) {
            throw DomainError("psi axis needs a 3D beam in axes or rotation form");
        }
        out.beam.third = value;
        break;
    }
    return out;
}

BeamPattern2D
resolve_beam_2d(const Scenario& s)
{
    if (s.beam.theta3db) {
        return BeamPattern2D(*s.beam.theta3db);
    }
    return BeamPattern2D(optimal_theta_2d(s.budget));
}

BeamPattern3D
resolve_beam_3d(const Scenario& s)
{
    const BeamSpec& b = s.beam;
    if (!b.any_optimal(s.mode)) {
        switch (b.form) {
        case BeamForm::Direct:
            return BeamPattern3D(*b.theta3db, *b.phi3db, *b.third);
        case BeamForm::Axes:
            return beam3d_from_axes(*b.third, 1.0 / (*b.theta3db * *b.theta3db),
                                    1.0 / (*b.phi3db * *b.phi3db));
        case BeamForm::Rotation:
            return beam3d_from_rotation(*b.theta3db, *b.phi3db, *b.third);
        }
    }
    if (b.form == BeamForm::Axes) {
        throw DomainError("optimal slots need beam form = direct or rotation");
    }
    const OptimalBeam3D opt = optimal_beam_3d(s.budget, *s.error3d);
    if (!b.theta3db && !b.phi3db && !b.third) {
        return opt.beam();
    }
    const double theta = b.theta3db.value_or(opt.theta3db_star);
    const double phi = b.phi3db.value_or(opt.phi3db_star);
    if (b.form == BeamForm::Direct) {
        return BeamPattern3D(theta, phi, b.third.value_or(opt.m_star));
    }
    return beam3d_from_rotation(theta, phi, b.third.value_or(opt.psi_star));
}

namespace {

double
optimum_gap_2d(const Scenario& p, const BeamPattern2D& beam)
{
    if (!p.budget.has_total_power()) {
        return kNaN;
    }
    try {
        return std::abs(std::log(beam.theta3db() / optimal_theta_2d(p.budget)));
    } catch (const Error&) {
        return kNaN;
    }
}

double
optimum_gap_3d(const Scenario& p, const BeamPattern3D& beam)
{
    if (!p.budget.has_total_power()) {
        return kNaN;
    }
    try {
        const Eigen::Matrix2d target = optimal_beam_3d(p.budget, *p.error3d).beam().quadratic_form();
        return (beam.quadratic_form() - target).norm() / target.norm();
    } catch (const Error&) {
        return kNaN;
    }
}

} // namespace

SweepRow
evaluate_point(const Scenario& s, std::optional<double> axis_value, const RunOptions& opts)
{
    SweepRow row;
    row.axis_value = axis_value.value_or(kNaN);
    row.outage_closed = kNaN;
    row.outage_mc = kNaN;
    row.mc_stderr = kNaN;
    row.optimum_gap = kNaN;
    try {
        const Scenario p = axis_value ? apply_axis(s, s.sweep->axis, *axis_value) : s;
        if (p.mode == Mode::TwoD) {
            const BeamPattern2D beam = resolve_beam_2d(p);
            row.case_tag = std::string(to_string(classify_case_2d(p.budget, beam)));
            row.optimum_gap = optimum_gap_2d(p, beam);
            row.outage_closed = outage_2d_closed(p.budget, beam, *p.error2d).value;
            if (opts.monte_carlo) {
                const OutageEstimate mc = outage_2d_mc(p.budget, beam, *p.error2d, p.mc);
                row.outage_mc = mc.value;
                row.mc_stderr = mc.std_error;
            }
        } else {
            const BeamPattern3D beam = resolve_beam_3d(p);
            row.case_tag = std::string(to_string(classify_case_3d(p.budget, beam)));
            row.optimum_gap = optimum_gap_3d(p, beam);
            row.outage_closed = outage_3d_closed(p.budget, beam, *p.error3d).value;
            if (opts.monte_carlo) {
                const OutageEstimate mc = outage_3d_mc(p.budget, beam, *p.error3d, p.mc);
                row.outage_mc = mc.value;
                row.mc_stderr = mc.std_error;
            }
        }
    } catch (const RegimeError& e) {
        row.case_tag = "regime_error";
        row.message = e.what();
    } catch (const DomainError& e) {
        row.case_tag = "domain_error";
        row.message = e.what();
    } catch (const StateError& e) {
        row.case_tag = "state_error";
        row.message = e.what();
    } catch (const ComputationError& e) {
        row.case_tag = "computation_error";
        row.message = e.what();
    } catch (const DegenerateCovarianceError& e) {
        row.case_tag = "degenerate_covariance";
        row.message = e.what();
    }
    return row;
}

std::vector<SweepRow>
run_sweep(const Scenario& s, const RunOptions& opts)
{
    if (!s.sweep) {
        throw StateError("run_sweep needs a scenario with a [sweep] section");
    }
    std::vector<SweepRow> rows;
    for (double v : s.sweep->values()) {
        rows.push_back(evaluate_point(s, v, opts));
    }

    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        if (std::isfinite(r.optimum_gap)) {
            best = std::min(best, r.optimum_gap);
        }
    }
    if (std::isfinite(best)) {
        const double cutoff = best * (1.0 + 1e-9) + 1e-12;
        for (auto& r : rows) {
            r.optimal = std::isfinite(r.optimum_gap) && r.optimum_gap <= cutoff;
        }
    }
    return rows;
}

void
emit_csv(const std::vector<SweepRow>& rows, std::ostream& out)
{
    if (rows.empty()) {
        throw DomainError("emit_csv needs at least one row");
    }
    const auto num = [](double v) {
        if (std::isnan(v)) {
            return std::string("nan");
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    out << "axis,outage_closed,outage_mc,mc_stderr,case,optimal\n";
    for (const auto& r : rows) {
        out << num(r.axis_value) << ',' << num(r.outage_closed) << ',' << num(r.outage_mc) << ','
            << num(r.mc_stderr) << ',' << r.case_tag << ',' << (r.optimal ? 1 : 0) << '\n';
    }
}

void
write_csv(const std::vector<SweepRow>& rows, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    emit_csv(rows, out);
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

} // namespace gbeam
