#include "gbeam/specfun.hpp"

#include "gbeam/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace gbeam::specfun {

namespace {

void
require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

void
require_non_negative(double v, const char* what)
{
    require_finite(v, what);
    if (v < 0.0) {
        throw DomainError(std::string(what) + " must be >= 0, got " + std::to_string(v));
    }
}

// Below this argument the power series is used; above it the asymptotic expansion.
constexpr double kI0SeriesLimit = 25.0;

double
i0_series(double x)
{
    // sum_k (x/2)^{2k} / (k!)^2, all terms positive
    const double y = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= y / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return sum;
}

// sqrt(2 pi x) e^{-x} I0(x) ~ sum_k ((2k-1)!!)^2 / (k! 8^k x^k)
double
i0_asymptotic_scaled(double x)
{
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next > term) {
            break; // past the smallest term of the divergent expansion
        }
        term = next;
        sum += term;
        if (term < 1e-17 * sum) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

struct MarcumPair
{
    double q; // Q1(a, b)
    double p; // 1 - Q1(a, b)
};

// sum_{k>=1} zeta^k I_k(x) / I_0(x) for x > 0, 0 < zeta < 1.
//
// The ratios I_k / I_{k-1} come from the backward recurrence
// r_k = x / (2k + x r_{k+1}); its error shrinks by r_k^2 per step, so the
// start index is placed far enough above the last summed term.
double
bessel_ratio_series(double x, double zeta, double scale, const Tolerance& tol)
{
    const double log_zeta = -std::log(zeta);
    // Terms behave like zeta^k exp(-k^2 / 2x); 78 ~ 2 * ln(1e17).
    double estimate = x * (std::sqrt(log_zeta * log_zeta + 78.0 / x) - log_zeta);
    long terms = static_cast<long>(std::ceil(estimate)) + 16;

    for (;;) {
        if (terms > tol.max_terms) {
            throw ComputationError("Marcum Q series needs more than " +
                                   std::to_string(tol.max_terms) + " terms (x=" +
                                   std::to_string(x) + ", zeta=" + std::to_string(zeta) + ")");
        }
        const double n_start =
            std::ceil(std::sqrt(static_cast<double>(terms) * terms + 40.0 * x)) + 16.0;
        const long start = static_cast<long>(n_start);

        std::vector<double> ratio(static_cast<std::size_t>(terms) + 1, 0.0);
        double r = 0.0;
        for (long k = start; k >= 1; --k) {
            r = x / (2.0 * static_cast<double>(k) + x * r);
            if (k <= terms) {
                ratio[static_cast<std::size_t>(k)] = r;
            }
        }

        double t = 1.0;
        double sum = 0.0;
        for (long k = 1; k <= terms; ++k) {
            t *= zeta * ratio[static_cast<std::size_t>(k)];
            sum += t;
            if (t <= tol.rel_tol * (1.0 + sum) || scale * t <= tol.abs_tol) {
                return sum;
            }
        }
        terms *= 2;
    }
}

MarcumPair
marcum_pair(double a, double b, const Tolerance& tol)
{
    require_non_negative(a, "Marcum Q argument a");
    require_non_negative(b, "Marcum Q argument b");
    tol.validate();

    if (b == 0.0) {
        return {1.0, 0.0};
    }
    if (a == 0.0) {
        const double h = -0.5 * b * b;
        return {std::exp(h), -std::expm1(h)};
    }
    const double x = a * b;
    if (a == b) {
        // Q1(a, a) = (1 + e^{-a^2} I0(a^2)) / 2
        const double e = bessel_i0_scaled(x);
        return {0.5 * (1.0 + e), 0.5 * (1.0 - e)};
    }

    // exp(-(a^2 + b^2) / 2) I0(ab), kept finite via the scaled Bessel form
    const double diff = a - b;
    const double base = std::exp(-0.5 * diff * diff) * bessel_i0_scaled(x);
    const double zeta = std::min(a, b) / std::max(a, b);
    const double series = bessel_ratio_series(x, zeta, base, tol);

    if (a < b) {
        // Q1 = base * sum_{k>=0} (a/b)^k I_k / I_0
        const double q = base * (1.0 + series);
        return {q, 1.0 - q};
    }
    // 1 - Q1 = base * sum_{k>=1} (b/a)^k I_k / I_0
    const double p = base * series;
    return {1.0 - p, p};
}

struct HoytArguments
{
    double large;
    double small;
};

HoytArguments
hoyt_arguments(double x, double q, double omega)
{
    require_non_negative(x, "Hoyt abscissa");
    require_finite(q, "Hoyt shape q");
    require_finite(omega, "Hoyt spread omega");
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("Hoyt shape q must lie in (0, 1), got " + std::to_string(q));
    }
    if (1.0 - q <= kHoytUnitGap) {
        throw DomainError("Hoyt shape q within 1e-6 of 1; use the Rayleigh form");
    }
    if (!(omega > 0.0)) {
        throw DomainError("Hoyt spread omega must be > 0");
    }
    // u sqrt((1+q)/(1-q)) and u sqrt((1-q)/(1+q)) with u = x sqrt(1-q^4) / (2 q sqrt(omega)),
    // written without the 1/(1-q) factor.
    const double common = x * std::sqrt(1.0 + q * q) / (2.0 * q * std::sqrt(omega));
    return {common * (1.0 + q), common * (1.0 - q)};
}

} // namespace

void
Tolerance::validate() const
{
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) || !(abs_tol + rel_tol > 0.0)) {
        throw DomainError("tolerance needs abs_tol, rel_tol >= 0 with a positive sum");
    }
    if (max_terms < 1) {
        throw DomainError("tolerance max_terms must be >= 1");
    }
}

double
gaussian_q(double x)
{
    require_finite(x, "Gaussian Q argument");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double
bessel_i0_scaled(double x)
{
    require_non_negative(x, "I0 argument");
    if (x <= kI0SeriesLimit) {
        return i0_series(x) * std::exp(-x);
    }
    return i0_asymptotic_scaled(x);
}

double
bessel_i0(double x)
{
    require_non_negative(x, "I0 argument");
    if (x <= kI0SeriesLimit) {
        return i0_series(x);
    }
    return i0_asymptotic_scaled(x) * std::exp(x);
}

double
marcum_q1(double a, double b, const Tolerance& tol)
{
    return marcum_pair(a, b, tol).q;
}

double
marcum_p1(double a, double b, const Tolerance& tol)
{
    return marcum_pair(a, b, tol).p;
}

double
hoyt_cdf(double x, double q, double omega, const Tolerance& tol)
{
    const auto [large, small] = hoyt_arguments(x, q, omega);
    const double value = marcum_q1(large, small, tol) - marcum_q1(small, large, tol);
    return std::clamp(value, 0.0, 1.0);
}

double
hoyt_sf(double x, double q, double omega, const Tolerance& tol)
{
    const auto [large, small] = hoyt_arguments(x, q, omega);
    const double value = marcum_p1(large, small, tol) + marcum_q1(small, large, tol);
    return std::clamp(value, 0.0, 1.0);
}

double
rayleigh_sf(double x, double omega)
{
    require_non_negative(x, "Rayleigh abscissa");
    require_finite(omega, "Rayleigh spread omega");
    if (!(omega > 0.0)) {
        throw DomainError("Rayleigh spread omega must be > 0");
    }
    return std::exp(-x * x / omega);
}

} // namespace gbeam::specfun
