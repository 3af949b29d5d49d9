#pragma once

// Scalar special functions used by the outage closed forms.
//
// All functions are pure and thread-safe. Domain violations raise
// gbeam::DomainError; series that fail to converge within
// Tolerance::max_terms raise gbeam::ComputationError.

namespace gbeam::specfun {

struct Tolerance
{
    double abs_tol = 0.0;
    double rel_tol = 1e-17;
    int max_terms = 1'000'000;

    /// Throws DomainError unless abs_tol, rel_tol >= 0, abs_tol + rel_tol > 0, max_terms >= 1.
    void validate() const;
};

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

/// Modified Bessel function of the first kind, order zero. Returns +inf past ~713.
double bessel_i0(double x);

/// exp(-x) * I0(x); finite for every finite x >= 0.
double bessel_i0_scaled(double x);

/// First-order Marcum Q function Q1(a, b).
double marcum_q1(double a, double b, const Tolerance& tol = {});

/// 1 - Q1(a, b), accurate in relative terms whenever a >= b.
double marcum_p1(double a, double b, const Tolerance& tol = {});

/// Hoyt (Nakagami-q) CDF with shape q in (0, 1) and spread omega = E[R^2].
///
/// Values of q within 1e-6 of 1 are rejected: the Rayleigh form applies there.
double hoyt_cdf(double x, double q, double omega, const Tolerance& tol = {});

/// 1 - hoyt_cdf, evaluated from the same two Marcum calls without cancellation.
double hoyt_sf(double x, double q, double omega, const Tolerance& tol = {});

/// Rayleigh survival function exp(-x^2 / omega).
double rayleigh_sf(double x, double omega);

/// Largest admissible q for hoyt_cdf is 1 - kHoytUnitGap.
inline constexpr double kHoytUnitGap = 1e-6;

} // namespace gbeam::specfun
