#include "gbeam/geometry.hpp"

#include "gbeam/errors.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <string>

namespace gbeam {

namespace {

constexpr double kPi = std::numbers::pi;

void
require_positive(double v, const char* what)
{
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw DomainError(std::string(what) + " must be positive and finite, got " +
                          std::to_string(v));
    }
}

void
require_finite(double v, const char* what)
{
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + " must be finite");
    }
}

// 1.2 ln 10: the main lobe written as exp(-kLobeRate theta^2 / theta3db^2)
const double kLobeRate = kGainExponent * std::numbers::ln10;

} // namespace

double
free_space_gain(double distance)
{
    const double s = 4.0 * kPi * distance;
    return 1.0 / (s * s);
}

double
db_to_watts(double db)
{
    return std::pow(10.0, db / 10.0);
}

double
watts_to_db(double watts)
{
    return 10.0 * std::log10(watts);
}

Eigen::Matrix2d
rotation_2d(double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix2d r;
    r << c, -s, s, c;
    return r;
}

SymmetricEigen2
eigen_symmetric(const Eigen::Matrix2d& m)
{
    const double a = m(0, 0);
    const double c = m(1, 1);
    const double b = 0.5 * (m(0, 1) + m(1, 0));
    const double mean = 0.5 * (a + c);
    const double radius = std::hypot(0.5 * (a - c), b);
    const double larger = mean + radius;
    double smaller = mean - radius;
    const double det = a * c - b * b;
    if (larger > 0.0 && det > 0.0) {
        smaller = det / larger;
    }
    return {larger, smaller, 0.5 * std::atan2(2.0 * b, a - c)};
}

BeamPattern2D::BeamPattern2D(double theta3db)
    : theta3db_(theta3db)
{
    require_positive(theta3db, "theta3db");
    if (!(theta3db < kPi)) {
        throw DomainError("theta3db must be below pi, got " + std::to_string(theta3db));
    }
}

BeamPattern3D::BeamPattern3D(double theta3db, double phi3db, double m)
    : theta3db_(theta3db),
      phi3db_(phi3db),
      m_(m)
{
    require_positive(theta3db, "theta3db");
    require_positive(phi3db, "phi3db");
    require_finite(m, "beam coupling m");
    const double coupling = m * theta3db * phi3db;
    if (!(coupling * coupling < 1.0)) {
        throw DomainError("beam matrix A is not positive definite: m^2 theta3db^2 phi3db^2 = " +
                          std::to_string(coupling * coupling) + " >= 1");
    }
}

Eigen::Matrix2d
BeamPattern3D::quadratic_form() const
{
    Eigen::Matrix2d a;
    a << 1.0 / (theta3db_ * theta3db_), m_, m_, 1.0 / (phi3db_ * phi3db_);
    return a;
}

double
BeamPattern3D::determinant() const
{
    const double tp = theta3db_ * phi3db_;
    return (1.0 - m_ * m_ * tp * tp) / (tp * tp);
}

BeamPattern3D
beam3d_from_matrix(const Eigen::Matrix2d& a)
{
    if (!(a(0, 0) > 0.0) || !(a(1, 1) > 0.0)) {
        throw DomainError("beam matrix needs positive diagonal entries");
    }
    return BeamPattern3D(1.0 / std::sqrt(a(0, 0)), 1.0 / std::sqrt(a(1, 1)),
                         0.5 * (a(0, 1) + a(1, 0)));
}

BeamPattern3D
beam3d_from_axes(double psi, double zeta1, double zeta2)
{
    require_finite(psi, "psi");
    require_positive(zeta1, "zeta1");
    require_positive(zeta2, "zeta2");
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    Eigen::Matrix2d a;
    a(0, 0) = zeta1 * c * c + zeta2 * s * s;
    a(1, 1) = zeta1 * s * s + zeta2 * c * c;
    a(0, 1) = a(1, 0) = (zeta1 - zeta2) * s * c;
    return beam3d_from_matrix(a);
}

BeamAxes
beam_axes(const BeamPattern3D& beam)
{
    const SymmetricEigen2 e = eigen_symmetric(beam.quadratic_form());
    return {e.angle, e.larger, e.smaller};
}

BeamPattern3D
beam3d_from_rotation(double theta3db, double phi3db, double psi)
{
    require_positive(theta3db, "theta3db");
    require_positive(phi3db, "phi3db");
    require_finite(psi, "psi");
    const double spread = 1.0 / (theta3db * theta3db) - 1.0 / (phi3db * phi3db);
    const double c2 = std::cos(2.0 * psi);
    if (std::abs(c2) < 1e-12) {
        throw DomainError("psi = +-pi/4 does not determine m from the diagonal widths");
    }
    if (spread == 0.0) {
        return BeamPattern3D(theta3db, phi3db, 0.0);
    }
    return BeamPattern3D(theta3db, phi3db, 0.5 * std::sin(2.0 * psi) / c2 * spread);
}

PositionError2D::PositionError2D(double sigma1, double sigma2, double varphi)
    : sigma1_(sigma1),
      sigma2_(sigma2),
      varphi_(varphi)
{
    require_positive(sigma1, "sigma1");
    require_positive(sigma2, "sigma2");
    require_finite(varphi, "varphi");
}

Eigen::Matrix2d
PositionError2D::square_root() const
{
    return rotation_2d(varphi_) * Eigen::Vector2d(sigma1_, sigma2_).asDiagonal();
}

Eigen::Matrix2d
PositionError2D::covariance() const
{
    const Eigen::Matrix2d r = rotation_2d(varphi_);
    const Eigen::Vector2d var(sigma1_ * sigma1_, sigma2_ * sigma2_);
    Eigen::Matrix2d cov = r * var.asDiagonal() * r.transpose();
    cov(1, 0) = cov(0, 1);
    return cov;
}

double
PositionError2D::sigma_x() const
{
    const double c = std::cos(varphi_);
    const double s = std::sin(varphi_);
    return std::sqrt(sigma1_ * sigma1_ * c * c + sigma2_ * sigma2_ * s * s);
}

double
PositionError2D::sigma_y() const
{
    const double c = std::cos(varphi_);
    const double s = std::sin(varphi_);
    return std::sqrt(sigma1_ * sigma1_ * s * s + sigma2_ * sigma2_ * c * c);
}

double
PositionError2D::rho() const
{
    const double c = std::cos(varphi_);
    const double s = std::sin(varphi_);
    const double cov_xy = (sigma1_ * sigma1_ - sigma2_ * sigma2_) * s * c;
    return cov_xy / (sigma_x() * sigma_y());
}

PositionError2D
PositionError2D::scaled(double factor) const
{
    require_positive(factor, "covariance scale");
    const double r = std::sqrt(factor);
    return PositionError2D(sigma1_ * r, sigma2_ * r, varphi_);
}

Eigen::Matrix3d
rotation_3d(double varphi_x, double varphi_y, double varphi_z)
{
    const Eigen::Matrix3d rx = Eigen::AngleAxisd(varphi_x, Eigen::Vector3d::UnitX()).toRotationMatrix();
    const Eigen::Matrix3d ry = Eigen::AngleAxisd(varphi_y, Eigen::Vector3d::UnitY()).toRotationMatrix();
    const Eigen::Matrix3d rz = Eigen::AngleAxisd(varphi_z, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    return rz * ry * rx;
}

PositionError3D::PositionError3D(double sigma1, double sigma2, double sigma3, double varphi_x,
                                 double varphi_y, double varphi_z)
    : sigma_(sigma1, sigma2, sigma3),
      angle_(varphi_x, varphi_y, varphi_z)
{
    require_positive(sigma1, "sigma1");
    require_positive(sigma2, "sigma2");
    require_positive(sigma3, "sigma3");
    require_finite(varphi_x, "varphi_x");
    require_finite(varphi_y, "varphi_y");
    require_finite(varphi_z, "varphi_z");
    if (sigma1 < sigma2 || sigma2 < sigma3) {
        throw DomainError("3D error standard deviations must satisfy sigma1 >= sigma2 >= sigma3");
    }
}

Eigen::Matrix3d
PositionError3D::rotation() const
{
    return rotation_3d(angle_[0], angle_[1], angle_[2]);
}

Eigen::Matrix3d
PositionError3D::square_root() const
{
    return rotation() * sigma_.asDiagonal();
}

Eigen::Matrix3d
PositionError3D::covariance() const
{
    const Eigen::Matrix3d r = rotation();
    const Eigen::Vector3d var = sigma_.cwiseProduct(sigma_);
    Eigen::Matrix3d cov = r * var.asDiagonal() * r.transpose();
    // exact symmetry
    cov = 0.5 * (cov + cov.transpose()).eval();
    return cov;
}

Eigen::Matrix2d
PositionError3D::cross_covariance() const
{
    const Eigen::Matrix3d cov = covariance();
    Eigen::Matrix2d sub;
    sub << cov(0, 0), cov(0, 2), cov(2, 0), cov(2, 2);
    return sub;
}

PositionError3D
PositionError3D::scaled(double factor) const
{
    require_positive(factor, "covariance scale");
    const double r = std::sqrt(factor);
    return PositionError3D(sigma_[0] * r, sigma_[1] * r, sigma_[2] * r, angle_[0], angle_[1],
                           angle_[2]);
}

LinkBudget::LinkBudget(std::optional<double> pt, std::optional<double> pmax, double ae,
                       double distance, double gamma_th, double am)
    : pt_(pt),
      pmax_(pmax),
      ae_(ae),
      distance_(distance),
      gamma_th_(gamma_th),
      am_(am)
{
    if (pt_.has_value() == pmax_.has_value()) {
        throw DomainError("link budget needs exactly one of pt and pmax");
    }
    if (pt_) {
        require_positive(*pt_, "pt");
    }
    if (pmax_) {
        require_positive(*pmax_, "pmax");
    }
    require_positive(ae, "ae");
    require_positive(distance, "d");
    require_positive(gamma_th, "gamma_th");
    require_positive(am, "am");
    if (am > 1.0) {
        throw DomainError("side-lobe level am must be <= 1");
    }
}

LinkBudget
LinkBudget::from_total_power(double pt, double ae, double distance, double gamma_th, double am)
{
    return LinkBudget(pt, std::nullopt, ae, distance, gamma_th, am);
}

LinkBudget
LinkBudget::from_peak_power(double pmax, double ae, double distance, double gamma_th, double am)
{
    return LinkBudget(std::nullopt, pmax, ae, distance, gamma_th, am);
}

double
LinkBudget::total_power() const
{
    if (!pt_) {
        throw StateError("link budget was given as a peak power, not a total power");
    }
    return *pt_;
}

LinkBudget
LinkBudget::with_distance(double distance) const
{
    return LinkBudget(pt_, pmax_, ae_, distance, gamma_th_, am_);
}

LinkBudget
LinkBudget::with_total_power(double pt) const
{
    return LinkBudget(pt, std::nullopt, ae_, distance_, gamma_th_, am_);
}

LinkBudget
LinkBudget::with_threshold(double gamma_th) const
{
    return LinkBudget(pt_, pmax_, ae_, distance_, gamma_th, am_);
}

double
gain_2d(const BeamPattern2D& beam, double am, double theta)
{
    if (!(std::abs(theta) <= kPi)) {
        throw DomainError("gain_2d needs |theta| <= pi");
    }
    const double ratio = theta / beam.theta3db();
    return std::max(std::pow(10.0, -kGainExponent * ratio * ratio), am);
}

double
gain_3d(const BeamPattern3D& beam, double am, double theta, double phi)
{
    if (!(std::abs(theta) <= kPi) || !(std::abs(phi) <= 0.5 * kPi)) {
        throw DomainError("gain_3d needs |theta| <= pi and |phi| <= pi/2");
    }
    const double t = theta / beam.theta3db();
    const double p = phi / beam.phi3db();
    const double form = t * t + 2.0 * beam.m() * theta * phi + p * p;
    return std::max(std::pow(10.0, -kGainExponent * form), am);
}

double
pmax_from_pt_2d(double pt, const BeamPattern2D& beam)
{
    require_positive(pt, "pt");
    return pt * std::sqrt(kLobeRate) / (beam.theta3db() * std::sqrt(kPi));
}

double
pmax_from_pt_3d(double pt, const BeamPattern3D& beam)
{
    require_positive(pt, "pt");
    const double tp = beam.theta3db() * beam.phi3db();
    const double coupling = beam.m() * tp;
    return pt * kLobeRate * std::sqrt(1.0 - coupling * coupling) / (kPi * tp);
}

double
resolve_peak_power(const LinkBudget& budget, const BeamPattern2D& beam)
{
    if (auto pmax = budget.peak_power()) {
        return *pmax;
    }
    return pmax_from_pt_2d(budget.total_power(), beam);
}

double
resolve_peak_power(const LinkBudget& budget, const BeamPattern3D& beam)
{
    if (auto pmax = budget.peak_power()) {
        return *pmax;
    }
    return pmax_from_pt_3d(budget.total_power(), beam);
}

} // namespace gbeam
