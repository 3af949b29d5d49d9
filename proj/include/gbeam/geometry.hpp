#pragma once

// Beam patterns, positioning-error models and the link budget.
//
// Conventions: angles in radians, powers in watts, lengths in meters.
// The 2D receiver sits at (0, d); in 3D at (0, d, 0) with the boresight
// along +y, theta measured in the x-y plane and phi towards +z.

#include <Eigen/Core>

#include <optional>

namespace gbeam {

/// Main-lobe exponent: gain = 10^(-kGainExponent * (theta / theta3db)^2).
inline constexpr double kGainExponent = 1.2;

/// 1 / (4 pi d)^2
double free_space_gain(double distance);

/// 10^(db / 10); captions quote powers in dB relative to 1 W.
double db_to_watts(double db);
double watts_to_db(double watts);

class BeamPattern2D
{
  public:
    /// Throws DomainError unless 0 < theta3db < pi.
    explicit BeamPattern2D(double theta3db);

    double theta3db() const { return theta3db_; }

  private:
    double theta3db_;
};

/// Joint Gaussian beam described by A = [[1/theta3db^2, m], [m, 1/phi3db^2]].
class BeamPattern3D
{
  public:
    /// Throws DomainError unless both widths are positive and m^2 theta^2 phi^2 < 1.
    BeamPattern3D(double theta3db, double phi3db, double m);

    double theta3db() const { return theta3db_; }
    double phi3db() const { return phi3db_; }
    double m() const { return m_; }

    Eigen::Matrix2d quadratic_form() const;
    double determinant() const;

  private:
    double theta3db_;
    double phi3db_;
    double m_;
};

/// Principal-axis description of a 3D beam: A = U(psi) diag(zeta1, zeta2) U(psi)^T.
struct BeamAxes
{
    double psi;
    double zeta1; // eigenvalue along (cos psi, sin psi)
    double zeta2;
};

BeamPattern3D beam3d_from_axes(double psi, double zeta1, double zeta2);

/// Decomposes A with the half-angle formula. psi lies in (-pi/2, pi/2] and
/// points along the larger eigenvalue, so zeta1 >= zeta2.
BeamAxes beam_axes(const BeamPattern3D& beam);

/// Beam with fixed diagonal widths whose principal axes sit at angle psi:
/// m = tan(2 psi) (1/theta^2 - 1/phi^2) / 2. Throws DomainError when the
/// combination is not positive definite or psi = +-pi/4.
BeamPattern3D beam3d_from_rotation(double theta3db, double phi3db, double psi);

/// Reads theta3db, phi3db and m from a symmetric positive-definite matrix.
BeamPattern3D beam3d_from_matrix(const Eigen::Matrix2d& a);

class PositionError2D
{
  public:
    PositionError2D(double sigma1, double sigma2, double varphi);

    double sigma1() const { return sigma1_; }
    double sigma2() const { return sigma2_; }
    double varphi() const { return varphi_; }

    /// R(varphi) diag(sigma1^2, sigma2^2) R(varphi)^T
    Eigen::Matrix2d covariance() const;
    /// R(varphi) diag(sigma1, sigma2), a square root of the covariance.
    Eigen::Matrix2d square_root() const;

    double sigma_x() const;
    double sigma_y() const;
    /// Correlation between the x and y estimation errors.
    double rho() const;

    /// Covariance multiplied by `factor` (standard deviations by sqrt(factor)).
    PositionError2D scaled(double factor) const;

  private:
    double sigma1_;
    double sigma2_;
    double varphi_;
};

class PositionError3D
{
  public:
    /// Requires sigma1 >= sigma2 >= sigma3 > 0. Ties are accepted; the
    /// eigenvector choice is then arbitrary but the covariance is not.
    PositionError3D(double sigma1, double sigma2, double sigma3, double varphi_x,
                    double varphi_y, double varphi_z);

    double sigma1() const { return sigma_[0]; }
    double sigma2() const { return sigma_[1]; }
    double sigma3() const { return sigma_[2]; }
    double varphi_x() const { return angle_[0]; }
    double varphi_y() const { return angle_[1]; }
    double varphi_z() const { return angle_[2]; }

    Eigen::Matrix3d rotation() const;
    Eigen::Matrix3d covariance() const;
    Eigen::Matrix3d square_root() const;
    /// Covariance of (x, z): rows/columns 1 and 3 of the full covariance.
    Eigen::Matrix2d cross_covariance() const;

    PositionError3D scaled(double factor) const;

  private:
    Eigen::Vector3d sigma_;
    Eigen::Vector3d angle_;
};

/// R = Rz(varphi_z) Ry(varphi_y) Rx(varphi_x), right-handed axis rotations.
Eigen::Matrix3d rotation_3d(double varphi_x, double varphi_y, double varphi_z);

class LinkBudget
{
  public:
    /// Budget specified by the total radiated power Pt.
    static LinkBudget from_total_power(double pt, double ae, double distance, double gamma_th,
                                       double am);
    /// Budget specified directly by the peak antenna input power Pmax.
    static LinkBudget from_peak_power(double pmax, double ae, double distance, double gamma_th,
                                      double am);

    bool has_total_power() const { return pt_.has_value(); }
    /// Throws StateError when the budget was given as a peak power.
    double total_power() const;
    std::optional<double> peak_power() const { return pmax_; }

    double ae() const { return ae_; }
    double distance() const { return distance_; }
    double gamma_th() const { return gamma_th_; }
    double am() const { return am_; }

    LinkBudget with_distance(double distance) const;
    LinkBudget with_total_power(double pt) const;
    LinkBudget with_threshold(double gamma_th) const;

  private:
    LinkBudget(std::optional<double> pt, std::optional<double> pmax, double ae, double distance,
               double gamma_th, double am);

    std::optional<double> pt_;
    std::optional<double> pmax_;
    double ae_;
    double distance_;
    double gamma_th_;
    double am_;
};

/// max(10^(-1.2 theta^2 / theta3db^2), am); requires |theta| <= pi.
double gain_2d(const BeamPattern2D& beam, double am, double theta);

/// max(10^(-1.2 [theta, phi] A [theta, phi]^T), am); requires |theta| <= pi, |phi| <= pi/2.
double gain_3d(const BeamPattern3D& beam, double am, double theta, double phi);

/// Peak input power that radiates `pt` in total through a 2D Gaussian beam.
double pmax_from_pt_2d(double pt, const BeamPattern2D& beam);

/// Same for a 3D joint Gaussian beam.
double pmax_from_pt_3d(double pt, const BeamPattern3D& beam);

/// Budget's Pmax, converting from Pt when needed.
double resolve_peak_power(const LinkBudget& budget, const BeamPattern2D& beam);
double resolve_peak_power(const LinkBudget& budget, const BeamPattern3D& beam);

/// Eigen-decomposition of a symmetric 2x2 matrix by the half-angle formula.
struct SymmetricEigen2
{
    double larger;
    double smaller;
    double angle; // direction of the eigenvector for `larger`, in (-pi/2, pi/2]
};

SymmetricEigen2 eigen_symmetric(const Eigen::Matrix2d& m);

/// Planar rotation [[c, -s], [s, c]].
Eigen::Matrix2d rotation_2d(double angle);

} // namespace gbeam
