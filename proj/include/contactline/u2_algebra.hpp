#pragma once

// Parameter space of contact interactions on the line.
//
// A contact interaction at x = 0 is fixed by a matrix U in U(2) through the
// connection condition (U - I) Phi + i L0 (U + I) Phi' = 0, where
//   Phi  = (phi(0+),  phi(0-))
//   Phi' = (phi'(0+), -phi'(0-)).
// Everything here is exact linear algebra on 2x2 complex matrices.

#include <complex>

#include <Eigen/Dense>

namespace contactline {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::Vector2cd;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Basis4x2 = Eigen::Matrix<cplx, 4, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default length scale L0. All strengths are in units where L0 = 1.
inline constexpr double kDefaultL0 = 1.0;

/// Tolerance for the unitarity check on construction.
inline constexpr double kUnitaryTol = 1e-12;

/// Maps x into [0, period).
double wrap_angle(double x, double period = kTwoPi);

/// Max absolute entry difference, the norm used for all matrix tolerances.
double max_abs_diff(const Mat2& a, const Mat2& b);

/// Pauli matrix sigma_j, j in {1, 2, 3}; j = 0 gives the identity.
const Mat2& pauli(int j);

struct CanonicalParams {
  double xi = 0.0;  // [0, pi)
  cplx alpha{1.0, 0.0};
  cplx beta{0.0, 0.0};
};

class UnitaryU2 {
 public:
  /// Throws Error{NotUnitary} if max|U^dagger U - I| > kUnitaryTol.
  explicit UnitaryU2(const Mat2& m);

  /// Nearest unitary (polar factor) of a matrix that is unitary up to
  /// accumulated rounding. Throws NotUnitary if the input is far from unitary.
  static UnitaryU2 project(const Mat2& m, double sanity_tol = 1e-8);

  static UnitaryU2 identity() { return UnitaryU2(Mat2::Identity()); }

  /// U = e^{i xi} [[alpha, beta], [-conj(beta), conj(alpha)]].
  static UnitaryU2 from_canonical(double xi, cplx alpha, cplx beta);

  const Mat2& matrix() const noexcept { return m_; }
  cplx operator()(int row, int col) const { return m_(row, col); }

  CanonicalParams canonical() const;

  /// Both off-diagonal entries vanish: the two half-lines do not talk.
  bool decoupled(double tol = 1e-12) const;

 private:
  Mat2 m_;
};

/// Transfer form Lambda = e^{i lambda} [[s, u], [v, t]] with s t - u v = 1,
/// mapping (phi(0-), phi'(0-)) to (phi(0+), phi'(0+)).
struct TransferMatrix {
  double lambda = 0.0;
  double s = 1.0;
  double t = 1.0;
  double u = 0.0;
  double v = 0.0;

  Mat2 matrix() const;
  double det() const { return s * t - u * v; }
  /// Throws InvalidTransfer unless st - uv = 1 (1e-12, scaled by |st| + |uv|)
  /// and lambda lies in [0, pi).
  void validate() const;
};

TransferMatrix delta_transfer(double v);
TransferMatrix epsilon_transfer(double u);

struct BoundaryData {
  Vec2 phi = Vec2::Zero();        // (phi(0+), phi(0-))
  Vec2 phi_prime = Vec2::Zero();  // (phi'(0+), -phi'(0-))

  /// Packs raw values (phi(0+), phi(0-), phi'(0+), phi'(0-)).
  static BoundaryData from_raw(const Vec4& raw);
  Vec4 raw() const;

  /// Phi'^dagger Phi - Phi^dagger Phi'; zero for data admitted by any U.
  cplx current_defect() const;
};

Vec2 connection_residual(const UnitaryU2& u, const BoundaryData& bd, double L0 = kDefaultL0);

/// Orthonormal basis (columns, raw ordering phi(0+), phi(0-), phi'(0+), phi'(0-))
/// of all boundary data admitted by U. Throws NumericalRank if the null space
/// of the connection condition is not two-dimensional at 1e-10.
Basis4x2 boundary_subspace(const UnitaryU2& u, double L0 = kDefaultL0);

/// The unique U whose admissible boundary data are spanned by `raw_basis`.
/// The span must be a Lagrangian (current-conserving) 2-plane.
UnitaryU2 from_boundary_subspace(const Basis4x2& raw_basis, double L0 = kDefaultL0);

/// Throws NoTransferForm when the admissible data are not a graph over the
/// left-side values, e.g. for separated walls.
TransferMatrix to_transfer(const UnitaryU2& u, double L0 = kDefaultL0);
UnitaryU2 from_transfer(const TransferMatrix& lam, double L0 = kDefaultL0);

/// Eigenphases plus the Bloch angles of the diagonalizing frame:
///   U = V^{-1} diag(e^{i theta_plus}, e^{i theta_minus}) V,
///   V = exp(i mu sigma_2 / 2) exp(i nu sigma_3 / 2).
struct SpectralCoordinates {
  double theta_plus = 0.0;   // [0, 2 pi)
  double theta_minus = 0.0;  // [0, 2 pi)
  double mu = 0.0;           // [0, pi]
  double nu = 0.0;           // [0, 2 pi)
  bool degenerate = false;   // U proportional to I; (mu, nu) meaningless
};

enum class PhaseOrdering { canonical, raw };

/// Canonical ordering puts theta_plus <= theta_minus, which fixes the swap
/// ambiguity of the torus. Raw ordering keeps theta = xi +- rho.
SpectralCoordinates eigen_decompose(const UnitaryU2& u, PhaseOrdering ordering = PhaseOrdering::canonical);

/// The SU(2) frame V for given sphere angles.
Mat2 frame_matrix(double mu, double nu);
UnitaryU2 reconstruct(const SpectralCoordinates& sc);

/// Canonical form of an unordered eigenphase pair.
SpectralCoordinates canonicalize(const SpectralCoordinates& sc);

class ParityAxis {
 public:
  /// Throws NotNormalized unless c1^2 + c2^2 + c3^2 = 1 to 1e-12.
  ParityAxis(double c1, double c2, double c3);
  static ParityAxis normalized(double c1, double c2, double c3);

  double c1() const noexcept { return c_[0]; }
  double c2() const noexcept { return c_[1]; }
  double c3() const noexcept { return c_[2]; }
  /// sigma = sum_j c_j sigma_j.
  Mat2 sigma() const;

 private:
  double c_[3];
};

/// sigma U sigma. Isospectral.
UnitaryU2 parity_conjugate(const UnitaryU2& u, const ParityAxis& axis);

/// Antipode on the isospectral sphere, (mu, nu) -> (pi - mu, nu + pi).
/// Throws DegenerateSphere when theta_plus = theta_minus.
UnitaryU2 duality_partner(const UnitaryU2& u);

/// sigma_V = e^{-i nu sigma_3/2} e^{-i mu sigma_2/2} e^{i nu sigma_3/2} sigma_3,
/// an involution with U = sigma_V D sigma_V.
Mat2 sigma_v(double mu, double nu);

/// sigma_S = sigma_V sigma_3 sigma_V; satisfies sigma_S U sigma_S = U.
/// Throws DegenerateSphere when theta_plus = theta_minus.
Mat2 invariant_spin_matrix(const UnitaryU2& u);

}  // namespace contactline
