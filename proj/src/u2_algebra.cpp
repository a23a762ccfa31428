#include "contactline/u2_algebra.hpp"

#include <algorithm>
#include <cmath>

#include "contactline/error.hpp"

namespace contactline {

namespace {

constexpr cplx kI{0.0, 1.0};

// Below this |a| (the SU(2) rotation vector) the two eigenphases coincide.
constexpr double kDegenerateTol = 1e-12;
constexpr double kRankTol = 1e-10;
constexpr double kGraphTol = 1e-9;

double unitarity_defect(const Mat2& m) {
  return max_abs_diff(m.adjoint() * m, Mat2::Identity());
}

struct SU2Split {
  double xi;         // U = e^{i xi} W, det W = 1
  double a0;         // W = a0 I + i a . sigma
  Eigen::Vector3d a;
};

SU2Split split_su2(const Mat2& m) {
  SU2Split out{};
  out.xi = 0.5 * std::arg(m.determinant());
  const Mat2 w = m * std::exp(-kI * out.xi);
  out.a0 = 0.5 * std::real(w.trace());
  for (int j = 1; j <= 3; ++j) {
    out.a[j - 1] = std::real((w * pauli(j)).trace() / (2.0 * kI));
  }
  return out;
}

Mat2 make_mat(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

}  // namespace

double wrap_angle(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

const Mat2& pauli(int j) {
  static const Mat2 mats[4] = {
      make_mat(1.0, 0.0, 0.0, 1.0),
      make_mat(0.0, 1.0, 1.0, 0.0),
      make_mat(0.0, -kI, kI, 0.0),
      make_mat(1.0, 0.0, 0.0, -1.0),
  };
  if (j < 0 || j > 3) throw Error(ErrorKind::InvalidArgument, "Pauli index must be 0..3");
  return mats[j];
}

// ---------------------------------------------------------------- UnitaryU2

UnitaryU2::UnitaryU2(const Mat2& m) : m_(m) {
  if (!m.allFinite()) throw Error(ErrorKind::NotUnitary, "matrix has non-finite entries");
  const double defect = unitarity_defect(m);
  if (defect > kUnitaryTol) {
    throw Error(ErrorKind::NotUnitary, "max|U^dagger U - I| = " + std::to_string(defect));
  }
}

UnitaryU2 UnitaryU2::project(const Mat2& m, double sanity_tol) {
  if (!m.allFinite() || unitarity_defect(m) > sanity_tol) {
    throw Error(ErrorKind::NotUnitary, "matrix is not close to unitary");
  }
  Eigen::JacobiSVD<Mat2> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return UnitaryU2(svd.matrixU() * svd.matrixV().adjoint());
}

UnitaryU2 UnitaryU2::from_canonical(double xi, cplx alpha, cplx beta) {
  const Mat2 m = std::exp(kI * xi) * make_mat(alpha, beta, -std::conj(beta), std::conj(alpha));
  return UnitaryU2(m);
}

CanonicalParams UnitaryU2::canonical() const {
  CanonicalParams p;
  p.xi = wrap_angle(0.5 * std::arg(m_.determinant()), kPi);
  const cplx phase = std::exp(-kI * p.xi);
  p.alpha = phase * m_(0, 0);
  p.beta = phase * m_(0, 1);
  return p;
}

bool UnitaryU2::decoupled(double tol) const {
  return std::abs(m_(0, 1)) <= tol && std::abs(m_(1, 0)) <= tol;
}

// ----------------------------------------------------------- TransferMatrix

Mat2 TransferMatrix::matrix() const {
  return std::exp(kI * lambda) * make_mat(s, u, v, t);
}

void TransferMatrix::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(s) || !std::isfinite(t) || !std::isfinite(u) ||
      !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidTransfer, "non-finite entry");
  }
  const double scale = std::max(1.0, std::abs(s * t) + std::abs(u * v));
  if (std::abs(det() - 1.0) > 1e-12 * scale) {
    throw Error(ErrorKind::InvalidTransfer, "st - uv = " + std::to_string(det()) + ", expected 1");
  }
  if (lambda < 0.0 || lambda >= kPi) {
    throw Error(ErrorKind::InvalidTransfer, "lambda outside [0, pi)");
  }
}

TransferMatrix delta_transfer(double v) { return TransferMatrix{0.0, 1.0, 1.0, 0.0, v}; }

TransferMatrix epsilon_transfer(double u) { return TransferMatrix{0.0, 1.0, 1.0, u, 0.0}; }

// ------------------------------------------------------------ BoundaryData

BoundaryData BoundaryData::from_raw(const Vec4& raw) {
  BoundaryData bd;
  bd.phi << raw(0), raw(1);
  bd.phi_prime << raw(2), -raw(3);
  return bd;
}

Vec4 BoundaryData::raw() const {
  Vec4 r;
  r << phi(0), phi(1), phi_prime(0), -phi_prime(1);
  return r;
}

cplx BoundaryData::current_defect() const {
  return phi_prime.dot(phi) - phi.dot(phi_prime);
}

Vec2 connection_residual(const UnitaryU2& u, const BoundaryData& bd, double L0) {
  const Mat2& m = u.matrix();
  const Mat2 id = Mat2::Identity();
  return (m - id) * bd.phi + kI * L0 * (m + id) * bd.phi_prime;
}

Basis4x2 boundary_subspace(const UnitaryU2& u, double L0) {
  if (!(L0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "L0 must be positive");
  const Mat2& m = u.matrix();
  const Mat2 id = Mat2::Identity();
  Eigen::Matrix<cplx, 2, 4> sys;
  sys.leftCols<2>() = m - id;
  sys.rightCols<2>() = kI * L0 * (m + id);

  Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(1) <= kRankTol * std::max(1.0, sv(0))) {
    throw Error(ErrorKind::NumericalRank, "connection condition has rank < 2");
  }
  // Null space in (Phi, Phi') coordinates; flip the last entry to raw phi'(0-).
  Basis4x2 basis = svd.matrixV().rightCols<2>();
  basis.row(3) *= -1.0;
  return basis;
}

UnitaryU2 from_boundary_subspace(const Basis4x2& raw_basis, double L0) {
  if (!(L0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "L0 must be positive");
  Eigen::HouseholderQR<Basis4x2> qr(raw_basis);
  Basis4x2 q = qr.householderQ() * Basis4x2::Identity();

  // U (Phi + i L0 Phi') = Phi - i L0 Phi' on every admissible vector.
  Mat2 phi = q.topRows<2>();
  Mat2 dphi = q.bottomRows<2>();
  dphi.row(1) *= -1.0;
  const Mat2 p = phi + kI * L0 * dphi;
  const Mat2 r = phi - kI * L0 * dphi;
  Eigen::FullPivLU<Mat2> lu(p);
  if (!lu.isInvertible()) {
    throw Error(ErrorKind::NumericalRank, "boundary subspace is not Lagrangian");
  }
  return UnitaryU2::project(r * lu.inverse());
}

TransferMatrix to_transfer(const UnitaryU2& u, double L0) {
  const Basis4x2 basis = boundary_subspace(u, L0);
  Mat2 left;   // (phi(0-), phi'(0-))
  Mat2 right;  // (phi(0+), phi'(0+))
  left << basis.row(1), basis.row(3);
  right << basis.row(0), basis.row(2);

  Eigen::JacobiSVD<Mat2> svd(left);
  if (svd.singularValues()(1) <= kGraphTol) {
    throw Error(ErrorKind::NoTransferForm,
                "admissible data are not a graph over the left-side values");
  }
  const Mat2 lam = right * left.inverse();

  double lambda = wrap_angle(0.5 * std::arg(lam.determinant()), kPi);
  if (kPi - lambda < 1e-12) lambda = 0.0;
  const Mat2 real_part = std::exp(-kI * lambda) * lam;

  TransferMatrix out{lambda, real_part(0, 0).real(), real_part(1, 1).real(),
                     real_part(0, 1).real(), real_part(1, 0).real()};
  return out;
}

UnitaryU2 from_transfer(const TransferMatrix& lam, double L0) {
  lam.validate();
  const Mat2 m = lam.matrix();
  // Graph basis: left data e_j map to right data Lambda e_j.
  Basis4x2 raw;
  raw << m(0, 0), m(0, 1),
         1.0, 0.0,
         m(1, 0), m(1, 1),
         0.0, 1.0;
  return from_boundary_subspace(raw, L0);
}

// ------------------------------------------------------ Spectral structure

SpectralCoordinates eigen_decompose(const UnitaryU2& u, PhaseOrdering ordering) {
  const SU2Split sp = split_su2(u.matrix());
  const double norm_a = sp.a.norm();
  const double rho = std::atan2(norm_a, sp.a0);

  SpectralCoordinates sc;
  if (norm_a < kDegenerateTol) {
    sc.theta_plus = sc.theta_minus = wrap_angle(sp.xi + rho);
    sc.degenerate = true;
    return sc;
  }
  // e^{i(xi + rho)} belongs to the +1 eigenvector of n . sigma.
  Eigen::Vector3d n = sp.a / norm_a;
  sc.theta_plus = wrap_angle(sp.xi + rho);
  sc.theta_minus = wrap_angle(sp.xi - rho);
  if (ordering == PhaseOrdering::canonical && sc.theta_plus > sc.theta_minus) {
    std::swap(sc.theta_plus, sc.theta_minus);
    n = -n;
  }
  // Bloch angles of the theta_plus eigenvector (cos(mu/2), e^{i nu} sin(mu/2)).
  sc.mu = std::atan2(std::hypot(n(0), n(1)), n(2));
  sc.nu = wrap_angle(std::atan2(n(1), n(0)));
  return sc;
}

Mat2 frame_matrix(double mu, double nu) {
  const double c = std::cos(0.5 * mu);
  const double s = std::sin(0.5 * mu);
  const cplx ep = std::exp(kI * (0.5 * nu));
  const cplx em = std::conj(ep);
  return make_mat(c * ep, s * em, -s * ep, c * em);
}

UnitaryU2 reconstruct(const SpectralCoordinates& sc) {
  Mat2 d = Mat2::Zero();
  d(0, 0) = std::exp(kI * sc.theta_plus);
  d(1, 1) = std::exp(kI * sc.theta_minus);
  if (sc.degenerate) return UnitaryU2::project(d);
  const Mat2 v = frame_matrix(sc.mu, sc.nu);
  return UnitaryU2::project(v.adjoint() * d * v);
}

SpectralCoordinates canonicalize(const SpectralCoordinates& sc) {
  SpectralCoordinates out = sc;
  out.theta_plus = wrap_angle(sc.theta_plus);
  out.theta_minus = wrap_angle(sc.theta_minus);
  if (out.theta_plus > out.theta_minus) {
    std::swap(out.theta_plus, out.theta_minus);
    if (!out.degenerate) {
      out.mu = kPi - out.mu;
      out.nu = wrap_angle(out.nu + kPi);
    }
  }
  return out;
}

// ----------------------------------------------------------------- Parity

ParityAxis::ParityAxis(double c1, double c2, double c3) : c_{c1, c2, c3} {
  const double n2 = c1 * c1 + c2 * c2 + c3 * c3;
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > 1e-12) {
    throw Error(ErrorKind::NotNormalized, "direction cosines must satisfy sum c_j^2 = 1");
  }
}

ParityAxis ParityAxis::normalized(double c1, double c2, double c3) {
  const double n = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::NotNormalized, "zero or non-finite parity axis");
  }
  return ParityAxis(c1 / n, c2 / n, c3 / n);
}

Mat2 ParityAxis::sigma() const {
  return c_[0] * pauli(1) + c_[1] * pauli(2) + c_[2] * pauli(3);
}

UnitaryU2 parity_conjugate(const UnitaryU2& u, const ParityAxis& axis) {
  const Mat2 s = axis.sigma();
  return UnitaryU2::project(s * u.matrix() * s);
}

UnitaryU2 duality_partner(const UnitaryU2& u) {
  const SpectralCoordinates sc = eigen_decompose(u);
  if (sc.degenerate) throw Error(ErrorKind::DegenerateSphere, "U is proportional to I");
  SpectralCoordinates anti = sc;
  anti.mu = kPi - sc.mu;
  anti.nu = wrap_angle(sc.nu + kPi);
  return reconstruct(anti);
}

Mat2 sigma_v(double mu, double nu) {
  const cplx ep = std::exp(kI * (0.5 * nu));
  const Mat2 rot_z = make_mat(ep, 0.0, 0.0, std::conj(ep));
  const Mat2 rot_z_inv = rot_z.adjoint();
  const double c = std::cos(0.5 * mu);
  const double s = std::sin(0.5 * mu);
  const Mat2 rot_y_inv = make_mat(c, -s, s, c);  // exp(-i mu sigma_2 / 2)
  return rot_z_inv * rot_y_inv * rot_z * pauli(3);
}

Mat2 invariant_spin_matrix(const UnitaryU2& u) {
  const SpectralCoordinates sc = eigen_decompose(u);
  if (sc.degenerate) throw Error(ErrorKind::DegenerateSphere, "U is proportional to I");
  const Mat2 sv = sigma_v(sc.mu, sc.nu);
  return sv * pauli(3) * sv;
}

}  // namespace contactline
