#include "qwb/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qwb {

double spectral_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw NumericsError("spectral_norm: non-finite entries");
  Eigen::JacobiSVD<Mat> s(m);
  return s.singularValues().size() ? s.singularValues()(0) : 0.0;
}

double spectral_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw NumericsError("spectral_norm: non-finite entries");
  Eigen::JacobiSVD<CMat> s(m);
  return s.singularValues().size() ? s.singularValues()(0) : 0.0;
}

SvdResult svd(const CMat& m) {
  if (!m.allFinite()) throw NumericsError("svd: non-finite entries");
  Eigen::JacobiSVD<CMat> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult r;
  // drop numerically-zero singular values so the zero matrix yields an
  // empty list, as documented
  const auto& sv = s.singularValues();
  double cutoff = sv.size() ? sv(0) * 1e-14 : 0.0;
  int k = 0;
  while (k < sv.size() && sv(k) > cutoff) ++k;
  r.u = s.matrixU().leftCols(k);
  r.singular = sv.head(k);
  r.v = s.matrixV().leftCols(k);
  return r;
}

bool is_psd(const CMat& m, double tol) {
  if (m.rows() != m.cols()) throw NumericsError("is_psd: not square");
  double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > tol) throw NumericsError("is_psd: matrix not Hermitian within tol");
  CMat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool is_psd(const Mat& m, double tol) { return is_psd(CMat(m.cast<std::complex<double>>()), tol); }

template <typename M, typename V>
static std::optional<V> min_norm_impl(const M& m, const V& b, double tol) {
  if (m.rows() != b.size()) throw NumericsError("min_norm_solution: dim mismatch");
  if (m.cols() == 0 || m.rows() == 0) {
    // degenerate shapes crash Eigen's QR; the only candidate is w = 0
    if (b.norm() > tol) return std::nullopt;
    return V::Zero(m.cols());
  }
  Eigen::CompleteOrthogonalDecomposition<M> cod(m);
  V w = cod.solve(b);
  double bn = b.norm();
  double resid = (m * w - b).norm();
  if (resid > tol * std::max(bn, 1e-300)) return std::nullopt;
  return w;
}

std::optional<Vec> min_norm_solution(const Mat& m, const Vec& b, double tol) {
  return min_norm_impl(m, b, tol);
}
std::optional<CVec> min_norm_solution(const CMat& m, const CVec& b, double tol) {
  return min_norm_impl(m, b, tol);
}

template <typename M>
static M kernel_proj_impl(const M& m, double tol) {
  Eigen::JacobiSVD<M> s(m, Eigen::ComputeFullV);
  const auto& sv = s.singularValues();
  double scale = sv.size() ? sv(0) : 0.0;
  double cutoff = std::max(scale * 1e-12, tol * 1e-3);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  M v = s.matrixV();
  M k = v.rightCols(v.cols() - rank);
  return k * k.adjoint();
}

Mat kernel_projector(const Mat& m, double tol) { return kernel_proj_impl(m, tol); }
CMat kernel_projector(const CMat& m, double tol) { return kernel_proj_impl(m, tol); }

Vec solve_linear(const Mat& m, const Vec& b, double tol) {
  if (m.rows() != m.cols()) throw NumericsError("solve_linear: not square");
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(tol);
  if (!lu.isInvertible()) throw NumericsError("solve_linear: singular matrix");
  Vec x = lu.solve(b);
  double resid = (m * x - b).norm();
  if (resid > 1e-8 * std::max(b.norm(), 1e-300))
    throw NumericsError("solve_linear: residual too large (ill-conditioned)");
  return x;
}

Mat psd_factor(const Mat& gram, double clamp) {
  if (gram.rows() != gram.cols()) throw NumericsError("psd_factor: not square");
  Mat h = 0.5 * (gram + gram.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-7 * scale)
      throw NumericsError("psd_factor: matrix has a significantly negative eigenvalue");
    if (ev(i) < clamp) ev(i) = 0.0;
  }
  // rows of the result are the factor vectors: gram = F^T F with F = sqrt(D) Q^T
  Mat f = ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  return f;
}

int numerical_rank(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> s(m);
  const auto& sv = s.singularValues();
  double scale = sv.size() ? sv(0) : 0.0;
  double cutoff = std::max(scale * 1e-12, tol * 1e-3);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return rank;
}

Mat kernel_basis(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0)
    return Mat::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Mat> s(m, Eigen::ComputeFullV);
  const auto& sv = s.singularValues();
  double scale = sv.size() ? sv(0) : 0.0;
  double cutoff = std::max(scale * 1e-12, tol * 1e-3);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return s.matrixV().rightCols(m.cols() - rank);
}

Mat range_basis(const Mat& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return Mat::Zero(m.rows(), 0);
  Eigen::JacobiSVD<Mat> s(m, Eigen::ComputeThinU);
  const auto& sv = s.singularValues();
  double scale = sv.size() ? sv(0) : 0.0;
  double cutoff = std::max(scale * 1e-12, tol * 1e-3);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return s.matrixU().leftCols(rank);
}

}  // namespace qwb
