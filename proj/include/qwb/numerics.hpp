#pragma once

// Dense real/complex linear algebra wrappers used by every other module.
// Backed by Eigen; this layer fixes tolerances, error semantics and the
// least-norm / projector conventions the rest of the code relies on.

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace qwb {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kDefaultTol = 1e-9;

// Largest singular value. Relative accuracy 1e-10.
double spectral_norm(const Mat& m);
double spectral_norm(const CMat& m);

struct SvdResult {
  CMat u;          // left singular vectors, one per nonzero-capable column
  Vec singular;    // descending
  CMat v;          // right singular vectors
};
SvdResult svd(const CMat& m);

// True iff m is PSD: Hermitian within tol (else throws) and min eig >= -tol.
bool is_psd(const CMat& m, double tol = kDefaultTol);
bool is_psd(const Mat& m, double tol = kDefaultTol);

// Least-norm w with ||m w - b|| <= tol*||b||, or nullopt when b is not in
// range(m) beyond tolerance.
std::optional<Vec> min_norm_solution(const Mat& m, const Vec& b,
                                     double tol = kDefaultTol);
std::optional<CVec> min_norm_solution(const CMat& m, const CVec& b,
                                      double tol = kDefaultTol);

// Orthogonal projector onto ker(m): m*P ~ 0, P^2 = P = P^*.
Mat kernel_projector(const Mat& m, double tol = kDefaultTol);
CMat kernel_projector(const CMat& m, double tol = kDefaultTol);

// Square nonsingular solve; throws NumericsError when singular within tol.
Vec solve_linear(const Mat& m, const Vec& b, double tol = 1e-12);

// PSD square root with eigenvalue clamp at -1e-12; throws if further negative.
Mat psd_factor(const Mat& gram, double clamp = 1e-12);

// Numerical rank via singular-value threshold.
int numerical_rank(const Mat& m, double tol = kDefaultTol);

// Orthonormal columns spanning ker(m) (all of R^cols when m has no rows).
Mat kernel_basis(const Mat& m, double tol = kDefaultTol);

// Orthonormal columns spanning the column space of m.
Mat range_basis(const Mat& m, double tol = kDefaultTol);

}  // namespace qwb
