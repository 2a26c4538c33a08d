#pragma once

// Primal adversary matrices: bipartite layout over f^{-1}(1) x f^{-1}(0),
// spectral ratio, norm-bound helpers, and the explicit lower-bound matrix
// construction for singleton-generated certificate structures.

#include <functional>
#include <limits>

#include "qwb/functions.hpp"
#include "qwb/lg_dual.hpp"
#include "qwb/numerics.hpp"

namespace qwb {

struct AdversaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AdversaryMatrix {
  PartialFunction f;
  std::vector<int> rows;  // domain indices of f^{-1}(1), in layout order
  std::vector<int> cols;  // domain indices of f^{-1}(0)
  Mat m;                  // |rows| x |cols|, real

  static AdversaryMatrix for_function(const PartialFunction& f);  // zero matrix
};

struct DeltaMask {
  int j = 0;
  Mat m;  // 0/1, same bipartite layout
};

struct OrthogonalArray {
  int k = 0;
  int q = 2;
  std::vector<Input> rows;

  // every position/fixing leaves exactly |rows|/q^(k-1) completions
  bool check_invariant() const;
};

DeltaMask delta_mask(const PartialFunction& f, int j);

struct AdvRatioReport {
  double norm = 0.0;
  std::vector<double> masked_norms;
  double ratio = 0.0;
  bool infinite = false;  // all masked norms vanished
};
AdvRatioReport adv_ratio(const AdversaryMatrix& g);

// 0/1 matrix supported on related pairs from X x Y (domain indices),
// embedded in the full bipartite layout.
AdversaryMatrix relation_adversary(
    const PartialFunction& f, const std::vector<int>& xset,
    const std::vector<int>& yset,
    const std::function<bool(const Input&, const Input&)>& rel);

// requires a = b.*c entrywise (1e-12); returns max_i,j over supported entries
// of row_norm_i(b)*col_norm_j(c), an upper bound on ||a||.
double mathias_bound(const Mat& a, const Mat& b, const Mat& c);

// returns (||a ∘ mask||, 2||a||); callers assert lhs <= rhs
std::pair<double, double> hadamard_delta_check(const Mat& a, const DeltaMask& mask);

// all k-tuples over [q] summing to 0 mod q
OrthogonalArray modular_sum_array(int k, int q);

// The 8x8 weighted matrix for the 4-bit monotone-sequence function, in the
// symmetric layout (rows: 0000,0001,0011,0111,1111,1110,1100,1000; columns:
// 0010,0101,1011,0110,1101,1010,0100,1001), re-embedded into the canonical
// bipartite layout of the function table.
AdversaryMatrix monotone4_gamma(double a, double b, double c, double d);

struct BoundedlyGeneratedResult {
  AdversaryMatrix gamma;               // rows indexed by (x, M) pairs stacked per M
  std::vector<std::pair<int, int>> row_labels;  // (domain index of x, member)
  std::vector<Mat> gamma_prime;        // per j: same shape as gamma.m
  double alpha_objective = 0.0;        // sqrt(sum_M alpha_empty(M)^2)
};

// Explicit adversary matrix for the modular-sum function attached to a
// certificate structure with singleton generators, from a feasible dual
// learning-graph certificate.
BoundedlyGeneratedResult boundedly_generated_gamma(const CertificateStructure& cert,
                                                   int q,
                                                   const DualLGCertificate& alpha);

// The modular-sum function used by boundedly_generated_gamma: positive iff
// some generator's positions sum to 0 mod q; negative iff none do.
PartialFunction sum_problem_function(const CertificateStructure& cert, int q);

// delta mask for the stacked (x,M)-row layout
Mat stacked_delta_mask(const BoundedlyGeneratedResult& r, int j);

}  // namespace qwb
