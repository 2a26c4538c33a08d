#pragma once

// Feasible solutions of the dual adversary program, stored as Gram factors
// psi_{j,z}, with the explicit constructions: exact threshold solutions,
// certificate/property-testing barrier solutions, the graph-collision
// assembly, and the round trip to canonical span programs.

#include "qwb/functions.hpp"
#include "qwb/numerics.hpp"
#include "qwb/span_programs.hpp"

namespace qwb {

struct DualAdversaryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DualAdversarySolution {
  PartialFunction f;
  // per variable j: a d_j x |domain| matrix whose column z is psi_{j,z};
  // X_j[x,y] = <psi_{j,x}, psi_{j,y}> is PSD by construction
  std::vector<Mat> factors;
  // true for solutions of the relaxed program (constraint >= 1 instead of = 1)
  bool relaxed = false;

  void validate() const;
  Mat gram(int j) const;  // X_j over the whole domain
};

struct FeasibilityReport {
  bool feasible = false;
  double violation = 0.0;  // worst |sum - 1|, or worst shortfall when relaxed
};
FeasibilityReport check_feasible(const DualAdversarySolution& s,
                                 double tol = kDefaultTol);

// max_z sum_j ||psi_{j,z}||^2
double objective(const DualAdversarySolution& s);

// Exact solution for the k-threshold function on n bits; objective
// sqrt(k(n-k+1)), equality feasibility within 1e-9.
DualAdversarySolution threshold_dual(int k, int n);

// The explicit maj3 (2-of-3 threshold) solution over the six inputs of
// Hamming weight 1 and 2, with the displayed X_1, X_2, X_3 matrices.
DualAdversarySolution maj3_solution();

// Relaxed-program solutions witnessing the classical upper bounds:
//   'a': objective sqrt(n*C1)  (partial f allowed; assumes C1 <= C0)
//   'b': objective sqrt(C0*C1) (f must be total)
//   'c': objective 1/eps       (Hamming distance between preimages >= eps*n)
DualAdversarySolution barrier_solution(const PartialFunction& f, char variant,
                                       double eps = 0.0);

// Graph collision on the given graph, promise |z| <= 2*alpha(g); stage-wise
// assembly with randomness subsets of size r (0 <= r <= n-2).
DualAdversarySolution graph_collision_dual(const Adj& g, int r);

int independence_number(const Adj& g);

// Boolean-alphabet solutions only; the result is canonical over f^{-1}(0)
// in domain order, with d_j input vectors per (j, b) block.
SpanProgram to_span_program(const DualAdversarySolution& s);

// Inverse direction: p must be canonical over f^{-1}(0) in domain order and
// evaluate f on its whole domain.
DualAdversarySolution from_canonical_span_program(const SpanProgram& p,
                                                  const PartialFunction& f);

// JSON: {n, q, domain_hash, factors: per-j matrix of row vectors}
std::string to_json(const DualAdversarySolution& s);

}  // namespace qwb
