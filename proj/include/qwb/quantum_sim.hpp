#pragma once

// Dense statevector simulation: query-counting oracles, phase detection with
// an explicit counter ladder, amplitude amplification / search, the spectral
// and effective-gap checks for products of two reflections, and end-to-end
// evaluation of span programs and dual-adversary solutions.

#include <functional>
#include <random>

#include "qwb/dual_adversary.hpp"
#include "qwb/numerics.hpp"
#include "qwb/span_programs.hpp"

namespace qwb {

struct QuantumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuantumState {
  int dim = 0;
  CVec amplitudes;

  void validate() const;  // normalized to 1e-9
};

// Oracle for a fixed input string; every application (forward or inverse)
// increments the counter exactly once.
struct QueryOracle {
  Input z;
  int q = 2;
  enum Mode { Phase, Register } mode = Phase;
  long count = 0;

  // state over indices 0..n-1; multiplies the |j> amplitude by e^{2 pi i z_j/q}
  void apply_phase(CVec& state);
  // state over n*q entries, index j*q+v; maps |j,v> to |j, v+z_j mod q>
  void apply_register(CVec& state);
};

using Unitary = std::function<void(CVec&)>;

// exact probability that one detection round outputs 0 on the given state;
// K = ceil(8/delta) counter levels, the ladder applies U once per level
double phase_zero_probability(const Unitary& u, double delta, const CVec& psi);

struct DetectionResult {
  int bit = 0;            // 1 iff a non-zero phase was detected
  long applications = 0;  // controlled applications of U
};

// one-sided error eps: a 1-eigenvector always yields 0; a state supported on
// eigenphases >= delta yields 1 with probability >= 1/2 per round
DetectionResult phase_detection(const Unitary& u, double delta, double eps,
                                const CVec& psi, std::mt19937_64& rng);

struct AmplificationResult {
  int bit = 0;       // detect mode: marked element present
  int element = -1;  // find mode: a marked element, or -1
  long steps = 0;    // walk steps used
};

// walk step = phase flip on marked coordinates + reflection about psi;
// detect mode runs phase detection at sqrt(eps), find mode the geometric
// schedule (no knowledge of the marked fraction needed)
AmplificationResult amplitude_amplification(const CVec& psi,
                                            const std::vector<int>& marked,
                                            double eps, bool find,
                                            std::mt19937_64& rng);

struct GroverResult {
  int index = -1;
  long queries = 0;
};
// search for a 1 in a phase oracle over n indices; -1 when none found
GroverResult grover(QueryOracle& o, int n, std::mt19937_64& rng);

// exact distinguisher of all-equal vs balanced inputs; one query
int deutsch_jozsa(QueryOracle& o);

struct SpectrumReport {
  std::vector<double> phases;    // eigenphases of (2BB*-I)(2AA*-I), sorted
  std::vector<double> expected;  // multiset predicted from the SVD of A*B
  double max_mismatch = 0.0;
  int zero_dim = 0;       // predicted 1-eigenspace dimension
  int minus_one_dim = 0;  // predicted (-1)-eigenspace dimension
};
SpectrumReport reflection_spectrum_check(const Mat& a, const Mat& b);

// u must lie in ker(AA*): returns (||P_delta Pi_B u||, (delta/2)||u||)
std::pair<double, double> effective_gap_check(const Mat& a, const Mat& b,
                                              double delta, const Vec& u);

// q vectors each with <mu_i, nu_j> = 1 - delta_ij and norms <= sqrt(2)
std::pair<std::vector<Vec>, std::vector<Vec>> make_mu_nu(int q);

struct RunResult {
  int output = 0;
  long queries = 0;
  double zero_probability = 0.0;  // exact per-round detection statistic
};

// Evaluate the program by phase detection on the two-reflection walk over
// the input-vector index space; accepts iff the zero phase is detected.
RunResult run_span_program(const SpanProgram& p, const Input& z, double w,
                           double c1 = 4.0, double c2 = 16.0,
                           unsigned seed = 1);

// Same walk over C + C^n x C^d x C^q with the mu/nu pairing.
RunResult run_dual_adversary(const DualAdversarySolution& s, const Input& z,
                             double w, double c1 = 4.0, double c2 = 16.0,
                             unsigned seed = 1);

// experiment transcript (query counts and outcome frequencies) as JSON
std::string transcript_json(const std::string& name,
                            const std::vector<RunResult>& runs);

}  // namespace qwb
