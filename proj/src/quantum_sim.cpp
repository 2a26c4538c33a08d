#include "qwb/quantum_sim.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <json.hpp>

namespace qwb {

static constexpr double kPi = 3.14159265358979323846;

void QuantumState::validate() const {
  if (dim < 1 || amplitudes.size() != dim)
    throw QuantumError("state: bad dimension");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-9)
    throw QuantumError("state: not normalized");
}

void QueryOracle::apply_phase(CVec& state) {
  if (state.size() != (int)z.size()) throw QuantumError("oracle: dim mismatch");
  ++count;
  for (size_t j = 0; j < z.size(); ++j)
    state((int)j) *= std::polar(1.0, 2.0 * kPi * z[j] / q);
}

void QueryOracle::apply_register(CVec& state) {
  int n = (int)z.size();
  if (state.size() != n * q) throw QuantumError("oracle: dim mismatch");
  ++count;
  CVec out = CVec::Zero(n * q);
  for (int j = 0; j < n; ++j)
    for (int v = 0; v < q; ++v) out(j * q + (v + z[j]) % q) = state(j * q + v);
  state = out;
}

double phase_zero_probability(const Unitary& u, double delta, const CVec& psi) {
  if (delta <= 0) throw QuantumError("phase detection: delta must be positive");
  int k = (int)std::ceil(8.0 / delta);
  // ladder blocks are U^j psi; the inverse uniform transform on the counter
  // sends the uniform component back to |0>, so the outcome-0 amplitude per
  // coordinate is the block average
  CVec cur = psi;
  CVec acc = psi;
  for (int j = 1; j < k; ++j) {
    u(cur);
    acc += cur;
  }
  return (acc / (double)k).squaredNorm();
}

DetectionResult phase_detection(const Unitary& u, double delta, double eps,
                                const CVec& psi, std::mt19937_64& rng) {
  if (eps <= 0 || eps > 0.5) throw QuantumError("phase detection: bad eps");
  double p0 = phase_zero_probability(u, delta, psi);
  int k = (int)std::ceil(8.0 / delta);
  int rounds = std::max(1, (int)std::ceil(std::log2(1.0 / eps)));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DetectionResult r;
  for (int t = 0; t < rounds; ++t) {
    r.applications += k - 1;
    if (unif(rng) >= p0) r.bit = 1;  // a non-zero counter value was observed
  }
  return r;
}

AmplificationResult amplitude_amplification(const CVec& psi,
                                            const std::vector<int>& marked,
                                            double eps, bool find,
                                            std::mt19937_64& rng) {
  int n = (int)psi.size();
  if (n < 1 || std::abs(psi.norm() - 1.0) > 1e-9)
    throw QuantumError("amplification: setup state not normalized");
  std::vector<char> is_marked(n, 0);
  for (int m : marked) {
    if (m < 0 || m >= n) throw QuantumError("amplification: bad marked index");
    is_marked[m] = 1;
  }
  auto step = [&](CVec& v) {
    for (int i = 0; i < n; ++i)
      if (is_marked[i]) v(i) = -v(i);
    std::complex<double> ip = psi.dot(v);
    v = 2.0 * ip * psi - v;
  };
  AmplificationResult res;
  if (!find) {
    if (eps <= 0) throw QuantumError("amplification: bad eps");
    auto det = phase_detection(step, std::sqrt(eps), 0.5, psi, rng);
    res.bit = det.bit;
    res.steps = det.applications;
    return res;
  }
  // geometric schedule; the marked fraction need not be known
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double cap = 8.0 * std::sqrt((double)n) + 8.0;
  for (double sched = 1.0; sched <= cap; sched *= 2.0) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      CVec v = psi;
      for (int t = 0; t < (int)sched; ++t) {
        step(v);
        ++res.steps;
      }
      double r = unif(rng), running = 0.0;
      int outcome = n - 1;
      for (int i = 0; i < n; ++i) {
        running += std::norm(v(i));
        if (r < running) {
          outcome = i;
          break;
        }
      }
      if (is_marked[outcome]) {
        res.bit = 1;
        res.element = outcome;
        return res;
      }
    }
  }
  return res;  // schedule exhausted, nothing found
}

GroverResult grover(QueryOracle& o, int n, std::mt19937_64& rng) {
  if ((int)o.z.size() != n || n < 1) throw QuantumError("grover: bad arity");
  CVec psi = CVec::Constant(n, 1.0 / std::sqrt((double)n));
  auto step = [&](CVec& v) {
    o.apply_phase(v);
    std::complex<double> ip = psi.dot(v);
    v = 2.0 * ip * psi - v;
  };
  GroverResult res;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double cap = 8.0 * std::sqrt((double)n) + 8.0;
  for (double sched = 1.0; sched <= cap; sched *= 2.0) {
    for (int attempt = 0; attempt < 3; ++attempt) {
      CVec v = psi;
      for (int t = 0; t < (int)sched; ++t) step(v);
      double r = unif(rng), running = 0.0;
      int outcome = n - 1;
      for (int i = 0; i < n; ++i) {
        running += std::norm(v(i));
        if (r < running) {
          outcome = i;
          break;
        }
      }
      ++o.count;  // classical verification of the sampled index
      if (o.z[outcome] == 1) {
        res.index = outcome;
        res.queries = o.count;
        return res;
      }
    }
  }
  res.queries = o.count;
  return res;
}

int deutsch_jozsa(QueryOracle& o) {
  int n = (int)o.z.size();
  if (n < 1) throw QuantumError("deutsch_jozsa: empty input");
  CVec state = CVec::Constant(n, 1.0 / std::sqrt((double)n));
  o.apply_phase(state);
  // inverse uniform superposition: outcome 0 has the mean as its amplitude
  std::complex<double> amp0 = state.sum() / std::sqrt((double)n);
  return std::norm(amp0) > 0.5 ? 0 : 1;
}

static void require_isometry(const Mat& a, const char* who) {
  Mat g = a.transpose() * a;
  if ((g - Mat::Identity(a.cols(), a.cols())).cwiseAbs().maxCoeff() > 1e-9)
    throw QuantumError(std::string(who) + ": columns not orthonormal");
}

// eigenphases of a unitary via its Schur form (diagonal for normal matrices)
static std::pair<std::vector<double>, CMat> unitary_phases(const Mat& u) {
  Eigen::ComplexSchur<CMat> schur(u.cast<std::complex<double>>());
  std::vector<double> phases;
  for (int i = 0; i < u.rows(); ++i)
    phases.push_back(std::arg(schur.matrixT()(i, i)));
  return {phases, schur.matrixU()};
}

SpectrumReport reflection_spectrum_check(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw QuantumError("spectrum: row mismatch");
  require_isometry(a, "spectrum A");
  require_isometry(b, "spectrum B");
  int n = (int)a.rows(), ca = (int)a.cols(), cb = (int)b.cols();
  Mat ra = 2.0 * a * a.transpose() - Mat::Identity(n, n);
  Mat rb = 2.0 * b * b.transpose() - Mat::Identity(n, n);
  Mat u = rb * ra;

  SpectrumReport rep;
  rep.phases = unitary_phases(u).first;
  // -pi and +pi are the same point; put them all at +pi so sorted
  // multisets align
  for (double& p : rep.phases)
    if (p < -kPi + 1e-7) p = kPi;
  std::sort(rep.phases.begin(), rep.phases.end());

  Eigen::JacobiSVD<Mat> svd(a.transpose() * b);
  const auto& sv = svd.singularValues();
  int ones = 0, rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-9) ++rank;
    if (sv(i) > 1.0 - 1e-9)
      ++ones;
    else if (sv(i) > 1e-9) {
      double theta = std::acos(std::min(1.0, sv(i)));
      rep.expected.push_back(2.0 * theta);
      rep.expected.push_back(-2.0 * theta);
    }
  }
  rep.zero_dim = ones + (n - ca - cb + ones);
  rep.minus_one_dim = (ca - rank) + (cb - rank);
  if (rep.zero_dim < 0)
    throw QuantumError("spectrum: inconsistent dimensions");
  for (int i = 0; i < rep.zero_dim; ++i) rep.expected.push_back(0.0);
  for (int i = 0; i < rep.minus_one_dim; ++i) rep.expected.push_back(kPi);
  std::sort(rep.expected.begin(), rep.expected.end());

  // compare as multisets of points on the circle
  for (size_t i = 0; i < rep.phases.size(); ++i) {
    double d = std::abs(rep.phases[i] - rep.expected[i]);
    d = std::min(d, std::abs(d - 2.0 * kPi));
    rep.max_mismatch = std::max(rep.max_mismatch, d);
  }
  return rep;
}

std::pair<double, double> effective_gap_check(const Mat& a, const Mat& b,
                                              double delta, const Vec& u) {
  if (a.rows() != b.rows() || u.size() != a.rows())
    throw QuantumError("effective gap: dim mismatch");
  require_isometry(a, "effective gap A");
  require_isometry(b, "effective gap B");
  if ((a.transpose() * u).norm() > 1e-9 * std::max(1.0, u.norm()))
    throw QuantumError("effective gap: u not in the kernel of AA*");
  int n = (int)a.rows();
  Mat ra = 2.0 * a * a.transpose() - Mat::Identity(n, n);
  Mat rb = 2.0 * b * b.transpose() - Mat::Identity(n, n);
  auto [phases, q] = unitary_phases(rb * ra);
  CVec pbu = (b * (b.transpose() * u)).cast<std::complex<double>>();
  double lhs2 = 0.0;
  for (int i = 0; i < n; ++i)
    if (std::abs(phases[i]) <= delta + 1e-12)
      lhs2 += std::norm(q.col(i).dot(pbu));
  return {std::sqrt(lhs2), delta / 2.0 * u.norm()};
}

std::pair<std::vector<Vec>, std::vector<Vec>> make_mu_nu(int q) {
  if (q < 2) throw QuantumError("make_mu_nu: q must be at least 2");
  double sq = std::sqrt((double)q);
  double rho = std::pow((sq - 1.0) / (sq + 1.0), 0.25);
  std::vector<Vec> mu, nu;
  for (int i = 0; i < q; ++i) {
    Vec m = Vec::Constant(q, 1.0 / sq);
    Vec n = Vec::Constant(q, 1.0 / sq);
    m(i) += 1.0;
    n(i) -= 1.0;
    mu.push_back(rho * m);
    nu.push_back(n / rho);
  }
  return {mu, nu};
}

// common tail: phase detection on the walk (2 Pi - I)(2 Lambda - I) started
// at e_0, with 2 oracle queries per application; accept iff phase zero
static RunResult detect_and_decide(const Mat& walk, int dim, double w,
                                   double c2, unsigned seed) {
  CVec e0 = CVec::Zero(dim);
  e0(0) = 1.0;
  CMat cwalk = walk.cast<std::complex<double>>();
  Unitary u = [&](CVec& v) { v = cwalk * v; };
  double delta = 1.0 / (c2 * w);
  RunResult res;
  res.zero_probability = phase_zero_probability(u, delta, e0);
  long k = (long)std::ceil(8.0 / delta);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int rounds = 3, zeros = 0;
  for (int t = 0; t < rounds; ++t) {
    res.queries += 2 * (k - 1);
    if (unif(rng) < res.zero_probability) ++zeros;
  }
  res.output = zeros == rounds ? 1 : 0;
  return res;
}

RunResult run_span_program(const SpanProgram& p, const Input& z, double w,
                           double c1, double c2, unsigned seed) {
  p.validate();
  if (w < 0.5) throw QuantumError("run_span_program: bound below 1/2");
  int ni = (int)p.inputs.size();
  if (ni + 1 > 2000) throw QuantumError("run_span_program: too many inputs");
  // free vectors are handled by projecting them out up front
  SpanProgram q = p.free_vectors.empty() ? p : eliminate_free(p);
  auto ws = witness_size(q);
  double alpha = c1 * std::sqrt(ws.w1);

  Mat tv(q.dim, ni + 1);
  tv.col(0) = q.target / alpha;
  for (int i = 0; i < ni; ++i) tv.col(i + 1) = q.inputs[i];
  Mat kb = kernel_basis(tv);
  Mat rl = 2.0 * kb * kb.transpose() - Mat::Identity(ni + 1, ni + 1);

  Vec diag = Vec::Constant(ni + 1, -1.0);
  diag(0) = 1.0;  // the extra target column is always available
  for (int i : available_indices(q, z)) diag(i + 1) = 1.0;
  Mat walk = diag.asDiagonal() * rl;
  return detect_and_decide(walk, ni + 1, w, c2, seed);
}

RunResult run_dual_adversary(const DualAdversarySolution& s, const Input& z,
                             double w, double c1, double c2, unsigned seed) {
  s.validate();
  if (w < 0.5) throw QuantumError("run_dual_adversary: bound below 1/2");
  const auto& f = s.f;
  int n = f.n, q = f.q;
  int d = 0;
  for (const auto& m : s.factors) d = std::max(d, (int)m.rows());
  d = std::max(d, 1);
  long dim = 1 + (long)n * d * q;
  if (dim > 2000) throw QuantumError("run_dual_adversary: space too large");
  auto zi = f.find(z);
  if (!zi) throw QuantumError("run_dual_adversary: input not in the domain");

  auto [mu, nu] = make_mu_nu(q);
  auto coord = [&](int j, int i, int a) { return 1 + ((long)j * d + i) * q + a; };
  double alpha = c1 * std::sqrt(w);

  auto ys = f.preimage(0);
  Mat m((int)dim, (int)ys.size());
  for (size_t c = 0; c < ys.size(); ++c) {
    Vec v = Vec::Zero(dim);
    v(0) = 1.0;
    const Input& y = f.domain[ys[c]];
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < s.factors[j].rows(); ++i)
        for (int a = 0; a < q; ++a)
          v(coord(j, i, a)) += alpha * s.factors[j](i, ys[c]) * mu[y[j]](a);
    m.col((int)c) = v;
  }
  Mat span = range_basis(m);
  Mat rl = Mat::Identity(dim, dim) - 2.0 * span * span.transpose();

  Mat rp = Mat::Identity(dim, dim);
  rp(0, 0) = 1.0;
  for (int j = 0; j < n; ++j) {
    Vec mh = mu[z[j]] / mu[z[j]].norm();
    Mat proj = mh * mh.transpose();
    for (int i = 0; i < d; ++i)
      for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
          rp(coord(j, i, a), coord(j, i, b)) -= 2.0 * proj(a, b);
  }
  Mat walk = rp * rl;
  return detect_and_decide(walk, (int)dim, w, c2, seed);
}

std::string transcript_json(const std::string& name,
                            const std::vector<RunResult>& runs) {
  nlohmann::json j;
  j["name"] = name;
  j["runs"] = nlohmann::json::array();
  long total_queries = 0;
  int ones = 0;
  for (const auto& r : runs) {
    j["runs"].push_back({{"output", r.output},
                         {"queries", r.queries},
                         {"zero_probability", r.zero_probability}});
    total_queries += r.queries;
    ones += r.output;
  }
  j["total_queries"] = total_queries;
  j["frequency_of_one"] = runs.empty() ? 0.0 : (double)ones / runs.size();
  return j.dump(2);
}

}  // namespace qwb
