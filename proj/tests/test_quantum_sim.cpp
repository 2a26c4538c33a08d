#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qwb/quantum_sim.hpp"

using namespace qwb;

namespace {

constexpr double kPi = 3.14159265358979323846;

SpanProgram or_program(int n) {
  SpanProgram p;
  p.dim = 1;
  p.nvars = n;
  p.target = Vec::Ones(1);
  for (int j = 0; j < n; ++j) {
    p.inputs.push_back(Vec::Ones(1));
    p.labels.push_back({InputLabel::Var, j, 1});
  }
  return p;
}

Mat random_isometry(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  return q.leftCols(cols);
}

}  // namespace

TEST_CASE("oracle counting and state validation") {
  QueryOracle o;
  o.z = {1, 0, 1};
  CVec s = CVec::Constant(3, 1.0 / std::sqrt(3.0));
  o.apply_phase(s);
  CHECK(o.count == 1);
  CHECK(s(0).real() == doctest::Approx(-1.0 / std::sqrt(3.0)));
  CHECK(s(1).real() == doctest::Approx(1.0 / std::sqrt(3.0)));
  o.apply_phase(s);
  CHECK(o.count == 2);

  QueryOracle reg;
  reg.z = {2, 0};
  reg.q = 3;
  reg.mode = QueryOracle::Register;
  CVec t = CVec::Zero(6);
  t(0) = 1.0;  // |j=0, v=0>
  reg.apply_register(t);
  CHECK(reg.count == 1);
  CHECK(std::abs(t(2)) == doctest::Approx(1.0));  // v = 0 + 2 mod 3

  QuantumState st{3, CVec::Constant(3, 1.0 / std::sqrt(3.0))};
  st.validate();
  st.amplitudes *= 2.0;
  CHECK_THROWS_AS(st.validate(), QuantumError);
}

TEST_CASE("phase detection separates eigenphases") {
  std::mt19937_64 rng(7);

  // identity: every state is a 1-eigenvector, output 0 with certainty
  Unitary id = [](CVec&) {};
  CVec psi = CVec::Zero(2);
  psi(1) = 1.0;
  CHECK(phase_zero_probability(id, 0.5, psi) == doctest::Approx(1.0));
  for (int t = 0; t < 20; ++t)
    CHECK(phase_detection(id, 0.5, 0.01, psi, rng).bit == 0);

  // phase pi with an even ladder: the geometric sum vanishes
  Unitary flip = [](CVec& v) { v(1) = -v(1); };
  CHECK(phase_zero_probability(flip, 1.0, psi) == doctest::Approx(0.0));
  for (int t = 0; t < 20; ++t)
    CHECK(phase_detection(flip, 1.0, 0.25, psi, rng).bit == 1);

  // threshold phase: the closed-form average and its 1/4 bound
  double delta = 0.37;
  int k = (int)std::ceil(8.0 / delta);
  Unitary rot = [&](CVec& v) { v(1) *= std::polar(1.0, delta); };
  double p0 = phase_zero_probability(rot, delta, psi);
  double closed =
      std::pow(std::sin(k * delta / 2.0) / (k * std::sin(delta / 2.0)), 2);
  CHECK(p0 == doctest::Approx(closed));
  CHECK(p0 <= 0.25);

  CHECK_THROWS_AS(phase_zero_probability(id, 0.0, psi), QuantumError);
}

TEST_CASE("amplitude amplification") {
  std::mt19937_64 rng(11);
  CVec psi = CVec::Constant(4, 0.5);

  // no marked element: one-sided, never detected
  for (int t = 0; t < 20; ++t) {
    auto r = amplitude_amplification(psi, {}, 0.25, false, rng);
    CHECK(r.bit == 0);
  }

  // all marked: psi is a (-1)-eigenvector of the walk
  int hits = 0;
  for (int t = 0; t < 40; ++t)
    hits += amplitude_amplification(psi, {0, 1, 2, 3}, 0.25, false, rng).bit;
  CHECK(hits >= 30);

  // a quarter marked: one step rotates psi exactly onto the marked state
  for (int t = 0; t < 10; ++t) {
    auto r = amplitude_amplification(psi, {2}, 0.25, true, rng);
    CHECK(r.element == 2);
  }
}

TEST_CASE("grover search") {
  std::mt19937_64 rng(3);

  QueryOracle o;
  o.z = {0, 0, 1, 0};
  auto r = grover(o, 4, rng);
  CHECK(r.index == 2);
  CHECK(r.queries == o.count);
  CHECK(r.queries <= 4);  // one walk step plus the verification

  QueryOracle ones;
  ones.z = {1, 1, 1, 1};
  CHECK(grover(ones, 4, rng).index >= 0);

  QueryOracle zeros;
  zeros.z = {0, 0, 0, 0};
  CHECK(grover(zeros, 4, rng).index == -1);

  // scaling: a single one among n costs O(sqrt(n)) queries
  QueryOracle big;
  big.z.assign(64, 0);
  big.z[17] = 1;
  auto rb = grover(big, 64, rng);
  CHECK(rb.index == 17);
  CHECK(rb.queries <= 80);
}

TEST_CASE("exact one-query distinguisher") {
  QueryOracle zeros;
  zeros.z = {0, 0, 0, 0};
  CHECK(deutsch_jozsa(zeros) == 0);
  CHECK(zeros.count == 1);

  QueryOracle ones;
  ones.z = {1, 1, 1, 1};
  CHECK(deutsch_jozsa(ones) == 0);
  CHECK(ones.count == 1);

  QueryOracle balanced;
  balanced.z = {1, 0, 1, 0};
  CHECK(deutsch_jozsa(balanced) == 1);
  CHECK(balanced.count == 1);
}

TEST_CASE("spectrum of a product of two reflections") {
  std::mt19937_64 rng(5);

  // identical subspaces: everything has phase zero
  Mat a = random_isometry(5, 2, rng);
  auto rep = reflection_spectrum_check(a, a);
  CHECK(rep.max_mismatch <= 1e-8);
  CHECK(rep.zero_dim == 5);
  CHECK(rep.minus_one_dim == 0);

  // two lines at angle pi/4: phases are the doubled angle
  Mat e0 = Mat::Zero(2, 1);
  e0(0, 0) = 1.0;
  Mat diag(2, 1);
  diag(0, 0) = std::cos(kPi / 4.0);
  diag(1, 0) = std::sin(kPi / 4.0);
  auto rep2 = reflection_spectrum_check(e0, diag);
  CHECK(rep2.max_mismatch <= 1e-8);
  CHECK(rep2.expected.front() == doctest::Approx(-kPi / 2.0));
  CHECK(rep2.expected.back() == doctest::Approx(kPi / 2.0));

  // random instances against the eigensolver
  for (int t = 0; t < 25; ++t) {
    Mat ra = random_isometry(6, 2, rng);
    Mat rb = random_isometry(6, 2, rng);
    CHECK(reflection_spectrum_check(ra, rb).max_mismatch <= 1e-8);
  }

  Mat bad = Mat::Ones(3, 2);
  CHECK_THROWS_AS(reflection_spectrum_check(bad, bad), QuantumError);
}

TEST_CASE("effective spectral gap") {
  std::mt19937_64 rng(13);

  // u orthogonal to both subspaces: nothing survives
  Mat a = Mat::Zero(3, 1), b = Mat::Zero(3, 1);
  a(0, 0) = 1.0;
  b(1, 0) = 1.0;
  Vec u = Vec::Zero(3);
  u(2) = 1.0;
  auto [lhs0, rhs0] = effective_gap_check(a, b, 0.3, u);
  CHECK(lhs0 == doctest::Approx(0.0));
  CHECK(rhs0 == doctest::Approx(0.15));

  // planar case: when the doubled angle fits under delta, the whole
  // projection survives and equals sin(theta)
  double theta = 0.1;
  Mat a2 = Mat::Zero(2, 1), b2(2, 1);
  a2(0, 0) = 1.0;
  b2(0, 0) = std::cos(theta);
  b2(1, 0) = std::sin(theta);
  Vec u2 = Vec::Zero(2);
  u2(1) = 1.0;
  auto [lhs2, rhs2] = effective_gap_check(a2, b2, 0.25, u2);
  CHECK(lhs2 == doctest::Approx(std::sin(theta)));
  CHECK(lhs2 <= rhs2);

  // the inequality on random instances
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.01, 2.0);
  for (int t = 0; t < 100; ++t) {
    Mat ra = random_isometry(6, 2, rng);
    Mat rb = random_isometry(6, 2, rng);
    Vec v(6);
    for (int i = 0; i < 6; ++i) v(i) = gauss(rng);
    v -= ra * (ra.transpose() * v);  // into ker(AA*)
    double delta = unif(rng);
    auto [lhs, rhs] = effective_gap_check(ra, rb, delta, v);
    CHECK(lhs <= rhs + 1e-9);
  }

  Vec w = Vec::Zero(3);
  w(0) = 1.0;  // inside im(A)
  CHECK_THROWS_AS(effective_gap_check(a, b, 0.3, w), QuantumError);
}

TEST_CASE("biorthogonal vector pairs") {
  for (int q : {2, 3, 4, 5, 7}) {
    auto [mu, nu] = make_mu_nu(q);
    REQUIRE((int)mu.size() == q);
    for (int i = 0; i < q; ++i) {
      CHECK(mu[i].norm() <= std::sqrt(2.0) + 1e-12);
      CHECK(nu[i].norm() <= std::sqrt(2.0) + 1e-12);
      for (int j = 0; j < q; ++j)
        CHECK(mu[i].dot(nu[j]) == doctest::Approx(i == j ? 0.0 : 1.0).epsilon(1e-12));
    }
  }
  auto [mu4, nu4] = make_mu_nu(4);
  CHECK(mu4[0].squaredNorm() == doctest::Approx(std::sqrt(3.0)));
  CHECK_THROWS_AS(make_mu_nu(1), QuantumError);
}

TEST_CASE("span program execution") {
  // disjunction on two bits
  auto p = or_program(2);
  double w = std::sqrt(2.0);
  for (const Input& z : {Input{1, 1}, Input{1, 0}, Input{0, 1}, Input{0, 0}}) {
    auto r = run_span_program(p, z, w, 4.0, 16.0, 42);
    CHECK(r.output == (evaluate(p, z) ? 1 : 0));
    if (evaluate(p, z))
      CHECK(r.zero_probability >= 0.8);
    else
      CHECK(r.zero_probability <= 0.5);
  }

  // st-connectivity on a 3-vertex graph
  auto st = st_connectivity_program(3, 0, 2);
  Input path = {1, 0, 1};   // edges 01 and 12
  Input split = {1, 0, 0};  // vertex 2 isolated
  CHECK(run_span_program(st, path, 3.0, 4.0, 16.0, 42).output == 1);
  CHECK(run_span_program(st, split, 3.0, 4.0, 16.0, 42).output == 0);

  // always-true program: constant overlap with e_0, so p0 stays high
  SpanProgram ct;
  ct.dim = 1;
  ct.nvars = 1;
  ct.target = Vec::Ones(1);
  ct.inputs.push_back(Vec::Ones(1));
  ct.labels.push_back({InputLabel::Always, 0, 0});
  for (const Input& z : {Input{0}, Input{1}}) {
    auto r = run_span_program(ct, z, 1.0, 4.0, 16.0, 42);
    CHECK(r.output == 1);
    CHECK(r.zero_probability >= 16.0 / 17.0 - 1e-6);
  }

  CHECK_THROWS_AS(run_span_program(p, {1, 1}, 0.1, 4.0, 16.0, 1), QuantumError);
}

TEST_CASE("span program query counts scale with the witness size") {
  std::vector<long> queries;
  for (int n : {2, 4, 8}) {
    auto p = or_program(n);
    Input ones(n, 1);
    queries.push_back(run_span_program(p, ones, std::sqrt((double)n)).queries);
  }
  double c = (double)queries[0] / std::sqrt(2.0);
  CHECK(queries[1] <= 1.1 * c * std::sqrt(4.0));
  CHECK(queries[2] <= 1.1 * c * std::sqrt(8.0));
}

TEST_CASE("dual adversary execution") {
  auto s = maj3_solution();
  for (const auto& z : s.f.domain) {
    auto r = run_dual_adversary(s, z, 2.0, 4.0, 16.0, 42);
    CHECK(r.output == s.f.value_of(z));
  }

  auto id = threshold_dual(1, 1);  // the 1-bit identity
  for (const auto& z : id.f.domain) {
    auto r = run_dual_adversary(id, z, 1.0, 4.0, 16.0, 42);
    CHECK(r.output == id.f.value_of(z));
    CHECK(r.queries <= 3000);
  }

  CHECK_THROWS_AS(run_dual_adversary(s, {2, 0, 0}, 2.0), QuantumError);
}

TEST_CASE("transcripts") {
  auto p = or_program(2);
  std::vector<RunResult> runs;
  for (const Input& z : {Input{1, 0}, Input{0, 0}})
    runs.push_back(run_span_program(p, z, std::sqrt(2.0)));
  auto text = transcript_json("disjunction", runs);
  CHECK(text.find("total_queries") != std::string::npos);
  CHECK(text.find("frequency_of_one") != std::string::npos);
  CHECK(text.find("disjunction") != std::string::npos);
}
