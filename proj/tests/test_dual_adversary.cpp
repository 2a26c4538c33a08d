#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qwb/adversary.hpp"
#include "qwb/dual_adversary.hpp"

using namespace qwb;

namespace {

// expected entries of the three explicit majority-of-3 matrices
double maj3_expected(int j, const Input& u, const Input& v) {
  auto key = [](const Input& z) { return z[0] * 4 + z[1] * 2 + z[2]; };
  // participating inputs per variable, split into the two value groups
  static const std::vector<std::vector<std::vector<int>>> groups = {
      {{0b110, 0b010}, {0b101, 0b001}},
      {{0b110, 0b100}, {0b011, 0b001}},
      {{0b101, 0b100}, {0b011, 0b010}}};
  int gu = -1, gv = -1;
  for (int g = 0; g < 2; ++g) {
    for (int z : groups[j][g]) {
      if (z == key(u)) gu = g;
      if (z == key(v)) gv = g;
    }
  }
  if (gu < 0 || gv < 0) return 0.0;
  return gu == gv ? 1.0 : 0.5;
}

}  // namespace

TEST_CASE("explicit majority-of-3 solution") {
  DualAdversarySolution s = maj3_solution();
  CHECK(s.f.n == 3);
  CHECK(s.f.domain.size() == 6);
  auto rep = check_feasible(s);
  CHECK(rep.feasible);
  CHECK(rep.violation <= 1e-12);
  CHECK(objective(s) == doctest::Approx(2.0).epsilon(1e-8));
  for (int j = 0; j < 3; ++j) {
    Mat g = s.gram(j);
    CHECK(is_psd(g, 1e-8));
    for (size_t a = 0; a < s.f.domain.size(); ++a)
      for (size_t b = 0; b < s.f.domain.size(); ++b)
        CHECK(g((int)a, (int)b) ==
              doctest::Approx(maj3_expected(j, s.f.domain[a], s.f.domain[b]))
                  .epsilon(1e-8));
  }
}

TEST_CASE("threshold solutions are exactly feasible with the closed-form value") {
  for (auto [k, n] : std::vector<std::pair<int, int>>{
           {1, 3}, {2, 3}, {2, 4}, {3, 4}, {1, 5}, {3, 5}, {5, 5}}) {
    DualAdversarySolution s = threshold_dual(k, n);
    auto rep = check_feasible(s);
    CHECK(rep.violation <= 1e-9);
    CHECK(objective(s) ==
          doctest::Approx(std::sqrt((double)k * (n - k + 1))).epsilon(1e-8));
    for (int j = 0; j < n; ++j) CHECK(is_psd(s.gram(j), 1e-7));
  }
  CHECK(objective(threshold_dual(2, 4)) == doctest::Approx(std::sqrt(6.0)));

  CHECK_THROWS_AS(threshold_dual(0, 3), DualAdversaryError);
  CHECK_THROWS_AS(threshold_dual(4, 3), DualAdversaryError);
  CHECK_THROWS_AS(threshold_dual(2, 11), DualAdversaryError);
}

TEST_CASE("certificate-style relaxed solutions") {
  // disjunction: objective sqrt(n * C1) = sqrt(n)
  PartialFunction orf = make_named("or", {{"n", 4}});
  DualAdversarySolution a = barrier_solution(orf, 'a');
  CHECK(a.relaxed);
  CHECK(check_feasible(a).feasible);
  CHECK(objective(a) == doctest::Approx(2.0).epsilon(1e-9));

  // conjunction of two bits: sqrt(C0 * C1) = sqrt(2)
  PartialFunction andf = make_named("and", {{"n", 2}});
  DualAdversarySolution b = barrier_solution(andf, 'b');
  CHECK(b.relaxed);
  CHECK(check_feasible(b).feasible);
  CHECK(objective(b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // distance promise: collision on 4 positions, eps = 1/2 -> objective 2
  PartialFunction col = make_named("collision", {{"n", 4}, {"q", 4}});
  DualAdversarySolution c = barrier_solution(col, 'c', 0.5);
  CHECK(c.relaxed);
  CHECK(check_feasible(c).feasible);
  CHECK(objective(c) == doctest::Approx(2.0).epsilon(1e-9));

  // preimages of the disjunction are at distance 1, far below 0.9 * n
  CHECK_THROWS_AS(barrier_solution(orf, 'c', 0.9), DualAdversaryError);
  // variant b needs a total function
  CHECK_THROWS_AS(barrier_solution(col, 'b'), DualAdversaryError);
  CHECK_THROWS_AS(barrier_solution(orf, 'x'), DualAdversaryError);
  CHECK_THROWS_AS(barrier_solution(orf, 'c', 0.0), DualAdversaryError);
}

namespace {

// first edge of g, in pair order, with both endpoints set
std::pair<int, int> first_edge(const Adj& g, const Input& z) {
  int n = (int)g.size();
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (g[u][v] && z[u] == 1 && z[v] == 1) return {u, v};
  return {-1, -1};
}

// independent arc-by-arc account of one randomness choice: the loading order
// t_1, ..., t_r, a, b contributes p at the first position where x and y differ
double per_randomness_sum(const Adj& g, const Input& x, const Input& y,
                          const std::vector<int>& r_set, double p) {
  auto [a, b] = first_edge(g, x);
  std::vector<int> order = r_set;
  order.push_back(a);
  order.push_back(b);
  double sum = 0.0;
  for (size_t pos = 0; pos < order.size(); ++pos) {
    bool agree = true;
    for (size_t t = 0; t < pos; ++t)
      if (x[order[t]] != y[order[t]]) agree = false;
    if (agree && x[order[pos]] != y[order[pos]]) sum += p;
  }
  return sum;
}

void check_collision_accounting(const Adj& g, int r) {
  int n = (int)g.size();
  DualAdversarySolution s = graph_collision_dual(g, r);
  auto rep = check_feasible(s, 1e-12);
  CHECK(rep.violation <= 1e-12);

  double p = 1.0 / (double)binom(n - 2, r);
  for (int xi : s.f.preimage(1)) {
    auto [a, b] = first_edge(g, s.f.domain[xi]);
    REQUIRE(a >= 0);
    for (int yi : s.f.preimage(0)) {
      // every consistent randomness set accounts for exactly p
      for (uint32_t m = 0; m < (1u << n); ++m) {
        std::vector<int> set;
        for (int v = 0; v < n; ++v)
          if (m >> v & 1) set.push_back(v);
        if ((int)set.size() != r) continue;
        if (m >> a & 1 || m >> b & 1) continue;
        double sum = per_randomness_sum(g, s.f.domain[xi], s.f.domain[yi], set, p);
        CHECK(sum == doctest::Approx(p).epsilon(1e-12));
      }
    }
  }
}

}  // namespace

TEST_CASE("graph collision assembly") {
  // degenerate single-edge instance, no randomness
  Adj edge = {{0, 1}, {1, 0}};
  DualAdversarySolution tiny = graph_collision_dual(edge, 0);
  CHECK(check_feasible(tiny, 1e-12).feasible);
  CHECK(objective(tiny) > 0.0);
  check_collision_accounting(edge, 0);

  // triangle: independence number 1
  Adj k3 = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  CHECK(independence_number(k3) == 1);
  DualAdversarySolution t = graph_collision_dual(k3, 1);
  CHECK(check_feasible(t, 1e-12).feasible);
  // within a constant of sqrt(n) * alpha^(1/6)
  CHECK(objective(t) <= 10.0 * std::sqrt(3.0));
  check_collision_accounting(k3, 1);

  // path on four vertices: independence number 2
  Adj p4 = {{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}};
  CHECK(independence_number(p4) == 2);
  check_collision_accounting(p4, 1);

  CHECK_THROWS_AS(graph_collision_dual(edge, 1), DualAdversaryError);
  CHECK_THROWS_AS(graph_collision_dual(Adj(9, std::vector<int>(9, 0)), 0),
                  DualAdversaryError);
}

TEST_CASE("span program round trip") {
  // one-bit identity
  DualAdversarySolution id;
  id.f.n = 1;
  id.f.q = 2;
  id.f.domain = {{0}, {1}};
  id.f.values = {0, 1};
  id.factors = {Mat::Ones(1, 2)};
  SpanProgram idp = to_span_program(id);
  CHECK(idp.dim == 1);
  auto ws = witness_size(idp, id.f.domain, true);
  CHECK(ws.wsize == doctest::Approx(1.0));

  DualAdversarySolution s = maj3_solution();
  SpanProgram p = to_span_program(s);
  CHECK(p.dim == 3);
  CHECK((p.target - Vec::Ones(3)).norm() == 0.0);
  std::vector<Input> ys;
  for (int yi : s.f.preimage(0)) ys.push_back(s.f.domain[yi]);
  CHECK(is_canonical(p, ys));

  // per-variable sums of outer products match the explicit matrices over the
  // negative inputs (the basis-independent content of the construction)
  for (int j = 0; j < 3; ++j) {
    Mat block = Mat::Zero(3, 3);
    for (size_t i = 0; i < p.inputs.size(); ++i)
      if (p.labels[i].j == j)
        block += p.inputs[i] * p.inputs[i].transpose();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK(block(a, b) ==
              doctest::Approx(maj3_expected(j, ys[a], ys[b])).epsilon(1e-8));
  }

  // witness sizes reproduce the dual objective
  auto sizes = witness_size(p, s.f.domain, true);
  CHECK(sizes.w0 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sizes.w1 == doctest::Approx(2.0).epsilon(1e-9));

  DualAdversarySolution back = from_canonical_span_program(p, s.f);
  CHECK(check_feasible(back).feasible);
  CHECK(objective(back) == doctest::Approx(objective(s)).epsilon(1e-9));

  // a rebalanced program is no longer canonical
  SpanProgram off = rebalance(p, 2.0);
  CHECK_THROWS_AS(from_canonical_span_program(off, s.f), DualAdversaryError);

  // non-boolean alphabets are rejected
  DualAdversarySolution tern;
  tern.f.n = 1;
  tern.f.q = 3;
  tern.f.domain = {{0}, {2}};
  tern.f.values = {0, 1};
  tern.factors = {Mat::Ones(1, 2)};
  CHECK_THROWS_AS(to_span_program(tern), DualAdversaryError);
}

TEST_CASE("weak duality against primal spectral ratios") {
  // any adversary matrix gives a lower bound on any feasible dual objective
  DualAdversarySolution th = threshold_dual(2, 3);
  auto all_related = [](const Input&, const Input&) { return true; };
  AdversaryMatrix gamma = relation_adversary(
      th.f, th.f.preimage(1), th.f.preimage(0), all_related);
  auto rep = adv_ratio(gamma);
  CHECK(rep.ratio <= objective(th) + 1e-9);

  PartialFunction amb = make_named("ambainis", {});
  DualAdversarySolution bar = barrier_solution(amb, 'b');
  AdversaryMatrix gamma2 = relation_adversary(
      amb, amb.preimage(1), amb.preimage(0), all_related);
  CHECK(adv_ratio(gamma2).ratio <= objective(bar) + 1e-9);
}

TEST_CASE("serialization") {
  DualAdversarySolution s = maj3_solution();
  std::string text = to_json(s);
  CHECK(text.find("domain_hash") != std::string::npos);
  CHECK(text.find("\"n\": 3") != std::string::npos);
  CHECK(text.find("factors") != std::string::npos);
}
