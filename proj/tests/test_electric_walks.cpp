#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qwb/electric_walks.hpp"

using namespace qwb;

namespace {

WeightedGraph path3() {
  WeightedGraph g;
  g.n = 3;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  g.sigma = {1.0, 0.0, 0.0};
  g.marked = {2};
  return g;
}

WeightedGraph random_connected(int n, std::mt19937_64& rng) {
  WeightedGraph g;
  g.n = n;
  std::uniform_real_distribution<double> wdist(0.5, 2.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> prev(0, v - 1);
    g.edges.push_back({prev(rng), v, wdist(rng)});
  }
  for (int t = 0; t < n; ++t) {
    int u = pick(rng), v = pick(rng);
    if (u == v) continue;
    bool dup = false;
    for (const auto& e : g.edges)
      if ((e.u == std::min(u, v) && e.v == std::max(u, v)) ||
          (e.v == std::min(u, v) && e.u == std::max(u, v)))
        dup = true;
    if (!dup) g.edges.push_back({std::min(u, v), std::max(u, v), wdist(rng)});
  }
  return g;
}

}  // namespace

TEST_CASE("effective resistance basics") {
  // single edge: Ohm's law
  WeightedGraph e;
  e.n = 2;
  e.edges = {{0, 1, 4.0}};
  e.sigma = {1.0, 0.0};
  e.marked = {1};
  auto res = effective_resistance(e);
  CHECK(res.r == doctest::Approx(0.25));
  CHECK(res.flow.p[0] == doctest::Approx(1.0));

  // series path
  auto p = path3();
  CHECK(effective_resistance(p).r == doctest::Approx(2.0));

  // triangle: parallel 1 and 2 in series
  WeightedGraph t;
  t.n = 3;
  t.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  t.sigma = {1.0, 0.0, 0.0};
  t.marked = {1};
  CHECK(effective_resistance(t).r == doctest::Approx(2.0 / 3.0));

  t.marked.clear();
  CHECK_THROWS_AS(effective_resistance(t), WalkError);

  // unreachable marked set
  WeightedGraph split;
  split.n = 4;
  split.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
  split.sigma = {1.0, 0.0, 0.0, 0.0};
  split.marked = {3};
  CHECK_THROWS_AS(effective_resistance(split), WalkError);
}

TEST_CASE("the optimal flow minimizes the energy") {
  // routing everything along one path can only cost more
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = random_connected(7, rng);
    g.sigma.assign(7, 0.0);
    g.sigma[0] = 1.0;
    g.marked = {6};
    auto opt = effective_resistance(g);
    opt.flow.validate(g);

    // unit flow along a tree path from 0 to 6 (the first n-1 edges form a
    // spanning tree with parents below)
    FlowAssignment alt;
    alt.p.assign(g.edges.size(), 0.0);
    int cur = 6;
    while (cur != 0) {
      for (int i = 0; i < 6; ++i)
        if (g.edges[i].v == cur) {
          alt.p[i] = 1.0;
          cur = g.edges[i].u;
          break;
        }
    }
    alt.validate(g);
    CHECK(opt.r <= alt.energy(g) + 1e-9);
  }
}

TEST_CASE("hitting times") {
  auto p = path3();
  CHECK(hitting_time(p) == doctest::Approx(4.0));

  // already there
  WeightedGraph at = p;
  at.sigma = {0.0, 0.0, 1.0};
  CHECK(hitting_time(at) == doctest::Approx(0.0));

  // complete graph from the stationary distribution: 2 W R
  WeightedGraph k4;
  k4.n = 4;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) k4.edges.push_back({u, v, 1.0});
  k4.sigma.assign(4, 0.25);  // uniform = stationary on a regular graph
  k4.marked = {3};
  double h = hitting_time(k4);
  double rhs = 2.0 * k4.total_weight() * effective_resistance(k4).r;
  CHECK(h == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("commute identity") {
  auto [lhs, rhs] = commute_identity_check(path3(), 0, 2);
  CHECK(lhs == doctest::Approx(8.0));
  CHECK(rhs == doctest::Approx(8.0));

  WeightedGraph e;
  e.n = 2;
  e.edges = {{0, 1, 3.0}};
  auto [l1, r1] = commute_identity_check(e, 0, 1);
  CHECK(l1 == doctest::Approx(2.0));
  CHECK(r1 == doctest::Approx(2.0));

  std::mt19937_64 rng(33);
  for (int t = 0; t < 50; ++t) {
    auto g = random_connected(4 + (int)(t % 7), rng);
    auto [a, b] = commute_identity_check(g, 0, g.n - 1);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("bipartite double cover") {
  WeightedGraph t;
  t.n = 3;
  t.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  t.sigma = {1.0, 0.0, 0.0};
  t.marked = {1};
  auto d = bipartite_double(t);
  CHECK(d.n == 6);
  CHECK(d.total_weight() == doctest::Approx(2.0 * t.total_weight()));
  // the double cover of a triangle is a six-cycle: all degrees two
  std::vector<int> deg(6, 0);
  for (const auto& e : d.edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  for (int x : deg) CHECK(x == 2);
  CHECK(effective_resistance(d).r <= effective_resistance(t).r + 1e-9);

  WeightedGraph lone;
  lone.n = 1;
  CHECK_THROWS_AS(bipartite_double(lone), WalkError);
}

TEST_CASE("walk step is unitary with the flow state fixed") {
  // path 0-1-2 is bipartite with parts {0,2} and {1}
  auto g = path3();
  g.part = {0, 1, 0};
  double c1 = 8.0;
  auto res = effective_resistance(g);
  double r = res.r;
  Mat u = electric_walk_step(g, r, c1);
  CHECK((u.transpose() * u - Mat::Identity(u.rows(), u.cols()))
            .cwiseAbs()
            .maxCoeff() <= 1e-9);

  // the walk fixes the source-plus-optimal-flow state, with edges
  // oriented out of part A
  Vec phi = Vec::Zero(u.rows());
  phi(0) = std::sqrt(c1 * r) * std::sqrt(g.sigma[0]);
  for (size_t i = 0; i < g.edges.size(); ++i) {
    double p = res.flow.p[i];
    if (g.part[g.edges[i].u] == 1) p = -p;
    phi(1 + (int)i) = -p / std::sqrt(g.edges[i].w);
  }
  CHECK((u * phi - phi).norm() <= 1e-8);
}

TEST_CASE("electric walk detects marked vertices") {
  // star with the source at the centre
  WeightedGraph star;
  star.n = 5;
  for (int leaf = 1; leaf < 5; ++leaf) star.edges.push_back({0, leaf, 1.0});
  star.sigma = {1.0, 0.0, 0.0, 0.0, 0.0};
  star.part = {0, 1, 1, 1, 1};

  star.marked = {3};
  int accepts = 0;
  double p0 = 0.0;
  for (unsigned seed = 1; seed <= 200; ++seed) {
    auto r = electric_walk_run(star, 1.0, 16.0, 8.0, seed);
    accepts += r.output;
    p0 = r.zero_probability;
  }
  CHECK(accepts >= 140);
  CHECK(p0 >= 8.0 / 9.0 - 1e-6);

  star.marked = {};
  int rejects = 0;
  for (unsigned seed = 1; seed <= 200; ++seed) {
    auto r = electric_walk_run(star, 1.0, 16.0, 8.0, seed);
    rejects += 1 - r.output;
    p0 = r.zero_probability;
  }
  CHECK(rejects >= 140);
  CHECK(p0 <= 0.45);

  // the whole support marked: caught by the pre-measurement
  star.marked = {0};
  for (unsigned seed = 1; seed <= 20; ++seed)
    CHECK(electric_walk_run(star, 1.0, 16.0, 8.0, seed).output == 1);
}

TEST_CASE("learning graphs as electric walks") {
  auto o = or_lg(3);
  auto f = make_named("or", {{"n", 3}});
  auto pos = lg_as_walk(o.g, f, {0, 1, 0}, 5);
  CHECK(pos.output == 1);
  CHECK(pos.queries > 0);
  CHECK(lg_as_walk(o.g, f, {0, 0, 0}, 5).output == 0);

  auto t = trivial_lg(2);
  auto fand = make_named("and", {{"n", 2}});
  for (const auto& z : fand.domain)
    CHECK(lg_as_walk(t.g, fand, z, 9).output == fand.value_of(z));

  // k-subset lattice against the 2-distinctness truth table
  auto ks = ksubset_lg(4, 2, 2);
  auto fk = make_named("kdist", {{"k", 2}, {"n", 4}, {"q", 4}});
  int wrong = 0;
  for (const auto& z : fk.domain)
    if (lg_as_walk(ks.g, fk, z, 13).output != fk.value_of(z)) ++wrong;
  CHECK(wrong == 0);
}

TEST_CASE("serialization") {
  auto g = path3();
  auto h = weighted_graph_from_text(to_text(g));
  CHECK(h.n == 3);
  REQUIRE(h.edges.size() == 2);
  CHECK(h.edges[1].v == 2);
  load_distribution_json(h, distribution_json(g));
  CHECK(h.sigma[0] == doctest::Approx(1.0));
  CHECK(h.marked == std::vector<int>{2});
  CHECK_THROWS_AS(weighted_graph_from_text(""), WalkError);
}
