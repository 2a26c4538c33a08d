#include "qwb/electric_walks.hpp"

#include "qwb/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include <json.hpp>

namespace qwb {

void WeightedGraph::validate() const {
  if (n < 1) throw WalkError("graph: empty vertex set");
  for (const auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
      throw WalkError("graph: bad edge");
    if (e.w <= 0 || !std::isfinite(e.w)) throw WalkError("graph: bad weight");
  }
  if (!sigma.empty()) {
    if ((int)sigma.size() != n) throw WalkError("graph: sigma size");
    double total = 0.0;
    for (double s : sigma) {
      if (s < 0) throw WalkError("graph: negative sigma");
      total += s;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw WalkError("graph: sigma must sum to 1");
  }
  for (int m : marked)
    if (m < 0 || m >= n) throw WalkError("graph: bad marked vertex");
  if (!part.empty()) {
    if ((int)part.size() != n) throw WalkError("graph: bipartition size");
    for (const auto& e : edges)
      if (part[e.u] == part[e.v])
        throw WalkError("graph: edge inside one part");
  }
}

double WeightedGraph::total_weight() const {
  double w = 0.0;
  for (const auto& e : edges) w += e.w;
  return w;
}

double FlowAssignment::energy(const WeightedGraph& g) const {
  if (p.size() != g.edges.size()) throw WalkError("flow: size mismatch");
  double en = 0.0;
  for (size_t i = 0; i < p.size(); ++i) en += p[i] * p[i] / g.edges[i].w;
  return en;
}

void FlowAssignment::validate(const WeightedGraph& g) const {
  if (p.size() != g.edges.size()) throw WalkError("flow: size mismatch");
  std::vector<double> net(g.n, 0.0);
  for (size_t i = 0; i < p.size(); ++i) {
    net[g.edges[i].u] -= p[i];
    net[g.edges[i].v] += p[i];
  }
  std::vector<char> is_marked(g.n, 0);
  for (int m : g.marked) is_marked[m] = 1;
  for (int u = 0; u < g.n; ++u) {
    if (is_marked[u]) continue;
    double expect = g.sigma.empty() ? 0.0 : g.sigma[u];
    if (std::abs(net[u] + expect) > 1e-9)
      throw WalkError("flow: conservation violated");
  }
}

// non-marked vertices reachable from the support of sigma without crossing
// the marked set; every support vertex must reach the marked set
static std::vector<int> relevant_vertices(const WeightedGraph& g) {
  std::vector<char> is_marked(g.n, 0);
  for (int m : g.marked) is_marked[m] = 1;
  std::vector<std::vector<int>> nbr(g.n);
  for (const auto& e : g.edges) {
    nbr[e.u].push_back(e.v);
    nbr[e.v].push_back(e.u);
  }
  std::vector<char> seen(g.n, 0);
  std::deque<int> queue;
  for (int u = 0; u < g.n; ++u)
    if (!g.sigma.empty() && g.sigma[u] > 0 && !is_marked[u]) {
      seen[u] = 1;
      queue.push_back(u);
    }
  bool touches_marked = false;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : nbr[u]) {
      if (is_marked[v]) {
        touches_marked = true;
        continue;
      }
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  std::vector<int> out;
  for (int u = 0; u < g.n; ++u)
    if (seen[u]) out.push_back(u);
  if (!out.empty() && !touches_marked)
    throw WalkError("marked set unreachable from the initial distribution");
  return out;
}

// potentials with sigma injected and the marked set grounded; the right-hand
// side selects between resistance (sigma) and hitting time (vertex weights)
static std::vector<double> grounded_potentials(const WeightedGraph& g,
                                               const std::vector<double>& rhs) {
  g.validate();
  if (g.marked.empty()) throw WalkError("marked set must be non-empty");
  auto verts = relevant_vertices(g);
  std::vector<int> index(g.n, -1);
  for (size_t i = 0; i < verts.size(); ++i) index[verts[i]] = (int)i;
  int m = (int)verts.size();
  std::vector<double> phi(g.n, 0.0);
  if (m == 0) return phi;
  Mat lap = Mat::Zero(m, m);
  Vec b = Vec::Zero(m);
  for (int i = 0; i < m; ++i) b(i) = rhs[verts[i]];
  for (const auto& e : g.edges) {
    int iu = index[e.u], iv = index[e.v];
    if (iu >= 0) lap(iu, iu) += e.w;
    if (iv >= 0) lap(iv, iv) += e.w;
    if (iu >= 0 && iv >= 0) {
      lap(iu, iv) -= e.w;
      lap(iv, iu) -= e.w;
    }
  }
  Vec x = solve_linear(lap, b);
  for (int i = 0; i < m; ++i) phi[verts[i]] = x(i);
  return phi;
}

ResistanceResult effective_resistance(const WeightedGraph& g) {
  if (g.sigma.empty()) throw WalkError("resistance: sigma required");
  auto phi = grounded_potentials(g, g.sigma);
  ResistanceResult res;
  res.flow.p.resize(g.edges.size());
  for (size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    res.flow.p[i] = e.w * (phi[e.u] - phi[e.v]);  // current from u to v
    res.r += res.flow.p[i] * res.flow.p[i] / e.w;
  }
  res.flow.validate(g);
  return res;
}

double hitting_time(const WeightedGraph& g) {
  if (g.sigma.empty()) throw WalkError("hitting time: sigma required");
  std::vector<double> wu(g.n, 0.0);
  for (const auto& e : g.edges) {
    wu[e.u] += e.w;
    wu[e.v] += e.w;
  }
  auto h = grounded_potentials(g, wu);
  double total = 0.0;
  for (int u = 0; u < g.n; ++u) total += g.sigma[u] * h[u];
  return total;
}

std::pair<double, double> commute_identity_check(const WeightedGraph& g, int s,
                                                 int t) {
  if (s < 0 || s >= g.n || t < 0 || t >= g.n || s == t)
    throw WalkError("commute: bad endpoints");
  WeightedGraph h = g;
  h.sigma.assign(g.n, 0.0);
  h.sigma[s] = 1.0;
  h.marked = {t};
  double lhs = hitting_time(h);
  double rhs = 2.0 * g.total_weight() * effective_resistance(h).r;
  h.sigma[s] = 0.0;
  h.sigma[t] = 1.0;
  h.marked = {s};
  lhs += hitting_time(h);
  return {lhs, rhs};
}

WeightedGraph bipartite_double(const WeightedGraph& g) {
  g.validate();
  if (g.edges.empty()) throw WalkError("double cover: no edges");
  WeightedGraph h;
  h.n = 2 * g.n;
  for (const auto& e : g.edges) {
    h.edges.push_back({e.u, g.n + e.v, e.w});
    h.edges.push_back({e.v, g.n + e.u, e.w});
  }
  h.sigma.assign(h.n, 0.0);
  for (int u = 0; u < g.n; ++u)
    if (!g.sigma.empty()) h.sigma[u] = g.sigma[u];
  for (int m : g.marked) {
    h.marked.push_back(m);
    h.marked.push_back(g.n + m);
  }
  h.part.assign(h.n, 0);
  for (int u = 0; u < g.n; ++u) h.part[g.n + u] = 1;
  h.validate();
  return h;
}

Mat electric_walk_step(const WeightedGraph& g, double r_bound, double c1) {
  g.validate();
  if (g.part.empty()) throw WalkError("walk: bipartition required");
  if (g.sigma.empty()) throw WalkError("walk: sigma required");
  if (r_bound <= 0) throw WalkError("walk: resistance bound must be positive");
  std::vector<int> support;
  for (int u = 0; u < g.n; ++u)
    if (g.sigma[u] > 0) {
      if (g.part[u] != 0) throw WalkError("walk: sigma must live in part A");
      support.push_back(u);
    }
  long dim = (long)support.size() + (long)g.edges.size();
  if (dim > 2000) throw WalkError("walk: state space too large");
  std::vector<int> svertex(g.n, -1);
  for (size_t i = 0; i < support.size(); ++i) svertex[support[i]] = (int)i;
  int ns = (int)support.size();

  std::vector<char> is_marked(g.n, 0);
  for (int m : g.marked) is_marked[m] = 1;

  // local basis indices per vertex: the vertex coordinate (if in the
  // support) followed by its incident edges
  std::vector<std::vector<int>> local(g.n);
  std::vector<Vec> psi(g.n);
  for (int u = 0; u < g.n; ++u) {
    std::vector<double> entries;
    if (svertex[u] >= 0) {
      local[u].push_back(svertex[u]);
      entries.push_back(std::sqrt(g.sigma[u] / (c1 * r_bound)));
    }
    for (size_t i = 0; i < g.edges.size(); ++i)
      if (g.edges[i].u == u || g.edges[i].v == u) {
        local[u].push_back(ns + (int)i);
        entries.push_back(std::sqrt(g.edges[i].w));
      }
    psi[u] = Vec::Zero((int)entries.size());
    for (size_t i = 0; i < entries.size(); ++i) psi[u]((int)i) = entries[i];
  }

  auto reflect = [&](int side) {
    Mat r = Mat::Identity(dim, dim);
    for (int u = 0; u < g.n; ++u) {
      if (g.part[u] != side || is_marked[u]) continue;
      double nrm2 = psi[u].squaredNorm();
      if (nrm2 == 0.0) continue;
      for (size_t a = 0; a < local[u].size(); ++a)
        for (size_t b = 0; b < local[u].size(); ++b)
          r(local[u][a], local[u][b]) -= 2.0 * psi[u]((int)a) * psi[u]((int)b) / nrm2;
    }
    return r;
  };
  return reflect(1) * reflect(0);
}

WalkRunResult electric_walk_run(const WeightedGraph& g, double r_bound,
                                double c, double c1, unsigned seed) {
  g.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // pre-measurement: a marked support vertex is caught immediately
  std::vector<char> is_marked(g.n, 0);
  for (int m : g.marked) is_marked[m] = 1;
  double caught = 0.0;
  for (int u = 0; u < g.n; ++u)
    if (is_marked[u] && !g.sigma.empty() && g.sigma[u] > 0) caught += g.sigma[u];
  WalkRunResult res;
  if (caught > 0 && unif(rng) < caught) {
    res.output = 1;
    res.zero_probability = 1.0;
    return res;
  }
  WeightedGraph h = g;
  if (caught > 0) {  // collapse to the unmarked part of the support
    if (caught >= 1.0 - 1e-12)
      throw WalkError("walk: the whole support is marked");
    for (int u = 0; u < g.n; ++u)
      h.sigma[u] = is_marked[u] ? 0.0 : h.sigma[u] / (1.0 - caught);
  }

  Mat step = electric_walk_step(h, r_bound, c1);
  int ns = 0;
  CVec state = CVec::Zero(step.rows());
  for (int u = 0; u < h.n; ++u)
    if (h.sigma[u] > 0) state(ns++) = std::sqrt(h.sigma[u]);
  CMat cstep = step.cast<std::complex<double>>();
  Unitary u = [&](CVec& v) { v = cstep * v; };
  double delta = 1.0 / (c * std::sqrt(r_bound * h.total_weight() + 1.0));
  res.zero_probability = phase_zero_probability(u, delta, state);
  long k = (long)std::ceil(8.0 / delta);
  int zeros = 0, rounds = 5;
  for (int t = 0; t < rounds; ++t) {
    res.steps += k - 1;
    if (unif(rng) < res.zero_probability) ++zeros;
  }
  res.output = 2 * zeros > rounds ? 1 : 0;
  return res;
}

LGWalkResult lg_as_walk(const LearningGraph& lg, const PartialFunction& f,
                        const Input& z, unsigned seed) {
  lg.validate();
  f.validate();
  if (lg.adaptive) throw WalkError("lg walk: constant weights required");
  if (f.n != lg.n) throw WalkError("lg walk: arity mismatch");
  if (!f.find(z)) throw WalkError("lg walk: input not in the domain");

  // merge duplicate subsets into plain graph vertices
  Flow dummy;
  auto [mg, mf] = merge_duplicates(lg, dummy);
  WeightedGraph g;
  g.n = (int)mg.vertices.size();
  for (const auto& a : mg.arcs) g.edges.push_back({a.from, a.to, a.weight});
  g.sigma.assign(g.n, 0.0);
  g.sigma[0] = 1.0;
  g.part.assign(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    g.part[v] = __builtin_popcount(mg.vertices[v].set) % 2;

  auto marked_for = [&](const Input& x) {
    std::vector<int> marked;
    for (int v = 0; v < g.n; ++v) {
      Assignment a = Assignment::restrict_to(x, mg.vertices[v].set);
      bool certifies_one = false;
      if (is_certificate(f, a))
        for (size_t zi = 0; zi < f.domain.size(); ++zi)
          if (a.consistent_with(f.domain[zi]) && f.values[zi] == 1)
            certifies_one = true;
      if (certifies_one) marked.push_back(v);
    }
    return marked;
  };

  // input-independent resistance bound: worst case over the positive inputs
  double r_bound = 0.0;
  for (int xi : f.preimage(1)) {
    WeightedGraph h = g;
    h.marked = marked_for(f.domain[xi]);
    if (h.marked.empty()) throw WalkError("lg walk: positive input uncertified");
    r_bound = std::max(r_bound, effective_resistance(h).r);
  }
  if (r_bound <= 0) throw WalkError("lg walk: no positive inputs");

  g.marked = marked_for(z);
  auto run = electric_walk_run(g, r_bound, 16.0, 8.0, seed);
  return {run.output, 2 * run.steps};
}

WeightedGraph weighted_graph_from_text(const std::string& text) {
  std::istringstream in(text);
  WeightedGraph g;
  if (!(in >> g.n)) throw WalkError("graph text: missing vertex count");
  int u, v;
  double w;
  while (in >> u >> v >> w) g.edges.push_back({u, v, w});
  g.validate();
  return g;
}

std::string to_text(const WeightedGraph& g) {
  std::ostringstream out;
  out << g.n << "\n";
  for (const auto& e : g.edges) out << e.u << " " << e.v << " " << e.w << "\n";
  return out.str();
}

void load_distribution_json(WeightedGraph& g, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("sigma")) g.sigma = j["sigma"].get<std::vector<double>>();
  if (j.contains("marked")) g.marked = j["marked"].get<std::vector<int>>();
  if (j.contains("part")) g.part = j["part"].get<std::vector<int>>();
  g.validate();
}

std::string distribution_json(const WeightedGraph& g) {
  nlohmann::json j;
  j["sigma"] = g.sigma;
  j["marked"] = g.marked;
  j["part"] = g.part;
  return j.dump(2);
}

}  // namespace qwb
