#include "qwb/learning_graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

namespace qwb {

static int popcount(uint32_t m) { return __builtin_popcount(m); }

void LearningGraph::validate() const {
  if (n < 1 || n > 31) throw LearningGraphError("validate: bad variable count");
  if (vertices.empty() || vertices[0].set != 0)
    throw LearningGraphError("validate: root must be the empty set");
  std::vector<char> reached(vertices.size(), 0);
  reached[0] = 1;
  for (const auto& a : arcs) {
    if (a.from < 0 || a.from >= (int)vertices.size() || a.to < 0 ||
        a.to >= (int)vertices.size())
      throw LearningGraphError("validate: arc endpoint out of range");
    uint32_t s = vertices[a.from].set;
    if (a.j < 0 || a.j >= n || (s >> a.j & 1))
      throw LearningGraphError("validate: arc must load a new variable");
    if (vertices[a.to].set != (s | (1u << a.j)))
      throw LearningGraphError("validate: arc endpoints inconsistent");
    if (a.weight < 0 || !std::isfinite(a.weight))
      throw LearningGraphError("validate: bad weight");
  }
  // arcs increase |S|, so a sweep by subset size settles reachability
  std::vector<int> order(arcs.size());
  for (size_t i = 0; i < arcs.size(); ++i) order[i] = (int)i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return popcount(vertices[arcs[a].from].set) <
           popcount(vertices[arcs[b].from].set);
  });
  for (int i : order)
    if (reached[arcs[i].from]) reached[arcs[i].to] = 1;
  for (char r : reached)
    if (!r) throw LearningGraphError("validate: vertex unreachable from the root");
}

int LearningGraph::vertex_index(uint32_t set, int tag) const {
  for (size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].set == set && vertices[i].tag == tag) return (int)i;
  return -1;
}

void validate_flow(const LearningGraph& g, const Flow& flow) {
  g.validate();
  for (const auto& m : flow.members) {
    if (m.p.size() != g.arcs.size())
      throw LearningGraphError("validate_flow: arc count mismatch");
    std::vector<double> net(g.vertices.size(), 0.0);  // out minus in
    for (size_t i = 0; i < g.arcs.size(); ++i) {
      net[g.arcs[i].from] += m.p[i];
      net[g.arcs[i].to] -= m.p[i];
    }
    if (std::abs(net[0] - 1.0) > 1e-12)
      throw LearningGraphError("validate_flow: unit value must leave the root");
    for (size_t v = 1; v < g.vertices.size(); ++v) {
      if (std::abs(net[v]) <= 1e-12) continue;
      if (net[v] > 1e-12)
        throw LearningGraphError("validate_flow: source away from the root");
      bool marked = std::count(m.sinks.begin(), m.sinks.end(),
                               g.vertices[v].set) > 0;
      if (!marked)
        throw LearningGraphError("validate_flow: sink at an unmarked vertex");
    }
  }
}

LGComplexities complexities(const LearningGraph& g, const Flow& flow) {
  if (g.adaptive)
    throw LearningGraphError("complexities: adaptive graph needs per-input weights");
  validate_flow(g, flow);
  LGComplexities out;
  for (const auto& a : g.arcs) out.cn += a.weight;
  for (const auto& m : flow.members) {
    double cp = 0.0;
    for (size_t i = 0; i < g.arcs.size(); ++i) {
      if (m.p[i] == 0.0) continue;
      if (g.arcs[i].weight == 0.0)
        throw LearningGraphError("complexities: flow through a zero-weight arc");
      cp += m.p[i] * m.p[i] / g.arcs[i].weight;
    }
    out.cp = std::max(out.cp, cp);
  }
  out.total = std::sqrt(out.cn * out.cp);
  return out;
}

// weight of an arc on one concrete input under the all-ones-source rule
static double adaptive_weight(const LearningGraph& g, const LGArc& a,
                              const Input& z) {
  if (!g.adaptive) return a.weight;
  uint32_t s = g.vertices[a.from].set;
  for (int i = 0; i < g.n; ++i)
    if ((s >> i & 1) && z[i] != 1) return 0.0;
  return a.weight;
}

LGComplexities complexities_adaptive(const LearningGraph& g,
                                     const PartialFunction& f,
                                     const Flow& flow_per_positive) {
  g.validate();
  f.validate();
  if (f.n != g.n) throw LearningGraphError("complexities_adaptive: arity");
  auto xs = f.preimage(1);
  if (flow_per_positive.members.size() != xs.size())
    throw LearningGraphError("complexities_adaptive: one member per positive input");
  LGComplexities out;
  for (int yi : f.preimage(0)) {
    double cn = 0.0;
    for (const auto& a : g.arcs) cn += adaptive_weight(g, a, f.domain[yi]);
    out.cn = std::max(out.cn, cn);
  }
  for (size_t xi = 0; xi < xs.size(); ++xi) {
    const auto& m = flow_per_positive.members[xi];
    if (m.p.size() != g.arcs.size())
      throw LearningGraphError("complexities_adaptive: arc count mismatch");
    double cp = 0.0;
    for (size_t i = 0; i < g.arcs.size(); ++i) {
      if (m.p[i] == 0.0) continue;
      double w = adaptive_weight(g, g.arcs[i], f.domain[xs[xi]]);
      if (w == 0.0)
        throw LearningGraphError("complexities_adaptive: flow through zero weight");
      cp += m.p[i] * m.p[i] / w;
    }
    out.cp = std::max(out.cp, cp);
  }
  out.total = std::sqrt(out.cn * out.cp);
  return out;
}

std::pair<LearningGraph, Flow> merge_duplicates(const LearningGraph& g,
                                                const Flow& flow) {
  g.validate();
  LearningGraph h;
  h.n = g.n;
  h.adaptive = g.adaptive;
  std::map<uint32_t, int> vmap;
  for (const auto& v : g.vertices)
    if (!vmap.count(v.set)) {
      vmap[v.set] = (int)h.vertices.size();
      h.vertices.push_back({v.set, -1});
    }
  // root stays first because g.vertices[0] is the root
  std::map<std::pair<uint32_t, int>, int> amap;  // (source set, j) -> arc
  std::vector<std::vector<int>> origin;          // merged arc -> source arcs
  for (size_t i = 0; i < g.arcs.size(); ++i) {
    const auto& a = g.arcs[i];
    uint32_t s = g.vertices[a.from].set;
    auto key = std::make_pair(s, a.j);
    auto it = amap.find(key);
    if (it == amap.end()) {
      it = amap.insert({key, (int)h.arcs.size()}).first;
      h.arcs.push_back({vmap[s], vmap[s | (1u << a.j)], a.j, 0.0});
      origin.push_back({});
    }
    h.arcs[it->second].weight += a.weight;
    origin[it->second].push_back((int)i);
  }
  Flow out;
  for (const auto& m : flow.members) {
    FlowMember nm;
    nm.name = m.name;
    nm.sinks = m.sinks;
    std::sort(nm.sinks.begin(), nm.sinks.end());
    nm.sinks.erase(std::unique(nm.sinks.begin(), nm.sinks.end()), nm.sinks.end());
    nm.p.assign(h.arcs.size(), 0.0);
    for (size_t i = 0; i < h.arcs.size(); ++i)
      for (int src : origin[i]) nm.p[i] += m.p[src];
    out.members.push_back(nm);
  }
  return {h, out};
}

LearningGraph scale_weights(const LearningGraph& g, double a) {
  if (a <= 0.0) throw LearningGraphError("scale_weights: factor must be positive");
  LearningGraph h = g;
  for (auto& arc : h.arcs) arc.weight *= a;
  return h;
}

double stage_complexity(double length, double speciality) {
  if (length < 0 || speciality < 0)
    throw LearningGraphError("stage_complexity: negative parameter");
  return length * std::sqrt(speciality);
}

// ---- named constructions ----------------------------------------------------

LGBundle trivial_lg(int n) {
  if (n < 1 || n > 31) throw LearningGraphError("trivial_lg: bad n");
  LGBundle b;
  b.g.n = n;
  b.g.vertices.push_back({0, -1});
  uint32_t cur = 0;
  for (int i = 0; i < n; ++i) {
    b.g.vertices.push_back({cur | (1u << i), -1});
    b.g.arcs.push_back({i, i + 1, i, 1.0});
    cur |= 1u << i;
  }
  FlowMember m;
  m.name = "all";
  m.p.assign(n, 1.0);
  m.sinks = {cur};
  b.flow.members.push_back(m);
  b.stages.push_back({"load-everything", (double)n, 1.0, 1.0});
  return b;
}

LGBundle or_lg(int n) {
  if (n < 1 || n > 31) throw LearningGraphError("or_lg: bad n");
  LGBundle b;
  b.g.n = n;
  b.g.vertices.push_back({0, -1});
  for (int j = 0; j < n; ++j) {
    b.g.vertices.push_back({1u << j, -1});
    b.g.arcs.push_back({0, j + 1, j, 1.0});
  }
  for (int j = 0; j < n; ++j) {
    FlowMember m;
    m.name = "one-at-" + std::to_string(j);
    m.p.assign(n, 0.0);
    m.p[j] = 1.0;
    m.sinks = {1u << j};
    b.flow.members.push_back(m);
  }
  b.stages.push_back({"find-the-one", 1.0, (double)n, 1.0});
  return b;
}

LGBundle collision_lg(int n, int r) {
  if (r < 1 || 2 * r > n || n > 31)
    throw LearningGraphError("collision_lg: need 1 <= r <= n/2");
  LGBundle b;
  b.g.n = n;
  double w = (double)n / r;
  b.g.vertices.push_back({0, -1});
  uint32_t cur = 0;
  for (int i = 0; i < r; ++i) {  // transition to the first r elements
    b.g.vertices.push_back({cur | (1u << i), -1});
    b.g.arcs.push_back({i, i + 1, i, w});
    cur |= 1u << i;
  }
  for (int j = r; j < n; ++j) {
    b.g.vertices.push_back({cur | (1u << j), -1});
    b.g.arcs.push_back({r, (int)b.g.vertices.size() - 1, j, 1.0});
  }
  // representative matching pairing i with r+i leaves the loaded block
  // collision-free, the worst case for the flow
  FlowMember m;
  m.name = "matching i<->r+i";
  m.p.assign(b.g.arcs.size(), 0.0);
  for (int i = 0; i < r; ++i) {
    m.p[i] = 1.0;                 // transition
    m.p[r + i] = 1.0 / r;         // arc loading the partner r+i
    m.sinks.push_back(cur | (1u << (r + i)));
  }
  b.flow.members.push_back(m);
  b.stages.push_back({"random-block", (double)r, 1.0, w});
  b.stages.push_back({"partner", 1.0, (double)(n - r) * r, 1.0});
  return b;
}

static std::vector<uint32_t> masks_of_size(int n, int size) {
  std::vector<uint32_t> out;
  for (uint32_t m = 0; m < (1u << n); ++m)
    if (popcount(m) == size) out.push_back(m);
  return out;
}

LGBundle ksubset_lg(int n, int k, int r) {
  if (n < 1 || n > 16 || k < 1 || r < 0 || r + k > n)
    throw LearningGraphError("ksubset_lg: bad parameters");
  LGBundle b;
  b.g.n = n;
  b.g.vertices.push_back({0, -1});
  double prob = 1.0 / (double)binom(n - k, r);

  // exact stage specialities: all transitions over those used by one member
  std::vector<double> spec(k + 1, 1.0);
  spec[0] = (double)binom(n, r) / binom(n - k, r);
  for (int i = 1; i <= k; ++i)
    spec[i] = (double)binom(n, r + i - 1) * (n - r - i + 1) / binom(n - k, r);
  std::vector<double> wt(k + 1);
  for (int i = 0; i <= k; ++i) wt[i] = prob / std::sqrt(spec[i]);

  std::vector<uint32_t> rsets = masks_of_size(n, r);
  std::map<uint32_t, int> setvtx;  // untagged subset vertices
  setvtx[0] = 0;                   // the root already exists
  auto subset_vertex = [&](uint32_t s) {
    auto it = setvtx.find(s);
    if (it != setvtx.end()) return it->second;
    int idx = (int)b.g.vertices.size();
    b.g.vertices.push_back({s, -1});
    setvtx[s] = idx;
    return idx;
  };

  // stage I: one transition path from the root to every r-subset
  std::map<uint32_t, std::vector<int>> stage1_arcs;  // r-subset -> its arcs
  for (size_t t = 0; t < rsets.size(); ++t) {
    uint32_t target = rsets[t];
    int prev = 0;
    uint32_t cur = 0;
    for (int j = 0; j < n; ++j) {
      if (!(target >> j & 1)) continue;
      cur |= 1u << j;
      int next;
      if (cur == target) {
        next = subset_vertex(target);
      } else {
        next = (int)b.g.vertices.size();
        b.g.vertices.push_back({cur, (int)t});
      }
      stage1_arcs[target].push_back((int)b.g.arcs.size());
      b.g.arcs.push_back({prev, next, j, wt[0]});
      prev = next;
    }
  }
  if (r == 0) subset_vertex(0);

  // stages II.1 .. II.k: all arcs between consecutive layers
  std::map<std::pair<uint32_t, int>, int> stage2_arc;  // (source, j) -> arc
  for (int i = 1; i <= k; ++i)
    for (uint32_t s : masks_of_size(n, r + i - 1))
      for (int j = 0; j < n; ++j) {
        if (s >> j & 1) continue;
        int from = subset_vertex(s);
        int to = subset_vertex(s | (1u << j));
        stage2_arc[{s, j}] = (int)b.g.arcs.size();
        b.g.arcs.push_back({from, to, j, wt[i]});
      }

  // one member per k-subset
  for (uint32_t a : masks_of_size(n, k)) {
    std::vector<int> marks;
    for (int j = 0; j < n; ++j)
      if (a >> j & 1) marks.push_back(j);
    FlowMember m;
    m.name = "subset";
    m.p.assign(b.g.arcs.size(), 0.0);
    for (uint32_t rs : rsets) {
      if (rs & a) continue;  // randomness avoids the marked elements
      for (int arc : stage1_arcs[rs]) m.p[arc] = prob;
      uint32_t s = rs;
      for (int j : marks) {
        m.p[stage2_arc[{s, j}]] = prob;
        s |= 1u << j;
      }
      m.sinks.push_back(s);
    }
    std::sort(m.sinks.begin(), m.sinks.end());
    m.sinks.erase(std::unique(m.sinks.begin(), m.sinks.end()), m.sinks.end());
    b.flow.members.push_back(m);
  }
  b.stages.push_back({"random-block", (double)r, spec[0], wt[0]});
  for (int i = 1; i <= k; ++i)
    b.stages.push_back({"mark-" + std::to_string(i), 1.0, spec[i], wt[i]});
  return b;
}

LGBundle triangle_lg(int v, int r1, int r2, int l) {
  int n = v * (v - 1) / 2;
  if (v < 4 || n > 31 || r1 < 1 || r2 < 1 || l < 1 || l > r2 ||
      3 + r1 + r2 > v)
    throw LearningGraphError("triangle_lg: bad parameters");
  LGBundle b;
  b.g.n = n;
  b.g.vertices.push_back({0, -1});
  auto pi = [&](int x, int y) { return pair_index(v, std::min(x, y), std::max(x, y)); };
  double prob = 1.0 / ((double)binom(v - 3, r1) * binom(v - 3 - r1, r2));
  double probl = prob / (double)binom(r2, l);

  struct Transition {
    int stage;  // 0-based
    uint32_t from, to;
  };
  std::map<std::tuple<int, uint32_t, uint32_t>, int> tmap;
  std::vector<Transition> transitions;
  // flows[member][transition id]
  std::vector<std::map<int, double>> flows;
  std::vector<std::vector<uint32_t>> sinks;

  auto transition_id = [&](int stage, uint32_t from, uint32_t to) {
    auto key = std::make_tuple(stage, from, to);
    auto it = tmap.find(key);
    if (it != tmap.end()) return it->second;
    int id = (int)transitions.size();
    tmap[key] = id;
    transitions.push_back({stage, from, to});
    return id;
  };

  std::vector<std::vector<int>> others;  // per member: vertices off the triangle
  int mi = 0;
  for (int a = 0; a < v; ++a)
    for (int bb = a + 1; bb < v; ++bb)
      for (int c = bb + 1; c < v; ++c) {
        flows.push_back({});
        sinks.push_back({});
        std::vector<int> rest;
        for (int u = 0; u < v; ++u)
          if (u != a && u != bb && u != c) rest.push_back(u);
        int rn = (int)rest.size();
        // enumerate disjoint (A, B) by masks over the rest
        for (uint32_t am = 0; am < (1u << rn); ++am) {
          if (popcount(am) != r1) continue;
          for (uint32_t bm = 0; bm < (1u << rn); ++bm) {
            if (popcount(bm) != r2 || (am & bm)) continue;
            std::vector<int> av, bv;
            for (int t = 0; t < rn; ++t) {
              if (am >> t & 1) av.push_back(rest[t]);
              if (bm >> t & 1) bv.push_back(rest[t]);
            }
            uint32_t s1 = 0;
            for (int x : av)
              for (int y : bv) s1 |= 1u << pi(x, y);
            uint32_t s2 = s1;
            for (int y : bv) s2 |= 1u << pi(a, y);
            uint32_t s3 = s2;
            for (int x : av) s3 |= 1u << pi(bb, x);
            s3 |= 1u << pi(bb, a);
            flows[mi][transition_id(0, 0, s1)] += prob;
            flows[mi][transition_id(1, s1, s2)] += prob;
            flows[mi][transition_id(2, s2, s3)] += prob;
            for (uint32_t lm = 0; lm < (1u << r2); ++lm) {
              if (popcount(lm) != l) continue;
              uint32_t s4 = s3;
              for (int t = 0; t < r2; ++t)
                if (lm >> t & 1) s4 |= 1u << pi(c, bv[t]);
              uint32_t s5 = s4 | (1u << pi(bb, c));
              uint32_t s6 = s5 | (1u << pi(a, c));
              flows[mi][transition_id(3, s3, s4)] += probl;
              flows[mi][transition_id(4, s4, s5)] += probl;
              flows[mi][transition_id(5, s5, s6)] += probl;
              sinks[mi].push_back(s6);
            }
          }
        }
        ++mi;
      }

  // exact per-stage specialities from the member (0,1,2) usage counts
  std::vector<int> total(6, 0), used(6, 0);
  for (const auto& t : transitions) ++total[t.stage];
  for (const auto& [id, p] : flows[0]) ++used[transitions[id].stage];
  std::vector<double> wt(6), spec(6), len = {(double)r1 * r2, (double)r2,
                                             (double)r1 + 1, (double)l, 1.0, 1.0};
  for (int s = 0; s < 6; ++s) {
    spec[s] = (double)total[s] / used[s];
    double q = s < 3 ? prob : probl;
    wt[s] = q / std::sqrt(spec[s]);
  }

  // expand every transition into a tagged path
  std::map<uint32_t, int> setvtx;
  auto subset_vertex = [&](uint32_t s) {
    if (s == 0) return 0;
    auto it = setvtx.find(s);
    if (it != setvtx.end()) return it->second;
    int idx = (int)b.g.vertices.size();
    b.g.vertices.push_back({s, -1});
    setvtx[s] = idx;
    return idx;
  };
  std::vector<std::vector<int>> tarcs(transitions.size());
  for (size_t t = 0; t < transitions.size(); ++t) {
    const auto& tr = transitions[t];
    int prev = subset_vertex(tr.from);
    uint32_t cur = tr.from;
    for (int j = 0; j < n; ++j) {
      if (!((tr.to & ~tr.from) >> j & 1)) continue;
      cur |= 1u << j;
      int next;
      if (cur == tr.to) {
        next = subset_vertex(tr.to);
      } else {
        next = (int)b.g.vertices.size();
        b.g.vertices.push_back({cur, (int)t});
      }
      tarcs[t].push_back((int)b.g.arcs.size());
      b.g.arcs.push_back({prev, next, j, wt[tr.stage]});
      prev = next;
    }
  }
  for (size_t m = 0; m < flows.size(); ++m) {
    FlowMember fm;
    fm.name = "triangle";
    fm.p.assign(b.g.arcs.size(), 0.0);
    for (const auto& [id, p] : flows[m])
      for (int arc : tarcs[id]) fm.p[arc] = p;
    fm.sinks = sinks[m];
    std::sort(fm.sinks.begin(), fm.sinks.end());
    fm.sinks.erase(std::unique(fm.sinks.begin(), fm.sinks.end()), fm.sinks.end());
    b.flow.members.push_back(fm);
  }
  const char* names[] = {"bipartite-block", "attach-a", "attach-b",
                         "probe-c",         "edge-bc",  "edge-ac"};
  for (int s = 0; s < 6; ++s) b.stages.push_back({names[s], len[s], spec[s], wt[s]});
  return b;
}

AdaptiveThresholdLG adaptive_threshold_lg(int n, int k, int d) {
  if (n < 2 || n > 16 || k < 1 || d < 1 || k + d > n)
    throw LearningGraphError("adaptive_threshold_lg: bad parameters");
  AdaptiveThresholdLG out;
  out.f = make_named("promise_threshold",
                     {{"n", n}, {"k", k}, {"d", d}});
  out.g.n = n;
  out.g.adaptive = true;
  std::vector<double> wt(k + 1);
  for (int i = 0; i <= k; ++i)
    wt[i] = 1.0 / std::sqrt((double)binom(k, i) * binom(k + d, i) * (k + d - i));

  out.g.vertices.push_back({0, -1});
  std::map<uint32_t, int> vmap;
  vmap[0] = 0;
  for (int size = 1; size <= k + 1; ++size)
    for (uint32_t m : masks_of_size(n, size)) {
      vmap[m] = (int)out.g.vertices.size();
      out.g.vertices.push_back({m, -1});
    }
  std::map<std::pair<uint32_t, int>, int> amap;
  for (int size = 0; size <= k; ++size)
    for (uint32_t m : masks_of_size(n, size))
      for (int j = 0; j < n; ++j) {
        if (m >> j & 1) continue;
        amap[{m, j}] = (int)out.g.arcs.size();
        out.g.arcs.push_back({vmap[m], vmap[m | (1u << j)], j, wt[size]});
      }

  for (int xi : out.f.preimage(1)) {
    const Input& x = out.f.domain[xi];
    // route through the first k+d ones; the split below conserves flow only
    // on a set of exactly that size
    uint32_t ones = 0;
    int taken = 0;
    for (int j = 0; j < n && taken < k + d; ++j)
      if (x[j] == 1) {
        ones |= 1u << j;
        ++taken;
      }
    FlowMember m;
    m.name = "positive";
    m.p.assign(out.g.arcs.size(), 0.0);
    for (int size = 0; size <= k; ++size)
      for (uint32_t s : masks_of_size(n, size)) {
        if (s & ~ones) continue;
        // uniform split of the flow that reaches s among its remaining ones
        double p = 1.0 / ((double)binom(k + d, size) * (k + d - size));
        for (int j = 0; j < n; ++j)
          if ((ones >> j & 1) && !(s >> j & 1)) m.p[amap[{s, j}]] = p;
      }
    for (uint32_t s : masks_of_size(n, k + 1))
      if (!(s & ~ones)) m.sinks.push_back(s);
    out.flow.members.push_back(m);
  }

  for (int i = 0; i <= k; ++i) {
    out.complexity.cn += (double)binom(k, i) * (n - i) * wt[i];
    out.complexity.cp += 1.0 / ((double)binom(k + d, i) * (k + d - i) * wt[i]);
  }
  out.complexity.total = std::sqrt(out.complexity.cn * out.complexity.cp);
  return out;
}

// ---- conversions ------------------------------------------------------------

// index of the flow member whose sinks all certify x; the conversions need
// every sink assignment to pin the function value to 1
static int member_for_input(const LearningGraph& g, const Flow& flow,
                            const PartialFunction& f, const Input& x) {
  for (size_t m = 0; m < flow.members.size(); ++m) {
    bool ok = !flow.members[m].sinks.empty();
    for (uint32_t s : flow.members[m].sinks) {
      Assignment a = Assignment::restrict_to(x, s);
      if (!is_certificate(f, a) || f.value_of(x) != 1) ok = false;
      if (!ok) break;
    }
    if (ok) return (int)m;
  }
  return -1;
}

DualAdversarySolution to_dual_adversary(const LearningGraph& g, const Flow& flow,
                                        const PartialFunction& f) {
  if (g.adaptive)
    throw LearningGraphError("to_dual_adversary: constant weights required");
  validate_flow(g, flow);
  f.validate();
  if (f.n != g.n) throw LearningGraphError("to_dual_adversary: arity mismatch");
  int nd = (int)f.domain.size();
  std::vector<int> member(nd, -1);
  for (int zi : f.preimage(1)) {
    member[zi] = member_for_input(g, flow, f, f.domain[zi]);
    if (member[zi] < 0)
      throw LearningGraphError("to_dual_adversary: certificate mismatch");
  }
  DualAdversarySolution s;
  s.f = f;
  for (int j = 0; j < g.n; ++j) {
    std::vector<Vec> rows;
    for (size_t e = 0; e < g.arcs.size(); ++e) {
      if (g.arcs[e].j != j) continue;
      uint32_t src = g.vertices[g.arcs[e].from].set;
      double w = g.arcs[e].weight;
      // group domain inputs by their assignment on the source set
      std::map<std::vector<int>, Vec> per_alpha;
      for (int zi = 0; zi < nd; ++zi) {
        std::vector<int> alpha;
        for (int i = 0; i < g.n; ++i)
          if (src >> i & 1) alpha.push_back(f.domain[zi][i]);
        auto it = per_alpha.find(alpha);
        if (it == per_alpha.end())
          it = per_alpha.insert({alpha, Vec::Zero(nd)}).first;
        double entry;
        if (f.values[zi] == 1) {
          double p = flow.members[member[zi]].p[e];
          if (p != 0.0 && w == 0.0)
            throw LearningGraphError("to_dual_adversary: flow through zero weight");
          entry = w == 0.0 ? 0.0 : p / std::sqrt(w);
        } else {
          entry = std::sqrt(w);
        }
        it->second(zi) = entry;
      }
      for (auto& [alpha, vec] : per_alpha)
        if (vec.norm() > 0.0) rows.push_back(vec);
    }
    Mat m((int)rows.size(), nd);
    for (size_t r = 0; r < rows.size(); ++r) m.row((int)r) = rows[r].transpose();
    s.factors.push_back(m);
  }
  return s;
}

SpanProgram to_span_program(const LearningGraph& g, const Flow& flow,
                            const PartialFunction& f) {
  if (g.adaptive)
    throw LearningGraphError("to_span_program: constant weights required");
  if (f.q != 2) throw LearningGraphError("to_span_program: boolean inputs only");
  validate_flow(g, flow);
  f.validate();
  if (f.n != g.n) throw LearningGraphError("to_span_program: arity mismatch");

  // one coordinate per (vertex, assignment on its set)
  std::vector<int> offset(g.vertices.size() + 1, 0);
  long dim = 0;
  std::vector<std::vector<int>> elems(g.vertices.size());
  for (size_t v = 0; v < g.vertices.size(); ++v) {
    offset[v] = (int)dim;
    for (int i = 0; i < g.n; ++i)
      if (g.vertices[v].set >> i & 1) elems[v].push_back(i);
    dim += 1l << elems[v].size();
    if (dim > (1l << 22))
      throw LearningGraphError("to_span_program: state space too large");
  }
  offset[g.vertices.size()] = (int)dim;

  auto code_of = [&](int v, const Input& z) {
    int code = 0;
    for (size_t t = 0; t < elems[v].size(); ++t)
      if (z[elems[v][t]] == 1) code |= 1 << t;
    return offset[v] + code;
  };

  SpanProgram p;
  p.dim = (int)dim;
  p.nvars = g.n;
  p.target = Vec::Unit((int)dim, offset[0]);

  // free vectors: coordinates whose assignment certifies the value 1
  for (size_t v = 0; v < g.vertices.size(); ++v)
    for (int code = 0; code < (1 << (int)elems[v].size()); ++code) {
      Assignment a;
      for (size_t t = 0; t < elems[v].size(); ++t) {
        a.support.push_back(elems[v][t]);
        a.values.push_back(code >> t & 1);
      }
      if (is_certificate(f, a) ) {
        // only 1-certificates become free: check the certified value
        bool certifies_one = false;
        for (size_t zi = 0; zi < f.domain.size(); ++zi)
          if (a.consistent_with(f.domain[zi]) && f.values[zi] == 1)
            certifies_one = true;
        if (certifies_one)
          p.free_vectors.push_back(Vec::Unit((int)dim, offset[v] + code));
      }
    }

  // two labelled vectors per (arc, source assignment)
  struct Slot {
    int arc, code, b;
  };
  std::vector<Slot> slots;
  for (size_t e = 0; e < g.arcs.size(); ++e) {
    const auto& a = g.arcs[e];
    int from = a.from, to = a.to;
    int tbit = 0;  // position of j inside the target vertex's element list
    while (elems[to][tbit] != a.j) ++tbit;
    for (int code = 0; code < (1 << (int)elems[from].size()); ++code)
      for (int b = 0; b < 2; ++b) {
        // embed the source code into the target vertex's coordinates
        int low = code & ((1 << tbit) - 1);
        int high = (code >> tbit) << (tbit + 1);
        int ext = low | high | (b << tbit);
        Vec vec = Vec::Zero((int)dim);
        vec(offset[from] + code) = std::sqrt(a.weight);
        vec(offset[to] + ext) = -std::sqrt(a.weight);
        p.inputs.push_back(vec);
        p.labels.push_back({InputLabel::Var, a.j, b});
        slots.push_back({(int)e, code, b});
      }
  }

  // stored witnesses from the two explicit constructions
  for (size_t zi = 0; zi < f.domain.size(); ++zi) {
    const Input& z = f.domain[zi];
    if (f.values[zi] == 0) {
      WitnessRecord rec;
      rec.positive = false;
      rec.ambient = Vec::Zero((int)dim);
      for (size_t v = 0; v < g.vertices.size(); ++v)
        rec.ambient(code_of((int)v, z)) = 1.0;
      double sz = 0.0;
      for (const auto& in : p.inputs) sz += std::pow(in.dot(rec.ambient), 2);
      rec.size = sz;
      p.stored_witnesses[z] = rec;
    } else {
      int m = member_for_input(g, flow, f, z);
      if (m < 0) throw LearningGraphError("to_span_program: certificate mismatch");
      WitnessRecord rec;
      rec.positive = true;
      rec.coeffs = Vec::Zero((int)p.inputs.size());
      for (size_t i = 0; i < slots.size(); ++i) {
        const auto& sl = slots[i];
        const auto& a = g.arcs[sl.arc];
        if (sl.b != z[a.j]) continue;
        int code = 0;
        for (size_t t = 0; t < elems[a.from].size(); ++t)
          if (z[elems[a.from][t]] == 1) code |= 1 << t;
        if (code != sl.code) continue;
        double pe = flow.members[m].p[sl.arc];
        if (pe == 0.0) continue;
        rec.coeffs((int)i) = pe / std::sqrt(a.weight);
      }
      rec.size = rec.coeffs.squaredNorm();
      p.stored_witnesses[z] = rec;
    }
  }
  return p;
}

bool weak_lg_duality_check(const LearningGraph& g, const Flow& flow,
                           const DualLGCertificate& a,
                           const CertificateStructure& cert) {
  DualCertReport rep = check_dual_certificate(cert, a);
  double normalized = rep.max_constraint > 0.0
                          ? rep.objective / std::sqrt(rep.max_constraint)
                          : rep.objective;
  return normalized <= complexities(g, flow).total + 1e-9;
}

std::string to_json(const LearningGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["adaptive"] = g.adaptive;
  j["vertices"] = nlohmann::json::array();
  for (const auto& v : g.vertices)
    j["vertices"].push_back({{"set", v.set}, {"tag", v.tag}});
  j["arcs"] = nlohmann::json::array();
  for (const auto& a : g.arcs)
    j["arcs"].push_back(
        {{"from", a.from}, {"to", a.to}, {"j", a.j}, {"weight", a.weight}});
  return j.dump(2);
}

LearningGraph learning_graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LearningGraph g;
  g.n = j.at("n").get<int>();
  g.adaptive = j.value("adaptive", false);
  for (const auto& v : j.at("vertices"))
    g.vertices.push_back({v.at("set").get<uint32_t>(), v.at("tag").get<int>()});
  for (const auto& a : j.at("arcs"))
    g.arcs.push_back({a.at("from").get<int>(), a.at("to").get<int>(),
                      a.at("j").get<int>(), a.at("weight").get<double>()});
  g.validate();
  return g;
}

}  // namespace qwb
