#include "qwb/span_programs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include <json.hpp>

namespace qwb {

void SpanProgram::validate() const {
  if (dim <= 0) throw SpanError("validate: empty space");
  if (target.size() != dim) throw SpanError("validate: target dimension");
  if (target.norm() == 0.0) throw SpanError("validate: zero target");
  if (labels.size() != inputs.size()) throw SpanError("validate: label count");
  for (const auto& v : inputs)
    if (v.size() != dim) throw SpanError("validate: input dimension");
  for (const auto& v : free_vectors)
    if (v.size() != dim) throw SpanError("validate: free dimension");
  for (const auto& l : labels)
    if (l.kind == InputLabel::Var && (l.j < 0 || l.j >= nvars))
      throw SpanError("validate: label variable out of range");
}

std::vector<int> available_indices(const SpanProgram& p, const Input& z) {
  if ((int)z.size() != p.nvars) throw SpanError("available_indices: arity mismatch");
  std::vector<int> out;
  for (size_t i = 0; i < p.labels.size(); ++i) {
    const auto& l = p.labels[i];
    if (l.kind == InputLabel::Always || (l.kind == InputLabel::Var && z[l.j] == l.b))
      out.push_back((int)i);
  }
  return out;
}

static Mat columns_of(const SpanProgram& p, const std::vector<int>& idx) {
  Mat m(p.dim, (int)idx.size());
  for (size_t c = 0; c < idx.size(); ++c) m.col((int)c) = p.inputs[idx[c]];
  return m;
}

static Mat free_matrix(const SpanProgram& p) {
  Mat m(p.dim, (int)p.free_vectors.size());
  for (size_t c = 0; c < p.free_vectors.size(); ++c) m.col((int)c) = p.free_vectors[c];
  return m;
}

// projector onto the orthogonal complement of the span of the free vectors
static Mat free_complement_projector(const SpanProgram& p) {
  if (p.free_vectors.empty()) return Mat::Identity(p.dim, p.dim);
  Mat q = range_basis(free_matrix(p));
  return Mat::Identity(p.dim, p.dim) - q * q.transpose();
}

bool evaluate(const SpanProgram& p, const Input& z) {
  auto idx = available_indices(p, z);
  Mat pi = free_complement_projector(p);
  Mat b = pi * columns_of(p, idx);
  Vec t = pi * p.target;
  if (t.norm() <= 1e-12) return true;  // target inside the free span
  auto w = min_norm_solution(b, t, 1e-8);
  return w.has_value();
}

WitnessRecord positive_witness(const SpanProgram& p, const Input& z) {
  auto idx = available_indices(p, z);
  Mat pi = free_complement_projector(p);
  Mat b = pi * columns_of(p, idx);
  Vec t = pi * p.target;
  std::optional<Vec> w;
  if (t.norm() <= 1e-12)
    w = Vec::Zero((int)idx.size());
  else
    w = min_norm_solution(b, t, 1e-8);
  if (!w) throw SpanError("positive_witness: program evaluates to 0 here");
  WitnessRecord rec;
  rec.positive = true;
  rec.coeffs = Vec::Zero((int)p.inputs.size());
  for (size_t c = 0; c < idx.size(); ++c) rec.coeffs(idx[c]) = (*w)((int)c);
  rec.size = rec.coeffs.squaredNorm();
  return rec;
}

WitnessRecord negative_witness(const SpanProgram& p, const Input& z) {
  auto idx = available_indices(p, z);
  // w' must annihilate the available vectors and the free span
  Mat blocked(p.dim, (int)idx.size() + (int)p.free_vectors.size());
  blocked.leftCols((int)idx.size()) = columns_of(p, idx);
  blocked.rightCols((int)p.free_vectors.size()) = free_matrix(p);
  Mat n = kernel_basis(blocked.transpose());
  Vec c = n.transpose() * p.target;
  if (c.norm() <= 1e-9)
    throw SpanError("negative_witness: program evaluates to 1 here");
  // parameterise w' = n (u0 + z t) with <target, w'> = 1 pinned by u0
  Vec u0 = c / c.squaredNorm();
  Mat z0 = kernel_basis(Mat(c.transpose()));
  Mat vall(p.dim, (int)p.inputs.size());
  for (size_t i = 0; i < p.inputs.size(); ++i) vall.col((int)i) = p.inputs[i];
  Mat m = vall.transpose() * n;
  WitnessRecord rec;
  rec.positive = false;
  if (z0.cols() == 0 || m.rows() == 0) {
    rec.ambient = n * u0;
  } else {
    // least-norm minimiser of ||m (u0 + z0 t)||; u0 is orthogonal to
    // range(z0), so the least-norm t also minimises ||w'||
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(Mat(m * z0));
    Vec t = cod.solve(Vec(-m * u0));
    rec.ambient = n * (u0 + z0 * t);
  }
  rec.size = (vall.transpose() * rec.ambient).squaredNorm();
  return rec;
}

WitnessSizes witness_size(const SpanProgram& p, const std::vector<Input>& domain,
                          bool use_stored) {
  std::vector<Input> dom = domain;
  if (dom.empty()) dom = all_inputs(p.nvars, 2);
  WitnessSizes out;
  for (const auto& z : dom) {
    bool one = evaluate(p, z);
    double sz;
    auto it = p.stored_witnesses.find(z);
    if (use_stored && it != p.stored_witnesses.end()) {
      if (it->second.positive != one)
        throw SpanError("witness_size: stored witness of the wrong kind");
      sz = it->second.size;
    } else {
      sz = one ? positive_witness(p, z).size : negative_witness(p, z).size;
    }
    if (one)
      out.w1 = std::max(out.w1, sz);
    else
      out.w0 = std::max(out.w0, sz);
  }
  out.wsize = std::sqrt(out.w0 * out.w1);
  return out;
}

SpanProgram rebalance(const SpanProgram& p, double factor) {
  if (factor <= 0.0) throw SpanError("rebalance: factor must be positive");
  SpanProgram q = p;
  q.target = factor * p.target;
  for (auto& [z, rec] : q.stored_witnesses) {
    if (rec.positive) {
      rec.coeffs *= factor;
      rec.size *= factor * factor;
    } else {
      rec.ambient /= factor;
      rec.size /= factor * factor;
    }
  }
  return q;
}

SpanProgram eliminate_free(const SpanProgram& p) {
  Mat pi = free_complement_projector(p);
  SpanProgram q = p;
  q.free_vectors.clear();
  q.target = pi * p.target;
  if (q.target.norm() <= 1e-9)
    throw SpanError("eliminate_free: target inside the free span");
  for (auto& v : q.inputs) v = pi * v;
  // stored witnesses survive the projection with identical sizes
  return q;
}

SpanProgram canonicalize(const SpanProgram& p, const std::vector<Input>& ys) {
  int ny = (int)ys.size();
  if (ny == 0) throw SpanError("canonicalize: no negative inputs given");
  Mat a(ny, p.dim);
  for (int r = 0; r < ny; ++r) {
    auto it = p.stored_witnesses.find(ys[r]);
    if (it == p.stored_witnesses.end() || it->second.positive)
      throw SpanError("canonicalize: missing stored negative witness");
    a.row(r) = it->second.ambient.transpose();
  }
  SpanProgram q;
  q.dim = ny;
  q.nvars = p.nvars;
  q.target = Vec::Ones(ny);
  q.labels = p.labels;
  for (const auto& v : p.inputs) q.inputs.push_back(a * v);
  // free vectors are annihilated by every negative witness
  for (const auto& v : p.free_vectors)
    if ((a * v).norm() > 1e-7)
      throw SpanError("canonicalize: witness not orthogonal to the free span");
  for (const auto& [z, rec] : p.stored_witnesses) {
    if (rec.positive) {
      q.stored_witnesses[z] = rec;
    }
  }
  for (int r = 0; r < ny; ++r) {
    WitnessRecord rec;
    rec.positive = false;
    rec.ambient = Vec::Zero(ny);
    rec.ambient(r) = 1.0;
    double s = 0.0;
    for (const auto& v : q.inputs) s += v(r) * v(r);
    rec.size = s;
    q.stored_witnesses[ys[r]] = rec;
  }
  return q;
}

bool is_canonical(const SpanProgram& p, const std::vector<Input>& ys, double tol) {
  if (p.dim != (int)ys.size()) return false;
  if ((p.target - Vec::Ones(p.dim)).cwiseAbs().maxCoeff() > tol) return false;
  if (!p.free_vectors.empty()) return false;
  for (int r = 0; r < p.dim; ++r)
    for (int i : available_indices(p, ys[r]))
      if (std::abs(p.inputs[i](r)) > tol) return false;
  return true;
}

// ---- graph conventions ----------------------------------------------------

int pair_index(int n, int u, int v) {
  if (u == v || u < 0 || v < 0 || u >= n || v >= n)
    throw SpanError("pair_index: bad pair");
  if (u > v) std::swap(u, v);
  // pairs (0,1),(0,2),...,(0,n-1),(1,2),...
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

Input graph_input(const Adj& g) {
  int n = (int)g.size();
  Input z(n * (n - 1) / 2, 0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) z[pair_index(n, u, v)] = g[u][v] ? 1 : 0;
  return z;
}

Adj input_graph(int n, const Input& z) {
  if ((int)z.size() != n * (n - 1) / 2) throw SpanError("input_graph: arity");
  Adj g(n, std::vector<int>(n, 0));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      g[u][v] = g[v][u] = z[pair_index(n, u, v)] ? 1 : 0;
  return g;
}

Adj parse_graph_text(const std::string& text) {
  std::istringstream in(text);
  int n;
  if (!(in >> n) || n <= 0) throw SpanError("parse_graph_text: bad vertex count");
  Adj g(n, std::vector<int>(n, 0));
  for (int r = 0; r < n; ++r) {
    std::string row;
    if (!(in >> row) || (int)row.size() != n)
      throw SpanError("parse_graph_text: bad row");
    for (int c = 0; c < n; ++c) {
      if (row[c] != '0' && row[c] != '1')
        throw SpanError("parse_graph_text: entries must be 0/1");
      g[r][c] = row[c] - '0';
    }
  }
  for (int r = 0; r < n; ++r) {
    if (g[r][r]) throw SpanError("parse_graph_text: loop on the diagonal");
    for (int c = 0; c < n; ++c)
      if (g[r][c] != g[c][r]) throw SpanError("parse_graph_text: not symmetric");
  }
  return g;
}

std::string format_graph_text(const Adj& g) {
  std::ostringstream out;
  out << g.size() << "\n";
  for (const auto& row : g) {
    for (int v : row) out << (v ? '1' : '0');
    out << "\n";
  }
  return out.str();
}

// ---- named constructions ---------------------------------------------------

SpanProgram st_connectivity_program(int n, int s, int t) {
  if (s == t || s < 0 || t < 0 || s >= n || t >= n)
    throw SpanError("st_connectivity_program: bad endpoints");
  SpanProgram p;
  p.dim = n;
  p.nvars = n * (n - 1) / 2;
  p.target = Vec::Zero(n);
  p.target(t) = 1.0;
  p.target(s) = -1.0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      Vec e = Vec::Zero(n);
      e(u) = 1.0;
      e(v) = -1.0;
      p.inputs.push_back(e);
      p.labels.push_back({InputLabel::Var, pair_index(n, u, v), 1});
    }
  return p;
}

int StarShape::vertex_count() const {
  int c = 1;
  for (int l : legs) c += l;
  return c;
}

int star_colour(const StarShape& shape, int j, int i) {
  if (j < 0 || j >= (int)shape.legs.size() || i < 1 || i > shape.legs[j])
    throw SpanError("star_colour: bad leg position");
  int off = 1;
  for (int t = 0; t < j; ++t) off += shape.legs[t];
  return off + (i - 1);
}

SpanProgram star_program(const StarShape& shape, int n,
                         const std::vector<int>& colouring) {
  int d = (int)shape.legs.size();
  if (d == 0) throw SpanError("star_program: star needs at least one leg");
  for (int l : shape.legs)
    if (l < 1) throw SpanError("star_program: leg lengths must be positive");
  if ((int)colouring.size() != n) throw SpanError("star_program: colouring size");
  int vt = shape.vertex_count();
  for (int c : colouring)
    if (c < 0 || c >= vt) throw SpanError("star_program: colour out of range");

  // decode colour codes back to (leg, depth); (-1,0) is the root
  std::vector<std::pair<int, int>> decode(vt, {-1, 0});
  for (int j = 0; j < d; ++j)
    for (int i = 1; i <= shape.legs[j]; ++i)
      decode[star_colour(shape, j, i)] = {j, i};

  // basis layout: s, t, then per root-coloured vertex h^0..h^d, per other
  // coloured vertex e^1 (and e^2 unless the colour is a leg end)
  int dim = 2;
  std::vector<int> hbase(n, -1), ebase(n, -1);
  for (int u = 0; u < n; ++u) {
    auto [j, i] = decode[colouring[u]];
    if (j < 0) {
      hbase[u] = dim;
      dim += d + 1;
    } else {
      ebase[u] = dim;
      dim += (i == shape.legs[j]) ? 1 : 2;
    }
  }
  auto hidx = [&](int u, int b) { return hbase[u] + b; };
  auto eidx = [&](int u, int which) {
    auto [j, i] = decode[colouring[u]];
    return ebase[u] + ((i == shape.legs[j]) ? 0 : which - 1);
  };

  SpanProgram p;
  p.dim = dim;
  p.nvars = n * (n - 1) / 2;
  p.target = Vec::Zero(dim);
  p.target(1) = 1.0;   // t
  p.target(0) = -1.0;  // s
  for (int u = 0; u < n; ++u) {
    if (hbase[u] < 0) continue;
    Vec f0 = Vec::Zero(dim);
    f0(hidx(u, 0)) = 1.0;
    f0(0) = -1.0;
    p.free_vectors.push_back(f0);
    Vec f1 = Vec::Zero(dim);
    f1(1) = 1.0;
    f1(hidx(u, d)) = -1.0;
    p.free_vectors.push_back(f1);
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      auto [ju, iu] = decode[colouring[u]];
      auto [jv, iv] = decode[colouring[v]];
      if (ju < 0 && jv >= 0 && iv == 1) {
        // root to first leg vertex: one four-term vector pairing the two
        // traversals of the edge
        // legs are 1-based in the h-ladder: this edge pairs h^{jv} -> e^1
        // on the way out with e^2 -> h^{jv+1} on the way back
        Vec w = Vec::Zero(dim);
        w(eidx(v, 1)) += 1.0;
        w(hidx(u, jv)) -= 1.0;
        w(hidx(u, jv + 1)) += 1.0;
        w(eidx(v, 2)) -= 1.0;
        p.inputs.push_back(w);
        p.labels.push_back({InputLabel::Var, pair_index(n, u, v), 1});
      } else if (ju >= 0 && jv >= 0 && ju == jv && iv == iu + 1) {
        int lbl = pair_index(n, u, v);
        Vec w1 = Vec::Zero(dim);
        w1(eidx(v, 1)) = 1.0;
        w1(eidx(u, 1)) -= 1.0;
        p.inputs.push_back(w1);
        p.labels.push_back({InputLabel::Var, lbl, 1});
        Vec w2 = Vec::Zero(dim);
        w2(eidx(u, 2)) = 1.0;
        w2(eidx(v, 2)) -= 1.0;
        p.inputs.push_back(w2);
        p.labels.push_back({InputLabel::Var, lbl, 1});
      }
    }
  return p;
}

SpanProgram triangle_forest_program(int n, const std::vector<int>& colouring) {
  if ((int)colouring.size() != n)
    throw SpanError("triangle_forest_program: colouring size");
  for (int c : colouring)
    if (c < 0 || c > 2) throw SpanError("triangle_forest_program: colour range");
  int dim = 2;
  std::vector<int> base(n), extra(n, -1);
  for (int u = 0; u < n; ++u) {
    base[u] = dim++;
    if (colouring[u] == 0) extra[u] = dim++;
  }
  SpanProgram p;
  p.dim = dim;
  p.nvars = n * (n - 1) / 2;
  p.target = Vec::Zero(dim);
  p.target(1) = 1.0;
  p.target(0) = -1.0;
  for (int u = 0; u < n; ++u) {
    if (colouring[u] != 0) continue;
    Vec f = Vec::Zero(dim);
    f(1) = 1.0;
    f(0) = -1.0;
    f(base[u]) = 1.0;   // e_u^0
    f(extra[u]) = -1.0; // e_u^3
    p.free_vectors.push_back(f);
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      int j = colouring[u];
      if (colouring[v] != (j + 1) % 3) continue;
      Vec w = Vec::Zero(dim);
      // going colour 2 -> 0 lands on the split copy e_v^3
      w(j == 2 ? extra[v] : base[v]) = 1.0;
      w(base[u]) -= 1.0;
      p.inputs.push_back(w);
      p.labels.push_back({InputLabel::Var, pair_index(n, u, v), 1});
    }
  return p;
}

// closed walk through every edge of a connected graph once per direction
static std::vector<int> double_cover_walk(const Adj& t) {
  int k = (int)t.size();
  std::vector<std::vector<int>> unused(k);
  for (int u = 0; u < k; ++u)
    for (int v = 0; v < k; ++v)
      if (t[u][v]) unused[u].push_back(v);
  for (auto& lst : unused) std::sort(lst.rbegin(), lst.rend());
  // Hierholzer on the arc set (each undirected edge gives two arcs)
  std::vector<int> stack = {0}, walk;
  while (!stack.empty()) {
    int u = stack.back();
    if (unused[u].empty()) {
      walk.push_back(u);
      stack.pop_back();
    } else {
      int v = unused[u].back();
      unused[u].pop_back();
      stack.push_back(v);
    }
  }
  std::reverse(walk.begin(), walk.end());
  for (const auto& lst : unused)
    if (!lst.empty()) throw SpanError("traversal_program: pattern not connected");
  return walk;
}

SpanProgram traversal_program(const Adj& pattern, int n,
                              const std::vector<int>& colouring) {
  int k = (int)pattern.size();
  if ((int)colouring.size() != n)
    throw SpanError("traversal_program: colouring size");
  for (int c : colouring)
    if (c < 0 || c >= k) throw SpanError("traversal_program: colour range");
  auto walk = double_cover_walk(pattern);
  int steps = (int)walk.size() - 1;  // = 2 * edge count

  // basis: s, t, then e_u^(p) for each walk position p and u of colour walk[p]
  int dim = 2;
  std::vector<std::vector<int>> pos_base(steps + 1);
  for (int p = 0; p <= steps; ++p) {
    pos_base[p].assign(n, -1);
    for (int u = 0; u < n; ++u)
      if (colouring[u] == walk[p]) pos_base[p][u] = dim++;
  }
  SpanProgram prog;
  prog.dim = dim;
  prog.nvars = n * (n - 1) / 2;
  prog.target = Vec::Zero(dim);
  prog.target(1) = 1.0;
  prog.target(0) = -1.0;
  for (int u = 0; u < n; ++u) {
    if (colouring[u] != walk[0]) continue;
    Vec f = Vec::Zero(dim);
    f(1) = 1.0;
    f(0) = -1.0;
    f(pos_base[0][u]) = 1.0;
    f(pos_base[steps][u]) = -1.0;
    prog.free_vectors.push_back(f);
  }
  // the two traversal steps of each pattern edge
  std::map<std::pair<int, int>, std::pair<int, int>> edge_steps;
  for (int p = 0; p < steps; ++p) {
    int a = walk[p], b = walk[p + 1];
    if (a < b)
      edge_steps[{a, b}].first = p;
    else
      edge_steps[{b, a}].second = p;
  }
  for (const auto& [edge, st] : edge_steps) {
    auto [a, b] = edge;
    auto [pf, pr] = st;  // forward a->b at pf, reverse b->a at pr
    for (int u = 0; u < n; ++u) {
      if (colouring[u] != a) continue;
      for (int v = 0; v < n; ++v) {
        if (v == u || colouring[v] != b) continue;
        Vec w = Vec::Zero(dim);
        w(pos_base[pf + 1][v]) += 1.0;
        w(pos_base[pf][u]) -= 1.0;
        w(pos_base[pr + 1][u]) += 1.0;
        w(pos_base[pr][v]) -= 1.0;
        prog.inputs.push_back(w);
        prog.labels.push_back({InputLabel::Var, pair_index(n, u, v), 1});
      }
    }
  }
  return prog;
}

Adj skew_product(const SignedGraph& t) {
  Adj out(2 * t.n, std::vector<int>(2 * t.n, 0));
  for (const auto& [u, v, s] : t.edges) {
    if (u < 0 || v < 0 || u >= t.n || v >= t.n || u == v || (s != 0 && s != 1))
      throw SpanError("skew_product: bad signed edge");
    for (int i = 0; i < 2; ++i) {
      int a = i * t.n + u;
      int b = ((i + s) % 2) * t.n + v;
      out[a][b] = out[b][a] = 1;
    }
  }
  return out;
}

// ---- oracles ----------------------------------------------------------------

bool graphs_connected(const Adj& g, int s, int t) {
  int n = (int)g.size();
  std::vector<char> seen(n, 0);
  std::deque<int> work = {s};
  seen[s] = 1;
  while (!work.empty()) {
    int u = work.front();
    work.pop_front();
    if (u == t) return true;
    for (int v = 0; v < n; ++v)
      if (g[u][v] && !seen[v]) {
        seen[v] = 1;
        work.push_back(v);
      }
  }
  return false;
}

namespace {

struct MinorSearch {
  int n = 0, k = 0;
  bool symmetric_pattern = false;  // complete pattern: branch labels interchangeable
  std::vector<uint32_t> nbr;       // neighbour masks of g
  std::vector<std::pair<int, int>> pedges;
  std::vector<uint32_t> sets;

  bool connected(uint32_t set) const {
    if (!set) return false;
    uint32_t frontier = set & (~set + 1), seen = frontier;
    while (frontier) {
      uint32_t next = 0;
      for (int u = 0; u < n; ++u)
        if (frontier >> u & 1) next |= nbr[u] & set;
      next &= ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == set;
  }

  bool feasible() const {
    for (uint32_t s : sets)
      if (!s || !connected(s)) return false;
    for (auto [a, b] : pedges) {
      uint32_t reach = 0;
      for (int u = 0; u < n; ++u)
        if (sets[a] >> u & 1) reach |= nbr[u];
      if (!(reach & sets[b])) return false;
    }
    return true;
  }

  bool rec(int v, int used) {
    if (v == n) return used == k && feasible();
    if (rec(v + 1, used)) return true;  // v unused
    int limit = symmetric_pattern ? std::min(used + 1, k) : k;
    for (int c = 0; c < limit; ++c) {
      sets[c] |= 1u << v;
      bool ok = rec(v + 1, std::max(used, c + 1));
      sets[c] &= ~(1u << v);
      if (ok) return true;
    }
    return false;
  }
};

}  // namespace

bool has_minor(const Adj& g, const Adj& pattern) {
  MinorSearch ms;
  ms.n = (int)g.size();
  ms.k = (int)pattern.size();
  if (ms.n > 31) throw SpanError("has_minor: graph too large");
  ms.nbr.assign(ms.n, 0);
  for (int u = 0; u < ms.n; ++u)
    for (int v = 0; v < ms.n; ++v)
      if (g[u][v]) ms.nbr[u] |= 1u << v;
  ms.symmetric_pattern = true;
  for (int a = 0; a < ms.k; ++a)
    for (int b = 0; b < ms.k; ++b)
      if (a != b && !pattern[a][b]) ms.symmetric_pattern = false;
  for (int a = 0; a < ms.k; ++a)
    for (int b = a + 1; b < ms.k; ++b)
      if (pattern[a][b]) ms.pedges.push_back({a, b});
  ms.sets.assign(ms.k, 0);
  return ms.rec(0, 0);
}

static bool subgraph_rec(const Adj& g, const Adj& pattern,
                         const std::vector<std::vector<int>>& cand,
                         std::vector<int>& map, int v) {
  int k = (int)pattern.size();
  if (v == k) return true;
  for (int u : cand[v]) {
    bool ok = true;
    for (int w = 0; w < v && ok; ++w) {
      if (map[w] == u) ok = false;
      if (ok && pattern[v][w] && !g[u][map[w]]) ok = false;
    }
    if (!ok) continue;
    map[v] = u;
    if (subgraph_rec(g, pattern, cand, map, v + 1)) return true;
  }
  return false;
}

bool has_subgraph(const Adj& g, const Adj& pattern) {
  int n = (int)g.size(), k = (int)pattern.size();
  std::vector<std::vector<int>> cand(k);
  for (int v = 0; v < k; ++v)
    for (int u = 0; u < n; ++u) cand[v].push_back(u);
  std::vector<int> map(k, -1);
  return subgraph_rec(g, pattern, cand, map, 0);
}

bool has_coloured_subgraph(const Adj& g, const Adj& pattern,
                           const std::vector<int>& colouring) {
  int n = (int)g.size(), k = (int)pattern.size();
  if ((int)colouring.size() != n)
    throw SpanError("has_coloured_subgraph: colouring size");
  std::vector<std::vector<int>> cand(k);
  for (int u = 0; u < n; ++u) {
    if (colouring[u] < 0 || colouring[u] >= k)
      throw SpanError("has_coloured_subgraph: colour range");
    cand[colouring[u]].push_back(u);
  }
  std::vector<int> map(k, -1);
  return subgraph_rec(g, pattern, cand, map, 0);
}

Adj star_adjacency(const StarShape& shape) {
  int vt = shape.vertex_count();
  Adj g(vt, std::vector<int>(vt, 0));
  for (int j = 0; j < (int)shape.legs.size(); ++j)
    for (int i = 1; i <= shape.legs[j]; ++i) {
      int cur = star_colour(shape, j, i);
      int prev = (i == 1) ? 0 : star_colour(shape, j, i - 1);
      g[cur][prev] = g[prev][cur] = 1;
    }
  return g;
}

Adj complete_graph(int n) {
  Adj g(n, std::vector<int>(n, 1));
  for (int i = 0; i < n; ++i) g[i][i] = 0;
  return g;
}

// ---- serialization ----------------------------------------------------------

std::string to_json(const SpanProgram& p) {
  nlohmann::json j;
  j["dim"] = p.dim;
  j["nvars"] = p.nvars;
  j["target"] = std::vector<double>(p.target.data(), p.target.data() + p.target.size());
  auto vec_to_json = [](const Vec& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  for (size_t i = 0; i < p.inputs.size(); ++i) {
    nlohmann::json e;
    e["vector"] = vec_to_json(p.inputs[i]);
    const auto& l = p.labels[i];
    if (l.kind == InputLabel::Always)
      e["label"] = "always";
    else if (l.kind == InputLabel::Never)
      e["label"] = "never";
    else
      e["label"] = {{"j", l.j}, {"b", l.b}};
    j["inputs"].push_back(e);
  }
  j["free"] = nlohmann::json::array();
  for (const auto& v : p.free_vectors) j["free"].push_back(vec_to_json(v));
  return j.dump(2);
}

SpanProgram span_program_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SpanProgram p;
  p.dim = j.at("dim").get<int>();
  p.nvars = j.at("nvars").get<int>();
  auto vec_from = [&](const nlohmann::json& a) {
    Vec v(a.size());
    for (size_t i = 0; i < a.size(); ++i) v((int)i) = a[i].get<double>();
    return v;
  };
  p.target = vec_from(j.at("target"));
  if (j.contains("inputs"))
    for (const auto& e : j["inputs"]) {
      p.inputs.push_back(vec_from(e.at("vector")));
      InputLabel l;
      if (e.at("label").is_string()) {
        l.kind = e["label"] == "always" ? InputLabel::Always : InputLabel::Never;
      } else {
        l.kind = InputLabel::Var;
        l.j = e["label"].at("j").get<int>();
        l.b = e["label"].at("b").get<int>();
      }
      p.labels.push_back(l);
    }
  if (j.contains("free"))
    for (const auto& e : j["free"]) p.free_vectors.push_back(vec_from(e));
  p.validate();
  return p;
}

}  // namespace qwb
