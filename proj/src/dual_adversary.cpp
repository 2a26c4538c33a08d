#include "qwb/dual_adversary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace qwb {

void DualAdversarySolution::validate() const {
  f.validate();
  if ((int)factors.size() != f.n)
    throw DualAdversaryError("validate: need one factor block per variable");
  for (const auto& m : factors)
    if (m.cols() != (int)f.domain.size())
      throw DualAdversaryError("validate: factor column count");
}

Mat DualAdversarySolution::gram(int j) const {
  if (j < 0 || j >= (int)factors.size())
    throw DualAdversaryError("gram: bad variable");
  return factors[j].transpose() * factors[j];
}

FeasibilityReport check_feasible(const DualAdversarySolution& s, double tol) {
  s.validate();
  auto xs = s.f.preimage(1), ys = s.f.preimage(0);
  FeasibilityReport rep;
  for (int xi : xs)
    for (int yi : ys) {
      const Input& x = s.f.domain[xi];
      const Input& y = s.f.domain[yi];
      double sum = 0.0;
      for (int j = 0; j < s.f.n; ++j)
        if (x[j] != y[j]) sum += s.factors[j].col(xi).dot(s.factors[j].col(yi));
      double v = s.relaxed ? std::max(0.0, 1.0 - sum) : std::abs(sum - 1.0);
      rep.violation = std::max(rep.violation, v);
    }
  rep.feasible = rep.violation <= tol;
  return rep;
}

double objective(const DualAdversarySolution& s) {
  s.validate();
  double best = 0.0;
  for (size_t z = 0; z < s.f.domain.size(); ++z) {
    double sum = 0.0;
    for (const auto& m : s.factors) sum += m.col((int)z).squaredNorm();
    best = std::max(best, sum);
  }
  return best;
}

// ---- exact threshold construction ------------------------------------------

// positive inputs keep their first k ones; negative inputs keep their first
// n-k+1 zeroes (the rest become ones)
static Input primed(const Input& z, int k, int n, bool positive) {
  Input out = z;
  int seen = 0;
  for (int i = 0; i < n; ++i) {
    if (positive) {
      if (out[i] == 1 && ++seen > k) out[i] = 0;
    } else {
      if (out[i] == 0 && ++seen > n - k + 1) out[i] = 1;
    }
  }
  return out;
}

DualAdversarySolution threshold_dual(int k, int n) {
  if (k < 1 || k > n || n > 10) throw DualAdversaryError("threshold_dual: bad k, n");
  DualAdversarySolution s;
  s.f = make_named("threshold", {{"k", k}, {"n", n}});
  int nd = (int)s.f.domain.size();
  std::vector<Input> prim(nd);
  for (int z = 0; z < nd; ++z)
    prim[z] = primed(s.f.domain[z], k, n, s.f.values[z] == 1);

  double dpos = std::sqrt((double)(n - k + 1) / k);
  double dneg = std::sqrt((double)k / (n - k + 1));
  std::vector<Mat> xmats(n);
  for (int j = 0; j < n; ++j) {
    // inputs participating in X_j
    std::vector<int> used;
    for (int z = 0; z < nd; ++z) {
      bool pos = s.f.values[z] == 1;
      if (prim[z][j] == (pos ? 1 : 0)) used.push_back(z);
    }
    int m = (int)used.size();
    Mat a(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        int common = 0;
        for (int i = 0; i < n; ++i)
          if (i != j && prim[used[r]][i] == 1 && prim[used[c]][i] == 1) ++common;
        a(r, c) = (double)common;
      }
    // entrywise geometric series for 1/(k - a)
    Mat b = Mat::Zero(m, m);
    Mat term = Mat::Constant(m, m, 1.0 / k);
    double maxa = m ? a.maxCoeff() : 0.0;
    for (int t = 0; t < 200000; ++t) {
      b += term;
      double tail = maxa > 0.0 ? term.maxCoeff() * maxa / (k - maxa) : 0.0;
      if (tail < 1e-14) break;
      term = term.cwiseProduct(a) / k;
    }
    Mat x = Mat::Zero(nd, nd);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) {
        bool pr = s.f.values[used[r]] == 1, pc = s.f.values[used[c]] == 1;
        double d = pr == pc ? (pr ? dpos : dneg) : 1.0;
        x(used[r], used[c]) = b(r, c) * d;
      }
    xmats[j] = x;
  }

  // absorb the series truncation into the cross entries so that the
  // constraint sums are exactly one
  for (int xi = 0; xi < nd; ++xi) {
    if (s.f.values[xi] != 1) continue;
    for (int yi = 0; yi < nd; ++yi) {
      if (s.f.values[yi] != 0) continue;
      double sum = 0.0;
      for (int j = 0; j < n; ++j)
        if (s.f.domain[xi][j] != s.f.domain[yi][j]) sum += xmats[j](xi, yi);
      if (sum < 0.5)
        throw DualAdversaryError("threshold_dual: degenerate constraint sum");
      for (int j = 0; j < n; ++j) {
        xmats[j](xi, yi) /= sum;
        xmats[j](yi, xi) /= sum;
      }
    }
  }
  for (int j = 0; j < n; ++j) s.factors.push_back(psd_factor(xmats[j]));
  return s;
}

DualAdversarySolution maj3_solution() {
  DualAdversarySolution full = threshold_dual(2, 3);
  // restrict to the six inputs of Hamming weight one and two
  std::vector<int> keep;
  for (size_t z = 0; z < full.f.domain.size(); ++z) {
    int w = 0;
    for (int v : full.f.domain[z]) w += v;
    if (w == 1 || w == 2) keep.push_back((int)z);
  }
  DualAdversarySolution s;
  s.f.n = full.f.n;
  s.f.q = 2;
  for (int z : keep) {
    s.f.domain.push_back(full.f.domain[z]);
    s.f.values.push_back(full.f.values[z]);
  }
  for (const auto& m : full.factors) {
    Mat r(m.rows(), (int)keep.size());
    for (size_t c = 0; c < keep.size(); ++c) r.col((int)c) = m.col(keep[c]);
    s.factors.push_back(r);
  }
  return s;
}

// ---- barrier solutions ------------------------------------------------------

// smallest-support certificate of z, as a variable mask
static uint32_t minimal_certificate(const PartialFunction& f, int zi) {
  if (f.n > 20) throw DualAdversaryError("minimal_certificate: n too large");
  const Input& z = f.domain[zi];
  for (int size = 0; size <= f.n; ++size)
    for (uint32_t mask = 0; mask < (1u << f.n); ++mask) {
      int pc = 0;
      for (int i = 0; i < f.n; ++i) pc += mask >> i & 1;
      if (pc != size) continue;
      auto a = Assignment::restrict_to(z, mask);
      bool cert = true;
      for (size_t w = 0; w < f.domain.size() && cert; ++w)
        if (a.consistent_with(f.domain[w]) && f.values[w] != f.values[zi])
          cert = false;
      if (cert) return mask;
    }
  throw DualAdversaryError("minimal_certificate: none found");
}

DualAdversarySolution barrier_solution(const PartialFunction& f, char variant,
                                       double eps) {
  f.validate();
  DualAdversarySolution s;
  s.f = f;
  s.relaxed = true;
  int nd = (int)f.domain.size();
  if (variant == 'c') {
    if (eps <= 0.0) throw DualAdversaryError("barrier_solution: eps required");
    int mind = f.n;
    for (int xi : f.preimage(1))
      for (int yi : f.preimage(0)) {
        int d = 0;
        for (int i = 0; i < f.n; ++i)
          d += f.domain[xi][i] != f.domain[yi][i];
        mind = std::min(mind, d);
      }
    if ((double)mind + 1e-9 < eps * f.n)
      throw DualAdversaryError("barrier_solution: distance promise violated");
    double v = 1.0 / std::sqrt(eps * f.n);
    for (int j = 0; j < f.n; ++j)
      s.factors.push_back(Mat::Constant(1, nd, v));
    return s;
  }
  if (variant != 'a' && variant != 'b')
    throw DualAdversaryError("barrier_solution: unknown variant");
  auto cc = certificate_complexity(f);
  if (variant == 'b') {
    long total = 1;
    for (int i = 0; i < f.n; ++i) total *= f.q;
    if ((long)f.domain.size() != total)
      throw DualAdversaryError("barrier_solution: variant b needs a total function");
  }
  // side with the smaller certificate complexity plays the "positive" role
  int bstar = cc.c1 <= cc.c0 ? 1 : 0;
  int cmin = std::min(cc.c0, cc.c1), cmax = std::max(cc.c0, cc.c1);
  double hi, lo;
  if (variant == 'a') {
    hi = std::pow((double)f.n / cmin, 0.25);
    lo = std::pow((double)cmin / f.n, 0.25);
  } else {
    hi = std::pow((double)cmax / cmin, 0.25);
    lo = std::pow((double)cmin / cmax, 0.25);
  }
  std::vector<uint32_t> certs(nd, 0);
  for (int z = 0; z < nd; ++z)
    if (f.values[z] == bstar || variant == 'b') certs[z] = minimal_certificate(f, z);
  for (int j = 0; j < f.n; ++j) {
    Mat m = Mat::Zero(1, nd);
    for (int z = 0; z < nd; ++z) {
      if (f.values[z] == bstar) {
        if (certs[z] >> j & 1) m(0, z) = hi;
      } else {
        if (variant == 'a' || (certs[z] >> j & 1)) m(0, z) = lo;
      }
    }
    s.factors.push_back(m);
  }
  return s;
}

// ---- graph collision --------------------------------------------------------

int independence_number(const Adj& g) {
  int n = (int)g.size();
  if (n > 20) throw DualAdversaryError("independence_number: graph too large");
  int best = 0;
  for (uint32_t set = 0; set < (1u << n); ++set) {
    bool ind = true;
    int size = 0;
    for (int u = 0; u < n && ind; ++u) {
      if (!(set >> u & 1)) continue;
      ++size;
      for (int v = u + 1; v < n && ind; ++v)
        if ((set >> v & 1) && g[u][v]) ind = false;
    }
    if (ind) best = std::max(best, size);
  }
  return best;
}

namespace {

struct CollisionArc {
  std::vector<int> loaded;  // set of loaded variables
  int j = 0;                // variable being loaded
  int stage = 0;            // 0 = I, 1 = II.1, 2 = II.2
  std::vector<int> randomness;  // stage I: the full set R
};

}  // namespace

DualAdversarySolution graph_collision_dual(const Adj& g, int r) {
  int n = (int)g.size();
  if (n < 2 || n > 8) throw DualAdversaryError("graph_collision_dual: vertex count");
  if (r < 0 || r > n - 2) throw DualAdversaryError("graph_collision_dual: bad r");
  int alpha = independence_number(g);
  DualAdversarySolution s;
  s.f = graph_collision_function(g, 2 * alpha);
  int nd = (int)s.f.domain.size();

  // the chosen 1-certificate of each positive input: first edge with both ends 1
  std::vector<std::pair<int, int>> cert(nd, {-1, -1});
  for (int z = 0; z < nd; ++z) {
    if (s.f.values[z] != 1) continue;
    for (int u = 0; u < n && cert[z].first < 0; ++u)
      for (int v = u + 1; v < n; ++v)
        if (g[u][v] && s.f.domain[z][u] == 1 && s.f.domain[z][v] == 1) {
          cert[z] = {u, v};
          u = n;
          break;
        }
  }

  double p = 1.0 / (double)binom(n - 2, r);
  double w0_i = std::sqrt((double)alpha / n);
  double w1_i = std::sqrt((double)n / alpha);
  double w1_ii1 = 1.0 / std::sqrt((double)n);
  double w1_ii2 = (r >= 1 ? std::sqrt((double)r) : 1.0) / n;

  // enumerate the subsets of each size once
  auto subsets_of_size = [&](int size) {
    std::vector<std::vector<int>> out;
    for (uint32_t m = 0; m < (1u << n); ++m) {
      std::vector<int> set;
      for (int i = 0; i < n; ++i)
        if (m >> i & 1) set.push_back(i);
      if ((int)set.size() == size) out.push_back(set);
    }
    return out;
  };
  auto v1 = subsets_of_size(r), v2 = subsets_of_size(r + 1);

  std::vector<std::vector<CollisionArc>> arcs(n);
  for (const auto& set : v1) {
    for (int l = 0; l < r; ++l) {
      CollisionArc a;
      a.loaded.assign(set.begin(), set.begin() + l);
      a.j = set[l];
      a.stage = 0;
      a.randomness = set;
      arcs[a.j].push_back(a);
    }
    for (int j = 0; j < n; ++j) {
      if (std::count(set.begin(), set.end(), j)) continue;
      CollisionArc a;
      a.loaded = set;
      a.j = j;
      a.stage = 1;
      arcs[j].push_back(a);
    }
  }
  for (const auto& set : v2)
    for (int j = 0; j < n; ++j) {
      if (std::count(set.begin(), set.end(), j)) continue;
      CollisionArc a;
      a.loaded = set;
      a.j = j;
      a.stage = 2;
      arcs[j].push_back(a);
    }

  auto contains = [](const std::vector<int>& set, int v) {
    return std::count(set.begin(), set.end(), v) > 0;
  };
  // does positive input z take this arc for some consistent randomness?
  auto satisfied = [&](const CollisionArc& a, int z) {
    auto [ca, cb] = cert[z];
    switch (a.stage) {
      case 0:
        return !contains(a.randomness, ca) && !contains(a.randomness, cb);
      case 1:
        return a.j == ca && !contains(a.loaded, ca) && !contains(a.loaded, cb);
      default:
        return a.j == cb && contains(a.loaded, ca) && !contains(a.loaded, cb);
    }
  };

  for (int j = 0; j < n; ++j) {
    std::vector<Vec> rows;
    for (const auto& a : arcs[j]) {
      double w1 = a.stage == 0 ? w1_i : (a.stage == 1 ? w1_ii1 : w1_ii2);
      int ls = (int)a.loaded.size();
      for (uint32_t am = 0; am < (1u << ls); ++am) {
        auto consistent = [&](int z) {
          for (int t = 0; t < ls; ++t)
            if (s.f.domain[z][a.loaded[t]] != (int)(am >> t & 1)) return false;
          return true;
        };
        Vec psi = Vec::Zero(nd), phi = Vec::Zero(nd);
        bool any_psi = false, any_phi = false;
        for (int z = 0; z < nd; ++z) {
          if (!consistent(z)) continue;
          int zj = s.f.domain[z][j];
          if (s.f.values[z] == 1) {
            if (!satisfied(a, z)) continue;
            if (zj == 1) {
              psi(z) = 1.0 / std::sqrt(w1);
              any_psi = true;
            } else if (a.stage == 0) {
              phi(z) = 1.0 / std::sqrt(w0_i);
              any_phi = true;
            }
          } else {
            if (zj == 0) {
              psi(z) = std::sqrt(w1);
              any_psi = true;
            } else if (a.stage == 0) {
              phi(z) = std::sqrt(w0_i);
              any_phi = true;
            }
          }
        }
        if (any_psi) rows.push_back(std::sqrt(p) * psi);
        if (any_phi) rows.push_back(std::sqrt(p) * phi);
      }
    }
    Mat m((int)rows.size(), nd);
    for (size_t t = 0; t < rows.size(); ++t) m.row((int)t) = rows[t].transpose();
    s.factors.push_back(m);
  }
  return s;
}

// ---- canonical span program round trip -------------------------------------

SpanProgram to_span_program(const DualAdversarySolution& s) {
  s.validate();
  if (s.f.q != 2)
    throw DualAdversaryError("to_span_program: boolean alphabet required");
  auto ys = s.f.preimage(0);
  auto xs = s.f.preimage(1);
  if (ys.empty()) throw DualAdversaryError("to_span_program: no negative inputs");
  SpanProgram p;
  p.dim = (int)ys.size();
  p.nvars = s.f.n;
  p.target = Vec::Ones(p.dim);
  // remember which (j, b, i) coordinates survive, to build the witnesses
  std::vector<std::vector<std::pair<int, int>>> kept(s.f.n);  // (b, i) per j
  for (int j = 0; j < s.f.n; ++j) {
    int d = (int)s.factors[j].rows();
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < d; ++i) {
        Vec v = Vec::Zero(p.dim);
        for (size_t row = 0; row < ys.size(); ++row)
          if (s.f.domain[ys[row]][j] != b)
            v((int)row) = s.factors[j](i, ys[row]);
        if (v.norm() <= 1e-12) continue;  // contributes nothing anywhere
        p.inputs.push_back(v);
        p.labels.push_back({InputLabel::Var, j, b});
        kept[j].push_back({b, i});
      }
  }
  for (int xi : xs) {
    WitnessRecord rec;
    rec.positive = true;
    rec.coeffs = Vec::Zero((int)p.inputs.size());
    int col = 0;
    for (int j = 0; j < s.f.n; ++j)
      for (auto [b, i] : kept[j]) {
        if (b == s.f.domain[xi][j]) rec.coeffs(col) = s.factors[j](i, xi);
        ++col;
      }
    double extra = 0.0;  // witness mass on dropped coordinates
    for (int j = 0; j < s.f.n; ++j) {
      int b = s.f.domain[xi][j];
      for (int i = 0; i < (int)s.factors[j].rows(); ++i) {
        bool k = std::count(kept[j].begin(), kept[j].end(), std::pair<int, int>{b, i});
        if (!k) extra += std::pow(s.factors[j](i, xi), 2);
      }
    }
    rec.size = rec.coeffs.squaredNorm() + extra;
    p.stored_witnesses[s.f.domain[xi]] = rec;
  }
  for (size_t row = 0; row < ys.size(); ++row) {
    WitnessRecord rec;
    rec.positive = false;
    rec.ambient = Vec::Zero(p.dim);
    rec.ambient((int)row) = 1.0;
    double sz = 0.0;
    for (int j = 0; j < s.f.n; ++j) sz += s.factors[j].col(ys[row]).squaredNorm();
    rec.size = sz;
    p.stored_witnesses[s.f.domain[ys[row]]] = rec;
  }
  return p;
}

DualAdversarySolution from_canonical_span_program(const SpanProgram& p,
                                                  const PartialFunction& f) {
  f.validate();
  if (f.q != 2)
    throw DualAdversaryError("from_canonical_span_program: boolean alphabet");
  std::vector<Input> ys;
  for (int yi : f.preimage(0)) ys.push_back(f.domain[yi]);
  if (!is_canonical(p, ys))
    throw DualAdversaryError("from_canonical_span_program: program not canonical");
  for (const auto& l : p.labels)
    if (l.kind != InputLabel::Var)
      throw DualAdversaryError("from_canonical_span_program: special labels");
  int nd = (int)f.domain.size();
  DualAdversarySolution s;
  s.f = f;
  for (int j = 0; j < f.n; ++j) {
    std::vector<int> block[2];
    for (size_t i = 0; i < p.labels.size(); ++i)
      if (p.labels[i].j == j) block[p.labels[i].b].push_back((int)i);
    int d = (int)block[0].size() + (int)block[1].size();
    Mat m = Mat::Zero(std::max(d, 1), nd);
    // negative inputs read their entries straight off the input vectors
    for (size_t row = 0; row < ys.size(); ++row) {
      int zi = *f.find(ys[row]);
      int b = 1 - ys[row][j];
      int off = b == 0 ? 0 : (int)block[0].size();
      for (size_t i = 0; i < block[b].size(); ++i)
        m(off + (int)i, zi) = p.inputs[block[b][i]]((int)row);
    }
    s.factors.push_back(m);
  }
  // positive inputs come from their witnesses, block by block
  for (int xi : f.preimage(1)) {
    const Input& x = f.domain[xi];
    Vec coeffs;
    auto it = p.stored_witnesses.find(x);
    if (it != p.stored_witnesses.end() && it->second.positive)
      coeffs = it->second.coeffs;
    else
      coeffs = positive_witness(p, x).coeffs;
    for (int j = 0; j < f.n; ++j) {
      std::vector<int> block[2];
      for (size_t i = 0; i < p.labels.size(); ++i)
        if (p.labels[i].j == j) block[p.labels[i].b].push_back((int)i);
      int b = x[j];
      int off = b == 0 ? 0 : (int)block[0].size();
      for (size_t i = 0; i < block[b].size(); ++i)
        s.factors[j](off + (int)i, xi) = coeffs(block[b][i]);
    }
  }
  return s;
}

std::string to_json(const DualAdversarySolution& s) {
  nlohmann::json j;
  j["n"] = s.f.n;
  j["q"] = s.f.q;
  uint64_t h = 1469598103934665603ull;
  for (const auto& z : s.f.domain)
    for (int v : z) {
      h ^= (uint64_t)(v + 1);
      h *= 1099511628211ull;
    }
  std::ostringstream hex;
  hex << std::hex << h;
  j["domain_hash"] = hex.str();
  j["relaxed"] = s.relaxed;
  for (const auto& m : s.factors) {
    nlohmann::json rows = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
      std::vector<double> row(m.cols());
      for (int c = 0; c < m.cols(); ++c) row[c] = m(r, c);
      rows.push_back(row);
    }
    j["factors"].push_back(rows);
  }
  return j.dump(2);
}

}  // namespace qwb
