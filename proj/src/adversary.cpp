#include "qwb/adversary.hpp"

#include <bit>
#include <cmath>
#include <set>

namespace qwb {

AdversaryMatrix AdversaryMatrix::for_function(const PartialFunction& f) {
  AdversaryMatrix g;
  g.f = f;
  g.rows = f.preimage(1);
  g.cols = f.preimage(0);
  g.m = Mat::Zero((int)g.rows.size(), (int)g.cols.size());
  return g;
}

bool OrthogonalArray::check_invariant() const {
  if (rows.empty()) return false;
  long expect = (long)rows.size();
  for (int i = 0; i < k - 1; ++i) {
    if (expect % q) return false;
    expect /= q;
  }
  // for every position i and fixing of the rest, exactly `expect` completions
  for (int i = 0; i < k; ++i) {
    std::map<Input, int> counts;
    for (const auto& r : rows) {
      Input rest;
      for (int t = 0; t < k; ++t)
        if (t != i) rest.push_back(r[t]);
      ++counts[rest];
    }
    for (auto& [rest, c] : counts)
      if (c != expect) return false;
    // all fixings must be covered
    long fixings = 1;
    for (int t = 0; t < k - 1; ++t) fixings *= q;
    if ((long)counts.size() != fixings) return false;
  }
  return true;
}

DeltaMask delta_mask(const PartialFunction& f, int j) {
  if (j < 0 || j >= f.n) throw AdversaryError("delta_mask: bad index");
  auto rows = f.preimage(1), cols = f.preimage(0);
  DeltaMask d;
  d.j = j;
  d.m = Mat::Zero((int)rows.size(), (int)cols.size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c)
      d.m(r, c) = f.domain[rows[r]][j] != f.domain[cols[c]][j] ? 1.0 : 0.0;
  return d;
}

AdvRatioReport adv_ratio(const AdversaryMatrix& g) {
  AdvRatioReport rep;
  rep.norm = spectral_norm(g.m);
  if (rep.norm <= 0.0) throw AdversaryError("adv_ratio: zero adversary matrix");
  double worst = 0.0;
  for (int j = 0; j < g.f.n; ++j) {
    Mat masked = g.m;
    for (size_t r = 0; r < g.rows.size(); ++r)
      for (size_t c = 0; c < g.cols.size(); ++c)
        if (g.f.domain[g.rows[r]][j] == g.f.domain[g.cols[c]][j]) masked(r, c) = 0.0;
    double nj = spectral_norm(masked);
    rep.masked_norms.push_back(nj);
    worst = std::max(worst, nj);
  }
  if (worst <= 1e-14 * std::max(1.0, rep.norm)) {
    rep.infinite = true;
    rep.ratio = std::numeric_limits<double>::infinity();
  } else {
    rep.ratio = rep.norm / worst;
  }
  return rep;
}

AdversaryMatrix relation_adversary(
    const PartialFunction& f, const std::vector<int>& xset,
    const std::vector<int>& yset,
    const std::function<bool(const Input&, const Input&)>& rel) {
  AdversaryMatrix g = AdversaryMatrix::for_function(f);
  std::set<int> xs(xset.begin(), xset.end()), ys(yset.begin(), yset.end());
  for (int xi : xset)
    if (f.values[xi] != 1) throw AdversaryError("relation_adversary: X not positive");
  for (int yi : yset)
    if (f.values[yi] != 0) throw AdversaryError("relation_adversary: Y not negative");
  for (size_t r = 0; r < g.rows.size(); ++r) {
    if (!xs.count(g.rows[r])) continue;
    for (size_t c = 0; c < g.cols.size(); ++c) {
      if (!ys.count(g.cols[c])) continue;
      if (rel(f.domain[g.rows[r]], f.domain[g.cols[c]])) g.m(r, c) = 1.0;
    }
  }
  return g;
}

double mathias_bound(const Mat& a, const Mat& b, const Mat& c) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != c.rows() ||
      a.cols() != c.cols())
    throw AdversaryError("mathias_bound: shape mismatch");
  if ((a - b.cwiseProduct(c)).cwiseAbs().maxCoeff() > 1e-12)
    throw AdversaryError("mathias_bound: a != b .* c");
  Vec rb = b.rowwise().norm();
  Vec cc = c.colwise().norm();
  double best = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0.0) best = std::max(best, rb(i) * cc(j));
  return best;
}

std::pair<double, double> hadamard_delta_check(const Mat& a, const DeltaMask& mask) {
  if (a.rows() != mask.m.rows() || a.cols() != mask.m.cols())
    throw AdversaryError("hadamard_delta_check: shape mismatch");
  return {spectral_norm(Mat(a.cwiseProduct(mask.m))), 2.0 * spectral_norm(a)};
}

OrthogonalArray modular_sum_array(int k, int q) {
  if (k < 1 || q < 2) throw AdversaryError("modular_sum_array: bad params");
  OrthogonalArray oa;
  oa.k = k;
  oa.q = q;
  for (auto& t : all_inputs(k, q)) {
    long s = 0;
    for (int v : t) s += v;
    if (s % q == 0) oa.rows.push_back(t);
  }
  return oa;
}

AdversaryMatrix monotone4_gamma(double a, double b, double c, double d) {
  auto f = make_named("ambainis", {});
  AdversaryMatrix g = AdversaryMatrix::for_function(f);
  const char* rowlab[8] = {"0000", "0001", "0011", "0111",
                           "1111", "1110", "1100", "1000"};
  const char* collab[8] = {"0010", "0101", "1011", "0110",
                           "1101", "1010", "0100", "1001"};
  // symmetric layout pattern; 0=a,1=b,2=c,3=d
  const int pat[8][8] = {
      {0, 2, 3, 1, 3, 2, 0, 1}, {1, 0, 2, 3, 1, 3, 2, 0},
      {0, 1, 0, 2, 3, 1, 3, 2}, {2, 0, 1, 0, 2, 3, 1, 3},
      {3, 2, 0, 1, 0, 2, 3, 1}, {1, 3, 2, 0, 1, 0, 2, 3},
      {3, 1, 3, 2, 0, 1, 0, 2}, {2, 3, 1, 3, 2, 0, 1, 0}};
  double w[4] = {a, b, c, d};
  auto parse = [](const char* s) {
    Input z;
    for (int i = 0; i < 4; ++i) z.push_back(s[i] - '0');
    return z;
  };
  auto pos_of = [&](const std::vector<int>& layout, const Input& z) {
    for (size_t i = 0; i < layout.size(); ++i)
      if (f.domain[layout[i]] == z) return (int)i;
    throw AdversaryError("monotone4_gamma: label not found");
  };
  for (int r = 0; r < 8; ++r)
    for (int cdx = 0; cdx < 8; ++cdx)
      g.m(pos_of(g.rows, parse(rowlab[r])), pos_of(g.cols, parse(collab[cdx]))) =
          w[pat[r][cdx]];
  return g;
}

PartialFunction sum_problem_function(const CertificateStructure& cert, int q) {
  PartialFunction f;
  f.n = cert.n;
  f.q = q;
  for (auto& z : all_inputs(cert.n, q)) {
    bool pos = false;
    for (auto& gens : cert.members) {
      long s = 0;
      for (int j = 0; j < cert.n; ++j)
        if (gens[0] >> j & 1) s += z[j];
      if (s % q == 0) {
        pos = true;
        break;
      }
    }
    f.domain.push_back(z);
    f.values.push_back(pos ? 1 : 0);
  }
  return f;
}

BoundedlyGeneratedResult boundedly_generated_gamma(const CertificateStructure& cert,
                                                   int q,
                                                   const DualLGCertificate& alpha) {
  int n = cert.n;
  double qn = std::pow((double)q, n);
  if (qn > 4096.0) throw AdversaryError("boundedly_generated_gamma: dimension overflow");
  if (q < 2 * (int)cert.members.size())
    throw AdversaryError("boundedly_generated_gamma: need q >= 2|cert|");
  for (auto& gens : cert.members)
    if (gens.size() != 1)
      throw AdversaryError("boundedly_generated_gamma: generators must be singletons");
  auto rep = check_dual_certificate(cert, alpha);  // also checks the zero pattern
  if (rep.max_constraint > 1.0 + 1e-9)
    throw AdversaryError("boundedly_generated_gamma: alpha infeasible (constraint > 1)");

  PartialFunction f = sum_problem_function(cert, q);
  BoundedlyGeneratedResult out;
  out.gamma.f = f;
  out.gamma.cols = f.preimage(0);
  out.alpha_objective = rep.objective;

  // rows: (x, M) pairs with x in X_M, stacked per member
  std::vector<std::vector<int>> xm((size_t)cert.members.size());
  for (size_t m = 0; m < cert.members.size(); ++m) {
    uint32_t gen = cert.members[m][0];
    for (size_t i = 0; i < f.domain.size(); ++i) {
      long s = 0;
      for (int j = 0; j < n; ++j)
        if (gen >> j & 1) s += f.domain[i][j];
      if (s % q == 0) {
        xm[m].push_back((int)i);
        out.row_labels.push_back({(int)i, (int)m});
      }
    }
  }
  int nrows = (int)out.row_labels.size();
  int ncols = (int)out.gamma.cols.size();

  // entry of E_S between two full inputs
  auto e_entry = [&](uint32_t s, const Input& x, const Input& y) {
    double v = 1.0;
    for (int j = 0; j < n; ++j) {
      if (s >> j & 1)
        v *= (x[j] == y[j]) ? (1.0 - 1.0 / q) : (-1.0 / q);
      else
        v *= 1.0 / q;
    }
    return v;
  };

  // sparse alpha support per member
  std::vector<std::vector<std::pair<uint32_t, double>>> support(cert.members.size());
  for (auto& [key, v] : alpha.alpha)
    if (v != 0.0) support[key.second].push_back({key.first, v});

  double scale = std::sqrt((double)q);  // sqrt(q^n/|X_M|) with |X_M| = q^{n-1}
  out.gamma.m = Mat::Zero(nrows, ncols);
  out.gamma_prime.assign(n, Mat::Zero(nrows, ncols));
  for (int r = 0; r < nrows; ++r) {
    auto [xi, m] = out.row_labels[r];
    const Input& x = f.domain[xi];
    for (int c = 0; c < ncols; ++c) {
      const Input& y = f.domain[out.gamma.cols[c]];
      double g = 0.0;
      for (auto& [s, av] : support[m]) g += av * e_entry(s, x, y);
      out.gamma.m(r, c) = scale * g;
      for (int j = 0; j < n; ++j) {
        // substitute E_1 -> -E_0 at position j: coefficients become
        // beta_S = alpha_S - alpha_{S + j} over S omitting j
        double gp = 0.0;
        for (uint32_t s = 0; s < (1u << n); ++s) {
          if (s >> j & 1) continue;
          double beta = alpha.value(s, m) - alpha.value(s | (1u << j), m);
          if (beta != 0.0) gp += beta * e_entry(s, x, y);
        }
        out.gamma_prime[j](r, c) = scale * gp;
      }
    }
  }
  out.gamma.rows.clear();  // stacked layout; use row_labels instead
  return out;
}

Mat stacked_delta_mask(const BoundedlyGeneratedResult& r, int j) {
  int nrows = (int)r.row_labels.size(), ncols = (int)r.gamma.cols.size();
  Mat d = Mat::Zero(nrows, ncols);
  for (int a = 0; a < nrows; ++a)
    for (int c = 0; c < ncols; ++c)
      d(a, c) = r.gamma.f.domain[r.row_labels[a].first][j] !=
                        r.gamma.f.domain[r.gamma.cols[c]][j]
                    ? 1.0
                    : 0.0;
  return d;
}

}  // namespace qwb
