#include "qwb/functions.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qwb {

using nlohmann::json;

std::vector<Input> all_inputs(int n, int q) {
  std::vector<Input> out;
  Input cur(n, 0);
  while (true) {
    out.push_back(cur);
    int i = n - 1;
    while (i >= 0 && cur[i] == q - 1) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void PartialFunction::validate() const {
  if (n < 0 || q < 2) throw FunctionError("bad n/q");
  if (domain.size() != values.size()) throw FunctionError("domain/values length mismatch");
  std::set<Input> seen;
  for (size_t i = 0; i < domain.size(); ++i) {
    if ((int)domain[i].size() != n) throw FunctionError("input arity mismatch");
    for (int s : domain[i])
      if (s < 0 || s >= q) throw FunctionError("symbol out of range");
    if (!seen.insert(domain[i]).second) throw FunctionError("duplicate domain entry");
    if (values[i] != 0 && values[i] != 1) throw FunctionError("value not 0/1");
  }
}

std::optional<int> PartialFunction::find(const Input& z) const {
  for (size_t i = 0; i < domain.size(); ++i)
    if (domain[i] == z) return (int)i;
  return std::nullopt;
}

int PartialFunction::value_of(const Input& z) const {
  auto i = find(z);
  if (!i) throw FunctionError("input not in domain");
  return values[*i];
}

std::vector<int> PartialFunction::preimage(int b) const {
  std::vector<int> out;
  for (size_t i = 0; i < values.size(); ++i)
    if (values[i] == b) out.push_back((int)i);
  return out;
}

Assignment Assignment::restrict_to(const Input& z, uint32_t mask) {
  Assignment a;
  for (int j = 0; j < (int)z.size(); ++j)
    if (mask >> j & 1) {
      a.support.push_back(j);
      a.values.push_back(z[j]);
    }
  return a;
}

bool Assignment::consistent_with(const Input& z) const {
  for (size_t i = 0; i < support.size(); ++i)
    if (z[support[i]] != values[i]) return false;
  return true;
}

bool CertificateStructure::member_contains(int m, uint32_t subset) const {
  for (uint32_t g : members[m])
    if ((g & subset) == g) return true;
  return false;
}

void CertificateStructure::validate() const {
  for (const auto& gens : members) {
    if (gens.empty()) throw FunctionError("empty member");
    for (uint32_t g : gens) {
      if (g >> n) throw FunctionError("generator out of range");
      for (uint32_t h : gens)
        if (g != h && (g & h) == g) throw FunctionError("generators not an antichain");
    }
  }
}

static int hamming(const Input& z) {
  return (int)std::count(z.begin(), z.end(), 1);
}

static PartialFunction total_boolean(int n, auto pred) {
  PartialFunction f;
  f.n = n;
  f.q = 2;
  for (auto& z : all_inputs(n, 2)) {
    f.domain.push_back(z);
    f.values.push_back(pred(z) ? 1 : 0);
  }
  return f;
}

static bool is_monotone_run(const Input& z) {
  bool up = true, down = true;
  for (size_t i = 1; i < z.size(); ++i) {
    if (z[i] < z[i - 1]) up = false;
    if (z[i] > z[i - 1]) down = false;
  }
  return up || down;
}

static bool has_k_equal(const Input& z, int k) {
  std::map<int, int> cnt;
  for (int s : z)
    if (++cnt[s] >= k) return true;
  return false;
}

static bool has_k_sum(const Input& z, int k, int q) {
  int n = (int)z.size();
  // enumerate k-subsets
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n) return false;
  while (true) {
    long s = 0;
    for (int i : idx) s += z[i];
    if (s % q == 0) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// multiplicity profile tests for the collision family
static bool is_one_to_one(const Input& z) {
  std::set<int> s(z.begin(), z.end());
  return s.size() == z.size();
}
static bool is_two_to_one(const Input& z) {
  std::map<int, int> cnt;
  for (int v : z) ++cnt[v];
  for (auto& [v, c] : cnt)
    if (c != 2) return false;
  return true;
}
static bool is_split_two_to_one(const Input& z) {
  // every value appears once in each half
  int half = (int)z.size() / 2;
  std::set<int> a(z.begin(), z.begin() + half), b(z.begin() + half, z.end());
  return (int)a.size() == half && (int)b.size() == half && a == b;
}
static bool is_shift_pairing(const Input& z) {
  int half = (int)z.size() / 2;
  if (!is_split_two_to_one(z)) return false;
  for (int d = 0; d < half; ++d) {
    bool ok = true;
    for (int i = 0; i < half && ok; ++i)
      ok = z[i] == z[half + (i + 1 + d) % half];
    if (ok) return true;
  }
  return false;
}

PartialFunction make_named(const std::string& family,
                           const std::map<std::string, long>& params) {
  auto get = [&](const std::string& k) -> long {
    auto it = params.find(k);
    if (it == params.end()) throw FunctionError("missing param: " + k);
    return it->second;
  };
  PartialFunction f;
  if (family == "threshold") {
    int k = (int)get("k"), n = (int)get("n");
    if (k < 1 || k > n) throw FunctionError("threshold: need 1 <= k <= n");
    return total_boolean(n, [k](const Input& z) { return hamming(z) >= k; });
  }
  if (family == "or") {
    int n = (int)get("n");
    return total_boolean(n, [](const Input& z) { return hamming(z) >= 1; });
  }
  if (family == "and") {
    int n = (int)get("n");
    return total_boolean(n, [n](const Input& z) { return hamming(z) == n; });
  }
  if (family == "identity1") {
    return total_boolean(1, [](const Input& z) { return z[0] == 1; });
  }
  if (family == "parity") {
    int n = (int)get("n");
    return total_boolean(n, [](const Input& z) { return hamming(z) % 2 == 1; });
  }
  if (family == "ambainis") {
    return total_boolean(4, is_monotone_run);
  }
  if (family == "kdist" || family == "element_distinctness") {
    int k = family == "kdist" ? (int)get("k") : 2;
    int n = (int)get("n"), q = (int)get("q");
    if (k < 2 || n < k) throw FunctionError("kdist: bad params");
    f.n = n;
    f.q = q;
    for (auto& z : all_inputs(n, q)) {
      f.domain.push_back(z);
      f.values.push_back(has_k_equal(z, k) ? 1 : 0);
    }
    return f;
  }
  if (family == "ksum") {
    int k = (int)get("k"), n = (int)get("n"), q = (int)get("q");
    if (k < 1 || n < k) throw FunctionError("ksum: bad params");
    f.n = n;
    f.q = q;
    for (auto& z : all_inputs(n, q)) {
      f.domain.push_back(z);
      f.values.push_back(has_k_sum(z, k, q) ? 1 : 0);
    }
    return f;
  }
  if (family == "collision" || family == "set_equality" || family == "hidden_shift") {
    int n = (int)get("n"), q = (int)get("q");
    if (n % 2) throw FunctionError("collision family: n must be even");
    f.n = n;
    f.q = q;
    for (auto& z : all_inputs(n, q)) {
      bool pos = family == "collision"     ? is_two_to_one(z)
                 : family == "set_equality" ? is_split_two_to_one(z)
                                            : is_shift_pairing(z);
      bool neg = is_one_to_one(z);
      if (pos) {
        f.domain.push_back(z);
        f.values.push_back(1);
      } else if (neg) {
        f.domain.push_back(z);
        f.values.push_back(0);
      }
    }
    return f;
  }
  if (family == "triangle") {
    int m = (int)get("m");
    int n = m * (m - 1) / 2;
    // variable index of pair (i,j), i<j, lexicographic
    auto vidx = [m](int i, int j) {
      int k = 0;
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
          if (a == i && b == j) return k;
          ++k;
        }
      return -1;
    };
    return total_boolean(n, [&, m](const Input& z) {
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          for (int c = b + 1; c < m; ++c)
            if (z[vidx(a, b)] && z[vidx(a, c)] && z[vidx(b, c)]) return true;
      return false;
    });
  }
  if (family == "promise_threshold") {
    int n = (int)get("n"), k = (int)get("k"), d = (int)get("d");
    if (k < 1 || d < 1 || k + d > n) throw FunctionError("promise_threshold: bad params");
    f.n = n;
    f.q = 2;
    for (auto& z : all_inputs(n, 2)) {
      int w = hamming(z);
      if (w <= k) {
        f.domain.push_back(z);
        f.values.push_back(0);
      } else if (w >= k + d) {
        f.domain.push_back(z);
        f.values.push_back(1);
      }
    }
    return f;
  }
  throw FunctionError("unknown family: " + family);
}

PartialFunction graph_collision_function(const std::vector<std::vector<int>>& adj,
                                         int promise_max_ones) {
  int n = (int)adj.size();
  PartialFunction f;
  f.n = n;
  f.q = 2;
  for (auto& z : all_inputs(n, 2)) {
    if (promise_max_ones >= 0 && hamming(z) > promise_max_ones) continue;
    bool hit = false;
    for (int a = 0; a < n && !hit; ++a)
      for (int b = a + 1; b < n && !hit; ++b)
        if (adj[a][b] && z[a] && z[b]) hit = true;
    f.domain.push_back(z);
    f.values.push_back(hit ? 1 : 0);
  }
  return f;
}

bool is_certificate(const PartialFunction& f, const Assignment& a) {
  for (size_t i = 0; i < f.domain.size(); ++i)
    if (a.consistent_with(f.domain[i]) && f.values[i] != 1) return false;
  return true;
}

CertificateStructure certificate_structure_of(const PartialFunction& f) {
  if (f.n > 20) throw FunctionError("certificate_structure_of: n too large");
  auto pos = f.preimage(1);
  if (pos.empty()) throw FunctionError("certificate_structure_of: no positive input");
  std::set<std::vector<uint32_t>> antichains;
  for (int xi : pos) {
    const Input& x = f.domain[xi];
    // minimal certificate subsets for x
    std::vector<uint32_t> certs;  // subsets S with x|_S a 1-certificate
    std::vector<uint32_t> minimal;
    uint32_t full = (f.n >= 32) ? 0xffffffffu : ((1u << f.n) - 1);
    // scan by popcount so minimality is easy
    std::vector<uint32_t> by_size[33];
    for (uint32_t s = 0; s <= full; ++s) by_size[std::popcount(s)].push_back(s);
    for (int c = 0; c <= f.n; ++c)
      for (uint32_t s : by_size[c]) {
        bool has_smaller = false;
        for (uint32_t m : minimal)
          if ((m & s) == m) {
            has_smaller = true;
            break;
          }
        if (has_smaller) continue;
        if (is_certificate(f, Assignment::restrict_to(x, s))) minimal.push_back(s);
      }
    std::sort(minimal.begin(), minimal.end());
    antichains.insert(minimal);
  }
  // keep inclusion-wise minimal members M(f,x): M ⊆ M' iff every minimal cert
  // of M' contains some minimal cert of M... members as upward closures:
  // M ⊆ M' means closure(gens) ⊆ closure(gens'), i.e. each gen of M contains
  // some gen of M'.  We keep the minimal closures.
  std::vector<std::vector<uint32_t>> cand(antichains.begin(), antichains.end());
  auto closure_subseteq = [](const std::vector<uint32_t>& a,
                             const std::vector<uint32_t>& b) {
    for (uint32_t g : a) {
      bool ok = false;
      for (uint32_t h : b)
        if ((h & g) == h) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return true;
  };
  CertificateStructure cs;
  cs.n = f.n;
  for (size_t i = 0; i < cand.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < cand.size() && !dominated; ++j)
      if (i != j && closure_subseteq(cand[j], cand[i]) &&
          !closure_subseteq(cand[i], cand[j]))
        dominated = true;
    if (!dominated) cs.members.push_back(cand[i]);
  }
  return cs;
}

CertComplexity certificate_complexity(const PartialFunction& f) {
  if (f.n > 16) throw FunctionError("certificate_complexity: n too large");
  CertComplexity out;
  uint32_t full = (1u << f.n) - 1;
  for (size_t zi = 0; zi < f.domain.size(); ++zi) {
    const Input& z = f.domain[zi];
    int b = f.values[zi];
    int best = f.n;
    for (uint32_t s = 0; s <= full; ++s) {
      if (std::popcount(s) >= best) continue;
      Assignment a = Assignment::restrict_to(z, s);
      // b-certificate: all consistent inputs evaluate to b
      bool cert = true;
      for (size_t i = 0; i < f.domain.size() && cert; ++i)
        if (a.consistent_with(f.domain[i]) && f.values[i] != b) cert = false;
      if (cert) best = std::popcount(s);
    }
    if (b == 1)
      out.c1 = std::max(out.c1, best);
    else
      out.c0 = std::max(out.c0, best);
  }
  out.c = std::max(out.c0, out.c1);
  return out;
}

int block_sensitivity(const PartialFunction& f) {
  if (f.n > 12) throw FunctionError("block_sensitivity: n too large");
  if (f.q != 2) throw FunctionError("block_sensitivity: Boolean inputs only");
  int best = 0;
  uint32_t full = (1u << f.n) - 1;
  for (size_t zi = 0; zi < f.domain.size(); ++zi) {
    const Input& z = f.domain[zi];
    int b = f.values[zi];
    // sensitive blocks: flipping block B keeps input in domain and flips value
    std::vector<uint32_t> blocks;
    for (uint32_t s = 1; s <= full; ++s) {
      Input w = z;
      for (int j = 0; j < f.n; ++j)
        if (s >> j & 1) w[j] ^= 1;
      auto idx = f.find(w);
      if (idx && f.values[*idx] != b) blocks.push_back(s);
    }
    // max number of pairwise-disjoint sensitive blocks (greedy over subsets
    // is not exact; use recursive search, block count is small at this scale)
    std::sort(blocks.begin(), blocks.end(),
              [](uint32_t a, uint32_t b2) { return std::popcount(a) < std::popcount(b2); });
    int localbest = 0;
    auto rec = [&](auto&& self, size_t i, uint32_t used, int count) -> void {
      localbest = std::max(localbest, count);
      if (count + int(blocks.size() - i) <= localbest) return;
      for (size_t j = i; j < blocks.size(); ++j)
        if (!(blocks[j] & used)) self(self, j + 1, used | blocks[j], count + 1);
    };
    rec(rec, 0, 0, 0);
    best = std::max(best, localbest);
  }
  return best;
}

CertificateStructure ksubset_structure(int n, int k) {
  CertificateStructure cs;
  cs.n = n;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  if (k > n || k < 1) throw FunctionError("ksubset_structure: bad k");
  while (true) {
    uint32_t m = 0;
    for (int i : idx) m |= 1u << i;
    cs.members.push_back({m});
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return cs;
}

CertificateStructure trivial_structure(int n) {
  CertificateStructure cs;
  cs.n = n;
  cs.members.push_back({(n >= 32) ? 0xffffffffu : ((1u << n) - 1)});
  return cs;
}

CertificateStructure hidden_shift_structure(int half) {
  CertificateStructure cs;
  cs.n = 2 * half;
  for (int d = 0; d < half; ++d) {
    std::vector<uint32_t> gens;
    for (int i = 0; i < half; ++i)
      gens.push_back((1u << i) | (1u << (half + (i + 1 + d) % half)));
    cs.members.push_back(gens);
  }
  return cs;
}

CertificateStructure triangle_structure(int m) {
  CertificateStructure cs;
  int n = m * (m - 1) / 2;
  cs.n = n;
  auto vidx = [m](int i, int j) {
    // lexicographic over pairs (i,j), i<j
    int k = 0;
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        if (a == i && b == j) return k;
        ++k;
      }
    return -1;
  };
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c)
        cs.members.push_back(
            {(1u << vidx(a, b)) | (1u << vidx(a, c)) | (1u << vidx(b, c))});
  return cs;
}

std::string to_json(const PartialFunction& f) {
  json j;
  j["n"] = f.n;
  j["q"] = f.q;
  j["rows"] = json::array();
  for (size_t i = 0; i < f.domain.size(); ++i)
    j["rows"].push_back({{"input", f.domain[i]}, {"value", f.values[i]}});
  return j.dump(2);
}

PartialFunction function_from_json(const std::string& text) {
  json j = json::parse(text);
  PartialFunction f;
  f.n = j.at("n").get<int>();
  f.q = j.at("q").get<int>();
  for (auto& row : j.at("rows")) {
    f.domain.push_back(row.at("input").get<Input>());
    f.values.push_back(row.at("value").get<int>());
  }
  f.validate();
  return f;
}

std::string to_csv(const PartialFunction& f) {
  std::ostringstream os;
  for (int j = 0; j < f.n; ++j) os << "x" << (j + 1) << ",";
  os << "f\n";
  for (size_t i = 0; i < f.domain.size(); ++i) {
    for (int v : f.domain[i]) os << v << ",";
    os << f.values[i] << "\n";
  }
  return os.str();
}

PartialFunction function_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw FunctionError("csv: empty");
  int n = (int)std::count(line.begin(), line.end(), ',');
  PartialFunction f;
  f.n = n;
  f.q = 2;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    Input z;
    while (std::getline(ls, tok, ',')) z.push_back(std::stoi(tok));
    if ((int)z.size() != n + 1) throw FunctionError("csv: bad row");
    f.values.push_back(z.back());
    z.pop_back();
    for (int s : z) f.q = std::max(f.q, s + 1);
    f.domain.push_back(z);
  }
  f.validate();
  return f;
}

}  // namespace qwb
