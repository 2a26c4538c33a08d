#pragma once

// Explicit finite partial functions f: [q]^n ⊇ D -> {0,1}, named problem
// families, and certificate machinery (all brute force, desk scale).

#include <cstdint>
#include <map>
#include <stdexcept>
#include <optional>
#include <string>
#include <vector>

namespace qwb {

struct FunctionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Input = std::vector<int>;  // length n, symbols in [0, q)

struct PartialFunction {
  int n = 0;
  int q = 2;
  std::vector<Input> domain;  // distinct
  std::vector<int> values;    // 0/1, parallel to domain

  void validate() const;
  // index into domain, or nullopt
  std::optional<int> find(const Input& z) const;
  int value_of(const Input& z) const;  // throws if not in domain
  std::vector<int> preimage(int b) const;  // domain indices with value b
};

// Partial assignment: values on a support set of variable indices.
struct Assignment {
  std::vector<int> support;  // sorted variable indices
  std::vector<int> values;   // parallel to support

  static Assignment restrict_to(const Input& z, uint32_t mask);
  bool consistent_with(const Input& z) const;
};

// A member M is the upward closure of its generators (subset bitmasks).
struct CertificateStructure {
  int n = 0;
  std::vector<std::vector<uint32_t>> members;  // generator antichains

  bool member_contains(int m, uint32_t subset) const;
  void validate() const;
};

// Named families.  params keys depend on the family:
//   threshold: k, n        or/and: n          ambainis: (none)
//   kdist: k, n, q         element_distinctness: n, q
//   ksum: k, n, q          collision / set_equality / hidden_shift: n (=2*half), q
//   triangle: m (vertices) promise_threshold: n, k, d
PartialFunction make_named(const std::string& family,
                           const std::map<std::string, long>& params);

// Graph collision for a fixed graph (adjacency matrix, n vertices); when
// promise_max_ones >= 0 the domain keeps only inputs with at most that many
// ones (plus all positive inputs up to the same cap).
PartialFunction graph_collision_function(const std::vector<std::vector<int>>& adj,
                                         int promise_max_ones = -1);

bool is_certificate(const PartialFunction& f, const Assignment& a);

CertificateStructure certificate_structure_of(const PartialFunction& f);

struct CertComplexity {
  int c = 0, c0 = 0, c1 = 0;
};
CertComplexity certificate_complexity(const PartialFunction& f);

int block_sensitivity(const PartialFunction& f);

// Named certificate structures.
CertificateStructure ksubset_structure(int n, int k);
CertificateStructure trivial_structure(int n);
// on 2*half variables, `half` members (one per shift)
CertificateStructure hidden_shift_structure(int half);
CertificateStructure triangle_structure(int m);

// JSON / CSV round trip.
std::string to_json(const PartialFunction& f);
PartialFunction function_from_json(const std::string& text);
std::string to_csv(const PartialFunction& f);
PartialFunction function_from_csv(const std::string& text);

// helpers shared across modules
std::vector<Input> all_inputs(int n, int q);
long binom(int n, int k);

}  // namespace qwb
