#pragma once

// Span programs: evaluation, minimal witnesses, rebalancing, canonical form,
// and the graph-based constructions (st-connectivity, subdivided-star and
// triangle detectors, paired-edge traversal programs, skew products) together
// with the brute-force graph oracles used to validate them.

#include <array>
#include <map>
#include <string>

#include "qwb/functions.hpp"
#include "qwb/numerics.hpp"

namespace qwb {

struct SpanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputLabel {
  enum Kind { Var, Always, Never } kind = Var;
  int j = 0;  // variable index, for Var
  int b = 0;  // required value, for Var
};

struct WitnessRecord {
  bool positive = false;
  Vec coeffs;   // positive: coefficients over input-vector indices
  Vec ambient;  // negative: w' in the program space
  double size = 0.0;
};

struct SpanProgram {
  int dim = 0;
  int nvars = 0;
  Vec target;
  std::vector<Vec> inputs;
  std::vector<InputLabel> labels;  // parallel to inputs
  std::vector<Vec> free_vectors;
  std::map<Input, WitnessRecord> stored_witnesses;

  void validate() const;  // target nonzero, shapes consistent
};

// indices of input vectors usable on input z (matching Var labels + Always)
std::vector<int> available_indices(const SpanProgram& p, const Input& z);

// true iff the target is in the span of available + free vectors
bool evaluate(const SpanProgram& p, const Input& z);

WitnessRecord positive_witness(const SpanProgram& p, const Input& z);
WitnessRecord negative_witness(const SpanProgram& p, const Input& z);

struct WitnessSizes {
  double w0 = 0.0, w1 = 0.0, wsize = 0.0;
};
// Witness sizes over the given domain (all of {0,1}^nvars when empty); with
// use_stored, stored witnesses replace the minimal ones where present.
WitnessSizes witness_size(const SpanProgram& p,
                          const std::vector<Input>& domain = {},
                          bool use_stored = false);

// scales the target by factor: positive sizes go up by factor^2, negative
// sizes down by the same; stored witnesses are rescaled accordingly
SpanProgram rebalance(const SpanProgram& p, double factor);

// projects target and inputs onto the orthogonal complement of the free span
SpanProgram eliminate_free(const SpanProgram& p);

// Canonical form over the listed negative inputs; requires a stored negative
// witness for every y in ys.
SpanProgram canonicalize(const SpanProgram& p, const std::vector<Input>& ys);

// the three structural requirements of the canonical form
bool is_canonical(const SpanProgram& p, const std::vector<Input>& ys,
                  double tol = kDefaultTol);

// ---- graph conventions ----------------------------------------------------

using Adj = std::vector<std::vector<int>>;

// lexicographic index of the pair (u,v), u < v, among all pairs of [n]
int pair_index(int n, int u, int v);
// adjacency matrix -> bitstring over the C(n,2) pair variables
Input graph_input(const Adj& g);
Adj input_graph(int n, const Input& z);

// text format: first line n, then n lines of 0/1
Adj parse_graph_text(const std::string& text);
std::string format_graph_text(const Adj& g);

// ---- named constructions ---------------------------------------------------

// target e_t - e_s over R^n; one input vector e_u - e_v per vertex pair
SpanProgram st_connectivity_program(int n, int s, int t);

// A star with legs of the given lengths.  Vertex codes for colourings:
// 0 is the root, and star_colour(shape, j, i) is the vertex at depth i >= 1
// on leg j (0-based).
struct StarShape {
  std::vector<int> legs;
  int vertex_count() const;
};
int star_colour(const StarShape& shape, int j, int i);

// Paired-edge detector for a coloured copy of the subdivided star in an
// n-vertex graph; variables are the pair variables of the adjacency matrix.
SpanProgram star_program(const StarShape& shape, int n,
                         const std::vector<int>& colouring);

// Detector for a correctly coloured triangle (colours 0,1,2); rejects forests.
SpanProgram triangle_forest_program(int n, const std::vector<int>& colouring);

// Paired-edge traversal program for an arbitrary connected pattern graph T:
// a closed walk covering every T-edge once per direction, with the two
// traversals of each edge merged into one four-term input vector.
SpanProgram traversal_program(const Adj& pattern, int n,
                              const std::vector<int>& colouring);

// ---- skew product ----------------------------------------------------------

struct SignedGraph {
  int n = 0;
  // (u, v, sign) with sign in {0,1}
  std::vector<std::array<int, 3>> edges;
};

// doubled graph on 2n vertices ((v,i) -> i*n + v) with edges
// (u,i)-(v,i+sign mod 2) per signed edge
Adj skew_product(const SignedGraph& t);

// ---- brute-force graph oracles ---------------------------------------------

bool graphs_connected(const Adj& g, int s, int t);  // BFS

// T-minor containment via exhaustive branch-set search; g up to 8 vertices,
// pattern up to 5
bool has_minor(const Adj& g, const Adj& pattern);

bool has_subgraph(const Adj& g, const Adj& pattern);

// injection iota with colouring[iota(v)] == v for every pattern vertex and
// all pattern edges present
bool has_coloured_subgraph(const Adj& g, const Adj& pattern,
                           const std::vector<int>& colouring);

Adj star_adjacency(const StarShape& shape);
Adj complete_graph(int n);

// JSON round trip (dim, target, inputs with labels, free vectors)
std::string to_json(const SpanProgram& p);
SpanProgram span_program_from_json(const std::string& text);

}  // namespace qwb
