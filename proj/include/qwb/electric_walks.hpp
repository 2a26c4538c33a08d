#pragma once

// Electric-network quantities on weighted graphs (effective resistance via
// grounded Laplacians, hitting times, the commute identity), the electric
// quantum walk on bipartite graphs, and the learning-graph-as-walk adapter.

#include <string>

#include "qwb/learning_graphs.hpp"
#include "qwb/numerics.hpp"

namespace qwb {

struct WalkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WEdge {
  int u = 0, v = 0;
  double w = 1.0;
};

struct WeightedGraph {
  int n = 0;
  std::vector<WEdge> edges;
  std::vector<double> sigma;  // initial distribution, size n, sums to 1
  std::vector<int> marked;    // marked vertices
  std::vector<int> part;      // bipartition 0/1 per vertex; empty when none

  void validate() const;
  double total_weight() const;
};

// oriented along each stored edge (u to v); energy = sum p^2/w
struct FlowAssignment {
  std::vector<double> p;

  double energy(const WeightedGraph& g) const;
  // conservation at non-marked vertices against g.sigma; residual <= 1e-9
  void validate(const WeightedGraph& g) const;
};

struct ResistanceResult {
  double r = 0.0;
  FlowAssignment flow;
};

// minimal-energy flow from sigma to the marked set, by solving the grounded
// weighted-Laplacian system for the potentials
ResistanceResult effective_resistance(const WeightedGraph& g);

// expected steps to reach the marked set from sigma (exact linear solve)
double hitting_time(const WeightedGraph& g);

// (H_{s,t} + H_{t,s}, 2 W R_{s,t}); equal within 1e-8 relative
std::pair<double, double> commute_identity_check(const WeightedGraph& g, int s,
                                                 int t);

// double cover on V x {0,1}: W doubles, the resistance does not increase
WeightedGraph bipartite_double(const WeightedGraph& g);

// the walk step R_B R_A over the basis (support vertices, then edges);
// diffusion is the identity on marked vertices and the reflection about the
// local source-plus-edges vector elsewhere
Mat electric_walk_step(const WeightedGraph& g, double r_bound, double c1);

struct WalkRunResult {
  int output = 0;
  long steps = 0;
  double zero_probability = 0.0;
};

// detects a non-empty marked set with probability >= 2/3 in O(sqrt(RW))
// walk steps; marked support vertices are caught by the pre-measurement
WalkRunResult electric_walk_run(const WeightedGraph& g, double r_bound,
                                double c = 16.0, double c1 = 8.0,
                                unsigned seed = 1);

struct LGWalkResult {
  int output = 0;
  long queries = 0;  // 2 per walk step
};

// runs the learning graph as an electric walk on its subset lattice; a
// vertex is marked for z iff its loaded assignment is a 1-certificate
LGWalkResult lg_as_walk(const LearningGraph& g, const PartialFunction& f,
                        const Input& z, unsigned seed = 1);

// text format: first line n, then `u v w` lines
WeightedGraph weighted_graph_from_text(const std::string& text);
std::string to_text(const WeightedGraph& g);
// {"sigma": [...], "marked": [...], "part": [...]} sidecar
void load_distribution_json(WeightedGraph& g, const std::string& text);
std::string distribution_json(const WeightedGraph& g);

}  // namespace qwb
