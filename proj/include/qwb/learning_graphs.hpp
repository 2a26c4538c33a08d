#pragma once

// Learning graphs: weighted subset-lattice DAGs with flows, the complexity
// calculus, conversions to dual-adversary solutions and span programs, and
// the named constructions (trivial, disjunction, collision, k-subset,
// triangle, and the adaptive promise-threshold graph).

#include <cstdint>
#include <string>

#include "qwb/dual_adversary.hpp"
#include "qwb/functions.hpp"
#include "qwb/lg_dual.hpp"
#include "qwb/span_programs.hpp"

namespace qwb {

struct LearningGraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LGVertex {
  uint32_t set = 0;  // loaded variables, as a bitmask
  int tag = -1;      // distinguishes duplicate vertices; -1 for the default
};

struct LGArc {
  int from = 0;       // vertex index
  int to = 0;         // vertex index; its set must be from's set plus j
  int j = 0;          // variable loaded by this arc
  double weight = 0;  // base weight (per-input rule applies when adaptive)
};

struct LearningGraph {
  int n = 0;
  std::vector<LGVertex> vertices;  // vertex 0 is the root (empty set)
  std::vector<LGArc> arcs;
  // adaptive weights per the promise-threshold model: the weight of an arc
  // is its base weight when the source assignment is all ones, else 0
  bool adaptive = false;

  void validate() const;
  int vertex_index(uint32_t set, int tag = -1) const;  // -1 when absent
};

// one flow per member of the certificate structure (or per representative
// member when all members are equivalent by symmetry)
struct FlowMember {
  std::string name;
  std::vector<double> p;        // per arc
  std::vector<uint32_t> sinks;  // marked subsets allowed to absorb flow
};

struct Flow {
  std::vector<FlowMember> members;
};

// conservation at non-sinks, unit value out of the root; residual <= 1e-12
void validate_flow(const LearningGraph& g, const Flow& flow);

struct LGComplexities {
  double cn = 0.0, cp = 0.0, total = 0.0;  // total = sqrt(cn * cp)
};

// constant-weight calculus; flow through a zero-weight arc is an error and
// 0/0 counts as 0
LGComplexities complexities(const LearningGraph& g, const Flow& flow);

// adaptive calculus: flows are given per positive input, weights follow the
// all-ones-source rule on each input
LGComplexities complexities_adaptive(const LearningGraph& g,
                                     const PartialFunction& f,
                                     const Flow& flow_per_positive);

// one vertex per subset, parallel arcs merged (weights and flows summed);
// the total complexity never increases
std::pair<LearningGraph, Flow> merge_duplicates(const LearningGraph& g,
                                                const Flow& flow);

// multiplies every weight by a > 0: cn scales by a, cp by 1/a, total fixed
LearningGraph scale_weights(const LearningGraph& g, double a);

// L * sqrt(T); the complexity of one stage of a symmetric-flow construction
double stage_complexity(double length, double speciality);

struct StageInfo {
  std::string name;
  double length = 0.0;
  double speciality = 0.0;  // exact count ratio: transitions / used per member
  double weight = 0.0;      // per-arc weight chosen for the stage
};

struct LGBundle {
  LearningGraph g;
  Flow flow;
  std::vector<StageInfo> stages;
};

// single path loading 1..n, unit weights; one member with only [n] marked
LGBundle trivial_lg(int n);

// star from the root, unit weights; members mark each singleton
LGBundle or_lg(int n);

// transition to [r] with weight n/r per arc, then unit arcs to all
// (r+1)-supersets; representative matching member with no pair inside [r]
LGBundle collision_lg(int n, int r);

// the (k+1)-stage procedure: load r random elements avoiding the marked
// k-subset, then the marked elements one by one; stage weights p/sqrt(T)
LGBundle ksubset_lg(int n, int k, int r);

// the six-stage triangle procedure on a v-vertex graph; variables are the
// C(v,2) vertex pairs
LGBundle triangle_lg(int v, int r1, int r2, int l);

// adaptive promise-threshold graph: subsets of size <= k+1, per-step weights
// w_i = [C(k,i) C(k+d,i) (k+d-i)]^{-1/2}; flow per positive input
struct AdaptiveThresholdLG {
  LearningGraph g;
  Flow flow;  // one member per positive input, in domain order
  PartialFunction f;
  LGComplexities complexity;  // evaluated from the two closed-form series
};
AdaptiveThresholdLG adaptive_threshold_lg(int n, int k, int d);

// feasible dual-adversary solution with objective max(cn, cp); every sink of
// every used flow member must carry a 1-certificate of the matching input
DualAdversarySolution to_dual_adversary(const LearningGraph& g, const Flow& flow,
                                        const PartialFunction& f);

// span program over one coordinate per (vertex, source assignment); stored
// witnesses reproduce C_N on negatives and C_P(x) on positives
SpanProgram to_span_program(const LearningGraph& g, const Flow& flow,
                            const PartialFunction& f);

// normalized dual objective <= primal total complexity
bool weak_lg_duality_check(const LearningGraph& g, const Flow& flow,
                           const DualLGCertificate& a,
                           const CertificateStructure& cert);

// JSON arc list round trip (constant-weight graphs)
std::string to_json(const LearningGraph& g);
LearningGraph learning_graph_from_json(const std::string& text);

}  // namespace qwb
