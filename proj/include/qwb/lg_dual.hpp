#pragma once

// Dual certificates for the learning-graph complexity program: sparse
// alpha_S(M) tables, the constraint/objective scan, and the named
// certificate families.  Shared by the learning-graph and adversary modules.

#include <cstdint>
#include <map>

#include "qwb/functions.hpp"

namespace qwb {

struct DualLGCertificate {
  int n = 0;
  // (subset bitmask, member index) -> value; absent means 0
  std::map<std::pair<uint32_t, int>, double> alpha;

  double value(uint32_t subset, int member) const {
    auto it = alpha.find({subset, member});
    return it == alpha.end() ? 0.0 : it->second;
  }
  int support_radius() const;  // max |S| over the support
};

struct DualCertReport {
  double objective = 0.0;       // sqrt(sum_M alpha_empty(M)^2)
  double max_constraint = 0.0;  // worst sum_M (alpha_S(M)-alpha_{S+j}(M))^2
};

// Exact scan of all lattice arcs (S, S+j) with |S| <= support radius + 1.
// Throws if alpha is nonzero on some S inside its member.
DualCertReport check_dual_certificate(const CertificateStructure& cert,
                                      const DualLGCertificate& a);

// alpha_S(M) = C(n,k)^{-1/2} * max(n^{k/(k+1)} - |S|, 0) off the member.
DualLGCertificate ksubset_dual_certificate(int n, int k);

// alpha_S(M) = (2*half)^{-1/2} * max((2*half)^{1/3} - |S|, 0) off the member.
DualLGCertificate hidden_shift_dual_certificate(int half);

}  // namespace qwb
