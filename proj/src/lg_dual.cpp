#include "qwb/lg_dual.hpp"

#include <bit>
#include <cmath>
#include <set>

namespace qwb {

int DualLGCertificate::support_radius() const {
  int r = 0;
  for (auto& [key, v] : alpha)
    if (v != 0.0) r = std::max(r, std::popcount(key.first));
  return r;
}

DualCertReport check_dual_certificate(const CertificateStructure& cert,
                                      const DualLGCertificate& a) {
  if (a.n != cert.n) throw FunctionError("check_dual_certificate: n mismatch");
  for (auto& [key, v] : a.alpha)
    if (v != 0.0 && cert.member_contains(key.second, key.first))
      throw FunctionError("check_dual_certificate: alpha nonzero inside member");

  DualCertReport rep;
  double obj2 = 0.0;
  for (size_t m = 0; m < cert.members.size(); ++m) obj2 += std::pow(a.value(0, (int)m), 2);
  rep.objective = std::sqrt(obj2);

  // constraints vanish beyond the support radius; scan |S| <= radius + 1
  int cutoff = a.support_radius() + 1;
  int n = cert.n;
  for (uint32_t s = 0; s < (1u << n); ++s) {
    if (std::popcount(s) > cutoff) continue;
    for (int j = 0; j < n; ++j) {
      if (s >> j & 1) continue;
      uint32_t t = s | (1u << j);
      double c = 0.0;
      for (size_t m = 0; m < cert.members.size(); ++m) {
        double d = a.value(s, (int)m) - a.value(t, (int)m);
        c += d * d;
      }
      rep.max_constraint = std::max(rep.max_constraint, c);
    }
  }
  return rep;
}

static DualLGCertificate radius_certificate(const CertificateStructure& cert,
                                            double radius, double scale) {
  DualLGCertificate a;
  a.n = cert.n;
  int rmax = (int)std::ceil(radius);
  for (uint32_t s = 0; s < (1u << cert.n); ++s) {
    int sz = std::popcount(s);
    if (sz >= radius) continue;
    double val = scale * (radius - sz);
    for (size_t m = 0; m < cert.members.size(); ++m)
      if (!cert.member_contains((int)m, s)) a.alpha[{s, (int)m}] = val;
  }
  (void)rmax;
  return a;
}

DualLGCertificate ksubset_dual_certificate(int n, int k) {
  auto cert = ksubset_structure(n, k);
  double radius = std::pow((double)n, (double)k / (k + 1));
  double scale = 1.0 / std::sqrt((double)binom(n, k));
  return radius_certificate(cert, radius, scale);
}

DualLGCertificate hidden_shift_dual_certificate(int half) {
  auto cert = hidden_shift_structure(half);
  int n = 2 * half;
  double radius = std::pow((double)n, 1.0 / 3.0);
  double scale = 1.0 / std::sqrt((double)n);
  return radius_certificate(cert, radius, scale);
}

}  // namespace qwb
