#include "cocyclelab/model.hpp"

#include <numbers>
#include <stdexcept>

#include "cocyclelab/kahan.hpp"

namespace cocyclelab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void ModelParams::validate() const {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(E))
    throw std::invalid_argument("ModelParams: a1, a2, E must be finite");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ModelParams: alpha must lie in (0,1)");
}

std::complex<double> potential_value(const ModelParams& p, const PhasePoint& z) {
  // cos(2pi k (x+i eps)) expanded into modulus-weighted harmonics of x;
  // assembling through cos/sin keeps the eps = 0 result exactly real.
  const double c1 = std::cos(kTwoPi * z.x), s1 = std::sin(kTwoPi * z.x);
  const double c2 = std::cos(2.0 * kTwoPi * z.x), s2 = std::sin(2.0 * kTwoPi * z.x);
  const double e1 = std::exp(kTwoPi * z.eps), e1i = 1.0 / e1;
  const double e2 = std::exp(2.0 * kTwoPi * z.eps), e2i = 1.0 / e2;
  const double re = p.E - p.a1 * (e1 + e1i) * c1 - p.a2 * (e2 + e2i) * c2;
  const double im = p.a1 * (e1 - e1i) * s1 + p.a2 * (e2 - e2i) * s2;
  return {re, im};
}

TransferMatrix transfer_matrix(const ModelParams& p, const PhasePoint& z) {
  return TransferMatrix::schrodinger(potential_value(p, z));
}

RescaledProduct product_log_norm(const ModelParams& p, const PhasePoint& z, long n) {
  if (n < 0) throw std::invalid_argument("product_log_norm: n must be >= 0");
  // n = 0: exact identity, logNorm 0 (total function).
  RescaledProduct out;
  KahanSum logAcc;
  TransferMatrix m = TransferMatrix::identity();
  for (long j = 0; j < n; ++j) {
    const PhasePoint zj(z.x + static_cast<double>(j) * p.alpha, z.eps);
    m = TransferMatrix::schrodinger(potential_value(p, zj)) * m;
    const double nrm = m.frobenius_norm();
    logAcc.add(std::log(nrm));
    const double inv = 1.0 / nrm;
    m.m11 *= inv;
    m.m12 *= inv;
    m.m21 *= inv;
    m.m22 *= inv;
  }
  out.logNorm = logAcc.value();
  out.direction = m;
  out.steps = n;
  return out;
}

double lemma31_lower_bound(std::span<const double> vs) {
  KahanSum acc;
  for (double v : vs) {
    const double av = std::abs(v);
    if (!(av > 2.0))
      throw std::domain_error("lemma31_lower_bound: requires |v_j| > 2");
    acc.add(std::log(av - 1.0));
  }
  return std::exp(acc.value());
}

} // namespace cocyclelab
