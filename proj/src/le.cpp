#include "cocyclelab/le.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "cocyclelab/kahan.hpp"
#include "cocyclelab/parallel.hpp"

namespace cocyclelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
constexpr long kResync = 256; // cos/sin recurrence drift stays below ~1e-13

// 2^-k for small k, built directly from the exponent bits (exact).
inline double pow2_neg(int k) {
  return std::bit_cast<double>(static_cast<uint64_t>(1023 - k) << 52);
}

// Exponent rescale of the running 2x2 product. Division by a power of two is
// exact, so the accumulated log carries no per-step rounding at all: the
// total is expSum * ln2 + ln|m_final|.
struct ExpTracker {
  int64_t expSum = 0;
  // returns the scale to apply; norm2 is the squared Frobenius norm
  inline double step(double norm2) {
    const uint64_t bits = std::bit_cast<uint64_t>(norm2);
    const int k2 = static_cast<int>(bits >> 52) - 1023;
    const int k = k2 >> 1;
    expSum += k;
    return pow2_neg(k);
  }
};

struct OrbitResult {
  double f2;      // squared Frobenius norm of the scaled final matrix
  double absDet;  // |det| of the scaled final matrix
  int64_t expSum; // ln|A_n| = expSum*ln2 + ln(norm of scaled matrix)
};

// eps == 0: all-real transfer matrices.
OrbitResult orbit_real(const ModelParams& p, double x0, long n) {
  const double ca = std::cos(kTwoPi * p.alpha), sa = std::sin(kTwoPi * p.alpha);
  const double twoA1 = 2.0 * p.a1, twoA2 = 2.0 * p.a2, E = p.E;
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
  double c = 1.0, s = 0.0;
  ExpTracker ex;
  for (long j = 0; j < n; ++j) {
    if ((j % kResync) == 0) {
      double xr = x0 + static_cast<double>(j) * p.alpha;
      xr -= std::floor(xr);
      c = std::cos(kTwoPi * xr);
      s = std::sin(kTwoPi * xr);
    }
    const double c2 = 2.0 * c * c - 1.0;
    const double v = E - twoA1 * c - twoA2 * c2;
    const double t11 = v * m11 - m21;
    const double t12 = v * m12 - m22;
    m21 = m11;
    m22 = m12;
    m11 = t11;
    m12 = t12;
    const double norm2 = m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22;
    const double scale = ex.step(norm2);
    m11 *= scale;
    m12 *= scale;
    m21 *= scale;
    m22 *= scale;
    const double cn = c * ca - s * sa;
    s = s * ca + c * sa;
    c = cn;
  }
  const double f2 = m11 * m11 + m12 * m12 + m21 * m21 + m22 * m22;
  const double det = m11 * m22 - m12 * m21;
  return {f2, std::abs(det), ex.expSum};
}

// eps != 0: complex potential, matrices kept as eight doubles.
OrbitResult orbit_complex(const ModelParams& p, double x0, double eps, long n) {
  const double ca = std::cos(kTwoPi * p.alpha), sa = std::sin(kTwoPi * p.alpha);
  const double P = std::exp(kTwoPi * eps), pinv = 1.0 / P;
  const double Q = P * P, qinv = pinv * pinv;
  if (!std::isfinite(Q))
    throw std::invalid_argument("le: |eps| too large, exp(4 pi eps) overflows");
  // v = E - a1p*c - a2p*c2 + i*(a1m*s + a2m*s2) with (c,s) = (cos,sin)(2pi x)
  const double a1p = p.a1 * (P + pinv), a1m = p.a1 * (P - pinv);
  const double a2p = p.a2 * (Q + qinv), a2m = p.a2 * (Q - qinv);
  const double E = p.E;
  double m11r = 1.0, m11i = 0.0, m12r = 0.0, m12i = 0.0;
  double m21r = 0.0, m21i = 0.0, m22r = 1.0, m22i = 0.0;
  double c = 1.0, s = 0.0;
  ExpTracker ex;
  for (long j = 0; j < n; ++j) {
    if ((j % kResync) == 0) {
      double xr = x0 + static_cast<double>(j) * p.alpha;
      xr -= std::floor(xr);
      c = std::cos(kTwoPi * xr);
      s = std::sin(kTwoPi * xr);
    }
    const double c2 = c * c - s * s;
    const double s2 = 2.0 * c * s;
    const double vr = E - a1p * c - a2p * c2;
    const double vi = a1m * s + a2m * s2;
    const double t11r = vr * m11r - vi * m11i - m21r;
    const double t11i = vr * m11i + vi * m11r - m21i;
    const double t12r = vr * m12r - vi * m12i - m22r;
    const double t12i = vr * m12i + vi * m12r - m22i;
    m21r = m11r;
    m21i = m11i;
    m22r = m12r;
    m22i = m12i;
    m11r = t11r;
    m11i = t11i;
    m12r = t12r;
    m12i = t12i;
    const double norm2 = m11r * m11r + m11i * m11i + m12r * m12r + m12i * m12i +
                         m21r * m21r + m21i * m21i + m22r * m22r + m22i * m22i;
    const double scale = ex.step(norm2);
    m11r *= scale;
    m11i *= scale;
    m12r *= scale;
    m12i *= scale;
    m21r *= scale;
    m21i *= scale;
    m22r *= scale;
    m22i *= scale;
    const double cn = c * ca - s * sa;
    s = s * ca + c * sa;
    c = cn;
  }
  const double f2 = m11r * m11r + m11i * m11i + m12r * m12r + m12i * m12i +
                    m21r * m21r + m21i * m21i + m22r * m22r + m22i * m22i;
  const double detr = (m11r * m22r - m11i * m22i) - (m12r * m21r - m12i * m21i);
  const double deti = (m11r * m22i + m11i * m22r) - (m12r * m21i + m12i * m21r);
  return {f2, std::hypot(detr, deti), ex.expSum};
}

double finish_log(const OrbitResult& r, NormTag norm) {
  if (norm == NormTag::Frobenius)
    return 0.5 * std::log(r.f2) + static_cast<double>(r.expSum) * kLn2;
  double disc = r.f2 * r.f2 - 4.0 * r.absDet * r.absDet;
  if (disc < 0.0) disc = 0.0;
  const double smax2 = 0.5 * (r.f2 + std::sqrt(disc));
  return 0.5 * std::log(smax2) + static_cast<double>(r.expSum) * kLn2;
}

int nearest_allowed(double slope) {
  long r = std::lround(slope);
  return static_cast<int>(std::clamp(r, 0l, 2l));
}

double int_distance(double slope) {
  return std::abs(slope - nearest_allowed(slope));
}

} // namespace

namespace detail {
double orbit_log_norm(const ModelParams& p, double x0, double eps, long n,
                      NormTag norm) {
  OrbitResult r = (eps == 0.0) ? orbit_real(p, x0, n) : orbit_complex(p, x0, eps, n);
  return finish_log(r, norm);
}
} // namespace detail

LEEstimate le_estimate(const ModelParams& p, double eps, const LeOptions& opt) {
  p.validate();
  if (opt.n < 1) throw std::invalid_argument("le_estimate: n must be >= 1");
  if (opt.phases < 1) throw std::invalid_argument("le_estimate: phases must be >= 1");
  const int K = opt.phases;
  const double invn = 1.0 / static_cast<double>(opt.n);
  std::vector<double> vals(static_cast<std::size_t>(K));
  parallel_for_index(static_cast<std::size_t>(K), opt.workers, [&](std::size_t k) {
    const double xk = wrap01(opt.phaseOffset + static_cast<double>(k) / K);
    vals[k] = detail::orbit_log_norm(p, xk, eps, opt.n, opt.norm) * invn;
  });
  // fixed-order compensated reduction: identical for any worker count
  KahanSum meanAcc;
  for (double v : vals) meanAcc.add(v);
  const double mean = meanAcc.value() / K;
  double se = 0.0;
  if (K > 1) {
    KahanSum varAcc;
    for (double v : vals) varAcc.add((v - mean) * (v - mean));
    se = std::sqrt(varAcc.value() / (K - 1) / K);
  }
  return {mean, opt.n, K, se, opt.norm};
}

namespace {

struct ProfileNode {
  double eps;
  LEEstimate le;
};

double gap_slope(const ProfileNode& a, const ProfileNode& b) {
  return (b.le.value - a.le.value) / (kTwoPi * (b.eps - a.eps));
}

} // namespace

Regime classify_profile(const LEProfile& pr, const ToleranceSet& tol) {
  const std::size_t gaps = pr.segmentSlopes.size();
  if (gaps == 0 || pr.leValues.empty()) return Regime::Unresolved;

  // Every maximal run of unresolved gaps must look like a straddled
  // breakpoint: slopes between the neighboring plateaus, which must rise
  // strictly. Anything else is noise.
  for (std::size_t i = 0; i < gaps;) {
    if (pr.resolvedMask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < gaps && !pr.resolvedMask[j]) ++j;
    const bool hasL = i > 0, hasR = j < gaps;
    const double lo = hasL ? pr.accelerations[i - 1] - tol.profile_slope : -0.5;
    const double hi = hasR ? pr.accelerations[j] + tol.profile_slope : 2.5;
    if (hasL && hasR && !(pr.accelerations[i - 1] < pr.accelerations[j]))
      return Regime::Unresolved;
    for (std::size_t g = i; g < j; ++g)
      if (!(pr.segmentSlopes[g] >= lo && pr.segmentSlopes[g] <= hi))
        return Regime::Unresolved;
    i = j;
  }

  // collapse resolved accelerations to their distinct run sequence
  std::vector<int> seq;
  for (std::size_t i = 0; i < gaps; ++i) {
    if (!pr.resolvedMask[i]) continue;
    int a = pr.accelerations[i];
    if (seq.empty() || seq.back() != a) seq.push_back(a);
  }
  if (seq.empty()) return Regime::Unresolved;
  for (std::size_t i = 1; i < seq.size(); ++i)
    if (seq[i] < seq[i - 1]) return Regime::Unresolved;

  const double L0 = pr.leValues.front().value;
  auto is = [&](std::initializer_list<int> pat) {
    return std::equal(seq.begin(), seq.end(), pat.begin(), pat.end());
  };

  if (is({2})) {
    // pure l2 from eps = 0; its intercept must be ln|a2|
    if (pr.params.a2 == 0.0) return Regime::Unresolved;
    if (std::abs(L0 - std::log(std::abs(pr.params.a2))) <= tol.intercept)
      return Regime::Fig1;
    return Regime::Unresolved;
  }
  if (is({1}) || is({1, 2})) {
    // l1 with intercept L(0); the slope-1 run starts at the first node
    std::size_t first = 0;
    while (first < gaps && !(pr.resolvedMask[first] && pr.accelerations[first] == 1))
      ++first;
    if (first >= gaps) return Regime::Unresolved;
    const double intercept =
        pr.leValues[first].value - kTwoPi * pr.epsGrid[first] * 1.0;
    if (std::abs(intercept - L0) <= tol.intercept) return Regime::Fig2;
    return Regime::Unresolved;
  }
  if (is({0, 1}) || is({0, 1, 2})) return Regime::Fig3;
  if (is({0, 2})) return Regime::Fig4;
  if (is({0})) {
    // constant cocycle: L(eps) is flat forever, l3 alone
    if (pr.params.a1 == 0.0 && pr.params.a2 == 0.0) return Regime::Fig4;
    return Regime::Unresolved; // grid stopped before the next segment
  }
  return Regime::Unresolved;
}

LEProfile le_profile(const ModelParams& p, double epsMax, int gridSteps,
                     const LeOptions& opt, const ToleranceSet& tol) {
  p.validate();
  if (!(epsMax > 0.0)) throw std::invalid_argument("le_profile: epsMax must be > 0");
  if (gridSteps < 8) throw std::invalid_argument("le_profile: gridSteps must be >= 8");

  std::vector<ProfileNode> nodes;
  nodes.reserve(gridSteps + 1);
  for (int i = 0; i <= gridSteps; ++i) {
    const double e = epsMax * static_cast<double>(i) / gridSteps;
    nodes.push_back({e, le_estimate(p, e, opt)});
  }

  // adaptive refinement: bisect non-integer gaps up to 4 times
  const double minWidth = (epsMax / gridSteps) / 16.0 * (1.0 + 1e-9);
  for (int round = 0; round < 4; ++round) {
    std::vector<double> mids;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double w = nodes[i + 1].eps - nodes[i].eps;
      if (w <= minWidth) continue;
      if (int_distance(gap_slope(nodes[i], nodes[i + 1])) > tol.slope_integer)
        mids.push_back(0.5 * (nodes[i].eps + nodes[i + 1].eps));
    }
    if (mids.empty()) break;
    for (double e : mids) nodes.push_back({e, le_estimate(p, e, opt)});
    std::sort(nodes.begin(), nodes.end(),
              [](const ProfileNode& a, const ProfileNode& b) { return a.eps < b.eps; });
  }

  LEProfile pr;
  pr.params = p;
  pr.epsGrid.reserve(nodes.size());
  pr.leValues.reserve(nodes.size());
  for (const auto& nd : nodes) {
    pr.epsGrid.push_back(nd.eps);
    pr.leValues.push_back(nd.le);
  }
  const std::size_t gaps = nodes.size() - 1;
  pr.segmentSlopes.resize(gaps);
  pr.accelerations.resize(gaps);
  pr.resolvedMask.resize(gaps);
  for (std::size_t i = 0; i < gaps; ++i) {
    const double sl = gap_slope(nodes[i], nodes[i + 1]);
    pr.segmentSlopes[i] = sl;
    pr.accelerations[i] = nearest_allowed(sl);
    pr.resolvedMask[i] = int_distance(sl) <= tol.slope_integer ? 1 : 0;
  }

  // A non-integer run between strictly rising plateaus is a straddled
  // breakpoint: keep it masked out. A mildly non-integer run that cannot be
  // a breakpoint (equal plateaus) is noise on a segment: count it, within
  // the coarser resolution threshold. Anything else classifies Unresolved.
  for (std::size_t i = 0; i < gaps;) {
    if (pr.resolvedMask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < gaps && !pr.resolvedMask[j]) ++j;
    const bool hasL = i > 0, hasR = j < gaps;
    const double lo = hasL ? pr.accelerations[i - 1] - tol.profile_slope : -0.5;
    const double hi = hasR ? pr.accelerations[j] + tol.profile_slope : 2.5;
    bool straddle = !(hasL && hasR) ||
                    pr.accelerations[i - 1] < pr.accelerations[j];
    for (std::size_t g = i; g < j && straddle; ++g)
      straddle = pr.segmentSlopes[g] >= lo && pr.segmentSlopes[g] <= hi;
    if (!straddle) {
      bool noise = true;
      for (std::size_t g = i; g < j; ++g)
        noise = noise && int_distance(pr.segmentSlopes[g]) <= tol.profile_slope;
      if (noise)
        for (std::size_t g = i; g < j; ++g) pr.resolvedMask[g] = 1;
      // else: left masked and inconsistent; classify_profile reports
      // Unresolved for it
    }
    i = j;
  }

  pr.regime = classify_profile(pr, tol);
  return pr;
}

AccelReport acceleration_at(const ModelParams& p, double eps, double h,
                            const LeOptions& opt, const ToleranceSet& tol) {
  if (eps < 0.0) throw std::invalid_argument("acceleration_at: eps must be >= 0");
  if (h <= 0.0) {
    // documented default: eps0/16 when the working scale exists, else 0.01
    const double r = (p.a1 != 0.0 && p.a2 != 0.0)
                         ? std::abs(p.a1 / p.a2)
                         : 0.0;
    h = (r >= 100.0) ? std::log(r) / (8.0 * std::numbers::pi) / 16.0 : 0.01;
  }
  AccelReport rep;
  rep.at = le_estimate(p, eps, opt);
  rep.atPlusH = le_estimate(p, eps + h, opt);
  rep.rawSlope = (rep.atPlusH.value - rep.at.value) / (kTwoPi * h);
  rep.nearest = nearest_allowed(rep.rawSlope);
  rep.residual = std::abs(rep.rawSlope - rep.nearest);
  rep.quantized = rep.residual < tol.slope_integer;
  return rep;
}

Membership spectrum_membership(const LEProfile& pr) {
  if (pr.leValues.empty()) return Membership::Unresolved;
  const LEEstimate& L0 = pr.leValues.front();
  if (L0.value <= 3.0 * L0.stdError) return Membership::ZeroLE;
  switch (pr.regime) {
    case Regime::Fig1:
    case Regime::Fig2:
      return Membership::InSpectrum;
    case Regime::Fig3:
    case Regime::Fig4:
      return Membership::NotInSpectrum;
    default:
      return Membership::Unresolved;
  }
}

double asymptote_residual(const ModelParams& p, double eps, const LeOptions& opt) {
  if (p.a2 == 0.0)
    throw std::domain_error(
        "asymptote_residual: a2 = 0 has no degree-two asymptote");
  const LEEstimate le = le_estimate(p, eps, opt);
  return le.value - (2.0 * kTwoPi * eps + std::log(std::abs(p.a2)));
}

} // namespace cocyclelab
