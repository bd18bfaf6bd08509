#include "cocyclelab/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cocyclelab {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double require_ratio(const ModelParams& p) {
  if (p.a1 == 0.0 || p.a2 == 0.0)
    throw std::domain_error("epsilon0: requires a1 != 0 and a2 != 0");
  const double ratio = std::abs(p.a1 / p.a2);
  if (ratio < 100.0)
    throw std::domain_error("epsilon0: requires |a1/a2| >= 100 "
                            "(e^{4 pi eps0} >= 10 fails)");
  return ratio;
}
} // namespace

EllipseSpec EllipseSpec::for_shift(const ModelParams& p, double delta) {
  if (p.a1 == 0.0) throw std::domain_error("EllipseSpec: requires a1 != 0");
  if (!(delta > 0.0)) throw std::domain_error("EllipseSpec: requires delta > 0");
  const double a1 = std::abs(p.a1);
  const double e = std::exp(kTwoPi * delta), ei = 1.0 / e;
  return {a1 * (e + ei), a1 * (e - ei), delta};
}

std::optional<double> herman_bound(const ModelParams& p) {
  if (p.a2 != 0.0) return std::log(std::abs(p.a2));
  if (p.a1 != 0.0) return std::log(std::abs(p.a1));
  return std::nullopt;
}

std::optional<double> theorem_bound(const ModelParams& p) {
  const double a1 = std::abs(p.a1), a2 = std::abs(p.a2);
  if (!(a1 > 1.0) || a2 == 0.0 || !(a2 < a1 / 100.0)) return std::nullopt;
  return std::log(a1) - 10.0 * std::sqrt(a2 / a1);
}

double epsilon0(const ModelParams& p) {
  const double ratio = require_ratio(p);
  return std::log(ratio) / (8.0 * std::numbers::pi);
}

double ellipse_distance(const ModelParams& p, double delta, double E) {
  const EllipseSpec el = EllipseSpec::for_shift(p, delta);
  const double c2 = 4.0 * p.a1 * p.a1; // aAxis^2 - bAxis^2, exactly
  const double aE = std::abs(E);
  if (aE >= c2 / el.aAxis) return std::abs(aE - el.aAxis);
  return el.bAxis * std::sqrt(1.0 - E * E / c2);
}

Lemma32Result lemma32_sup(const ModelParams& p, double E) {
  const double e0 = epsilon0(p);
  const double d1 = ellipse_distance(p, e0, E);
  const double d2 = ellipse_distance(p, 2.0 * e0, E);
  const double floor =
      (19.0 / 60.0) * std::abs(p.a1) * std::exp(2.0 * kTwoPi * e0);
  Lemma32Result r = (d2 >= d1) ? Lemma32Result{DeltaChoice::TwoEps0, 2.0 * e0, d2, floor}
                               : Lemma32Result{DeltaChoice::Eps0, e0, d1, floor};
  if (!(r.distance >= floor - 1e-9))
    throw std::logic_error("lemma32_sup: sup distance fell below "
                           "(19/60) a1 e^{4 pi eps0}");
  return r;
}

double potential_floor(const ModelParams& p, double delta, double E) {
  const double e = std::exp(2.0 * kTwoPi * delta);
  return ellipse_distance(p, delta, E) - std::abs(p.a2) * (e + 1.0 / e);
}

double jensen_integral(const ModelParams& p, double delta, double E) {
  if (p.a1 == 0.0) throw std::domain_error("jensen_integral: requires a1 != 0");
  if (!(delta > 0.0)) throw std::domain_error("jensen_integral: requires delta > 0");
  const double a1 = std::abs(p.a1);
  // the x -> x + 1/2 shift removes the sign of a1 without changing the
  // integral; roots of a1 e^{-2 pi d} z^2 - E z + a1 e^{2 pi d}
  const double qa = a1 * std::exp(-kTwoPi * delta);
  const double qc = a1 * std::exp(kTwoPi * delta);
  const double disc = E * E - 4.0 * qa * qc; // 4 qa qc = 4 a1^2
  double sumLogMax;
  if (disc < 0.0) {
    // conjugate pair, |z1| = |z2| = e^{2 pi delta} > 1
    sumLogMax = 2.0 * kTwoPi * delta;
  } else {
    const double sq = std::sqrt(disc);
    const double q = 0.5 * (E + std::copysign(sq, E)); // never 0: E*qc != 0 here
    const double z1 = q / qa, z2 = qc / q;
    const double prod = std::abs(z1 * z2), expected = std::exp(2.0 * kTwoPi * delta);
    if (std::abs(prod - expected) > 1e-9 * expected)
      throw std::logic_error("jensen_integral: root product drifted from e^{4 pi delta}");
    sumLogMax = std::log(std::max(1.0, std::abs(z1))) +
                std::log(std::max(1.0, std::abs(z2)));
  }
  const double result = std::log(qa) + sumLogMax;
  if (!(result >= kTwoPi * delta + std::log(a1) - 1e-9))
    throw std::logic_error("jensen_integral: value fell below 2 pi delta + ln|a1|");
  return result;
}

double term_II_bound(const ModelParams& p, double delta) {
  const double ratio = require_ratio(p);
  const double e0 = std::log(ratio) / (8.0 * std::numbers::pi);
  const double a1 = std::abs(p.a1), a2 = std::abs(p.a2);
  const double ed = std::exp(2.0 * kTwoPi * delta);
  const double arg =
      1.0 - (60.0 / 19.0) * (a2 * ed + a2 / ed + 1.0) / (a1 * std::exp(2.0 * kTwoPi * e0));
  if (!(arg > 0.0))
    throw std::domain_error("term_II_bound: nonpositive log argument "
                            "(outside the theorem hypotheses)");
  const double result = std::log(arg);
  if (a1 > 1.0 && a2 < a1 / 100.0) {
    if (!(result >= -10.0 * std::sqrt(a2 / a1) - 1e-9))
      throw std::logic_error("term_II_bound: bound fell below -10 sqrt(a2/a1)");
  }
  return result;
}

ContradictionVerdict contradiction_check(const ModelParams& p) {
  const double ratio = require_ratio(p);
  const double root = std::sqrt(1.0 / ratio);
  const double lnRatio = std::log(ratio);
  ContradictionVerdict v;
  v.case1Margin = lnRatio - (40.0 / 3.0) * root;
  v.case2Margin = lnRatio - 20.0 * root;
  v.excluded = v.case1Margin > 0.0 && v.case2Margin > 0.0;
  return v;
}

BoundReport make_bound_report(const ModelParams& p,
                              const std::optional<LEEstimate>& measured) {
  BoundReport r;
  r.herman = herman_bound(p);
  r.theorem = theorem_bound(p);
  if (p.a1 != 0.0 && p.a2 != 0.0 && std::abs(p.a1 / p.a2) >= 100.0) {
    r.epsilon0 = epsilon0(p);
    const Lemma32Result l = lemma32_sup(p, p.E);
    r.chosenDelta = l.chosen;
    r.supDistance = l.distance;
  }
  r.measured = measured;
  if (measured) {
    if (r.herman) r.hermanMargin = measured->value - *r.herman;
    if (r.theorem) r.theoremMargin = measured->value - *r.theorem;
  }
  return r;
}

} // namespace cocyclelab
