#pragma once

#include <optional>

#include "cocyclelab/le.hpp"
#include "cocyclelab/model.hpp"

namespace cocyclelab {

// Range ellipse of the degree-one part of the complexified potential:
// x -> a1 e^{-2pi delta} e^{2pi i x} + a1 e^{2pi delta} e^{-2pi i x} traces
// x^2/aAxis^2 + y^2/bAxis^2 = 1. Identity: aAxis^2 - bAxis^2 = 4 a1^2.
struct EllipseSpec {
  double aAxis;
  double bAxis;
  double delta;
  static EllipseSpec for_shift(const ModelParams& p, double delta);
};

enum class DeltaChoice { Eps0, TwoEps0 };

struct Lemma32Result {
  DeltaChoice chosen;
  double delta;     // the winning shift
  double distance;  // dist(E, S_delta)
  double floor;     // (19/60) |a1| e^{4 pi eps0}
};

struct ContradictionVerdict {
  double case1Margin; // ln(a1/a2) - (40/3) sqrt(a2/a1)
  double case2Margin; // ln(a1/a2) - 20 sqrt(a2/a1)
  bool excluded;      // both margins positive: (eps0, L(eps0)) cannot sit on l2
};

struct BoundReport {
  std::optional<double> herman;
  std::optional<double> theorem;
  std::optional<double> epsilon0;
  std::optional<DeltaChoice> chosenDelta;
  std::optional<double> supDistance;
  std::optional<LEEstimate> measured;
  std::optional<double> hermanMargin;  // measured - herman
  std::optional<double> theoremMargin; // measured - theorem
};

// ln|a2|; ln|a1| when a2 = 0; absent when both couplings vanish. May be
// negative (vacuous but valid, L >= 0 is reported separately).
std::optional<double> herman_bound(const ModelParams& p);

// ln|a1| - 10 sqrt(|a2|/|a1|) under the hypotheses |a1| > 1 and
// 0 < |a2| < |a1|/100; absent otherwise (a theorem, not a heuristic).
std::optional<double> theorem_bound(const ModelParams& p);

// The working scale: e^{4 pi eps0} = (|a1|/|a2|)^{1/2}. Requires
// |a1/a2| >= 100 so that e^{4 pi eps0} >= 10.
double epsilon0(const ModelParams& p);

// Exact distance from (E, 0) to the ellipse S_delta, case-complete:
// vertex branch ||E| - aAxis| for |E| >= 4 a1^2 / aAxis, otherwise
// bAxis sqrt(1 - E^2 / (4 a1^2)).
double ellipse_distance(const ModelParams& p, double delta, double E);

// sup over delta in {eps0, 2 eps0} of dist(E, S_delta); the winner is
// guaranteed >= (19/60)|a1| e^{4 pi eps0}.
Lemma32Result lemma32_sup(const ModelParams& p, double E);

// ellipse_distance minus |a2|(e^{4 pi delta} + e^{-4 pi delta}): a rigorous
// lower bound for inf_x of the full potential modulus at shift delta.
double potential_floor(const ModelParams& p, double delta, double E);

// Exact value of the degree-one log integral via Jensen's formula:
// ln|a1 e^{-2 pi delta}| + sum over roots of ln max(1, |z|). Always
// >= 2 pi delta + ln|a1|.
double jensen_integral(const ModelParams& p, double delta, double E);

// ln(1 - (60/19)(|a2| e^{4 pi delta} + |a2| e^{-4 pi delta} + 1) /
// (|a1| e^{4 pi eps0})); under the theorem hypotheses this is
// >= -10 sqrt(|a2/a1|).
double term_II_bound(const ModelParams& p, double delta);

// The l2-exclusion arithmetic closing the proof, as checkable margins.
ContradictionVerdict contradiction_check(const ModelParams& p);

BoundReport make_bound_report(const ModelParams& p,
                              const std::optional<LEEstimate>& measured);

} // namespace cocyclelab
