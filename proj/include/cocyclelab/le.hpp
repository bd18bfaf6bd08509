#pragma once

#include <vector>

#include "cocyclelab/model.hpp"
#include "cocyclelab/tolerances.hpp"

namespace cocyclelab {

enum class NormTag { Frobenius, Operator };

// Finite-volume Lyapunov estimate: phase average of (1/n) ln|A_n(x_k + i eps)|
// over the deterministic grid x_k = phaseOffset + k/K mod 1. Finite n biases
// the value upward (subadditivity), which every >=-type bound check exploits.
struct LEEstimate {
  double value = 0.0;     // nats per step
  long orbitLength = 0;   // n
  int phaseCount = 0;     // K
  double stdError = 0.0;  // sample std dev across phases / sqrt(K)
  NormTag norm = NormTag::Frobenius;
};

struct LeOptions {
  long n = 100000;
  int phases = 256;
  double phaseOffset = 0.0;
  int workers = 0; // <= 0: hardware concurrency
  NormTag norm = NormTag::Frobenius;
};

enum class Regime { Fig1, Fig2, Fig3, Fig4, Unresolved };
enum class Membership { InSpectrum, NotInSpectrum, ZeroLE, Unresolved };

// Sampled graph eps -> L(eps). Gap i joins epsGrid[i] to epsGrid[i+1];
// segmentSlopes are finite differences divided by 2pi, accelerations their
// nearest integers. resolvedMask[i] == 0 marks a gap left non-integer after
// adaptive refinement (a straddled breakpoint when isolated between
// plateaus, noise otherwise).
struct LEProfile {
  ModelParams params;
  std::vector<double> epsGrid;
  std::vector<LEEstimate> leValues;
  std::vector<double> segmentSlopes;
  std::vector<int> accelerations;
  std::vector<unsigned char> resolvedMask;
  Regime regime = Regime::Unresolved;
};

// Right-difference acceleration probe at eps:
//   raw = (L(eps+h) - L(eps)) / (2 pi h).
// quantized is false when the residual to the nearest integer reaches the
// slope tolerance -- h straddles a breakpoint or n, K are too small; that is
// a reported outcome, not an error.
struct AccelReport {
  double rawSlope = 0.0;
  int nearest = 0;
  double residual = 0.0;
  bool quantized = false;
  LEEstimate at, atPlusH;
};

LEEstimate le_estimate(const ModelParams& p, double eps, const LeOptions& opt);

LEProfile le_profile(const ModelParams& p, double epsMax, int gridSteps,
                     const LeOptions& opt, const ToleranceSet& tol = {});

AccelReport acceleration_at(const ModelParams& p, double eps, double h,
                            const LeOptions& opt, const ToleranceSet& tol = {});

Regime classify_profile(const LEProfile& profile, const ToleranceSet& tol = {});

Membership spectrum_membership(const LEProfile& profile);

// L(eps) - (4 pi eps + ln|a2|); nonnegative up to noise, -> 0 past the
// asymptote onset. Throws for a2 = 0 (no degree-two asymptote).
double asymptote_residual(const ModelParams& p, double eps, const LeOptions& opt);

namespace detail {
// Hot path: ln|A_n(x0 + i eps)| for one phase, exact power-of-two rescaling
// every step. Agrees with product_log_norm to ~1e-11 at n = 1e5.
double orbit_log_norm(const ModelParams& p, double x0, double eps, long n,
                      NormTag norm);
} // namespace detail

} // namespace cocyclelab
