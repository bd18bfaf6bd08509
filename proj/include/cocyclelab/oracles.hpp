#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cocyclelab/le.hpp"
#include "cocyclelab/model.hpp"

namespace cocyclelab {

// Outcome of one brute-force validation plan. Margins are oriented so that
// positive means the claim held with room to spare; passed is
// worstCaseMargin >= 0 with the plan's tolerance already folded in.
struct OracleReport {
  std::string name;
  long trials = 0;
  double worstCaseMargin = 0.0;
  std::vector<double> worstCaseInput;
  bool passed = false;
};

// Minimum over x = k/gridSize of |E - a1 e^{-2pi delta} e^{2pi ix}
// - a1 e^{2pi delta} e^{-2pi ix}|, then one golden-section refinement in the
// winning cell. Converges to ellipse_distance from above.
double grid_min_modulus(const ModelParams& p, double delta, double E,
                        long gridSize);

// Midpoint rule for the degree-one log integral at shift delta (E taken from
// p). Throws when the integrand gets within 1e-8 of a zero on the sample
// grid (point effectively on the ellipse).
double quadrature_log_integral(const ModelParams& p, double delta, long nodes);

// Randomized check of the block-product norm floor and the two prefix
// invariants |b11^k| >= prod(|v_j|-1), |b21^k| <= |b11^k|. Margins are in
// the log domain; worstCaseInput records {trial, n}, reproducible from
// (seed, trial).
OracleReport lemma31_exhaustive(long trials, int nMax, double vLo, double vHi,
                                uint64_t seed, int workers = 0);

// (lhs, rhs) with lhs = ln|A_n(x+i eps)|_op and rhs = sum of
// ln(|potential|-1) along the orbit. Throws if any orbit factor has modulus
// <= 2 (outside the lemma hypothesis), or if lhs < rhs - 1e-9.
std::pair<double, double> entrywise_product_floor(const ModelParams& p,
                                                  double eps, double x, long n);

// ------------------------------------------------------------------------
// Documented verification plans (shared by `verify` and the acceptance run)

OracleReport run_lemma31_suite(uint64_t seed, long trials = 100000,
                               int nMax = 20, double vLo = 2.01,
                               double vHi = 50.0, int workers = 0);

// random (a1, delta, E): closed-form distance vs the grid oracle,
// |gap| <= 1e-6 relative and grid >= closed form.
OracleReport run_ellipse_suite(uint64_t seed, long trials = 1000,
                               long gridSize = 1000000, int workers = 0);

// random nonsingular (a1, delta, E): Jensen evaluation vs quadrature within
// 1e-5, and every value >= 2 pi delta + ln|a1| - 1e-9.
OracleReport run_jensen_suite(uint64_t seed, long trials = 1000,
                              long nodes = 100000, int workers = 0);

// profiles over the documented parameter triples: every resolved segment
// slope within 0.1 of an integer in {0,1,2}.
OracleReport run_quantization_suite(const LeOptions& opt, int gridSteps = 24,
                                    int workers = 0);

} // namespace cocyclelab
