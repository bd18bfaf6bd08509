#include "cocyclelab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "cocyclelab/bounds.hpp"
#include "cocyclelab/kahan.hpp"
#include "cocyclelab/parallel.hpp"
#include "cocyclelab/rng.hpp"

namespace cocyclelab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

// cos(2 pi k/N) and sin^2(2 pi k/N), shared read-only across trials; a
// snapshot survives a concurrent rebuild at a different size.
struct GridTables {
  long size = 0;
  std::vector<double> cosv;
  std::vector<double> sin2v;
};

std::shared_ptr<const GridTables> grid_tables(long gridSize) {
  static std::mutex mu;
  static std::shared_ptr<const GridTables> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (cache && cache->size == gridSize) return cache;
  auto t = std::make_shared<GridTables>();
  t->size = gridSize;
  t->cosv.resize(gridSize);
  t->sin2v.resize(gridSize);
  for (long k = 0; k < gridSize; ++k) {
    const double x = kTwoPi * static_cast<double>(k) / gridSize;
    const double c = std::cos(x), s = std::sin(x);
    t->cosv[k] = c;
    t->sin2v[k] = s * s;
  }
  cache = t;
  return cache;
}

// |E - a1 e^{-2pi d} e^{2pi ix} - a1 e^{2pi d} e^{-2pi ix}|^2
//   = (E - aAxis cos 2pi x)^2 + bAxis^2 sin^2 2pi x
struct EllipseModulus {
  double E, aAxis, bAxis2;
  EllipseModulus(const ModelParams& p, double delta, double Ev) {
    const double a1 = std::abs(p.a1);
    const double e = std::exp(kTwoPi * delta), ei = 1.0 / e;
    E = Ev;
    aAxis = a1 * (e + ei);
    const double b = a1 * (e - ei);
    bAxis2 = b * b;
  }
  double at(double x) const {
    const double c = std::cos(kTwoPi * x), s = std::sin(kTwoPi * x);
    const double t = E - aAxis * c;
    return std::sqrt(t * t + bAxis2 * s * s);
  }
  double sq_from_tables(double c, double s2) const {
    const double t = E - aAxis * c;
    return t * t + bAxis2 * s2;
  }
};

} // namespace

double grid_min_modulus(const ModelParams& p, double delta, double E,
                        long gridSize) {
  if (gridSize < 1000)
    throw std::invalid_argument("grid_min_modulus: gridSize must be >= 1000");
  const EllipseModulus f(p, delta, E);
  auto tables = grid_tables(gridSize);
  double best = f.sq_from_tables(tables->cosv[0], tables->sin2v[0]);
  long bestK = 0;
  for (long k = 1; k < gridSize; ++k) {
    const double m = f.sq_from_tables(tables->cosv[k], tables->sin2v[k]);
    if (m < best) {
      best = m;
      bestK = k;
    }
  }
  // golden-section refinement inside the winning cell
  const double inv = 1.0 / static_cast<double>(gridSize);
  double lo = (bestK - 1) * inv, hi = (bestK + 1) * inv;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = hi - (hi - lo) * kInvPhi;
  double x2 = lo + (hi - lo) * kInvPhi;
  double f1 = f.at(x1), f2 = f.at(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - (hi - lo) * kInvPhi;
      f1 = f.at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + (hi - lo) * kInvPhi;
      f2 = f.at(x2);
    }
  }
  return std::min({std::sqrt(best), f1, f2});
}

double quadrature_log_integral(const ModelParams& p, double delta, long nodes) {
  if (nodes < 1000)
    throw std::invalid_argument("quadrature_log_integral: nodes must be >= 1000");
  const EllipseModulus f(p, delta, p.E);
  KahanSum acc;
  double minSq = std::numeric_limits<double>::infinity();
  const double inv = 1.0 / static_cast<double>(nodes);
  for (long k = 0; k < nodes; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * inv;
    const double c = std::cos(kTwoPi * x), s = std::sin(kTwoPi * x);
    const double sq = f.sq_from_tables(c, s * s);
    minSq = std::min(minSq, sq);
    acc.add(std::log(sq));
  }
  if (std::sqrt(minSq) < 1e-8)
    throw std::domain_error("quadrature_log_integral: integrand within 1e-8 "
                            "of a zero (point on the ellipse)");
  return 0.5 * acc.value() * inv;
}

namespace {

// exact 2x2 product with power-of-two exponent tracking
struct TrackedMatrix {
  double b11 = 1.0, b12 = 0.0, b21 = 0.0, b22 = 1.0;
  int64_t exp2 = 0;

  void apply_block(double v) {
    const double t11 = v * b11 - b21, t12 = v * b12 - b22;
    b21 = b11;
    b22 = b12;
    b11 = t11;
    b12 = t12;
    const double mag = std::max({std::abs(b11), std::abs(b12), std::abs(b21),
                                 std::abs(b22)});
    int k;
    (void)std::frexp(mag, &k);
    if (k > 60 || k < -60) {
      const double scale = std::ldexp(1.0, -k);
      b11 *= scale;
      b12 *= scale;
      b21 *= scale;
      b22 *= scale;
      exp2 += k;
    }
  }
  double log_abs_b11() const { return std::log(std::abs(b11)) + exp2 * kLn2; }
  double log_abs_b21() const { return std::log(std::abs(b21)) + exp2 * kLn2; }
  double log_op_norm() const {
    const double f = b11 * b11 + b12 * b12 + b21 * b21 + b22 * b22;
    const double d = std::abs(b11 * b22 - b12 * b21);
    double disc = f * f - 4.0 * d * d;
    if (disc < 0.0) disc = 0.0;
    return 0.5 * std::log(0.5 * (f + std::sqrt(disc))) + exp2 * kLn2;
  }
};

struct TrialMargin {
  double margin = std::numeric_limits<double>::infinity();
  long trial = -1;
  int n = 0;
};

} // namespace

OracleReport lemma31_exhaustive(long trials, int nMax, double vLo, double vHi,
                                uint64_t seed, int workers) {
  if (!(vLo > 2.0))
    throw std::invalid_argument("lemma31_exhaustive: |v| range must stay above 2");
  std::vector<TrialMargin> results(static_cast<std::size_t>(trials));
  parallel_for_index(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    TrialRng rng(seed, t);
    const int n = static_cast<int>(rng.next_index(nMax));
    TrackedMatrix m;
    KahanSum lowerLog; // sum of ln(|v_j|-1)
    double worst = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      const double mag = rng.uniform(vLo, vHi);
      const double v = rng.next_bool() ? mag : -mag;
      m.apply_block(v);
      lowerLog.add(std::log(mag - 1.0));
      // prefix invariants (every k)
      worst = std::min(worst, m.log_abs_b11() - lowerLog.value());
      worst = std::min(worst, m.log_abs_b11() - m.log_abs_b21());
    }
    worst = std::min(worst, m.log_op_norm() - lowerLog.value());
    results[t] = {worst, static_cast<long>(t), n};
  });
  TrialMargin worst;
  for (const auto& r : results)
    if (r.margin < worst.margin) worst = r;
  OracleReport rep;
  rep.name = "lemma31";
  rep.trials = trials;
  rep.worstCaseMargin = worst.margin;
  rep.worstCaseInput = {static_cast<double>(worst.trial),
                        static_cast<double>(worst.n)};
  rep.passed = worst.margin >= -1e-9;
  return rep;
}

std::pair<double, double> entrywise_product_floor(const ModelParams& p,
                                                  double eps, double x,
                                                  long n) {
  p.validate();
  if (n < 1)
    throw std::invalid_argument("entrywise_product_floor: n must be >= 1");
  KahanSum rhsAcc;
  for (long j = 0; j < n; ++j) {
    const PhasePoint zj(x + static_cast<double>(j) * p.alpha, eps);
    const double av = std::abs(potential_value(p, zj));
    if (!(av > 2.0))
      throw std::domain_error(
          "entrywise_product_floor: orbit point " + std::to_string(j) +
          " has |potential| <= 2 (Lemma 3.1 hypothesis fails)");
    rhsAcc.add(std::log(av - 1.0));
  }
  const double rhs = rhsAcc.value();
  const double lhs = product_log_norm(p, PhasePoint(x, eps), n).log_operator();
  if (!(lhs >= rhs - 1e-9))
    throw std::logic_error("entrywise_product_floor: norm fell below the "
                           "entrywise product bound");
  return {lhs, rhs};
}

// ------------------------------------------------------------------------

OracleReport run_lemma31_suite(uint64_t seed, long trials, int nMax,
                               double vLo, double vHi, int workers) {
  return lemma31_exhaustive(trials, nMax, vLo, vHi, seed, workers);
}

OracleReport run_ellipse_suite(uint64_t seed, long trials, long gridSize,
                               int workers) {
  struct Row {
    double margin;
    double a1, delta, E;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  grid_tables(gridSize); // build once before the parallel section
  parallel_for_index(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    TrialRng rng(seed, t);
    ModelParams p;
    p.a1 = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    if (rng.next_bool()) p.a1 = -p.a1;
    const double delta = rng.uniform(0.01, 1.5);
    const double aAxis =
        std::abs(p.a1) * (std::exp(kTwoPi * delta) + std::exp(-kTwoPi * delta));
    const double E = rng.uniform(-1.5 * aAxis, 1.5 * aAxis);
    const double closed = ellipse_distance(p, delta, E);
    const double grid = grid_min_modulus(p, delta, E, gridSize);
    const double scale = 1.0 + std::abs(closed);
    const double gap = (grid - closed) / scale;
    // grid approaches from above: gap in [-1e-9, 1e-6]
    const double margin = std::min(1e-6 - gap, gap + 1e-9);
    rows[t] = {margin, p.a1, delta, E};
  });
  Row worst{std::numeric_limits<double>::infinity(), 0, 0, 0};
  for (const auto& r : rows)
    if (r.margin < worst.margin) worst = r;
  OracleReport rep;
  rep.name = "ellipse";
  rep.trials = trials;
  rep.worstCaseMargin = worst.margin;
  rep.worstCaseInput = {worst.a1, worst.delta, worst.E};
  rep.passed = worst.margin >= 0.0;
  return rep;
}

OracleReport run_jensen_suite(uint64_t seed, long trials, long nodes,
                              int workers) {
  struct Row {
    double margin;
    double a1, delta, E;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));
  parallel_for_index(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    TrialRng rng(seed, t);
    ModelParams p;
    double delta = 0.0;
    // resample until both roots stay a factor e^{1e-3} away from |z| = 1,
    // so the midpoint rule is geometrically convergent at the given nodes
    for (int attempt = 0;; ++attempt) {
      p.a1 = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
      delta = rng.uniform(1e-3, 1.0);
      const double a1 = p.a1;
      p.E = rng.uniform(-3.0, 3.0) * (a1 * (std::exp(kTwoPi * delta) +
                                            std::exp(-kTwoPi * delta)));
      const double disc = p.E * p.E - 4.0 * a1 * a1;
      double nearLog;
      if (disc < 0.0) {
        nearLog = kTwoPi * delta;
      } else {
        const double sq = std::sqrt(disc);
        const double q = 0.5 * (p.E + std::copysign(sq, p.E));
        const double z1 = std::abs(q / (a1 * std::exp(-kTwoPi * delta)));
        const double z2 = std::abs(a1 * std::exp(kTwoPi * delta) / q);
        nearLog = std::min(std::abs(std::log(z1)), std::abs(std::log(z2)));
      }
      if (nearLog >= 1e-3) break;
      if (attempt > 200)
        throw std::logic_error("run_jensen_suite: rejection sampling stalled");
    }
    const double exact = jensen_integral(p, delta, p.E);
    const double quad = quadrature_log_integral(p, delta, nodes);
    const double floor = kTwoPi * delta + std::log(std::abs(p.a1));
    const double margin =
        std::min(1e-5 - std::abs(exact - quad), exact - floor + 1e-9);
    rows[t] = {margin, p.a1, delta, p.E};
  });
  Row worst{std::numeric_limits<double>::infinity(), 0, 0, 0};
  for (const auto& r : rows)
    if (r.margin < worst.margin) worst = r;
  OracleReport rep;
  rep.name = "jensen";
  rep.trials = trials;
  rep.worstCaseMargin = worst.margin;
  rep.worstCaseInput = {worst.a1, worst.delta, worst.E};
  rep.passed = worst.margin >= 0.0;
  return rep;
}

OracleReport run_quantization_suite(const LeOptions& opt, int gridSteps,
                                    int workers) {
  static constexpr double kPairs[3][2] = {{2.0, 0.05}, {0.5, 2.0}, {3.0, 0.01}};
  static constexpr double kEnergies[3] = {0.0, 1.0, 2.5};
  LeOptions o = opt;
  o.workers = workers;
  OracleReport rep;
  rep.name = "quantization";
  rep.worstCaseMargin = std::numeric_limits<double>::infinity();
  ToleranceSet tol;
  for (const auto& pair : kPairs) {
    for (double E : kEnergies) {
      ModelParams p{pair[0], pair[1], E, kGoldenMean};
      double epsMax = 1.0;
      if (p.a2 != 0.0 && p.a1 != 0.0 && std::abs(p.a1 / p.a2) >= 100.0)
        epsMax = 3.0 * epsilon0(p);
      const LEProfile prof = le_profile(p, epsMax, gridSteps, o, tol);
      if (prof.regime == Regime::Unresolved) {
        rep.worstCaseMargin = -1.0;
        rep.worstCaseInput = {p.a1, p.a2, p.E, 0.0};
        rep.trials += static_cast<long>(prof.segmentSlopes.size());
        continue;
      }
      for (std::size_t i = 0; i < prof.segmentSlopes.size(); ++i) {
        if (!prof.resolvedMask[i]) continue; // straddled breakpoint gaps
        ++rep.trials;
        const double resid =
            std::abs(prof.segmentSlopes[i] - prof.accelerations[i]);
        const double margin = tol.slope_integer - resid;
        if (margin < rep.worstCaseMargin) {
          rep.worstCaseMargin = margin;
          rep.worstCaseInput = {p.a1, p.a2, p.E, prof.epsGrid[i]};
        }
      }
    }
  }
  rep.passed = rep.worstCaseMargin >= 0.0;
  return rep;
}

} // namespace cocyclelab
