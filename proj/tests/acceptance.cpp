// Acceptance suite: one numbered check per claim the laboratory must
// reproduce, each printed as a single [PASS]/[FAIL] line with its worst
// margin (positive margin = held with room to spare).
//
// usage: acceptance [criterion ...]   default: all of 1..9

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "cocyclelab/bounds.hpp"
#include "cocyclelab/kahan.hpp"
#include "cocyclelab/le.hpp"
#include "cocyclelab/model.hpp"
#include "cocyclelab/oracles.hpp"
#include "cocyclelab/rng.hpp"

using namespace cocyclelab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr uint64_t kSeed = 20240601;

struct Outcome {
  bool passed;
  double worstMargin;
  std::string note;
};

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
  return v;
}

// 1. Eq. 1.3 across the spectrum window: measured L + 3 se + 0.02 must stay
// above ln a1 - 10 sqrt(a2/a1) for every cell.
Outcome criterion1() {
  LeOptions o;
  o.n = 100000;
  o.phases = 256;
  double worst = 1e300;
  std::string at;
  for (double a1 : {1.5, 2.0, 4.0, 10.0}) {
    for (double div : {200.0, 1e4}) {
      const double a2 = a1 / div;
      const ModelParams base{a1, a2, 0.0, kGoldenMean};
      const auto bound = theorem_bound(base);
      if (!bound) return {false, -1.0, "theorem hypotheses unexpectedly fail"};
      const double span = 2 * a1 + 2 * a2 + 2.5;
      for (double E : linspace(-span, span, 101)) {
        ModelParams p = base;
        p.E = E;
        const LEEstimate le = le_estimate(p, 0.0, o);
        const double margin = le.value + 3 * le.stdError + 0.02 - *bound;
        if (margin < worst) {
          worst = margin;
          at = "a1=" + std::to_string(a1) + " a2=a1/" + std::to_string(div) +
               " E=" + std::to_string(E);
        }
      }
    }
  }
  return {worst >= 0.0, worst, at};
}

// 2. Herman floor: L + 3 se >= ln a2 - 0.02 over small-a1 grids.
Outcome criterion2() {
  LeOptions o;
  o.n = 20000;
  o.phases = 128;
  double worst = 1e300;
  std::string at;
  for (double a2 : {2.0, 3.0, 5.0}) {
    for (double a1 : {0.0, 0.5, 1.0}) {
      const double span = 2 * a1 + 2 * a2 + 2.5;
      for (double E : linspace(-span, span, 21)) {
        const ModelParams p{a1, a2, E, kGoldenMean};
        const LEEstimate le = le_estimate(p, 0.0, o);
        const double margin = le.value + 3 * le.stdError - (std::log(a2) - 0.02);
        if (margin < worst) {
          worst = margin;
          at = "a1=" + std::to_string(a1) + " a2=" + std::to_string(a2) +
               " E=" + std::to_string(E);
        }
      }
    }
  }
  return {worst >= 0.0, worst, at};
}

// 3. Quantization of acceleration on the documented profile set.
Outcome criterion3() {
  LeOptions o;
  o.n = 100000;
  o.phases = 256;
  const OracleReport rep = run_quantization_suite(o, 24, 0);
  std::string at;
  if (!rep.worstCaseInput.empty()) {
    at = "a1=" + std::to_string(rep.worstCaseInput[0]) +
         " a2=" + std::to_string(rep.worstCaseInput[1]) +
         " E=" + std::to_string(rep.worstCaseInput[2]) +
         " eps=" + std::to_string(rep.worstCaseInput[3]);
  }
  return {rep.passed, rep.worstCaseMargin, at};
}

// 4. Large-eps asymptote: |L(eps) - (4 pi eps + ln a2)| < 5e-3 at
// eps = max(3 eps0, 1.5).
Outcome criterion4() {
  LeOptions o;
  o.n = 20000;
  o.phases = 64;
  static constexpr double pairs[3][2] = {{2.0, 0.05}, {0.5, 2.0}, {3.0, 0.01}};
  double worst = 1e300;
  std::string at;
  for (const auto& pr : pairs) {
    for (double E : {0.0, 1.0, 2.5}) {
      const ModelParams p{pr[0], pr[1], E, kGoldenMean};
      double eps = 1.5;
      if (std::abs(p.a1 / p.a2) >= 100.0) eps = std::max(eps, 3.0 * epsilon0(p));
      const double resid = asymptote_residual(p, eps, o);
      const double margin = 5e-3 - std::abs(resid);
      if (margin < worst) {
        worst = margin;
        at = "a1=" + std::to_string(pr[0]) + " a2=" + std::to_string(pr[1]) +
             " E=" + std::to_string(E) + " eps=" + std::to_string(eps);
      }
    }
  }
  return {worst >= 0.0, worst, at};
}

// 5. Lemma 3.2: the closed-form sup distance clears (19/60) a1 e^{4 pi eps0}
// on 1e4 hypothesis-region samples, and matches the 1e6-point grid oracle
// within 1e-6 relative on the randomized agreement set.
Outcome criterion5() {
  double worstRel = 1e300;
  std::string at;
  for (long t = 0; t < 10000; ++t) {
    TrialRng rng(kSeed, t);
    const double a1 = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const double ratio = std::exp(rng.uniform(std::log(100.0), std::log(1e6)));
    const ModelParams p{a1, a1 / ratio, 0.0, kGoldenMean};
    const double reach = 3.0 * a1 * (std::sqrt(ratio) + 1.0 / std::sqrt(ratio));
    const double E = rng.uniform(-reach, reach);
    const Lemma32Result r = lemma32_sup(p, E);
    const double rel = (r.distance - r.floor) / r.floor;
    if (rel < worstRel) {
      worstRel = rel;
      at = "a1=" + std::to_string(a1) + " ratio=" + std::to_string(ratio) +
           " E=" + std::to_string(E);
    }
  }
  const OracleReport grid = run_ellipse_suite(kSeed, 1000, 1000000, 0);
  const bool ok = worstRel >= 0.0 && grid.passed;
  return {ok, std::min(worstRel, grid.worstCaseMargin),
          at + "; grid margin " + std::to_string(grid.worstCaseMargin)};
}

// 6. Lemma 3.1 randomized products with prefix invariants.
Outcome criterion6() {
  const OracleReport rep = run_lemma31_suite(kSeed, 100000, 20, 2.01, 50.0, 0);
  return {rep.passed, rep.worstCaseMargin,
          rep.worstCaseInput.size() == 2
              ? "trial=" + std::to_string((long)rep.worstCaseInput[0]) +
                    " n=" + std::to_string((int)rep.worstCaseInput[1])
              : ""};
}

// 7. Jensen evaluation vs quadrature, with the 2 pi delta + ln a1 floor.
Outcome criterion7() {
  const OracleReport rep = run_jensen_suite(kSeed, 1000, 100000, 0);
  return {rep.passed, rep.worstCaseMargin, ""};
}

// 8. Constant-cocycle oracle.
Outcome criterion8() {
  LeOptions o;
  o.n = 10000;
  o.phases = 16;
  const double expect = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  const LEEstimate hyp = le_estimate({0, 0, 3, kGoldenMean}, 0.0, o);
  const double m1 = 1e-3 - std::abs(hyp.value - expect);
  LeOptions oo = o;
  oo.norm = NormTag::Operator;
  const LEEstimate rot = le_estimate({0, 0, 0, kGoldenMean}, 0.0, oo);
  const double m2 = 1e-9 - std::abs(rot.value);
  return {m1 >= 0.0 && m2 >= 0.0, std::min(m1, m2),
          "E=3 err=" + std::to_string(std::abs(hyp.value - expect)) +
              " E=0 err=" + std::to_string(std::abs(rot.value))};
}

// 9. Engine invariant suite: evenness, midpoint convexity, Fekete
// monotonicity, unit determinants.
Outcome criterion9() {
  double worst = 1e300;
  std::string at;
  auto track = [&](double margin, const char* name) {
    if (margin < worst) {
      worst = margin;
      at = name;
    }
  };

  LeOptions o;
  o.n = 10000;
  o.phases = 64;
  // evenness in eps
  for (const ModelParams p : {ModelParams{2, 0.05, 0, kGoldenMean},
                              ModelParams{2, 0.05, 1, kGoldenMean},
                              ModelParams{2, 4, 0, kGoldenMean}}) {
    for (double eps : {0.3, 0.5}) {
      const auto plus = le_estimate(p, eps, o);
      const auto minus = le_estimate(p, -eps, o);
      track(3 * (plus.stdError + minus.stdError) + 1e-9 -
                std::abs(plus.value - minus.value),
            "evenness");
    }
  }

  // midpoint convexity on a measured profile (weighted chord for the
  // refined, non-uniform grid)
  LeOptions op;
  op.n = 50000;
  op.phases = 64;
  const LEProfile prof = le_profile({2, 0.05, 0, kGoldenMean}, 1.0, 16, op);
  for (std::size_t i = 0; i + 2 < prof.epsGrid.size(); ++i) {
    const double l = prof.epsGrid[i], m = prof.epsGrid[i + 1],
                 r = prof.epsGrid[i + 2];
    const double chord = ((r - m) * prof.leValues[i].value +
                          (m - l) * prof.leValues[i + 2].value) /
                         (r - l);
    track(chord + 0.01 - prof.leValues[i + 1].value, "convexity");
  }

  // Fekete monotonicity: doubling n cannot raise the average beyond slack
  for (const ModelParams p :
       {ModelParams{2, 0.05, 0, kGoldenMean}, ModelParams{2, 4, 0, kGoldenMean}}) {
    const auto small = le_estimate(p, 0.0, o);
    LeOptions o2 = o;
    o2.n = 2 * o.n;
    const auto big = le_estimate(p, 0.0, o2);
    track(small.value + 0.01 - big.value, "fekete");
  }

  // unit determinant of the cocycle matrix
  {
    TrialRng rng(kSeed, 99);
    double worstDet = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const ModelParams p{rng.uniform(-10, 10), rng.uniform(-10, 10),
                          rng.uniform(-20, 20), rng.uniform(1e-3, 1 - 1e-3)};
      const PhasePoint z(rng.next_double(), rng.uniform(-1, 1));
      worstDet =
          std::max(worstDet, std::abs(transfer_matrix(p, z).det() - 1.0));
    }
    track(1e-12 - worstDet, "unit-determinant");
  }

  return {worst >= 0.0, worst, at};
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "theorem 1.1 bound holds across the spectrum window", criterion1},
    {2, "herman floor ln|a2| holds on the small-a1 grid", criterion2},
    {3, "profile slopes quantize to integers in {0,1,2}", criterion3},
    {4, "large-eps profiles ride the 4 pi eps + ln|a2| asymptote", criterion4},
    {5, "lemma 3.2 sup-distance constant and grid-oracle agreement", criterion5},
    {6, "lemma 3.1 norm floor and prefix invariants", criterion6},
    {7, "jensen evaluation matches quadrature with its floor", criterion7},
    {8, "constant-cocycle oracle values", criterion8},
    {9, "engine invariants: evenness, convexity, fekete, determinants", criterion9},
};

} // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool allPassed = true;
  for (const Criterion& c : kCriteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const Outcome out = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] criterion %d: %s (worst margin %.6g)\n",
                out.passed ? "PASS" : "FAIL", c.id, c.title, out.worstMargin);
    if (!out.note.empty()) std::fprintf(stderr, "    at %s\n", out.note.c_str());
    std::fprintf(stderr, "    %.1f s\n", secs);
    std::fflush(stdout);
    allPassed = allPassed && out.passed;
  }
  return allPassed ? 0 : 1;
}
