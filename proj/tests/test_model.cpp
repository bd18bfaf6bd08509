#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cocyclelab/model.hpp"
#include "cocyclelab/rng.hpp"

using namespace cocyclelab;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// plain double 2x2 product, no rescaling; overflow-free for n <= 30 here
std::array<double, 4> direct_real_product(const ModelParams& p, double x, long n) {
  std::array<double, 4> m{1, 0, 0, 1};
  for (long j = 0; j < n; ++j) {
    const double xj = x + j * p.alpha;
    const double v =
        p.E - 2 * p.a1 * std::cos(kTwoPi * xj) - 2 * p.a2 * std::cos(2 * kTwoPi * xj);
    const std::array<double, 4> t{v * m[0] - m[2], v * m[1] - m[3], m[0], m[1]};
    m = t;
  }
  return m;
}
} // namespace

TEST_SUITE("cocycle-core") {

TEST_CASE("potential value at trivial points") {
  CHECK(potential_value({1, 0, 0, kGoldenMean}, PhasePoint(0.0)).real() ==
        doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(potential_value({1, 1, 0, kGoldenMean}, PhasePoint(0.25)).real() ==
        doctest::Approx(2.0).epsilon(1e-12));
  for (double eps : {0.3, 1.0, -0.7}) {
    const auto v = potential_value({1, 0, 0, kGoldenMean}, PhasePoint(0.0, eps));
    CHECK(v.real() == doctest::Approx(-2.0 * std::cosh(kTwoPi * eps)).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-9 * std::abs(v.real()));
  }
}

TEST_CASE("potential value is real on the real torus") {
  TrialRng rng(17, 0);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-10, 10),
                        rng.uniform(1e-3, 1 - 1e-3)};
    const auto v = potential_value(p, PhasePoint(rng.next_double()));
    CHECK(std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real())));
  }
}

TEST_CASE("transfer matrix shape and determinant") {
  const auto a = transfer_matrix({1, 0, 0, kGoldenMean}, PhasePoint(0.0));
  CHECK(a.m11.real() == doctest::Approx(-2.0));
  CHECK(a.m12.real() == -1.0);
  CHECK(a.m21.real() == 1.0);
  CHECK(a.m22.real() == 0.0);

  const auto b = transfer_matrix({0, 0, 3, kGoldenMean}, PhasePoint(0.77));
  CHECK(b.m11.real() == doctest::Approx(3.0));

  TrialRng rng(23, 1);
  for (int i = 0; i < 10000; ++i) {
    const ModelParams p{rng.uniform(-10, 10), rng.uniform(-10, 10),
                        rng.uniform(-20, 20), rng.uniform(1e-3, 1 - 1e-3)};
    const PhasePoint z(rng.next_double(), rng.uniform(-1, 1));
    CHECK(std::abs(transfer_matrix(p, z).det() - 1.0) < 1e-12);
  }
}

TEST_CASE("product log norm basics") {
  const ModelParams p{0.8, 0.3, 1.1, kGoldenMean};
  SUBCASE("n = 0 is the identity with logNorm 0") {
    const auto r = product_log_norm(p, PhasePoint(0.3), 0);
    CHECK(r.logNorm == 0.0);
    CHECK(r.steps == 0);
    CHECK(r.direction.m11.real() == 1.0);
    CHECK(r.direction.m12.real() == 0.0);
  }
  SUBCASE("n = 1 gives ln of the single factor") {
    const auto r = product_log_norm(p, PhasePoint(0.3), 1);
    const double expect = transfer_matrix(p, PhasePoint(0.3)).frobenius_norm();
    CHECK(r.logNorm == doctest::Approx(std::log(expect)).epsilon(1e-14));
    CHECK(r.direction.frobenius_norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("rotation fourth power returns to the identity") {
    const auto r = product_log_norm({0, 0, 0, kGoldenMean}, PhasePoint(0.2), 4);
    CHECK(r.logNorm == doctest::Approx(std::log(std::sqrt(2.0))).epsilon(1e-13));
  }
  SUBCASE("constant matrix growth rate") {
    // oracle: spectral radius of [[3,-1],[1,0]] is (3+sqrt(5))/2
    const auto r = product_log_norm({0, 0, 3, kGoldenMean}, PhasePoint(0.0), 10);
    CHECK(r.logNorm / 10.0 ==
          doctest::Approx(std::log((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(0.02));
  }
}

TEST_CASE("rescaled product tracks the exact product for n <= 30") {
  TrialRng rng(31, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelParams p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-4, 4),
                        kGoldenMean};
    const double x = rng.next_double();
    const long n = 1 + static_cast<long>(rng.next_index(30));
    const auto exact = direct_real_product(p, x, n);
    const double exactLog = 0.5 * std::log(exact[0] * exact[0] + exact[1] * exact[1] +
                                           exact[2] * exact[2] + exact[3] * exact[3]);
    const auto r = product_log_norm(p, PhasePoint(x), n);
    CHECK(r.log_frobenius() == doctest::Approx(exactLog).epsilon(1e-9));
    // eps = 0 keeps every entry real
    CHECK(std::abs(r.direction.m11.imag()) < 1e-12);
    CHECK(std::abs(r.direction.m21.imag()) < 1e-12);
  }
}

TEST_CASE("cocycle submultiplicativity in operator norm") {
  TrialRng rng(37, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const ModelParams p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-6, 6),
                        rng.uniform(1e-3, 1 - 1e-3)};
    const double x = rng.next_double();
    const double eps = rng.uniform(-0.5, 0.5);
    const long m = rng.next_index(16), n = rng.next_index(16);
    const double lhs = product_log_norm(p, PhasePoint(x, eps), m + n).log_operator();
    const double a = product_log_norm(p, PhasePoint(x + n * p.alpha, eps), m).log_operator();
    const double b = product_log_norm(p, PhasePoint(x, eps), n).log_operator();
    CHECK(lhs <= a + b + 1e-9);
  }
}

TEST_CASE("lemma 3.1 lower bound values") {
  CHECK(lemma31_lower_bound(std::array{3.0}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(lemma31_lower_bound(std::array{3.0, 3.0}) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK(lemma31_lower_bound(std::array{2.5, 4.0, 10.0}) ==
        doctest::Approx(40.5).epsilon(1e-14));
  CHECK(lemma31_lower_bound(std::array{-3.0, 3.0}) ==
        doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)lemma31_lower_bound(std::array{2.0}), std::domain_error);
  CHECK_THROWS_AS((void)lemma31_lower_bound(std::array{3.0, 1.5}), std::domain_error);

  // n = 1: ||[[3,-1],[1,0]]|| >= 2, and the n = 2 product [[8,-3],[3,-1]]
  const auto b1 = TransferMatrix::schrodinger(3.0);
  CHECK(b1.operator_norm() >= 2.0);
  const auto b2 = b1 * b1;
  CHECK(b2.m11.real() == doctest::Approx(8.0));
  CHECK(b2.m21.real() == doctest::Approx(3.0));
  CHECK(b2.operator_norm() >= 4.0);
}

TEST_CASE("model parameter validation") {
  CHECK_NOTHROW((ModelParams{1, 2, 3, 0.5}).validate());
  CHECK_THROWS_AS((ModelParams{1, 2, 3, 0.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1, 2, 3, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ModelParams{1, 2, 3, 1.7}).validate(), std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((ModelParams{inf, 0, 0, 0.5}).validate(), std::invalid_argument);
}

TEST_CASE("phase point wraps to [0,1)") {
  CHECK(PhasePoint(1.25).x == doctest::Approx(0.25));
  CHECK(PhasePoint(-0.25).x == doctest::Approx(0.75));
  CHECK(PhasePoint(3.0).x == 0.0);
  CHECK(PhasePoint(0.0).x == 0.0);
}

} // TEST_SUITE
