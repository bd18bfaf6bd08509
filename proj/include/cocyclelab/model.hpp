#pragma once

#include <cmath>
#include <complex>
#include <span>

namespace cocyclelab {

// Default frequency: (sqrt(5)-1)/2. Strongly Diophantine, best finite-n
// convergence of the phase averages.
inline constexpr double kGoldenMean = 0.6180339887498948482045868343656;

inline double wrap01(double x) {
  double r = x - std::floor(x);
  return r < 1.0 ? r : 0.0; // floor rounding can produce r == 1.0
}

// Couplings and spectral parameter of the two-harmonic Harper-type operator
//   (Hu)_n = u_{n+1} + u_{n-1} + [2 a1 cos 2pi(x+n alpha) + 2 a2 cos 4pi(x+n alpha)] u_n.
struct ModelParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double E = 0.0;
  double alpha = kGoldenMean;

  // alpha in (0,1), all fields finite. Sign of a1/a2 is kept as given here;
  // bound formulas take absolute values internally.
  void validate() const;
};

// Point on the complexified torus: x + i*eps with x reduced mod 1.
struct PhasePoint {
  double x;
  double eps;
  PhasePoint(double x_, double eps_ = 0.0) : x(wrap01(x_)), eps(eps_) {}
};

// Element of SL(2,C); the Schrodinger shape is [[v, -1], [1, 0]].
struct TransferMatrix {
  std::complex<double> m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

  static TransferMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static TransferMatrix schrodinger(std::complex<double> v) {
    return {v, -1.0, 1.0, 0.0};
  }

  std::complex<double> det() const { return m11 * m22 - m12 * m21; }

  double frobenius_norm() const {
    return std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) +
                     std::norm(m22));
  }

  // Largest singular value from the 2x2 closed form:
  //   sigma_max^2 = (f + sqrt(f^2 - 4 d^2)) / 2,  f = |M|_F^2, d = |det M|.
  double operator_norm() const {
    double f = std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22);
    double d = std::abs(det());
    double disc = f * f - 4.0 * d * d;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }

  TransferMatrix operator*(const TransferMatrix& o) const {
    return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
            m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
  }
};

// A_n(x+i eps) in overflow-free form: A_n = exp(logNorm) * direction with
// |direction|_F = 1, so ln|A_n|_F = logNorm and
// ln|A_n|_op = logNorm + ln sigma_max(direction).
struct RescaledProduct {
  double logNorm = 0.0;
  TransferMatrix direction = TransferMatrix::identity();
  long steps = 0;

  double log_frobenius() const { return logNorm + std::log(direction.frobenius_norm()); }
  double log_operator() const { return logNorm + std::log(direction.operator_norm()); }
};

// E - a1 e^{2pi eps} e^{-2pi i x} - a1 e^{-2pi eps} e^{2pi i x}
//   - a2 e^{4pi eps} e^{-4pi i x} - a2 e^{-4pi eps} e^{4pi i x};
// equals E - 2 a1 cos 2pi(x+i eps) - 2 a2 cos 4pi(x+i eps). Real for eps = 0.
std::complex<double> potential_value(const ModelParams& p, const PhasePoint& z);

TransferMatrix transfer_matrix(const ModelParams& p, const PhasePoint& z);

// A(x+(n-1)alpha) ... A(x), rescaled to unit Frobenius norm after every
// factor, log accumulated with compensated summation. n = 0 gives the
// identity with logNorm 0.
RescaledProduct product_log_norm(const ModelParams& p, const PhasePoint& z, long n);

// prod_j (|v_j| - 1), the norm floor for products of [[v,-1],[1,0]] blocks.
// Requires every |v_j| > 2; computed as exp of a compensated log sum.
double lemma31_lower_bound(std::span<const double> vs);

} // namespace cocyclelab
