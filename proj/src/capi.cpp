#include "cocycle_lab.h"

#include <cstdio>
#include <cstring>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>

#include "cocyclelab/bounds.hpp"
#include "cocyclelab/le.hpp"
#include "cocyclelab/model.hpp"
#include "cocyclelab/oracles.hpp"

using namespace cocyclelab;

namespace {

thread_local std::string t_lastError;

template <typename Fn>
clab_status guard(Fn&& fn) {
  try {
    fn();
    return CLAB_OK;
  } catch (const std::invalid_argument& e) {
    t_lastError = e.what();
    return CLAB_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    t_lastError = e.what();
    return CLAB_ERR_DOMAIN;
  } catch (const std::logic_error& e) {
    t_lastError = e.what();
    return CLAB_ERR_POSTCONDITION;
  } catch (const std::bad_alloc& e) {
    t_lastError = e.what();
    return CLAB_ERR_NOMEM;
  } catch (const std::exception& e) {
    t_lastError = e.what();
    return CLAB_ERR_INTERNAL;
  } catch (...) {
    t_lastError = "unknown error";
    return CLAB_ERR_INTERNAL;
  }
}

ModelParams to_params(const clab_model* m) {
  if (!m) throw std::invalid_argument("model pointer is null");
  return ModelParams{m->a1, m->a2, m->E, m->alpha};
}

LeOptions to_le_opts(const clab_le_opts* o) {
  LeOptions opt; // documented defaults: n = 1e5, K = 256
  if (o) {
    opt.n = o->n;
    opt.phases = o->phases;
    opt.phaseOffset = o->phase_offset;
    opt.workers = o->workers;
    opt.norm = o->use_operator_norm ? NormTag::Operator : NormTag::Frobenius;
  }
  return opt;
}

clab_le_result to_le_result(const LEEstimate& e) {
  return {e.value, e.stdError, e.orbitLength, e.phaseCount};
}

void require_out(const void* p) {
  if (!p) throw std::invalid_argument("output pointer is null");
}

} // namespace

struct clab_profile {
  LEProfile impl;
};

extern "C" {

const char* clab_status_name(clab_status s) {
  switch (s) {
    case CLAB_OK: return "ok";
    case CLAB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CLAB_ERR_DOMAIN: return "domain";
    case CLAB_ERR_POSTCONDITION: return "postcondition";
    case CLAB_ERR_NOMEM: return "nomem";
    case CLAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* clab_last_error(void) { return t_lastError.c_str(); }

const char* clab_version(void) { return "0.1.0"; }

double clab_golden_mean(void) { return kGoldenMean; }

clab_status clab_le_estimate(const clab_model* m, double eps,
                             const clab_le_opts* opts, clab_le_result* out) {
  return guard([&] {
    require_out(out);
    *out = to_le_result(le_estimate(to_params(m), eps, to_le_opts(opts)));
  });
}

clab_status clab_acceleration_at(const clab_model* m, double eps, double h,
                                 const clab_le_opts* opts,
                                 clab_accel_result* out) {
  return guard([&] {
    require_out(out);
    AccelReport r = acceleration_at(to_params(m), eps, h, to_le_opts(opts));
    *out = {r.rawSlope, r.nearest, r.residual, r.quantized ? 1 : 0};
  });
}

clab_status clab_asymptote_residual(const clab_model* m, double eps,
                                    const clab_le_opts* opts, double* out) {
  return guard([&] {
    require_out(out);
    *out = asymptote_residual(to_params(m), eps, to_le_opts(opts));
  });
}

clab_status clab_profile_compute(const clab_model* m,
                                 const clab_profile_opts* opts,
                                 clab_profile** out) {
  return guard([&] {
    require_out(out);
    if (!opts) throw std::invalid_argument("profile options pointer is null");
    ToleranceSet tol;
    if (opts->integer_slope_tol > 0.0) tol.slope_integer = opts->integer_slope_tol;
    if (opts->resolution_slope_tol > 0.0) tol.profile_slope = opts->resolution_slope_tol;
    if (opts->intercept_tol > 0.0) tol.intercept = opts->intercept_tol;
    auto holder = std::make_unique<clab_profile>();
    holder->impl = le_profile(to_params(m), opts->eps_max, opts->grid_steps,
                              to_le_opts(&opts->le), tol);
    *out = holder.release();
  });
}

void clab_profile_free(clab_profile* p) { delete p; }

int32_t clab_profile_node_count(const clab_profile* p) {
  return p ? static_cast<int32_t>(p->impl.epsGrid.size()) : 0;
}

clab_status clab_profile_node(const clab_profile* p, int32_t i, double* eps,
                              double* le, double* std_error) {
  return guard([&] {
    if (!p) throw std::invalid_argument("profile pointer is null");
    if (i < 0 || i >= static_cast<int32_t>(p->impl.epsGrid.size()))
      throw std::invalid_argument("node index out of range");
    if (eps) *eps = p->impl.epsGrid[i];
    if (le) *le = p->impl.leValues[i].value;
    if (std_error) *std_error = p->impl.leValues[i].stdError;
  });
}

int32_t clab_profile_gap_count(const clab_profile* p) {
  return p ? static_cast<int32_t>(p->impl.segmentSlopes.size()) : 0;
}

clab_status clab_profile_gap(const clab_profile* p, int32_t i,
                             double* slope_over_2pi, int32_t* acceleration,
                             int32_t* resolved) {
  return guard([&] {
    if (!p) throw std::invalid_argument("profile pointer is null");
    if (i < 0 || i >= static_cast<int32_t>(p->impl.segmentSlopes.size()))
      throw std::invalid_argument("gap index out of range");
    if (slope_over_2pi) *slope_over_2pi = p->impl.segmentSlopes[i];
    if (acceleration) *acceleration = p->impl.accelerations[i];
    if (resolved) *resolved = p->impl.resolvedMask[i];
  });
}

clab_regime clab_profile_regime(const clab_profile* p) {
  if (!p) return CLAB_REGIME_UNRESOLVED;
  switch (p->impl.regime) {
    case Regime::Fig1: return CLAB_REGIME_FIG1;
    case Regime::Fig2: return CLAB_REGIME_FIG2;
    case Regime::Fig3: return CLAB_REGIME_FIG3;
    case Regime::Fig4: return CLAB_REGIME_FIG4;
    default: return CLAB_REGIME_UNRESOLVED;
  }
}

clab_membership clab_profile_membership(const clab_profile* p) {
  if (!p) return CLAB_MEMBER_UNRESOLVED;
  switch (spectrum_membership(p->impl)) {
    case Membership::InSpectrum: return CLAB_MEMBER_IN_SPECTRUM;
    case Membership::NotInSpectrum: return CLAB_MEMBER_NOT_IN_SPECTRUM;
    case Membership::ZeroLE: return CLAB_MEMBER_ZERO_LE;
    default: return CLAB_MEMBER_UNRESOLVED;
  }
}

const char* clab_regime_name(clab_regime r) {
  switch (r) {
    case CLAB_REGIME_FIG1: return "Fig1";
    case CLAB_REGIME_FIG2: return "Fig2";
    case CLAB_REGIME_FIG3: return "Fig3";
    case CLAB_REGIME_FIG4: return "Fig4";
    default: return "Unresolved";
  }
}

const char* clab_membership_name(clab_membership m) {
  switch (m) {
    case CLAB_MEMBER_IN_SPECTRUM: return "InSpectrum";
    case CLAB_MEMBER_NOT_IN_SPECTRUM: return "NotInSpectrum";
    case CLAB_MEMBER_ZERO_LE: return "ZeroLE";
    default: return "Unresolved";
  }
}

clab_status clab_bounds_evaluate(const clab_model* m,
                                 const clab_le_result* measured,
                                 clab_bounds_report* out) {
  return guard([&] {
    require_out(out);
    std::optional<LEEstimate> est;
    if (measured)
      est = LEEstimate{measured->value, measured->n,
                       measured->phases, measured->std_error,
                       NormTag::Frobenius};
    BoundReport r = make_bound_report(to_params(m), est);
    std::memset(out, 0, sizeof(*out));
    if (r.herman) {
      out->has_herman = 1;
      out->herman = *r.herman;
    }
    if (r.theorem) {
      out->has_theorem = 1;
      out->theorem = *r.theorem;
    }
    if (r.epsilon0) {
      out->has_epsilon0 = 1;
      out->epsilon0 = *r.epsilon0;
    }
    if (r.chosenDelta) {
      out->chosen_delta = (*r.chosenDelta == DeltaChoice::Eps0) ? 1 : 2;
      out->sup_distance = *r.supDistance;
    }
    if (r.measured) {
      out->has_measured = 1;
      out->measured_le = r.measured->value;
      out->measured_std_error = r.measured->stdError;
      if (r.hermanMargin) out->herman_margin = *r.hermanMargin;
      if (r.theoremMargin) out->theorem_margin = *r.theoremMargin;
    }
  });
}

clab_status clab_epsilon0(const clab_model* m, double* out) {
  return guard([&] {
    require_out(out);
    *out = epsilon0(to_params(m));
  });
}

clab_status clab_ellipse_distance(const clab_model* m, double delta, double E,
                                  double* out) {
  return guard([&] {
    require_out(out);
    *out = ellipse_distance(to_params(m), delta, E);
  });
}

clab_status clab_jensen_integral(const clab_model* m, double delta, double E,
                                 double* out) {
  return guard([&] {
    require_out(out);
    *out = jensen_integral(to_params(m), delta, E);
  });
}

clab_status clab_term_ii_bound(const clab_model* m, double delta, double* out) {
  return guard([&] {
    require_out(out);
    *out = term_II_bound(to_params(m), delta);
  });
}

clab_status clab_grid_min_modulus(const clab_model* m, double delta, double E,
                                  int64_t grid_size, double* out) {
  return guard([&] {
    require_out(out);
    *out = grid_min_modulus(to_params(m), delta, E, grid_size);
  });
}

clab_status clab_quadrature_log_integral(const clab_model* m, double delta,
                                         int64_t nodes, double* out) {
  return guard([&] {
    require_out(out);
    *out = quadrature_log_integral(to_params(m), delta, nodes);
  });
}

clab_status clab_oracle_run(clab_suite suite, const clab_oracle_opts* opts,
                            clab_oracle_report* out) {
  return guard([&] {
    require_out(out);
    clab_oracle_opts o{};
    if (opts) o = *opts;
    OracleReport rep;
    switch (suite) {
      case CLAB_SUITE_LEMMA31:
        rep = run_lemma31_suite(o.seed, o.trials > 0 ? o.trials : 100000, 20,
                                2.01, 50.0, o.workers);
        break;
      case CLAB_SUITE_ELLIPSE:
        rep = run_ellipse_suite(o.seed, o.trials > 0 ? o.trials : 1000,
                                o.grid_or_nodes > 0 ? o.grid_or_nodes : 1000000,
                                o.workers);
        break;
      case CLAB_SUITE_JENSEN:
        rep = run_jensen_suite(o.seed, o.trials > 0 ? o.trials : 1000,
                               o.grid_or_nodes > 0 ? o.grid_or_nodes : 100000,
                               o.workers);
        break;
      case CLAB_SUITE_QUANTIZATION: {
        LeOptions le;
        if (o.le_n > 0) le.n = o.le_n;
        if (o.le_phases > 0) le.phases = o.le_phases;
        rep = run_quantization_suite(le, 24, o.workers);
        break;
      }
      default:
        throw std::invalid_argument("unknown oracle suite");
    }
    std::memset(out, 0, sizeof(*out));
    std::snprintf(out->name, sizeof(out->name), "%s", rep.name.c_str());
    out->trials = rep.trials;
    out->worst_margin = rep.worstCaseMargin;
    out->worst_input_len =
        static_cast<int32_t>(std::min<std::size_t>(rep.worstCaseInput.size(), 4));
    for (int32_t i = 0; i < out->worst_input_len; ++i)
      out->worst_input[i] = rep.worstCaseInput[i];
    out->passed = rep.passed ? 1 : 0;
  });
}

} // extern "C"
