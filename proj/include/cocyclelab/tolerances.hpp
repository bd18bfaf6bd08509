#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace cocyclelab {

// Central knob table. Defaults are sized so that the documented engine
// parameters (n = 1e5, K = 256) resolve profile slopes to about +-0.03.
struct ToleranceSet {
  double slope_integer = 0.1;    // |slope - nearest int| accepted as quantized
  double profile_slope = 0.15;   // resolution threshold inside le_profile
  double intercept = 0.05;       // nats, line-intercept matching in classify
  double convexity = 0.01;       // midpoint convexity slack
  double bound_slack_sigmas = 3; // statistical slack factor on stdError
  double bound_slack_abs = 0.02; // absolute slack on >=-type bound checks

  void set(const std::string& key, double value) {
    if (key == "slope")
      slope_integer = value;
    else if (key == "profile_slope")
      profile_slope = value;
    else if (key == "intercept")
      intercept = value;
    else if (key == "convexity")
      convexity = value;
    else if (key == "bound_slack_sigmas")
      bound_slack_sigmas = value;
    else if (key == "bound_slack_abs")
      bound_slack_abs = value;
    else
      throw std::invalid_argument("unknown tolerance key: " + key);
  }
};

} // namespace cocyclelab
