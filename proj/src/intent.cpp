#include "lefturn/intent.hpp"

#include <cmath>
#include <stdexcept>

namespace lefturn {

void IntentModelParams::validate() const {
  if (!(sigma_accel > 0.0) || !(sigma_headway > 0.0))
    throw std::invalid_argument("intent sigmas must be > 0");
  if (prior_aggressive < 0.0 || prior_non_aggressive < 0.0 ||
      std::abs(prior_aggressive + prior_non_aggressive - 1.0) > 1e-12)
    throw std::invalid_argument("intent priors must be non-negative and sum to 1");
  if (!(classify_threshold > 0.0 && classify_threshold < 1.0))
    throw std::invalid_argument("classify_threshold must lie in (0, 1)");
  if (!(speed_floor > 0.0)) throw std::invalid_argument("speed_floor must be > 0");
  if (!(mean_accel_aggressive > mean_accel_non_aggressive))
    throw std::invalid_argument("aggressive mean acceleration must exceed the non-aggressive one");
}

const char* to_string(Intent i) {
  return i == Intent::Aggressive ? "Aggressive" : "NonAggressive";
}

FollowerKinematics follower_kinematics(const FollowerObservation& obs, double speed_floor) {
  const auto& s = obs.samples;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].gap < 0.0) throw std::invalid_argument("follower gap must be >= 0");
    if (k > 0 && !(s[k].time > s[k - 1].time))
      throw std::invalid_argument("rear samples must have strictly increasing times");
  }
  std::array<double, 3> pos{};
  for (std::size_t k = 0; k < s.size(); ++k) pos[k] = s[k].own_position - s[k].gap;

  const double v1 = (pos[1] - pos[0]) / (s[1].time - s[0].time);
  const double v2 = (pos[2] - pos[1]) / (s[2].time - s[1].time);

  FollowerKinematics k;
  k.position = pos[2];
  k.speed = v2;
  k.acceleration = (v2 - v1) / (s[2].time - s[1].time);
  k.time_headway = v2 >= speed_floor ? s[2].gap / v2 : kInfiniteHeadway;
  return k;
}

namespace {

// Log of a Gaussian density up to the shared -log(sqrt(2 pi)) constant.
double log_gauss(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma);
}

}  // namespace

IntentEstimate intent_probability(const FollowerKinematics& kin, const IntentModelParams& params) {
  IntentEstimate e;
  e.observation = kin;

  if (kin.acceleration >= params.mean_accel_aggressive) {
    e.p_aggressive = 1.0;
    e.p_non_aggressive = 0.0;
  } else if (kin.acceleration <= params.mean_accel_non_aggressive) {
    e.p_aggressive = 0.0;
    e.p_non_aggressive = 1.0;
  } else {
    double log_a = log_gauss(kin.acceleration, params.mean_accel_aggressive, params.sigma_accel);
    double log_na =
        log_gauss(kin.acceleration, params.mean_accel_non_aggressive, params.sigma_accel);
    if (std::isfinite(kin.time_headway)) {
      log_a += log_gauss(kin.time_headway, params.mean_headway_aggressive, params.sigma_headway);
      log_na +=
          log_gauss(kin.time_headway, params.mean_headway_non_aggressive, params.sigma_headway);
    }
    // P(A|Att) = L_A P(A) / (L_A P(A) + L_NA P(NA)), evaluated as a logistic
    // of the log posterior odds so the two posteriors sum to one.
    const double log_odds = (log_a + std::log(params.prior_aggressive)) -
                            (log_na + std::log(params.prior_non_aggressive));
    if (log_odds >= 0.0) {
      const double r = std::exp(-log_odds);
      e.p_aggressive = 1.0 / (1.0 + r);
      e.p_non_aggressive = r / (1.0 + r);
    } else {
      const double r = std::exp(log_odds);
      e.p_aggressive = r / (1.0 + r);
      e.p_non_aggressive = 1.0 / (1.0 + r);
    }
  }
  e.classification =
      e.p_aggressive > params.classify_threshold ? Intent::Aggressive : Intent::NonAggressive;
  return e;
}

}  // namespace lefturn
