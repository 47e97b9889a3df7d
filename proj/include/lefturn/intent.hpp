#pragma once

// Following-vehicle kinematics from rear-camera samples and a two-hypothesis
// Gaussian Bayes classifier over (acceleration, time headway).

#include <array>
#include <limits>

namespace lefturn {

// One rear-camera reading. `own_position` is the station of the subject's
// rear bumper; `gap` is the bumper-to-bumper distance to the follower
// (the follower is behind, so its position is own_position - gap).
struct RearSample {
  double time = 0.0;
  double own_position = 0.0;
  double gap = 0.0;
};

struct FollowerObservation {
  std::array<RearSample, 3> samples{};
};

inline constexpr double kInfiniteHeadway = std::numeric_limits<double>::infinity();

struct FollowerKinematics {
  double position = 0.0;
  double speed = 0.0;
  double acceleration = 0.0;
  double time_headway = kInfiniteHeadway;
};

struct IntentModelParams {
  double mean_accel_aggressive = 2.0;
  double mean_accel_non_aggressive = -2.0;
  double sigma_accel = 4.0 / 3.0;
  double mean_headway_aggressive = 1.0;
  double mean_headway_non_aggressive = 2.0;
  double sigma_headway = 0.5;
  double prior_aggressive = 0.5;
  double prior_non_aggressive = 0.5;
  double classify_threshold = 0.5;
  double speed_floor = 0.1;  // below this the headway is reported as infinite

  void validate() const;
};

enum class Intent { Aggressive, NonAggressive };

const char* to_string(Intent i);

struct IntentEstimate {
  double p_aggressive = 0.5;
  double p_non_aggressive = 0.5;
  Intent classification = Intent::NonAggressive;
  FollowerKinematics observation{};
};

// Finite-difference position, speed, acceleration and headway at the last
// sample. Throws std::invalid_argument on non-increasing sample times or a
// negative gap.
FollowerKinematics follower_kinematics(const FollowerObservation& obs,
                                       double speed_floor = 0.1);

IntentEstimate intent_probability(const FollowerKinematics& kin, const IntentModelParams& params);

}  // namespace lefturn
