#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "lawshield/world.hpp"

namespace lawshield {

struct SpeedSegment {
  double until = std::numeric_limits<double>::infinity();  // active while t < until
  double vx = 0.0;
};

/// Piecewise-constant speed script for the other vehicle; it never
/// leaves its lane and never reacts to the ego.
struct OtherScript {
  int lane = 0;
  double x0 = 0.0;
  double length = 4.2;
  double width = 1.8;
  std::vector<SpeedSegment> profile;

  double speed_at(double t) const;
  /// inf when the final segment is open-ended
  double defined_until() const;
};

struct RewardConfig {
  double w_speed = 0.1;
  double collision_penalty = 100.0;
  double red_light_penalty = 100.0;
  double w_offlane = 0.0;            // per-step penalty while in a penalized lane
  std::vector<int> penalized_lanes;
};

struct EgoInit {
  int lane = 0;
  double x = 0.0;
  double vx = 0.0;
  double length = 4.2;
  double width = 1.8;
  bool prescribed = false;
};

struct Scenario {
  std::string name;
  double dt = 0.1;
  double duration = 20.0;
  double v_ref = 8.0;
  double speed_limit = 12.0;
  std::uint64_t seed = 1;
  std::filesystem::path law_path;  // resolved relative to the scenario file
  RoadMap map;
  EgoInit ego;
  OtherScript other;
  RewardConfig reward;
  double train_speed_jitter = 0.25;  // other-vehicle speed randomization in training

  WorldState initial_state() const;
  std::size_t step_count() const;  // duration / dt
};

Scenario load_scenario(const std::filesystem::path& path);
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir);

/// Deterministic other-vehicle speed scale in [1-spread, 1+spread]
/// derived from the seed (used for the +-20% batch perturbations).
double perturbation_scale(std::uint64_t seed, double spread);

}  // namespace lawshield
