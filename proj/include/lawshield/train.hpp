#pragma once

#include <cstdint>
#include <vector>

#include "lawshield/qlearn.hpp"
#include "lawshield/scenario.hpp"

namespace lawshield {

struct TrainCurveRow {
  std::uint64_t episode = 0;
  double epsilon = 0.0;
  double episode_return = 0.0;
  std::size_t steps = 0;
  bool collided = false;
};

struct TrainResult {
  QTable table;
  std::vector<TrainCurveRow> curve;
};

/// Semi-Markov tabular Q-learning on the scenario: one decision per
/// completed long-term action, reward summed over its tracked steps,
/// discount applied per decision. Reward terms: speed tracking,
/// collision, red-light crossing, optional penalized-lane occupancy —
/// the variable law file plays no part here. Deterministic per seed.
TrainResult train_qtable(const Scenario& scenario, std::uint64_t episodes, std::uint64_t seed,
                         QHyper hyper);

}  // namespace lawshield
