#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>

#include "lawshield/world.hpp"

namespace lawshield {

/// The 15-action grid of long-term targets: lane offset {-1,0,1} x
/// normalized acceleration {-1,-0.5,0,0.5,1}, in fixed index order.
struct DiscreteActionGrid {
  static constexpr int kCount = 15;
  static constexpr std::array<int, 3> kLat = {-1, 0, 1};
  static constexpr std::array<double, 5> kLon = {-1.0, -0.5, 0.0, 0.5, 1.0};

  static ActionTarget action(int index);
  static int index(ActionTarget a);  // throws if not on the grid
  static constexpr int kDefaultIndex = 7;  // (0, 0)
};

/// Discretized world-state key: ego lane, ego vx bin (2 m/s), relative
/// x bin (5 m, clipped +-50), relative vx bin (2 m/s, clipped +-10),
/// other lane, light phase (0 when the map has no light).
using StateKey = std::array<int, 6>;

StateKey encode_state(const WorldState& s, const RoadMap& map);

struct QHyper {
  double alpha = 0.1;
  double gamma = 0.95;
  void validate() const;
};

struct QTable {
  struct Cell {
    std::array<double, DiscreteActionGrid::kCount> q{};
    std::array<std::uint32_t, DiscreteActionGrid::kCount> visits{};
  };

  std::map<StateKey, Cell> cells;
  std::uint64_t seed = 0;
  std::uint64_t episodes = 0;
  QHyper hyper;

  bool empty() const { return cells.empty(); }

  /// Greedy action; unseen keys fall back to the neutral (0, 0) target.
  /// Ties break to the lowest action index.
  int act_index(const StateKey& key) const;
  ActionTarget act(const StateKey& key) const { return DiscreteActionGrid::action(act_index(key)); }

  std::string serialize() const;
  static QTable deserialize(const std::string& text);
  void save(const std::filesystem::path& path) const;
  static QTable load(const std::filesystem::path& path);
};

/// Deterministic RNG helpers; distributions are hand-rolled so results
/// do not depend on the standard library's implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform01() { return (engine_() >> 11) * (1.0 / 9007199254740992.0); }
  int uniform_int(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 engine_;
};

/// Tabular Q-learning core. Single-threaded by design; one learner per
/// training run. n_actions may restrict the learner to a prefix of the
/// action grid (the toy problems in tests use 2).
///
/// New cells start at kUntriedValue instead of 0: with mostly-negative
/// rewards a zero-initialized untried action would beat every tried
/// one at argmax time, so a sparsely visited cell would keep proposing
/// actions nobody ever evaluated.
class QLearner {
 public:
  static constexpr double kUntriedValue = -50.0;

  QLearner(QHyper hyper, std::uint64_t seed, int n_actions = DiscreteActionGrid::kCount);

  int select_action(const StateKey& key, double epsilon);
  void update(const StateKey& s, int action, double reward, const StateKey& next, bool terminal);

  const QTable& table() const { return table_; }
  QTable&& take_table() && { return std::move(table_); }
  Rng& rng() { return rng_; }

 private:
  int greedy(const StateKey& key) const;

  QTable table_;
  Rng rng_;
  int n_actions_;
};

/// Linear 1.0 -> 0.05 anneal over the first 60% of episodes.
double epsilon_for(std::uint64_t episode, std::uint64_t total_episodes);

}  // namespace lawshield
