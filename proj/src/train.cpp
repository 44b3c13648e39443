#include "lawshield/train.hpp"

#include <algorithm>
#include <cmath>

#include "lawshield/simulator.hpp"
#include "lawshield/trajectory.hpp"

namespace lawshield {

namespace {

bool lane_penalized(const RewardConfig& reward, int lane) {
  return std::find(reward.penalized_lanes.begin(), reward.penalized_lanes.end(), lane) !=
         reward.penalized_lanes.end();
}

bool red_light_crossing(const RoadMap& map, const WorldState& prev, const WorldState& next) {
  if (!map.light || !map.stop_line) return false;
  double line = *map.stop_line;
  double prev_front = prev.ego.x + 0.5 * prev.ego.length;
  double next_front = next.ego.x + 0.5 * next.ego.length;
  if (!(prev_front <= line && next_front > line)) return false;
  return map.light->applies_to(lane_of(next.ego, map)) && map.light->color_at(next.t) == "red";
}

}  // namespace

TrainResult train_qtable(const Scenario& scenario, std::uint64_t episodes, std::uint64_t seed,
                         QHyper hyper) {
  hyper.validate();
  QLearner learner(hyper, seed);
  TrainResult result;

  const RoadMap& map = scenario.map;
  const double dt = scenario.dt;
  TrajectoryParams params;
  params.dt = dt;
  params.v_max = scenario.speed_limit;
  const std::size_t horizon_steps = static_cast<std::size_t>(std::ceil(params.horizon / dt - 1e-9));
  const std::size_t n_steps = scenario.step_count();
  const RewardConfig& reward = scenario.reward;

  for (std::uint64_t ep = 0; ep < episodes; ++ep) {
    double epsilon = epsilon_for(ep, episodes);
    double scale = 1.0 + scenario.train_speed_jitter * (2.0 * learner.rng().uniform01() - 1.0);
    // widen state coverage: execution replans mid-action, so it visits
    // states between the semi-Markov decision points seen here
    double gap_scale = 0.5 + learner.rng().uniform01();
    double v0_scale = 0.8 + 0.4 * learner.rng().uniform01();
    ScriptOracle oracle(scenario, scale);

    WorldState world = scenario.initial_state();
    world.other = oracle.other_at(0);
    world.ego.x = world.other.x - gap_scale * (world.other.x - scenario.ego.x);
    world.ego.vx = std::min(v0_scale * world.ego.vx, scenario.speed_limit);

    double episode_return = 0.0;
    std::size_t step = 0;
    bool collided = false;

    while (step < n_steps && !collided) {
      StateKey key = encode_state(world, map);
      int action = learner.select_action(key, epsilon);
      ActionTarget target = resolve_target(world, map, DiscreteActionGrid::action(action));
      Candidate cand =
          generate_candidate(world, target, map, oracle.predict(step, horizon_steps), params);

      double r = 0.0;
      std::size_t consumed = 0;
      for (std::size_t j = 1; j < cand.traj.size() && step + j <= n_steps; ++j) {
        WorldState next =
            step_world(world, cand.traj.state(j), oracle, step + j, dt, scenario.speed_limit);
        r -= std::abs(next.ego.vx - scenario.v_ref) * reward.w_speed;
        if (lane_penalized(reward, lane_of(next.ego, map))) r -= reward.w_offlane;
        if (red_light_crossing(map, world, next)) r -= reward.red_light_penalty;
        world = next;
        consumed = j;
        if (in_collision(world)) {
          r -= reward.collision_penalty;
          collided = true;
          break;
        }
      }
      step += consumed;
      bool terminal = collided || step >= n_steps;
      learner.update(key, action, r, encode_state(world, map), terminal);
      episode_return += r;
    }
    result.curve.push_back({ep, epsilon, episode_return, step, collided});
  }

  QTable table = std::move(learner).take_table();
  table.episodes = episodes;
  result.table = std::move(table);
  return result;
}

}  // namespace lawshield
