#include "lawshield/backup.hpp"

#include <cmath>

namespace lawshield {

std::vector<ActionTarget> sample_targets(const WorldState& s0, const RoadMap& map) {
  const int lane0 = lane_of(s0.ego, map);
  const double base_lon[] = {-1.0, -0.4, 0.2};
  const int lat_order[] = {0, -1, 1};  // keep-lane candidates sample first

  std::vector<ActionTarget> out;
  for (int lat : lat_order) {
    if (!map.lane_exists(lane0 + lat)) continue;
    for (double lon : base_lon) out.push_back({lat, lon});
  }
  if (out.size() > 8) {
    // full 3x3 grid: drop keep-lane accelerate, the least useful sample
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out[i].p_lat == 0 && out[i].p_lon == 0.2) {
        out.erase(out.begin() + i);
        break;
      }
    }
  }
  const double extra_lon[] = {-0.8, -0.6, -0.2, 0.0, 0.4};
  std::size_t next_extra = 0;
  while (out.size() < 8 && next_extra < std::size(extra_lon)) {
    out.push_back({0, extra_lon[next_extra++]});
  }
  return out;
}

bool candidate_unsafe(const Trace& traj, const RoadMap& map, double margin) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const WorldState& s = traj.state(i);
    double dx = s.ego.x - s.other.x;
    double dy = s.ego.y - s.other.y;
    double r_safe = 0.5 * (s.ego.length + s.other.length) / 2.0 + margin;
    if (std::hypot(dx, dy) < r_safe && std::abs(dy) < 0.8 * map.lane_width) {
      return true;
    }
  }
  return false;
}

double candidate_cost(const Trace& traj, double v_ref, const BackupConfig& cfg) {
  double speed_dev = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    speed_dev += std::abs(traj.state(i).ego.vx - v_ref);
  }
  speed_dev /= static_cast<double>(traj.size());

  double lat_acc = 0.0;
  if (traj.size() > 1) {
    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
      lat_acc += std::abs(traj.state(i + 1).ego.vy - traj.state(i).ego.vy) / traj.dt();
    }
    lat_acc /= static_cast<double>(traj.size() - 1);
  }
  return cfg.w_speed * speed_dev + cfg.w_smooth * lat_acc;
}

PlanOutcome plan_backup(const WorldState& s0, const RoadMap& map,
                        const std::vector<VehicleState>& prediction,
                        const TrajectoryParams& params, double v_ref, const BackupConfig& cfg,
                        const std::function<CheckResult(const Candidate&)>& check_legal) {
  PlanOutcome outcome;
  std::vector<ActionTarget> targets = sample_targets(s0, map);

  for (const ActionTarget& target : targets) {
    ScoredCandidate sc;
    sc.candidate = generate_candidate(s0, target, map, prediction, params);
    sc.safe = !candidate_unsafe(sc.candidate.traj, map, cfg.safety_margin);
    sc.legal = check_legal(sc.candidate).legal;
    sc.cost = candidate_cost(sc.candidate.traj, v_ref, cfg);
    outcome.scored.push_back(std::move(sc));
  }

  int best = select_index(outcome.scored);
  if (best >= 0) {
    outcome.scored[best].selected = true;
    outcome.best = outcome.scored[best].candidate;
  }
  return outcome;
}

int select_index(const std::vector<ScoredCandidate>& scored) {
  int best = -1;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const ScoredCandidate& sc = scored[i];
    if (!sc.safe || !sc.legal) continue;
    if (best < 0 || sc.cost < scored[best].cost) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace lawshield
