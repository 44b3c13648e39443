#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "lawshield/forecaster.hpp"
#include "lawshield/trajectory.hpp"

namespace lawshield {

struct BackupConfig {
  int n_candidates = 8;
  double w_speed = 1.0;       // weight on mean |vx - v_ref|
  double w_smooth = 0.5;      // weight on mean |lateral acceleration|
  double safety_margin = 2.0; // m added to the size-derived radius
};

struct ScoredCandidate {
  Candidate candidate;
  bool safe = false;
  bool legal = false;
  double cost = 0.0;
  bool selected = false;
};

/// Sampled target grid: {keep, left, right (existing lanes)} x
/// {-1, -0.4, 0.2}, trimmed/padded to exactly 8 with in-lane levels.
/// (keep, -1) — the in-lane hard brake — is always present and first.
std::vector<ActionTarget> sample_targets(const WorldState& s0, const RoadMap& map);

/// Conservative circle-style check against the predicted other
/// vehicle: unsafe if the centers come within the size radius + margin
/// while laterally closer than 0.8 lane widths.
bool candidate_unsafe(const Trace& traj, const RoadMap& map, double margin);

double candidate_cost(const Trace& traj, double v_ref, const BackupConfig& cfg);

/// Index of the cheapest safe-and-legal candidate, -1 if none. Ties
/// keep the earliest sample.
int select_index(const std::vector<ScoredCandidate>& scored);

struct PlanOutcome {
  std::optional<Candidate> best;
  std::vector<ScoredCandidate> scored;  // in sample order, for dumps/figures
};

/// The sample-filter-select loop: generate all candidates, flag safety
/// and legality, return the cheapest legal-and-safe one (ties keep the
/// earlier sample). Legality is delegated to the forecaster's check.
PlanOutcome plan_backup(const WorldState& s0, const RoadMap& map,
                        const std::vector<VehicleState>& prediction,
                        const TrajectoryParams& params, double v_ref, const BackupConfig& cfg,
                        const std::function<CheckResult(const Candidate&)>& check_legal);

}  // namespace lawshield
