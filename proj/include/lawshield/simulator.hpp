#pragma once

#include <optional>

#include "lawshield/backup.hpp"
#include "lawshield/forecaster.hpp"
#include "lawshield/law.hpp"
#include "lawshield/qlearn.hpp"
#include "lawshield/scenario.hpp"

namespace lawshield {

/// Exact evaluation of the other-vehicle script on the dt grid. Doubles
/// as the ground-truth prediction oracle: predict() returns exactly the
/// states the episode will realize.
class ScriptOracle {
 public:
  ScriptOracle(const Scenario& scenario, double speed_scale);

  VehicleState other_at(std::size_t step) const;
  /// States at steps [step, step + horizon_steps], inclusive.
  std::vector<VehicleState> predict(std::size_t step, std::size_t horizon_steps) const;
  std::size_t defined_steps() const { return xs_.size(); }

 private:
  std::vector<double> xs_;
  std::vector<double> vs_;
  VehicleState proto_;
};

/// Exact-tracking step: the ego assumes the planned point, the other
/// vehicle advances per script, time moves one dt. Throws on plan/sim
/// grid mismatch, implausible planned speed, or script exhaustion.
WorldState step_world(const WorldState& world, const WorldState& planned,
                      const ScriptOracle& oracle, std::size_t next_step, double dt,
                      double speed_limit);

bool in_collision(const WorldState& w);

/// Clamp a target whose lane does not exist to keep-lane (same p_lon).
ActionTarget resolve_target(const WorldState& w, const RoadMap& map, ActionTarget a);

struct AuditResult {
  std::vector<bool> law_ok;  // per trace step
  std::size_t violations = 0;
  std::optional<std::size_t> first_violation;
};

/// Post-hoc legality audit of a realized trace, independent of the
/// forecaster's online bookkeeping. Laws with the usual outer-Always
/// shape are audited stepwise (each failing step counts); other shapes
/// fall back to first-failing-prefix.
AuditResult audit_trace(const LawFile& law, const Trace& trace, const ltl::EvalContext& ctx);

struct DecisionRecord {
  std::size_t step = 0;
  double t = 0.0;
  PolicyTag tag = PolicyTag::None;
  bool had_rl = false;
  bool rl_legal = false;
  std::string rl_veto_path;
  std::size_t rl_veto_step = 0;
  bool backup_consulted = false;
  bool backup_found = false;
  ActionTarget chosen;
};

struct CandidateRecord {
  std::size_t step = 0;
  int index = 0;
  ActionTarget target;
  bool safe = false;
  bool legal = false;
  double cost = 0.0;
  bool selected = false;
};

struct EpisodeResult {
  Trace trace;
  std::vector<DecisionRecord> decisions;
  std::vector<CandidateRecord> candidates;
  AuditResult audit;
  double mean_speed = 0.0;
  bool collided = false;
  bool completed = false;
};

struct EpisodeOptions {
  Mode mode = Mode::Shielded;
  double speed_scale = 1.0;
  bool dump_candidates = false;
};

/// One deterministic episode: a decision every 0.5 s, exact tracking in
/// between, violation audit at the end. `table` may be null (neutral
/// default action in rl/shielded modes, unused in backup-only).
/// Trace states reference `scenario.map`; keep the scenario alive while
/// using the result.
EpisodeResult run_episode(const Scenario& scenario, const LawFile& law, const QTable* table,
                          const EpisodeOptions& options);

}  // namespace lawshield
