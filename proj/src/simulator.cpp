#include "lawshield/simulator.hpp"

#include <cmath>

#include "lawshield/predicates.hpp"

namespace lawshield {

ScriptOracle::ScriptOracle(const Scenario& scenario, double speed_scale) {
  const OtherScript& script = scenario.other;
  proto_.y = scenario.map.lane_center(script.lane);
  proto_.length = script.length;
  proto_.width = script.width;

  const double dt = scenario.dt;
  const std::size_t horizon_steps =
      static_cast<std::size_t>(std::ceil(3.0 / dt - 1e-9));  // long-term action span
  std::size_t want = scenario.step_count() + horizon_steps + 1;
  double defined = script.defined_until();
  if (std::isfinite(defined)) {
    // steps with t strictly inside the scripted span
    std::size_t cap = static_cast<std::size_t>(std::ceil(defined / dt - 1e-9));
    want = std::min(want, cap);
  }
  xs_.reserve(want);
  vs_.reserve(want);
  double x = script.x0;
  for (std::size_t k = 0; k < want; ++k) {
    double t = static_cast<double>(k) * dt;
    double v = script.speed_at(t) * speed_scale;
    xs_.push_back(x);
    vs_.push_back(v);
    x += v * dt;
  }
}

VehicleState ScriptOracle::other_at(std::size_t step) const {
  if (step >= xs_.size()) throw Error("other-vehicle script exhausted");
  VehicleState v = proto_;
  v.x = xs_[step];
  v.vx = vs_[step];
  return v;
}

std::vector<VehicleState> ScriptOracle::predict(std::size_t step, std::size_t horizon_steps) const {
  if (step + horizon_steps >= xs_.size()) {
    throw Error("prediction horizon overruns the scripted span");
  }
  std::vector<VehicleState> out;
  out.reserve(horizon_steps + 1);
  for (std::size_t k = 0; k <= horizon_steps; ++k) out.push_back(other_at(step + k));
  return out;
}

WorldState step_world(const WorldState& world, const WorldState& planned,
                      const ScriptOracle& oracle, std::size_t next_step, double dt,
                      double speed_limit) {
  if (std::abs(planned.t - (world.t + dt)) > 1e-9) {
    throw Error("plan/sim time grid mismatch at t = " + std::to_string(planned.t));
  }
  if (planned.ego.vx > speed_limit + 0.5) {
    throw Error("planned speed implausible: " + std::to_string(planned.ego.vx));
  }
  WorldState next;
  next.ego = planned.ego;
  next.other = oracle.other_at(next_step);
  next.t = static_cast<double>(next_step) * dt;
  next.map = world.map;
  return next;
}

bool in_collision(const WorldState& w) {
  double dx = w.ego.x - w.other.x;
  double dy = w.ego.y - w.other.y;
  double r = (w.ego.length + w.other.length) / 4.0;
  return std::hypot(dx, dy) < r;
}

ActionTarget resolve_target(const WorldState& w, const RoadMap& map, ActionTarget a) {
  int lane = lane_of(w.ego, map) + a.p_lat;
  if (!map.lane_exists(lane)) return {0, a.p_lon};
  return a;
}

namespace {

Trace prefix_of(const Trace& trace, std::size_t last) {
  Trace out(trace.dt());
  for (std::size_t i = 0; i <= last; ++i) out.append(trace[i]);
  return out;
}

}  // namespace

AuditResult audit_trace(const LawFile& law, const Trace& trace, const ltl::EvalContext& ctx) {
  AuditResult res;
  res.law_ok.assign(trace.size(), true);
  if (trace.empty()) return res;

  const ltl::Formula& f = law.formula();
  if (f.op == ltl::Op::Always) {
    for (std::size_t k = 0; k < trace.size(); ++k) {
      if (!ltl::eval_at(*f.a, trace, k, ctx)) {
        res.law_ok[k] = false;
        res.violations += 1;
        if (!res.first_violation) res.first_violation = k;
      }
    }
    return res;
  }
  if (ltl::eval_trace(f, trace, ctx) == 1) return res;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (ltl::eval_trace(f, prefix_of(trace, k), ctx) == 0) {
      res.law_ok[k] = false;
      res.violations = 1;
      res.first_violation = k;
      return res;
    }
  }
  // whole-trace failure not attributable to a prefix (suffix-sensitive law)
  res.law_ok.back() = false;
  res.violations = 1;
  res.first_violation = trace.size() - 1;
  return res;
}

EpisodeResult run_episode(const Scenario& scenario, const LawFile& law, const QTable* table,
                          const EpisodeOptions& options) {
  const RoadMap& map = scenario.map;
  const double dt = scenario.dt;
  ScriptOracle oracle(scenario, options.speed_scale);
  TrajectoryParams params;
  params.dt = dt;
  params.v_max = scenario.speed_limit;
  const std::size_t horizon_steps = static_cast<std::size_t>(std::ceil(params.horizon / dt - 1e-9));

  ltl::EvalContext ctx = law.context(builtin_registry());
  ctx.flags["prescribed"] = scenario.ego.prescribed ? 1.0 : 0.0;
  Forecaster forecaster(law, ctx, map, dt, scenario.speed_limit);

  WorldState world = scenario.initial_state();
  world.other = oracle.other_at(0);
  forecaster.history().append({world, std::nullopt, PolicyTag::None});

  BackupConfig bcfg;
  EpisodeResult res;
  const std::size_t n_steps = scenario.step_count();
  bool collided = in_collision(world);

  for (std::size_t step = 0; step < n_steps && !collided; step += Forecaster::kTrackSteps) {
    std::optional<Candidate> rl;
    if (options.mode != Mode::BackupOnly) {
      ActionTarget target = table ? table->act(encode_state(world, map)) : ActionTarget{0, 0.0};
      target = resolve_target(world, map, target);
      rl = generate_candidate(world, target, map, oracle.predict(step, horizon_steps), params);
    }

    DecisionRecord rec;
    rec.step = step;
    rec.t = world.t;
    rec.had_rl = rl.has_value();

    const Trace* traj = nullptr;
    std::size_t start = 0;
    if (options.mode == Mode::RlOnly) {
      rec.tag = PolicyTag::Rl;
      rec.rl_legal = true;  // unchecked by construction
      rec.chosen = rl->target;
      traj = &rl->traj;
      start = 1;
    } else {
      auto backup_fn = [&]() -> std::optional<Candidate> {
        PlanOutcome out =
            plan_backup(world, map, oracle.predict(step, horizon_steps), params, scenario.v_ref,
                        bcfg, [&](const Candidate& c) { return forecaster.check(c); });
        if (options.dump_candidates) {
          for (std::size_t i = 0; i < out.scored.size(); ++i) {
            const ScoredCandidate& sc = out.scored[i];
            res.candidates.push_back({step, static_cast<int>(i), sc.candidate.target, sc.safe,
                                      sc.legal, sc.cost, sc.selected});
          }
        }
        return out.best;
      };
      Decision d = forecaster.decide(rl, backup_fn);
      rec.tag = d.tag;
      if (d.rl_check) {
        rec.rl_legal = d.rl_check->legal;
        rec.rl_veto_path = d.rl_check->veto_path;
        rec.rl_veto_step = d.rl_check->veto_step;
      }
      rec.backup_consulted = d.backup_consulted;
      rec.backup_found = d.backup_found;
      if (d.target) rec.chosen = *d.target;
      traj = d.traj;
      start = d.start;
    }
    res.decisions.push_back(rec);

    for (std::size_t j = 0; j < Forecaster::kTrackSteps && step + j < n_steps; ++j) {
      const TraceStep& planned = (*traj)[start + j];
      world = step_world(world, planned.state, oracle, step + j + 1, dt, scenario.speed_limit);
      forecaster.history().append({world, rec.chosen, rec.tag});
      if (in_collision(world)) {
        collided = true;
        break;
      }
    }
  }

  res.trace = forecaster.history().trace();
  res.collided = collided;
  res.completed = !collided && res.trace.size() == n_steps + 1;
  res.audit = audit_trace(law, res.trace, ctx);

  double speed_sum = 0.0;
  for (std::size_t i = 0; i < res.trace.size(); ++i) speed_sum += res.trace.state(i).ego.vx;
  res.mean_speed = res.trace.empty() ? 0.0 : speed_sum / static_cast<double>(res.trace.size());
  return res;
}

}  // namespace lawshield
