#include "lawshield/forecaster.hpp"

#include <cmath>

namespace lawshield {

Mode mode_from_string(const std::string& s) {
  if (s == "shielded") return Mode::Shielded;
  if (s == "rl-only") return Mode::RlOnly;
  if (s == "backup-only") return Mode::BackupOnly;
  throw Error("unknown mode: " + s + " (expected shielded|rl-only|backup-only)");
}

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Shielded: return "shielded";
    case Mode::RlOnly: return "rl-only";
    case Mode::BackupOnly: return "backup-only";
  }
  return "?";
}

bool recoverability_check(const Trace& candidate, const RoadMap& map, double v_max) {
  if (candidate.empty()) return false;
  const VehicleState& end = candidate.back().state.ego;
  if (std::abs(end.vy) >= 1e-6) return false;
  if (end.vx < 0.0 || end.vx > v_max + 1e-9) return false;
  int lane = lane_of(end, map);
  return std::abs(end.y - map.lane_center(lane)) < 1e-6;
}

CheckResult Forecaster::check(const Candidate& candidate) const {
  if (!recoverability_check(candidate.traj, map_, v_max_)) {
    throw Error("candidate violates the recoverability end-state condition");
  }
  Trace combined = history_.trace().concat(candidate.traj);
  CheckResult result;
  result.legal = law_.eval(combined, ctx_) == 1;
  if (!result.legal) {
    ltl::Failure why = ltl::explain_failure(law_.formula(), combined, 0, ctx_);
    result.veto_path = why.path;
    result.veto_step = why.step;
  }
  return result;
}

void Forecaster::approve(const Candidate& candidate) {
  buffer_.candidate = candidate;
  buffer_.next = 1;  // point 0 is the already-realized decision state
}

Decision Forecaster::decide(const std::optional<Candidate>& rl,
                            const std::function<std::optional<Candidate>()>& backup) {
  if (history_.empty()) throw Error("decide() before any realized state");

  Decision d;
  if (rl) {
    d.rl_check = check(*rl);
    if (d.rl_check->legal) {
      approve(*rl);
      d.tag = PolicyTag::Rl;
      d.target = rl->target;
    }
  }
  if (d.tag == PolicyTag::None && backup) {
    d.backup_consulted = true;
    std::optional<Candidate> chosen = backup();
    if (chosen) {
      d.backup_found = true;
      approve(*chosen);
      d.tag = PolicyTag::Backup;
      d.target = chosen->target;
    }
  }
  if (d.tag == PolicyTag::None) {
    // both policies vetoed: continue the buffered trajectory
    if (buffer_.remaining() < kTrackSteps) {
      throw Error(
          "trajectory buffer exhausted with no legal candidate; the recoverability "
          "end-state guarantee was broken");
    }
    d.tag = PolicyTag::Buffer;
    d.target = buffer_.candidate.target;
  }

  d.traj = &buffer_.candidate.traj;
  d.start = buffer_.next;
  buffer_.next += kTrackSteps;
  return d;
}

}  // namespace lawshield
