#pragma once

#include <functional>
#include <optional>
#include <string>

#include "lawshield/law.hpp"
#include "lawshield/trajectory.hpp"

namespace lawshield {

/// Realized prefix of the running episode. Append-only; kept in full
/// (episodes are short), which trivially covers every law's temporal
/// lookback.
class HistoryBuffer {
 public:
  explicit HistoryBuffer(double dt) : trace_(dt) {}
  void append(TraceStep step) { trace_.append(std::move(step)); }
  const Trace& trace() const { return trace_; }
  bool empty() const { return trace_.empty(); }
  const WorldState& last_state() const { return trace_.back().state; }

 private:
  Trace trace_;
};

/// Last approved candidate plus the index of the next untracked point.
struct TrajectoryBuffer {
  Candidate candidate;
  std::size_t next = 0;

  bool empty() const { return candidate.traj.empty(); }
  std::size_t remaining() const {
    return next >= candidate.traj.size() ? 0 : candidate.traj.size() - next;
  }
};

/// End-state condition that keeps a legal extension available: at a
/// lane center, |vy| < 1e-6, speed within [0, v_max].
bool recoverability_check(const Trace& candidate, const RoadMap& map, double v_max);

struct CheckResult {
  bool legal = false;
  std::string veto_path;     // failing sub-formula path when illegal
  std::size_t veto_step = 0; // earliest failing step on the combined trace
};

enum class Mode { Shielded, RlOnly, BackupOnly };
Mode mode_from_string(const std::string& s);
const char* to_string(Mode mode);

/// One hybrid decision: which trajectory gets tracked for the next
/// window and why.
struct Decision {
  PolicyTag tag = PolicyTag::None;
  const Trace* traj = nullptr;  // owned by the forecaster's buffer
  std::size_t start = 0;        // first point of the tracked window
  std::optional<ActionTarget> target;
  std::optional<CheckResult> rl_check;
  bool backup_consulted = false;
  bool backup_found = false;
};

/// Vets candidates against the law over history + future and applies
/// the three-case switch with the trajectory buffer. Stateful and
/// single-owner per episode; check() itself is pure.
class Forecaster {
 public:
  static constexpr std::size_t kTrackSteps = 5;  // decision every 0.5 s at dt = 0.1

  Forecaster(const LawFile& law, ltl::EvalContext ctx, const RoadMap& map, double dt, double v_max)
      : law_(law), ctx_(std::move(ctx)), map_(map), history_(dt), v_max_(v_max) {}

  HistoryBuffer& history() { return history_; }
  const HistoryBuffer& history() const { return history_; }
  const TrajectoryBuffer& buffer() const { return buffer_; }

  /// Legality of history + candidate. The candidate's first point must
  /// coincide with the history's last state (tolerance 1e-6).
  CheckResult check(const Candidate& candidate) const;

  /// The Eq-13-style three-case rule. `rl` may be empty (backup-only
  /// mode); `backup` is invoked lazily and must return a candidate that
  /// is already legal and safe, or nothing.
  Decision decide(const std::optional<Candidate>& rl,
                  const std::function<std::optional<Candidate>()>& backup);

 private:
  void approve(const Candidate& candidate);

  const LawFile& law_;
  ltl::EvalContext ctx_;
  const RoadMap& map_;
  HistoryBuffer history_;
  TrajectoryBuffer buffer_;
  double v_max_;
};

}  // namespace lawshield
