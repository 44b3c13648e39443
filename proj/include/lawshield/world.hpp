#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lawshield {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Indicator { Off, Left, Right };

const char* to_string(Indicator ind);
Indicator indicator_from_string(const std::string& s);

/// Kinematic state of one vehicle. Positions are road coordinates:
/// x longitudinal (m), y lateral (m, 0 at the left road edge, growing
/// rightward). indicator_time is the time spent in the current
/// indicator state, kept on the simulation-step grid.
struct VehicleState {
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  Indicator indicator = Indicator::Off;
  double indicator_time = 0.0;
  double length = 4.2;
  double width = 1.8;
};

// indicator_time for the step after `prev` when the indicator becomes
// `next`. Computed as step-count * dt (not accumulated) so states
// re-derived from an exported trace carry identical values.
double next_indicator_time(const VehicleState& prev, Indicator next, double dt);

struct LightPhase {
  double until = 0.0;  // phase active while t < until
  std::string color;
};

struct TrafficLight {
  double position = 0.0;
  std::vector<int> lanes;  // empty = applies to every lane
  std::vector<LightPhase> schedule;

  const std::string& color_at(double t) const;
  bool applies_to(int lane) const;
};

/// Straight multi-lane road. Lanes are indexed 0..lane_count-1 from the
/// left; lane i occupies the half-open lateral band [i*w, (i+1)*w).
struct RoadMap {
  int lane_count = 1;
  double lane_width = 3.5;
  std::vector<bool> special;  // per-lane exclusive-use flag
  std::vector<int> direction; // +1 along +x, -1 oncoming
  std::optional<double> stop_line;
  std::optional<TrafficLight> light;

  bool lane_exists(int lane) const { return lane >= 0 && lane < lane_count; }
  double lane_center(int lane) const;
  double road_width() const { return lane_count * lane_width; }
  bool is_special(int lane) const;
};

struct WorldState {
  VehicleState ego;
  VehicleState other;
  double t = 0.0;
  const RoadMap* map = nullptr;
};

/// Lane containing the vehicle's geometric center. Boundary ties go to
/// the right (higher index). Throws if the center is off the road.
int lane_of(const VehicleState& v, const RoadMap& map);

/// Longitudinal bumper-to-bumper gap, floored at 0. Symmetric.
double gap_to(const VehicleState& a, const VehicleState& b);

struct ActionTarget {
  int p_lat = 0;      // -1 left, 0 keep, +1 right
  double p_lon = 0.0; // normalized acceleration in [-1, 1]
};

inline bool operator==(const ActionTarget& a, const ActionTarget& b) {
  return a.p_lat == b.p_lat && a.p_lon == b.p_lon;
}

enum class PolicyTag { None, Rl, Backup, Buffer };

const char* to_string(PolicyTag tag);
PolicyTag policy_tag_from_string(const std::string& s);

struct TraceStep {
  WorldState state;
  std::optional<ActionTarget> action;
  PolicyTag tag = PolicyTag::None;
};

/// Fixed-step sequence of (state, applied action) pairs. Appends check
/// the time grid so a realized prefix and a candidate future always
/// concatenate into a valid trace.
class Trace {
 public:
  Trace() = default;
  explicit Trace(double dt) : dt_(dt) {}

  void append(TraceStep step);
  void append_state(const WorldState& s) { append({s, std::nullopt, PolicyTag::None}); }

  std::size_t size() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  double dt() const { return dt_; }

  const TraceStep& operator[](std::size_t i) const { return steps_[i]; }
  TraceStep& at(std::size_t i) { return steps_.at(i); }
  const WorldState& state(std::size_t i) const { return steps_[i].state; }
  const TraceStep& back() const { return steps_.back(); }

  /// this trace followed by `future` with future[0] dropped; future[0]
  /// must coincide with back() within `tol` (time and ego kinematics).
  Trace concat(const Trace& future, double tol = 1e-6) const;

 private:
  double dt_ = 0.1;
  std::vector<TraceStep> steps_;
};

}  // namespace lawshield
