#include "lawshield/world.hpp"

#include <cmath>

namespace lawshield {

const char* to_string(Indicator ind) {
  switch (ind) {
    case Indicator::Off: return "off";
    case Indicator::Left: return "left";
    case Indicator::Right: return "right";
  }
  return "off";
}

Indicator indicator_from_string(const std::string& s) {
  if (s == "off") return Indicator::Off;
  if (s == "left") return Indicator::Left;
  if (s == "right") return Indicator::Right;
  throw Error("unknown indicator state: " + s);
}

double next_indicator_time(const VehicleState& prev, Indicator next, double dt) {
  if (prev.indicator != next) return 0.0;
  long long n = std::llround(prev.indicator_time / dt) + 1;
  return static_cast<double>(n) * dt;
}

const std::string& TrafficLight::color_at(double t) const {
  for (const auto& phase : schedule) {
    if (t < phase.until) return phase.color;
  }
  if (schedule.empty()) throw Error("traffic light has an empty schedule");
  return schedule.back().color;
}

bool TrafficLight::applies_to(int lane) const {
  if (lanes.empty()) return true;
  for (int l : lanes) {
    if (l == lane) return true;
  }
  return false;
}

double RoadMap::lane_center(int lane) const {
  if (!lane_exists(lane)) throw Error("lane index out of range: " + std::to_string(lane));
  return (lane + 0.5) * lane_width;
}

bool RoadMap::is_special(int lane) const {
  if (!lane_exists(lane)) throw Error("lane index out of range: " + std::to_string(lane));
  return lane < static_cast<int>(special.size()) && special[lane];
}

int lane_of(const VehicleState& v, const RoadMap& map) {
  if (v.y < 0.0 || v.y >= map.road_width()) {
    throw Error("vehicle center off road: y = " + std::to_string(v.y));
  }
  int lane = static_cast<int>(std::floor(v.y / map.lane_width));
  if (lane >= map.lane_count) lane = map.lane_count - 1;  // y == road_width excluded above
  return lane;
}

double gap_to(const VehicleState& a, const VehicleState& b) {
  double gap = std::abs(a.x - b.x) - 0.5 * (a.length + b.length);
  return gap > 0.0 ? gap : 0.0;
}

const char* to_string(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::None: return "-";
    case PolicyTag::Rl: return "rl";
    case PolicyTag::Backup: return "backup";
    case PolicyTag::Buffer: return "buffer";
  }
  return "-";
}

PolicyTag policy_tag_from_string(const std::string& s) {
  if (s == "rl") return PolicyTag::Rl;
  if (s == "backup") return PolicyTag::Backup;
  if (s == "buffer") return PolicyTag::Buffer;
  if (s == "-" || s.empty()) return PolicyTag::None;
  throw Error("unknown policy tag: " + s);
}

void Trace::append(TraceStep step) {
  if (!steps_.empty()) {
    double expected = steps_.back().state.t + dt_;
    if (std::abs(step.state.t - expected) > 1e-9) {
      throw Error("trace step off the dt grid: got t=" + std::to_string(step.state.t) +
                  ", expected " + std::to_string(expected));
    }
  }
  steps_.push_back(std::move(step));
}

Trace Trace::concat(const Trace& future, double tol) const {
  if (future.empty()) return *this;
  if (empty()) return future;
  if (std::abs(future.dt() - dt_) > 1e-12) {
    throw Error("trace concat: dt mismatch");
  }
  const WorldState& last = back().state;
  const WorldState& head = future.state(0);
  double miss = std::abs(head.t - last.t);
  miss = std::max(miss, std::abs(head.ego.x - last.ego.x));
  miss = std::max(miss, std::abs(head.ego.y - last.ego.y));
  miss = std::max(miss, std::abs(head.ego.vx - last.ego.vx));
  miss = std::max(miss, std::abs(head.ego.vy - last.ego.vy));
  if (miss > tol) {
    throw Error("trace concat: discontinuity of " + std::to_string(miss) +
                " between history end and candidate start");
  }
  Trace out = *this;
  for (std::size_t i = 1; i < future.size(); ++i) out.append(future[i]);
  return out;
}

}  // namespace lawshield
