#include "lawshield/predicates.hpp"

namespace lawshield {

namespace {

using ltl::EvalContext;
using ltl::EvalError;

const RoadMap& map_of(const Trace& trace, std::size_t i) {
  const RoadMap* map = trace.state(i).map;
  if (!map) throw EvalError("trace state carries no road map");
  return *map;
}

bool on_special_lane(const Trace& trace, std::size_t i, const EvalContext&,
                     const std::vector<double>&) {
  const WorldState& s = trace.state(i);
  return map_of(trace, i).is_special(lane_of(s.ego, *s.map));
}

bool prescribed_vehicle(const Trace&, std::size_t, const EvalContext& ctx,
                        const std::vector<double>&) {
  return ctx.flag("prescribed") != 0.0;
}

bool exceed_stop_line(const Trace& trace, std::size_t i, const EvalContext&,
                      const std::vector<double>&) {
  const RoadMap& map = map_of(trace, i);
  if (!map.stop_line) throw EvalError("exceed_stop_line: map has no stop line");
  const VehicleState& ego = trace.state(i).ego;
  return ego.x + 0.5 * ego.length > *map.stop_line;
}

bool light_red_on_ego_lane(const Trace& trace, std::size_t i, const EvalContext&,
                           const std::vector<double>&) {
  const RoadMap& map = map_of(trace, i);
  if (!map.light) throw EvalError("light_red_on_ego_lane: map has no traffic light");
  const WorldState& s = trace.state(i);
  return map.light->applies_to(lane_of(s.ego, map)) && map.light->color_at(s.t) == "red";
}

// event atom: the ego center moved to a higher lane index across the
// step ending at i; false at step 0
bool cross_right_line(const Trace& trace, std::size_t i, const EvalContext&,
                      const std::vector<double>&) {
  if (i == 0) return false;
  const RoadMap& map = map_of(trace, i);
  return lane_of(trace.state(i).ego, map) > lane_of(trace.state(i - 1).ego, map);
}

bool indicator_right_ge(const Trace& trace, std::size_t i, const EvalContext&,
                        const std::vector<double>& args) {
  const VehicleState& ego = trace.state(i).ego;
  // inclusive >=; the tiny slack absorbs dt-grid rounding in durations
  return ego.indicator == Indicator::Right && ego.indicator_time >= args[0] - 1e-9;
}

bool gap_gt(const Trace& trace, std::size_t i, const EvalContext&, const std::vector<double>& args) {
  const WorldState& s = trace.state(i);
  return gap_to(s.ego, s.other) > args[0];  // strict
}

double var_dv(const Trace& trace, std::size_t i) {
  const WorldState& s = trace.state(i);
  return s.ego.vx - s.other.vx;
}

}  // namespace

void register_builtin_predicates(ltl::PredicateRegistry& registry) {
  registry.add("on_special_lane", 0, on_special_lane);
  registry.add("prescribed_vehicle", 0, prescribed_vehicle);
  registry.add("exceed_stop_line", 0, exceed_stop_line);
  registry.add("light_red_on_ego_lane", 0, light_red_on_ego_lane);
  registry.add("cross_right_line", 0, cross_right_line);
  registry.add("indicator_right_ge", 1, indicator_right_ge);
  registry.add("gap_gt", 1, gap_gt);
  registry.add_var("dv", var_dv);
}

const ltl::PredicateRegistry& builtin_registry() {
  static const ltl::PredicateRegistry registry = [] {
    ltl::PredicateRegistry r;
    register_builtin_predicates(r);
    return r;
  }();
  return registry;
}

}  // namespace lawshield
