#pragma once

#include "lawshield/ltl.hpp"

namespace lawshield {

/// Registers the driving atoms laws are written over:
///   on_special_lane, prescribed_vehicle, exceed_stop_line,
///   light_red_on_ego_lane, cross_right_line, indicator_right_ge(T),
///   gap_gt(expr)
/// plus the context variable dv = ego.vx - other.vx.
/// Missing map features (no stop line, no light) and missing scenario
/// flags evaluate to hard errors, never to false.
void register_builtin_predicates(ltl::PredicateRegistry& registry);

/// Registry with the builtin driving atoms already installed.
const ltl::PredicateRegistry& builtin_registry();

}  // namespace lawshield
