#include "lawshield/scenario.hpp"

#include <fstream>

#include <json.hpp>

namespace lawshield {

using nlohmann::json;

double OtherScript::speed_at(double t) const {
  for (const auto& seg : profile) {
    if (t < seg.until) return seg.vx;
  }
  if (profile.empty()) throw Error("other-vehicle script is empty");
  throw Error("other-vehicle script exhausted at t = " + std::to_string(t));
}

double OtherScript::defined_until() const {
  if (profile.empty()) return 0.0;
  return profile.back().until;
}

WorldState Scenario::initial_state() const {
  WorldState w;
  w.map = &map;
  w.t = 0.0;
  w.ego.x = ego.x;
  w.ego.y = map.lane_center(ego.lane);
  w.ego.vx = ego.vx;
  w.ego.length = ego.length;
  w.ego.width = ego.width;
  w.other.x = other.x0;
  w.other.y = map.lane_center(other.lane);
  w.other.vx = other.speed_at(0.0);
  w.other.length = other.length;
  w.other.width = other.width;
  return w;
}

std::size_t Scenario::step_count() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

namespace {

RoadMap parse_map(const json& j) {
  RoadMap map;
  map.lane_count = j.at("lanes").get<int>();
  map.lane_width = j.value("lane_width", 3.5);
  if (map.lane_count < 1) throw Error("scenario map needs at least one lane");
  map.special.assign(map.lane_count, false);
  if (j.contains("special")) {
    for (int lane : j.at("special").get<std::vector<int>>()) {
      if (lane < 0 || lane >= map.lane_count) throw Error("special lane index out of range");
      map.special[lane] = true;
    }
  }
  map.direction.assign(map.lane_count, 1);
  if (j.contains("directions")) {
    auto dirs = j.at("directions").get<std::vector<int>>();
    if (static_cast<int>(dirs.size()) != map.lane_count) {
      throw Error("directions list must match lane count");
    }
    map.direction = dirs;
  }
  if (j.contains("stop_line") && !j.at("stop_line").is_null()) {
    map.stop_line = j.at("stop_line").get<double>();
  }
  if (j.contains("light") && !j.at("light").is_null()) {
    const json& jl = j.at("light");
    TrafficLight light;
    light.position = jl.at("position").get<double>();
    if (jl.contains("lanes")) light.lanes = jl.at("lanes").get<std::vector<int>>();
    for (const json& jp : jl.at("schedule")) {
      LightPhase phase;
      double until = jp.at("until").is_null() ? -1.0 : jp.at("until").get<double>();
      phase.until = until < 0.0 ? std::numeric_limits<double>::infinity() : until;
      phase.color = jp.at("color").get<std::string>();
      light.schedule.push_back(phase);
    }
    if (light.schedule.empty()) throw Error("traffic light needs a schedule");
    map.light = light;
  }
  return map;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("scenario parse error: ") + e.what());
  }
  try {
    Scenario sc;
    sc.name = j.value("name", "scenario");
    sc.dt = j.value("dt", 0.1);
    sc.duration = j.at("duration").get<double>();
    sc.v_ref = j.at("v_ref").get<double>();
    sc.speed_limit = j.at("speed_limit").get<double>();
    sc.seed = j.value("seed", 1);
    sc.map = parse_map(j.at("map"));

    if (j.contains("law") && !j.at("law").is_null()) {
      std::filesystem::path p = j.at("law").get<std::string>();
      sc.law_path = p.is_absolute() ? p : base_dir / p;
    }

    const json& je = j.at("ego");
    sc.ego.lane = je.at("lane").get<int>();
    sc.ego.x = je.value("x", 0.0);
    sc.ego.vx = je.at("vx").get<double>();
    sc.ego.length = je.value("length", 4.2);
    sc.ego.width = je.value("width", 1.8);
    sc.ego.prescribed = je.value("prescribed", false);
    if (!sc.map.lane_exists(sc.ego.lane)) throw Error("ego initial lane out of range");

    const json& jo = j.at("other");
    sc.other.lane = jo.at("lane").get<int>();
    sc.other.x0 = jo.value("x", 0.0);
    sc.other.length = jo.value("length", 4.2);
    sc.other.width = jo.value("width", 1.8);
    if (!sc.map.lane_exists(sc.other.lane)) throw Error("other initial lane out of range");
    for (const json& js : jo.at("profile")) {
      SpeedSegment seg;
      double until = js.at("until").is_null() ? -1.0 : js.at("until").get<double>();
      seg.until = until < 0.0 ? std::numeric_limits<double>::infinity() : until;
      seg.vx = js.at("vx").get<double>();
      sc.other.profile.push_back(seg);
    }
    if (sc.other.profile.empty()) throw Error("other vehicle needs a speed profile");

    if (j.contains("reward")) {
      const json& jr = j.at("reward");
      sc.reward.w_speed = jr.value("w_speed", sc.reward.w_speed);
      sc.reward.collision_penalty = jr.value("collision_penalty", sc.reward.collision_penalty);
      sc.reward.red_light_penalty = jr.value("red_light_penalty", sc.reward.red_light_penalty);
      sc.reward.w_offlane = jr.value("w_offlane", sc.reward.w_offlane);
      if (jr.contains("penalized_lanes")) {
        sc.reward.penalized_lanes = jr.at("penalized_lanes").get<std::vector<int>>();
      }
    }
    sc.train_speed_jitter = j.value("train_speed_jitter", sc.train_speed_jitter);

    if (sc.dt <= 0.0 || sc.duration <= 0.0) throw Error("dt and duration must be positive");
    if (sc.step_count() % 5 != 0) {
      throw Error("duration must cover a whole number of 0.5 s decision windows");
    }
    return sc;
  } catch (const json::exception& e) {
    throw Error(std::string("scenario field error: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scenario file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(text, path.parent_path());
}

double perturbation_scale(std::uint64_t seed, double spread) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  double u = static_cast<double>(z >> 11) * (1.0 / 9007199254740992.0);
  return 1.0 + spread * (2.0 * u - 1.0);
}

}  // namespace lawshield
