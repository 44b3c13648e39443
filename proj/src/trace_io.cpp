#include "lawshield/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lawshield {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr const char* kHeader =
    "t,ego_x,ego_y,ego_vx,ego_vy,ego_lane,other_x,other_vx,indicator,action_lat,action_lon,"
    "policy,law_ok";

json map_to_json(const RoadMap& map) {
  json j;
  j["lanes"] = map.lane_count;
  j["lane_width"] = map.lane_width;
  json special = json::array();
  for (int i = 0; i < map.lane_count; ++i) {
    if (map.is_special(i)) special.push_back(i);
  }
  j["special"] = special;
  j["directions"] = map.direction;
  if (map.stop_line) j["stop_line"] = *map.stop_line;
  if (map.light) {
    json jl;
    jl["position"] = map.light->position;
    jl["lanes"] = map.light->lanes;
    json phases = json::array();
    for (const auto& p : map.light->schedule) {
      json jp;
      jp["until"] = std::isfinite(p.until) ? json(p.until) : json(nullptr);
      jp["color"] = p.color;
      phases.push_back(jp);
    }
    jl["schedule"] = phases;
    j["light"] = jl;
  }
  return j;
}

std::shared_ptr<RoadMap> map_from_json(const json& j) {
  auto map = std::make_shared<RoadMap>();
  map->lane_count = j.at("lanes").get<int>();
  map->lane_width = j.at("lane_width").get<double>();
  map->special.assign(map->lane_count, false);
  for (int lane : j.at("special").get<std::vector<int>>()) map->special[lane] = true;
  map->direction = j.at("directions").get<std::vector<int>>();
  if (j.contains("stop_line")) map->stop_line = j.at("stop_line").get<double>();
  if (j.contains("light")) {
    const json& jl = j.at("light");
    TrafficLight light;
    light.position = jl.at("position").get<double>();
    light.lanes = jl.at("lanes").get<std::vector<int>>();
    for (const json& jp : jl.at("schedule")) {
      LightPhase phase;
      phase.until = jp.at("until").is_null() ? std::numeric_limits<double>::infinity()
                                             : jp.at("until").get<double>();
      phase.color = jp.at("color").get<std::string>();
      light.schedule.push_back(phase);
    }
    map->light = light;
  }
  return map;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const Trace& trace, const RoadMap& map,
                     bool prescribed, int other_lane, const AuditResult& audit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write trace file: " + path.string());

  json meta;
  meta["format"] = "lawshield-trace";
  meta["version"] = 1;
  meta["dt"] = trace.dt();
  meta["map"] = map_to_json(map);
  meta["prescribed"] = prescribed;
  meta["other_lane"] = other_lane;
  if (!trace.empty()) {
    meta["ego_length"] = trace.state(0).ego.length;
    meta["ego_width"] = trace.state(0).ego.width;
    meta["other_length"] = trace.state(0).other.length;
    meta["other_width"] = trace.state(0).other.width;
  }
  out << "# meta " << meta.dump() << "\n";
  out << kHeader << "\n";

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceStep& step = trace[i];
    const WorldState& s = step.state;
    out << fmt(s.t) << "," << fmt(s.ego.x) << "," << fmt(s.ego.y) << "," << fmt(s.ego.vx) << ","
        << fmt(s.ego.vy) << "," << lane_of(s.ego, map) << "," << fmt(s.other.x) << ","
        << fmt(s.other.vx) << "," << to_string(s.ego.indicator) << ",";
    if (step.action) {
      out << step.action->p_lat << "," << fmt(step.action->p_lon);
    } else {
      out << ",";
    }
    out << "," << to_string(step.tag) << ",";
    bool ok = i < audit.law_ok.size() ? audit.law_ok[i] : true;
    out << (ok ? 1 : 0) << "\n";
  }
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open trace file: " + path.string());

  std::string line;
  if (!std::getline(in, line) || line.rfind("# meta ", 0) != 0) {
    throw Error("trace file missing '# meta' header: " + path.string());
  }
  json meta;
  try {
    meta = json::parse(line.substr(7));
  } catch (const json::exception& e) {
    throw Error(std::string("bad trace metadata: ") + e.what());
  }
  if (meta.value("format", "") != "lawshield-trace") {
    throw Error("not a lawshield trace file");
  }

  TraceFile tf;
  tf.dt = meta.at("dt").get<double>();
  tf.map = map_from_json(meta.at("map"));
  tf.prescribed = meta.value("prescribed", false);
  tf.other_lane = meta.value("other_lane", 0);
  tf.trace = Trace(tf.dt);

  double ego_length = meta.value("ego_length", 4.2);
  double ego_width = meta.value("ego_width", 1.8);
  double other_length = meta.value("other_length", 4.2);
  double other_width = meta.value("other_width", 1.8);

  if (!std::getline(in, line) || line != kHeader) {
    throw Error("trace file column schema mismatch");
  }

  VehicleState prev_ego;
  bool have_prev = false;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols = split_csv(line);
    if (cols.size() != 13) {
      throw Error("trace line " + std::to_string(lineno) + ": expected 13 columns, got " +
                  std::to_string(cols.size()));
    }
    TraceStep step;
    WorldState& s = step.state;
    try {
      s.t = std::stod(cols[0]);
      s.ego.x = std::stod(cols[1]);
      s.ego.y = std::stod(cols[2]);
      s.ego.vx = std::stod(cols[3]);
      s.ego.vy = std::stod(cols[4]);
      s.other.x = std::stod(cols[6]);
      s.other.vx = std::stod(cols[7]);
    } catch (const std::exception&) {
      throw Error("trace line " + std::to_string(lineno) + ": bad numeric field");
    }
    s.ego.length = ego_length;
    s.ego.width = ego_width;
    s.other.length = other_length;
    s.other.width = other_width;
    s.other.y = tf.map->lane_center(tf.other_lane);
    s.map = tf.map.get();

    Indicator ind = indicator_from_string(cols[8]);
    s.ego.indicator = ind;
    s.ego.indicator_time = have_prev ? next_indicator_time(prev_ego, ind, tf.dt) : 0.0;
    prev_ego = s.ego;
    have_prev = true;

    if (!cols[9].empty() || !cols[10].empty()) {
      ActionTarget a;
      a.p_lat = std::stoi(cols[9]);
      a.p_lon = std::stod(cols[10]);
      step.action = a;
    }
    step.tag = policy_tag_from_string(cols[11]);
    tf.trace.append(std::move(step));
  }
  if (tf.trace.empty()) throw Error("trace file has no data rows");
  return tf;
}

void write_decisions_csv(const std::filesystem::path& path,
                         const std::vector<DecisionRecord>& decisions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write decisions file: " + path.string());
  out << "step,t,tag,had_rl,rl_legal,rl_veto_path,rl_veto_step,backup_consulted,backup_found,"
         "target_lat,target_lon\n";
  for (const auto& d : decisions) {
    std::string veto = d.rl_veto_path;
    for (char& c : veto) {
      if (c == ',') c = ';';
    }
    out << d.step << "," << fmt(d.t) << "," << to_string(d.tag) << "," << (d.had_rl ? 1 : 0) << ","
        << (d.rl_legal ? 1 : 0) << "," << veto << "," << d.rl_veto_step << ","
        << (d.backup_consulted ? 1 : 0) << "," << (d.backup_found ? 1 : 0) << "," << d.chosen.p_lat
        << "," << fmt(d.chosen.p_lon) << "\n";
  }
}

void write_candidates_csv(const std::filesystem::path& path,
                          const std::vector<CandidateRecord>& candidates) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write candidates file: " + path.string());
  out << "step,index,target_lat,target_lon,safe,legal,cost,selected\n";
  for (const auto& c : candidates) {
    out << c.step << "," << c.index << "," << c.target.p_lat << "," << fmt(c.target.p_lon) << ","
        << (c.safe ? 1 : 0) << "," << (c.legal ? 1 : 0) << "," << fmt(c.cost) << ","
        << (c.selected ? 1 : 0) << "\n";
  }
}

void write_curve_csv(const std::filesystem::path& path, const std::vector<TrainCurveRow>& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write training curve: " + path.string());
  out << "episode,epsilon,return,steps,collided\n";
  for (const auto& row : curve) {
    out << row.episode << "," << fmt(row.epsilon) << "," << fmt(row.episode_return) << ","
        << row.steps << "," << (row.collided ? 1 : 0) << "\n";
  }
}

}  // namespace lawshield
