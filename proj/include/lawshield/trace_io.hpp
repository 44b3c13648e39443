#pragma once

#include <filesystem>
#include <memory>

#include "lawshield/simulator.hpp"
#include "lawshield/train.hpp"

namespace lawshield {

/// A trace loaded back from CSV. The map is reconstructed from the
/// file's metadata line and owns the states' map reference.
struct TraceFile {
  std::shared_ptr<RoadMap> map;
  Trace trace;
  double dt = 0.1;
  bool prescribed = false;
  int other_lane = 0;
};

/// Column layout: t, ego_x, ego_y, ego_vx, ego_vy, ego_lane, other_x,
/// other_vx, indicator, action_lat, action_lon, policy, law_ok.
/// A `# meta {json}` comment header carries dt, map geometry and
/// vehicle dimensions so the file is self-contained for audits.
void write_trace_csv(const std::filesystem::path& path, const Trace& trace, const RoadMap& map,
                     bool prescribed, int other_lane, const AuditResult& audit);

TraceFile read_trace_csv(const std::filesystem::path& path);

void write_decisions_csv(const std::filesystem::path& path,
                         const std::vector<DecisionRecord>& decisions);

void write_candidates_csv(const std::filesystem::path& path,
                          const std::vector<CandidateRecord>& candidates);

void write_curve_csv(const std::filesystem::path& path, const std::vector<TrainCurveRow>& curve);

}  // namespace lawshield
