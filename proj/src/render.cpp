#include "lawshield/render.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace lawshield {

namespace {

const char* tag_color(PolicyTag tag) {
  switch (tag) {
    case PolicyTag::Rl: return "#1f77b4";
    case PolicyTag::Backup: return "#d62728";
    case PolicyTag::Buffer: return "#ff7f0e";
    case PolicyTag::None: return "#7f7f7f";
  }
  return "#7f7f7f";
}

}  // namespace

void render_svg(const std::filesystem::path& path, const Trace& trace, const RoadMap& map,
                const std::vector<CandidateRecord>* candidates) {
  if (trace.empty()) throw Error("nothing to render: empty trace");

  double x_min = trace.state(0).ego.x - 10.0;
  double x_max = trace.state(0).ego.x + 10.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const WorldState& s = trace.state(i);
    x_min = std::min({x_min, s.ego.x, s.other.x});
    x_max = std::max({x_max, s.ego.x, s.other.x});
  }
  x_min -= 10.0;
  x_max += 10.0;

  const double scale = 6.0;  // px per meter
  const double pad = 20.0;
  const double width = (x_max - x_min) * scale + 2 * pad;
  const double height = map.road_width() * scale + 2 * pad;
  auto px = [&](double x) { return pad + (x - x_min) * scale; };
  auto py = [&](double y) { return pad + y * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' viewBox='0 0 " << width << " " << height << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";

  for (int lane = 0; lane < map.lane_count; ++lane) {
    const char* fill = map.is_special(lane) ? "#fdecea" : "#f2f2f2";
    svg << "<rect x='" << px(x_min) << "' y='" << py(lane * map.lane_width) << "' width='"
        << (x_max - x_min) * scale << "' height='" << map.lane_width * scale << "' fill='" << fill
        << "'/>\n";
  }
  for (int b = 0; b <= map.lane_count; ++b) {
    bool edge = (b == 0 || b == map.lane_count);
    svg << "<line x1='" << px(x_min) << "' y1='" << py(b * map.lane_width) << "' x2='" << px(x_max)
        << "' y2='" << py(b * map.lane_width) << "' stroke='#555' stroke-width='"
        << (edge ? 2 : 1) << "'" << (edge ? "" : " stroke-dasharray='8,6'") << "/>\n";
  }
  if (map.stop_line) {
    svg << "<line x1='" << px(*map.stop_line) << "' y1='" << py(0) << "' x2='"
        << px(*map.stop_line) << "' y2='" << py(map.road_width())
        << "' stroke='#c00' stroke-width='2'/>\n";
  }

  svg << "<polyline fill='none' stroke='#999' stroke-width='1.5' points='";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const WorldState& s = trace.state(i);
    svg << px(s.other.x) << "," << py(s.other.y) << " ";
  }
  svg << "'/>\n";

  // ego path, one polyline per contiguous policy tag
  std::size_t i = 0;
  while (i < trace.size()) {
    PolicyTag tag = trace[i].tag;
    std::size_t j = i;
    while (j + 1 < trace.size() && trace[j + 1].tag == tag) ++j;
    svg << "<polyline fill='none' stroke='" << tag_color(tag) << "' stroke-width='2.5' points='";
    for (std::size_t k = (i > 0 ? i - 1 : i); k <= j; ++k) {
      const WorldState& s = trace.state(k);
      svg << px(s.ego.x) << "," << py(s.ego.y) << " ";
    }
    svg << "'/>\n";
    i = j + 1;
  }

  if (candidates && !candidates->empty()) {
    for (const CandidateRecord& c : *candidates) {
      if (c.step >= trace.size()) continue;
      const WorldState& s = trace.state(c.step);
      const char* color = c.selected ? "#2ca02c" : (!c.safe ? "#e6c200" : (!c.legal ? "#d62728" : "#bbb"));
      double x1 = s.ego.x + s.ego.vx * 3.0;
      double y1 = s.ego.y;
      int lane = lane_of(s.ego, map) + c.target.p_lat;
      if (map.lane_exists(lane)) y1 = map.lane_center(lane);
      svg << "<line x1='" << px(s.ego.x) << "' y1='" << py(s.ego.y) << "' x2='" << px(x1)
          << "' y2='" << py(y1) << "' stroke='" << color
          << "' stroke-width='1' stroke-dasharray='4,3'/>\n";
    }
  }

  svg << "</svg>\n";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write svg: " + path.string());
  out << svg.str();
}

}  // namespace lawshield
