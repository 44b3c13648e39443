#pragma once

#include <filesystem>

#include "lawshield/simulator.hpp"

namespace lawshield {

/// Plan-view SVG of the episode: lane bands (special lanes tinted),
/// the other vehicle's path, and the ego path colored by policy tag
/// (rl blue, backup red, buffer orange). Candidate fans are drawn as
/// dashed lines when records are supplied.
void render_svg(const std::filesystem::path& path, const Trace& trace, const RoadMap& map,
                const std::vector<CandidateRecord>* candidates = nullptr);

}  // namespace lawshield
