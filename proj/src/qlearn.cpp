#include "lawshield/qlearn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lawshield {

ActionTarget DiscreteActionGrid::action(int index) {
  if (index < 0 || index >= kCount) throw Error("action index out of range");
  return {kLat[index / 5], kLon[index % 5]};
}

int DiscreteActionGrid::index(ActionTarget a) {
  for (int i = 0; i < kCount; ++i) {
    ActionTarget g = action(i);
    if (g.p_lat == a.p_lat && g.p_lon == a.p_lon) return i;
  }
  throw Error("action target not on the discrete grid");
}

namespace {

int bin_of(double value, double width) {
  return static_cast<int>(std::floor(value / width));
}

int light_phase_id(const RoadMap& map, double t) {
  if (!map.light) return 0;
  const std::string& color = map.light->color_at(t);
  if (color == "red") return 1;
  if (color == "green") return 2;
  if (color == "yellow") return 3;
  return 4;
}

}  // namespace

StateKey encode_state(const WorldState& s, const RoadMap& map) {
  double rel_x = std::clamp(s.other.x - s.ego.x, -50.0, 50.0);
  double rel_v = std::clamp(s.other.vx - s.ego.vx, -10.0, 10.0);
  return {lane_of(s.ego, map),
          bin_of(s.ego.vx, 2.0),
          bin_of(rel_x, 5.0),
          bin_of(rel_v, 2.0),
          lane_of(s.other, map),
          light_phase_id(map, s.t)};
}

void QHyper::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error("alpha must be in (0, 1]");
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error("gamma must be in (0, 1)");
}

int QTable::act_index(const StateKey& key) const {
  auto it = cells.find(key);
  if (it == cells.end()) return DiscreteActionGrid::kDefaultIndex;
  const auto& q = it->second.q;
  int best = 0;
  for (int i = 1; i < DiscreteActionGrid::kCount; ++i) {
    if (q[i] > q[best]) best = i;  // strict: ties keep the lower index
  }
  return best;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string QTable::serialize() const {
  std::ostringstream out;
  out << "lawshield-qtable v1\n";
  out << "seed " << seed << "\n";
  out << "episodes " << episodes << "\n";
  out << "alpha " << fmt(hyper.alpha) << "\n";
  out << "gamma " << fmt(hyper.gamma) << "\n";
  out << "bins vx 2 relx 5 relx_clip 50 relv 2 relv_clip 10\n";
  out << "actions " << DiscreteActionGrid::kCount << "\n";
  for (int i = 0; i < DiscreteActionGrid::kCount; ++i) {
    ActionTarget a = DiscreteActionGrid::action(i);
    out << "action " << i << " " << a.p_lat << " " << fmt(a.p_lon) << "\n";
  }
  out << "entries " << cells.size() << "\n";
  for (const auto& [key, cell] : cells) {
    for (int v : key) out << v << " ";
    for (std::uint32_t v : cell.visits) out << v << " ";
    for (int i = 0; i < DiscreteActionGrid::kCount; ++i) {
      out << fmt(cell.q[i]) << (i + 1 < DiscreteActionGrid::kCount ? " " : "\n");
    }
  }
  return out.str();
}

QTable QTable::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "lawshield-qtable v1") {
    throw Error("not a lawshield q-table file");
  }
  QTable t;
  std::string word;
  auto expect_word = [&](std::istream& s, const std::string& want) {
    s >> word;
    if (word != want) throw Error("q-table parse error: expected '" + want + "', got '" + word + "'");
  };
  expect_word(in, "seed");
  in >> t.seed;
  expect_word(in, "episodes");
  in >> t.episodes;
  expect_word(in, "alpha");
  in >> t.hyper.alpha;
  expect_word(in, "gamma");
  in >> t.hyper.gamma;
  std::getline(in, line);      // rest of gamma line
  std::getline(in, line);      // bins line (fixed layout, informational)
  expect_word(in, "actions");
  int n_actions = 0;
  in >> n_actions;
  if (n_actions != DiscreteActionGrid::kCount) throw Error("q-table action grid mismatch");
  for (int i = 0; i < n_actions; ++i) {
    expect_word(in, "action");
    int idx, lat;
    double lon;
    in >> idx >> lat >> lon;
    ActionTarget want = DiscreteActionGrid::action(i);
    if (idx != i || lat != want.p_lat || lon != want.p_lon) {
      throw Error("q-table action grid mismatch at index " + std::to_string(i));
    }
  }
  expect_word(in, "entries");
  std::size_t entries = 0;
  in >> entries;
  for (std::size_t e = 0; e < entries; ++e) {
    StateKey key;
    for (int& v : key) in >> v;
    QTable::Cell cell;
    for (std::uint32_t& v : cell.visits) in >> v;
    for (double& v : cell.q) in >> v;
    if (!in) throw Error("q-table truncated at entry " + std::to_string(e));
    for (double v : cell.q) {
      if (!std::isfinite(v)) throw Error("q-table contains a non-finite value");
    }
    t.cells.emplace(key, cell);
  }
  return t;
}

void QTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write q-table: " + path.string());
  out << serialize();
}

QTable QTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open q-table: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

QLearner::QLearner(QHyper hyper, std::uint64_t seed, int n_actions)
    : rng_(seed), n_actions_(n_actions) {
  hyper.validate();
  if (n_actions_ < 1 || n_actions_ > DiscreteActionGrid::kCount) {
    throw Error("n_actions out of range");
  }
  table_.hyper = hyper;
  table_.seed = seed;
}

int QLearner::greedy(const StateKey& key) const {
  auto it = table_.cells.find(key);
  if (it == table_.cells.end()) {
    return n_actions_ == DiscreteActionGrid::kCount ? DiscreteActionGrid::kDefaultIndex : 0;
  }
  const auto& q = it->second.q;
  int best = 0;
  for (int i = 1; i < n_actions_; ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

int QLearner::select_action(const StateKey& key, double epsilon) {
  if (rng_.uniform01() < epsilon) {
    return rng_.uniform_int(n_actions_);
  }
  return greedy(key);
}

void QLearner::update(const StateKey& s, int action, double reward, const StateKey& next,
                      bool terminal) {
  QTable::Cell& cell = table_.cells[s];
  double target = reward;
  if (!terminal) {
    auto it = table_.cells.find(next);
    double best = 0.0;
    if (it != table_.cells.end()) {
      best = *std::max_element(it->second.q.begin(), it->second.q.begin() + n_actions_);
    }
    target += table_.hyper.gamma * best;
  }
  cell.q[action] += table_.hyper.alpha * (target - cell.q[action]);
  cell.visits[action] += 1;
}

double epsilon_for(std::uint64_t episode, std::uint64_t total_episodes) {
  if (total_episodes == 0) return 0.05;
  double anneal_span = 0.6 * static_cast<double>(total_episodes);
  double frac = anneal_span > 0.0 ? static_cast<double>(episode) / anneal_span : 1.0;
  if (frac > 1.0) frac = 1.0;
  return 1.0 - (1.0 - 0.05) * frac;
}

}  // namespace lawshield
