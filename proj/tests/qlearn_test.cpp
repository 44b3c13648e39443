#include <doctest.h>

#include "lawshield/qlearn.hpp"
#include "oracle.hpp"

using namespace lawshield;

namespace {

RoadMap three_lanes() {
  RoadMap map;
  map.lane_count = 3;
  map.lane_width = 3.5;
  map.special.assign(3, false);
  map.direction.assign(3, 1);
  return map;
}

WorldState world_with(const RoadMap& map, int ego_lane, double ego_vx, double rel_x, double rel_vx,
                      int other_lane) {
  WorldState s;
  s.map = &map;
  s.ego.y = map.lane_center(ego_lane);
  s.ego.vx = ego_vx;
  s.other.y = map.lane_center(other_lane);
  s.other.x = s.ego.x + rel_x;
  s.other.vx = ego_vx + rel_vx;
  return s;
}

}  // namespace

TEST_CASE("action grid is a fixed bijection") {
  for (int i = 0; i < DiscreteActionGrid::kCount; ++i) {
    CHECK(DiscreteActionGrid::index(DiscreteActionGrid::action(i)) == i);
  }
  ActionTarget neutral = DiscreteActionGrid::action(DiscreteActionGrid::kDefaultIndex);
  CHECK(neutral.p_lat == 0);
  CHECK(neutral.p_lon == 0.0);
  CHECK_THROWS_AS(DiscreteActionGrid::index({2, 0.0}), Error);
}

TEST_CASE("state encoding") {
  RoadMap map = three_lanes();

  SUBCASE("same vx bin gives identical keys") {
    WorldState a = world_with(map, 1, 8.1, 20.0, -4.0, 1);
    WorldState b = world_with(map, 1, 8.4, 20.0, -4.0, 1);
    CHECK(encode_state(a, map) == encode_state(b, map));
  }
  SUBCASE("relative x clips to the edge bin") {
    WorldState far = world_with(map, 1, 8.0, 120.0, 0.0, 1);
    WorldState edge = world_with(map, 1, 8.0, 50.0, 0.0, 1);
    CHECK(encode_state(far, map) == encode_state(edge, map));
  }
  SUBCASE("distinct ego lanes always give distinct keys") {
    WorldState a = world_with(map, 0, 8.0, 20.0, -4.0, 2);
    WorldState b = world_with(map, 1, 8.0, 20.0, -4.0, 2);
    CHECK(encode_state(a, map) != encode_state(b, map));
  }
}

TEST_CASE("act: defaults and tie-breaks") {
  QTable table;
  StateKey key{1, 4, 4, -2, 1, 0};

  SUBCASE("unseen key returns the neutral action") {
    ActionTarget a = table.act(key);
    CHECK(a.p_lat == 0);
    CHECK(a.p_lon == 0.0);
  }
  SUBCASE("equal values break to the lower index") {
    QTable::Cell cell;
    cell.q[3] = 1.0;
    cell.q[9] = 1.0;
    table.cells[key] = cell;
    CHECK(table.act_index(key) == 3);
  }
}

TEST_CASE("hyperparameter validation") {
  CHECK_THROWS_AS(QLearner(QHyper{0.0, 0.95}, 1), Error);
  CHECK_THROWS_AS(QLearner(QHyper{1.5, 0.95}, 1), Error);
  CHECK_THROWS_AS(QLearner(QHyper{0.1, 1.0}, 1), Error);
  CHECK_THROWS_AS(QLearner(QHyper{0.1, 0.0}, 1), Error);
}

TEST_CASE("epsilon anneal") {
  CHECK(epsilon_for(0, 1000) == doctest::Approx(1.0));
  CHECK(epsilon_for(300, 1000) == doctest::Approx(1.0 - 0.95 * 0.5));
  CHECK(epsilon_for(600, 1000) == doctest::Approx(0.05));
  CHECK(epsilon_for(999, 1000) == doctest::Approx(0.05));
}

TEST_CASE("toy MDP converges to the value-iteration fixed point") {
  oracle::ToyMdp mdp;
  QHyper hyper{0.1, 0.95};
  QLearner learner(hyper, 7, 2);

  auto key_of = [](int s) { return StateKey{s, 0, 0, 0, 0, 0}; };
  int state = 0;
  for (int update = 0; update < 50000; ++update) {
    int action = learner.select_action(key_of(state), 0.2);
    int next = mdp.next[state][action];
    learner.update(key_of(state), action, mdp.reward[state][action], key_of(next), false);
    state = next;
  }

  auto exact = mdp.value_iteration(hyper.gamma);
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 2; ++a) {
      double learned = learner.table().cells.at(key_of(s)).q[a];
      CHECK_MESSAGE(std::abs(learned - exact[s][a]) < 1e-3, "Q(", s, ",", a, ") = ", learned,
                    " vs ", exact[s][a]);
    }
  }
}

TEST_CASE("serialization round-trips bit-exactly") {
  QLearner learner(QHyper{0.1, 0.95}, 42);
  StateKey k1{0, 3, -2, 1, 1, 0}, k2{2, 4, 10, -5, 0, 1};
  learner.update(k1, 3, -0.73, k2, false);
  learner.update(k2, 7, 1.0 / 3.0, k1, false);
  learner.update(k1, 3, 0.1234567890123456789, k2, true);

  QTable table = std::move(learner).take_table();
  table.episodes = 2;
  std::string text = table.serialize();
  QTable back = QTable::deserialize(text);
  CHECK(back.serialize() == text);
  CHECK(back.cells.size() == table.cells.size());
  CHECK(back.cells.at(k1).q[3] == table.cells.at(k1).q[3]);
  CHECK(back.cells.at(k2).visits[7] == 1);

  SUBCASE("rejects foreign files") {
    CHECK_THROWS_AS(QTable::deserialize("not a table"), Error);
  }
}

TEST_CASE("same seed, same behavior") {
  auto run = [](std::uint64_t seed) {
    QLearner learner(QHyper{0.1, 0.95}, seed, 2);
    oracle::ToyMdp mdp;
    auto key_of = [](int s) { return StateKey{s, 0, 0, 0, 0, 0}; };
    int state = 0;
    for (int u = 0; u < 2000; ++u) {
      int action = learner.select_action(key_of(state), 0.5);
      int next = mdp.next[state][action];
      learner.update(key_of(state), action, mdp.reward[state][action], key_of(next), false);
      state = next;
    }
    return std::move(learner).take_table().serialize();
  };
  CHECK(run(5) == run(5));
  CHECK(run(5) != run(6));
}
