#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "lawshield/log.hpp"
#include "lawshield/predicates.hpp"
#include "lawshield/render.hpp"
#include "lawshield/simulator.hpp"
#include "lawshield/trace_io.hpp"
#include "lawshield/train.hpp"

namespace fs = std::filesystem;
using namespace lawshield;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct BatchRow {
  std::uint64_t seed = 0;
  std::size_t violations = 0;
  bool collided = false;
  bool completed = false;
  double mean_speed = 0.0;
};

int cmd_train(const std::string& scenario_path, std::uint64_t episodes, std::uint64_t seed,
              const std::string& out_path, double alpha, double gamma,
              const std::string& curve_path) {
  Scenario scenario = load_scenario(scenario_path);
  if (episodes == 0) {
    log::info("training with 0 episodes: writing an empty table (the agent will always pick the "
              "neutral action)");
  }
  QHyper hyper;
  hyper.alpha = alpha;
  hyper.gamma = gamma;
  TrainResult result = train_qtable(scenario, episodes, seed, hyper);
  result.table.save(out_path);
  if (!curve_path.empty()) write_curve_csv(curve_path, result.curve);
  log::info("trained " + std::to_string(episodes) + " episodes on '" + scenario.name + "', " +
            std::to_string(result.table.cells.size()) + " state keys -> " + out_path);
  return kExitOk;
}

void write_run_outputs(const fs::path& out_dir, const Scenario& scenario,
                       const EpisodeResult& result, bool render) {
  fs::create_directories(out_dir);
  write_trace_csv(out_dir / "trace.csv", result.trace, scenario.map, scenario.ego.prescribed,
                  scenario.other.lane, result.audit);
  write_decisions_csv(out_dir / "decisions.csv", result.decisions);
  if (!result.candidates.empty()) {
    write_candidates_csv(out_dir / "candidates.csv", result.candidates);
  }
  if (render) {
    render_svg(out_dir / "episode.svg", result.trace, scenario.map,
               result.candidates.empty() ? nullptr : &result.candidates);
  }
}

int cmd_run(const std::string& scenario_path, const std::string& law_path,
            const std::string& qtable_path, const std::string& mode_str, std::uint64_t seed,
            const std::string& out_dir, bool render, bool dump_candidates, int batch) {
  Scenario scenario = load_scenario(scenario_path);
  Mode mode = mode_from_string(mode_str);

  fs::path law_file = law_path.empty() ? scenario.law_path : fs::path(law_path);
  if (law_file.empty()) {
    std::cerr << "error: no law file (scenario has none and --law not given)\n";
    return kExitUsage;
  }
  LawFile law = LawFile::load(law_file, builtin_registry());

  std::optional<QTable> table;
  if (!qtable_path.empty()) {
    table = QTable::load(qtable_path);
  } else if (mode != Mode::BackupOnly) {
    log::info("no --qtable given: the agent falls back to the neutral action everywhere");
  }
  const QTable* table_ptr = table ? &*table : nullptr;

  if (batch > 1) {
    std::vector<BatchRow> rows(batch);
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    for (int base = 0; base < batch; base += static_cast<int>(workers)) {
      std::vector<std::future<void>> futures;
      int end = std::min(batch, base + static_cast<int>(workers));
      for (int i = base; i < end; ++i) {
        futures.push_back(std::async(std::launch::async, [&, i] {
          std::uint64_t s = seed + static_cast<std::uint64_t>(i);
          EpisodeOptions opt;
          opt.mode = mode;
          opt.speed_scale = perturbation_scale(s, 0.2);
          EpisodeResult r = run_episode(scenario, law, table_ptr, opt);
          rows[i] = {s, r.audit.violations, r.collided, r.completed, r.mean_speed};
        }));
      }
      for (auto& f : futures) f.get();
    }
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "batch.csv");
    out << "seed,violations,collided,completed,mean_speed\n";
    std::size_t total_violations = 0;
    int collisions = 0;
    for (const BatchRow& row : rows) {
      out << row.seed << "," << row.violations << "," << (row.collided ? 1 : 0) << ","
          << (row.completed ? 1 : 0) << "," << row.mean_speed << "\n";
      total_violations += row.violations;
      collisions += row.collided ? 1 : 0;
    }
    std::cout << batch << " episodes: " << total_violations << " violation step(s), " << collisions
              << " collision(s)\n";
    return total_violations == 0 ? kExitOk : kExitViolation;
  }

  EpisodeOptions opt;
  opt.mode = mode;
  opt.speed_scale = seed == scenario.seed ? 1.0 : perturbation_scale(seed, 0.2);
  opt.dump_candidates = dump_candidates;
  EpisodeResult result = run_episode(scenario, law, table_ptr, opt);
  write_run_outputs(out_dir, scenario, result, render);

  std::cout << "mode=" << to_string(mode) << " law=" << law.name()
            << " violations=" << result.audit.violations;
  if (result.audit.first_violation) {
    std::cout << " first_violation_step=" << *result.audit.first_violation;
  }
  std::cout << " collided=" << (result.collided ? 1 : 0) << " mean_speed=" << result.mean_speed
            << "\n";
  return result.audit.violations == 0 && !result.collided ? kExitOk : kExitViolation;
}

int cmd_check_trace(const std::string& trace_path, const std::string& law_path) {
  TraceFile tf = read_trace_csv(trace_path);
  LawFile law = LawFile::load(law_path, builtin_registry());
  ltl::EvalContext ctx = law.context(builtin_registry());
  ctx.flags["prescribed"] = tf.prescribed ? 1.0 : 0.0;

  AuditResult audit = audit_trace(law, tf.trace, ctx);
  if (audit.violations == 0) {
    std::cout << "satisfied: law '" << law.name() << "' holds over " << tf.trace.size()
              << " steps\n";
    return kExitOk;
  }
  std::cout << "violated: law '" << law.name() << "', " << audit.violations
            << " violating step(s), first at step " << *audit.first_violation << " (t="
            << tf.trace.state(*audit.first_violation).t << ")\n";
  ltl::Failure why = ltl::explain_failure(law.formula(), tf.trace, 0, ctx);
  std::cout << "failing sub-formula: " << why.path << " at step " << why.step << "\n";
  return kExitViolation;
}

int cmd_render(const std::string& trace_path, const std::string& out_path) {
  TraceFile tf = read_trace_csv(trace_path);
  render_svg(out_path, tf.trace, *tf.map);
  log::info("wrote " + out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lawshield: temporal-logic traffic rules over a shielded RL driving agent"};
  app.require_subcommand(1);

  std::string scenario_path, law_path, qtable_path, out_path, trace_path, curve_path;
  std::string mode = "shielded";
  std::uint64_t episodes = 5000, seed = 42;
  double alpha = 0.1, gamma = 0.95;
  bool render = false, dump_candidates = false;
  int batch = 1;

  CLI::App* train = app.add_subcommand("train", "train a q-table on a scenario");
  train->add_option("--scenario", scenario_path, "scenario json")->required();
  train->add_option("--episodes", episodes, "training episodes");
  train->add_option("--seed", seed, "rng seed");
  train->add_option("--out", out_path, "output q-table path")->required();
  train->add_option("--alpha", alpha, "learning rate");
  train->add_option("--gamma", gamma, "discount factor");
  train->add_option("--curve", curve_path, "training-curve csv path");

  CLI::App* run = app.add_subcommand("run", "run one episode (or a seeded batch)");
  run->add_option("--scenario", scenario_path, "scenario json")->required();
  run->add_option("--law", law_path, "law file (overrides the scenario's)");
  run->add_option("--qtable", qtable_path, "trained q-table");
  run->add_option("--mode", mode, "shielded|rl-only|backup-only");
  run->add_option("--seed", seed, "episode seed (perturbs the other vehicle's speed)");
  run->add_option("--out", out_path, "output directory")->required();
  run->add_flag("--render", render, "write episode.svg");
  run->add_flag("--dump-candidates", dump_candidates, "write per-decision candidate table");
  run->add_option("--batch", batch, "run N seeded episodes concurrently");

  CLI::App* check = app.add_subcommand("check-trace", "audit a recorded trace against a law");
  check->add_option("--trace", trace_path, "trace csv")->required();
  check->add_option("--law", law_path, "law file")->required();

  CLI::App* rndr = app.add_subcommand("render", "render a recorded trace to svg");
  rndr->add_option("--trace", trace_path, "trace csv")->required();
  rndr->add_option("--out", out_path, "output svg path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (train->parsed()) {
      return cmd_train(scenario_path, episodes, seed, out_path, alpha, gamma, curve_path);
    }
    if (run->parsed()) {
      return cmd_run(scenario_path, law_path, qtable_path, mode, seed, out_path, render,
                     dump_candidates, batch);
    }
    if (check->parsed()) return cmd_check_trace(trace_path, law_path);
    if (rndr->parsed()) return cmd_render(trace_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
