#include "sipd/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "sipd/analysis.hpp"
#include "sipd/match.hpp"
#include "sipd/report.hpp"
#include "sipd/scenario.hpp"

namespace sipd {

void validate_config(const RunConfig& c) {
  if (c.width < 3 || c.height < 3) throw ConfigError("grid must be at least 3x3");
  if (c.min_rounds < 1) throw ConfigError("min-rounds must be >= 1");
  if (c.rounds < c.min_rounds) {
    throw ConfigError("rounds must be >= " + std::to_string(c.min_rounds) + ", got " +
                      std::to_string(c.rounds));
  }
  if (c.generations < 0) throw ConfigError("generations must be >= 0");
  try {
    validate_payoffs(c.payoffs);
    validate_mix(c.mix);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(c.p_slave >= 0.0 && c.p_slave <= 1.0)) throw ConfigError("p-slave must be in [0, 1]");
  if (c.snapshot_every < 0) throw ConfigError("snapshot-every must be >= 0");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
}

StepParams step_params(const RunConfig& c) {
  StepParams p;
  p.rounds = c.rounds;
  p.payoffs = c.payoffs;
  p.p_slave = c.p_slave;
  p.freeze_roles = c.freeze_roles;
  p.workers = c.workers;
  return p;
}

RunOptions run_options(const RunConfig& c) {
  RunOptions o;
  o.generations = c.generations;
  o.snapshot_every = c.snapshot_every;
  o.stop_when_homogeneous = c.stop_at_fixation;
  return o;
}

RunResult execute_run(const RunConfig& config) {
  validate_config(config);
  const RngPolicy rng{config.seed};
  GridState g = init_random(config.width, config.height, config.mix, rng);
  return run(std::move(g), run_options(config), step_params(config), rng);
}

namespace {

struct RawFlags {
  std::string payoffs = "5,3,1,0";
  std::string mix = "CSMSM:0.5,TFT:0.5";
};

void add_simulation_flags(CLI::App& cmd, RunConfig& c, RawFlags& raw) {
  cmd.add_option("--width", c.width, "Grid width")->capture_default_str();
  cmd.add_option("--height", c.height, "Grid height")->capture_default_str();
  cmd.add_option("--rounds", c.rounds, "Rounds per match (n)")->capture_default_str();
  cmd.add_option("--min-rounds", c.min_rounds, "Smallest accepted n")->capture_default_str();
  cmd.add_option("--generations", c.generations, "Generations to simulate")->capture_default_str();
  cmd.add_option("--payoffs", raw.payoffs, "T,R,P,S")->capture_default_str();
  cmd.add_option("--p-slave", c.p_slave, "Per-generation master-to-slave probability")
      ->capture_default_str();
  cmd.add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd.add_option("--snapshot-every", c.snapshot_every, "Snapshot interval, 0 = off")
      ->capture_default_str();
  cmd.add_option("--workers", c.workers, "Worker threads")->capture_default_str();
  cmd.add_option("--out", c.output_dir, "Output directory")->capture_default_str();
  cmd.add_flag("--stop-at-fixation", c.stop_at_fixation, "Stop once one kind fills the grid");
  cmd.add_option("--config", "key=value configuration file (flags override)");
}

// Boolean keys that map to flags rather than valued options.
bool is_flag_key(const std::string& key) {
  return key == "stop-at-fixation" || key == "freeze-roles";
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Turns `--config FILE` into explicit flags placed before the user's own,
// skipping keys the user also passed so command-line flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string file;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      file = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      file = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (file.empty()) return args;
  std::ifstream in(file);
  if (!in) throw OutputError("cannot read config file " + file);

  std::vector<std::string> extra;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    raw = trim(raw);
    if (raw.empty()) continue;
    const auto eq = raw.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file + ":" + std::to_string(line) + ": expected key=value");
    }
    std::string key = trim(raw.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(raw.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw ConfigError(file + ":" + std::to_string(line) + ": bad key");
    }
    if (given_on_command_line(args, key)) continue;
    if (is_flag_key(key)) {
      if (value == "true" || value == "on" || value == "1") {
        extra.push_back("--" + key);
      } else if (value != "false" && value != "off" && value != "0") {
        throw ConfigError(file + ":" + std::to_string(line) + ": " + key + " expects true/false");
      }
      continue;
    }
    extra.push_back("--" + key);
    extra.push_back(value);
  }
  // After the subcommand name so the options bind to it.
  const auto at = args.size() > 1 ? args.begin() + 2 : args.end();
  args.insert(at, extra.begin(), extra.end());
  return args;
}

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int report_run(const RunResult& result, const std::filesystem::path& dir, std::ostream& out) {
  write_run_outputs(dir, result);
  out << summary_text(result);
  return kExitOk;
}

int do_run(RunConfig config, const RawFlags& raw, std::ostream& out) {
  config.payoffs = parse_payoffs(raw.payoffs);
  config.mix = parse_mix(raw.mix);
  validate_config(config);
  return report_run(execute_run(config), config.output_dir, out);
}

int do_scenario(RunConfig config, const RawFlags& raw, const std::string& file,
                std::ostream& out) {
  config.payoffs = parse_payoffs(raw.payoffs);
  validate_config(config);
  std::ifstream in(file);
  if (!in) throw OutputError("cannot read scenario file " + file);
  const ScenarioDescriptor desc = parse_scenario(in);
  config.freeze_roles = config.freeze_roles || desc.freeze_roles;

  GridState g = init_scenario(desc);
  std::optional<GridState> first_played;
  const RunResult result =
      run(std::move(g), run_options(config), step_params(config), RngPolicy{config.seed},
          [&](const GridState& played) {
            if (!first_played) first_played = played;
          });
  report_run(result, config.output_dir, out);
  if (first_played) write_cell_payoffs(config.output_dir / "cell_payoffs_gen0.csv", *first_played);
  return kExitOk;
}

int do_match(const std::string& token_a, const std::string& token_b, int rounds,
             const std::string& payoff_text, std::uint64_t seed, std::ostream& out) {
  const PayoffValues p = parse_payoffs(payoff_text);
  const auto a = parse_phenotype(token_a);
  const auto b = parse_phenotype(token_b);
  for (const auto& [token, ph] : {std::pair{token_a, a}, std::pair{token_b, b}}) {
    if (!ph) {
      throw ConfigError("bad strategy '" + token + "' (valid: " + valid_kind_tokens() +
                        "; CSMSM takes :MASTER or :SLAVE)");
    }
  }
  const RngPolicy rng{seed};
  auto machine = [&](const Phenotype& ph, std::uint64_t side) {
    std::optional<RngStream> stream;
    if (ph.kind == StrategyKind::RANDOM) stream = rng.stream(StreamPurpose::Match, 0, side);
    return StrategyMachine(ph.kind, ph.role, stream, p);
  };
  StrategyMachine ma = machine(*a, 0);
  StrategyMachine mb = machine(*b, 1);
  const MatchResult r = play_match(ma, mb, rounds, p);

  out << "round,move_a,move_b,cum_a,cum_b\n";
  double cum_a = 0.0, cum_b = 0.0;
  for (int i = 0; i < r.rounds; ++i) {
    const auto [pa, pb] = stage_payoff(r.history_a[i], r.history_b[i], p);
    cum_a += pa;
    cum_b += pb;
    out << i + 1 << ',' << to_char(r.history_a[i]) << ',' << to_char(r.history_b[i]) << ','
        << fmt_number(cum_a) << ',' << fmt_number(cum_b) << '\n';
  }
  out << "total " << to_string(*a) << " = " << fmt_number(r.payoff_a) << ", " << to_string(*b)
      << " = " << fmt_number(r.payoff_b) << '\n';
  if (analysis::pair_covered(*a, *b) && rounds >= kClosedFormMinRounds) {
    out << "closed form " << fmt_number(analysis::pair_payoff(*a, *b, rounds, p)) << " / "
        << fmt_number(analysis::pair_payoff(*b, *a, rounds, p)) << '\n';
  }
  return kExitOk;
}

int do_analyze(int rounds, const std::string& payoff_text, const analysis::ScenarioCounts& counts,
               const std::string& format, std::ostream& out) {
  const PayoffValues p = parse_payoffs(payoff_text);
  const analysis::ThresholdReport report = analysis::thresholds(rounds, p, counts);
  out << (format == "csv" ? analysis::render_csv(report) : analysis::render_text(report));
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial iterated prisoner's dilemma with master/slave collective strategies"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  RawFlags run_raw;
  CLI::App* run_cmd = app.add_subcommand("run", "Evolve a randomly mixed lattice");
  add_simulation_flags(*run_cmd, run_cfg, run_raw);
  run_cmd->add_option("--mix", run_raw.mix, "KIND:fraction,...")->capture_default_str();
  run_cmd->add_flag("--freeze-roles", run_cfg.freeze_roles, "Disable master-to-slave flips");

  RunConfig scen_cfg;
  scen_cfg.generations = 1;
  scen_cfg.snapshot_every = 1;
  RawFlags scen_raw;
  std::string scen_file;
  CLI::App* scen_cmd = app.add_subcommand("scenario", "Evolve a lattice from a descriptor file");
  scen_cmd->add_option("descriptor", scen_file, "Scenario descriptor")->required();
  add_simulation_flags(*scen_cmd, scen_cfg, scen_raw);
  scen_cmd->add_flag("--freeze-roles", scen_cfg.freeze_roles,
                     "Disable master-to-slave flips (also settable in the descriptor)");

  std::string match_a, match_b;
  int match_rounds = 50;
  std::string match_payoffs = "5,3,1,0";
  std::uint64_t match_seed = 0;
  CLI::App* match_cmd = app.add_subcommand("match", "Play one match and print the transcript");
  match_cmd->add_option("a", match_a, "Player A, KIND or CSMSM:MASTER|SLAVE")->required();
  match_cmd->add_option("b", match_b, "Player B")->required();
  match_cmd->add_option("--rounds", match_rounds, "Rounds")->capture_default_str();
  match_cmd->add_option("--payoffs", match_payoffs, "T,R,P,S")->capture_default_str();
  match_cmd->add_option("--seed", match_seed, "Seed for RANDOM players")->capture_default_str();

  int an_rounds = 50;
  std::string an_payoffs = "5,3,1,0";
  std::string an_format = "text";
  analysis::ScenarioCounts counts;
  int an_m = -1, an_l = -1, an_q = -1;
  CLI::App* an_cmd = app.add_subcommand("analyze", "Closed-form payoffs and invasion thresholds");
  an_cmd->add_option("--rounds", an_rounds, "Rounds per match (n)")->capture_default_str();
  an_cmd->add_option("--payoffs", an_payoffs, "T,R,P,S")->capture_default_str();
  an_cmd->add_option("--center-slaves", an_m, "Slaves around a center master (0-8)");
  an_cmd->add_option("--border-slaves", an_l, "Slaves among a border master's 5 CSMSM neighbours");
  an_cmd->add_option("--corner-slaves", an_q, "Slaves among a corner master's 3 CSMSM neighbours");
  an_cmd->add_option("--format", an_format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const OutputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    // CLI11 takes arguments in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return do_run(run_cfg, run_raw, out);
    if (*scen_cmd) return do_scenario(scen_cfg, scen_raw, scen_file, out);
    if (*match_cmd) {
      return do_match(match_a, match_b, match_rounds, match_payoffs, match_seed, out);
    }
    if (*an_cmd) {
      if (an_m >= 0) counts.center_slaves = an_m;
      if (an_l >= 0) counts.border_slaves = an_l;
      if (an_q >= 0) counts.corner_slaves = an_q;
      return do_analyze(an_rounds, an_payoffs, counts, an_format, out);
    }
  } catch (const OutputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sipd
