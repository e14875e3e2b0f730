#include "szilard/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "szilard/finite.hpp"
#include "szilard/io.hpp"
#include "szilard/kelly.hpp"
#include "szilard/montecarlo.hpp"
#include "szilard/risk.hpp"
#include "szilard/version.hpp"

namespace szilard::cli {

namespace {

// Grids stop at `stop` give or take this fraction of a step.
constexpr double kGridSlack = 1e-9;

class BadFlag : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw BadFlag("not a number: '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw BadFlag("not a number: '" + text + "'");
  }
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  return row + '\n';
}

std::vector<std::string> strategy_columns(Index k) {
  std::vector<std::string> cols;
  for (Index x = 0; x < k; ++x) cols.push_back("q" + std::to_string(x));
  return cols;
}

void append_strategy(std::vector<std::string>& cells, const ProbDist& d) {
  for (Index x = 0; x < d.size(); ++x) cells.push_back(format_number(d[x]));
}

struct Invocation {
  std::string command;
  std::string spec_path;
  std::string output_path;
  std::map<std::string, std::string> parameters;
  std::optional<std::uint64_t> seed;
};

io::Json manifest_json(const Invocation& inv) {
  io::Json params = io::Json::object();
  for (const auto& [k, v] : inv.parameters) params[k] = v;
  io::Json m{{"command", inv.command},
             {"spec_path", inv.spec_path},
             {"output_path", inv.output_path},
             {"parameters", std::move(params)},
             {"version", kVersion},
             {"csv_schema", kCsvSchemaVersion}};
  m["seed"] = inv.seed ? io::Json(*inv.seed) : io::Json(nullptr);
  return m;
}

EngineSpec load_spec(const std::string& path, std::optional<double> kT) {
  EngineSpec spec = io::engine_spec_from_json(io::read_json_file(path));
  return kT ? spec.with_kT(*kT) : spec;
}

std::string run_divergence(const EngineSpec& spec, const std::vector<std::string>& alphas) {
  std::vector<double> orders;
  if (alphas.empty()) {
    orders = {0.0, 0.5, 1.0, 2.0, std::numeric_limits<double>::infinity()};
  } else {
    for (const auto& a : alphas) orders.push_back(parse_number(a));
  }
  std::string csv = join_row({"alpha", "renyi_divergence", "kl_divergence", "prior_entropy"});
  const double kl = kl_divergence(spec.prior(), spec.bob());
  const double h = shannon_entropy(spec.prior());
  for (double a : orders) {
    const auto d = renyi_divergence_flagged(spec.prior(), spec.bob(), RenyiOrder(a));
    csv += join_row({format_number(a), d.degenerate ? "degenerate" : format_number(d.nats), format_number(kl),
                     format_number(h)});
  }
  return csv;
}

std::string run_strategy(const EngineSpec& spec, double r) {
  const RiskProfile profile(r);
  const TiltedDistribution tilt = optimal_strategy(spec, profile);
  std::vector<std::string> header{"r", "alpha", "certainty_equivalent", "expected_work", "free_energy"};
  for (auto& c : strategy_columns(spec.alphabet_size())) header.push_back(c);
  std::vector<std::string> row{format_number(r), format_number(profile.alpha()),
                               format_number(certainty_equivalent(spec, profile)),
                               format_number(expected_work_optimal(spec, profile)),
                               format_number(spec.kT() * kl_divergence(spec.prior(), spec.bob()))};
  append_strategy(row, tilt.weights);
  return join_row(header) + join_row(row);
}

std::string run_ce_sweep(const EngineSpec& spec, const std::vector<double>& rs) {
  std::string csv = join_row({"r", "alpha", "certainty_equivalent", "expected_work", "min_work", "violated"});
  for (double r : rs) {
    const RiskProfile profile(r);
    const AuditReport audit = dominance_audit(spec, profile);
    csv += join_row({format_number(r), format_number(profile.alpha()), format_number(audit.ce),
                     format_number(expected_work_optimal(spec, profile)), format_number(audit.min_work),
                     audit.violated ? "true" : "false"});
  }
  return csv;
}

std::string run_frontier(const EngineSpec& spec, const std::vector<Count>& ns, const std::vector<double>& eps) {
  std::vector<std::string> header{"n", "epsilon", "mu", "work_bound_per_round", "oracle_work_per_round",
                                  "oracle_success_prob"};
  for (auto& c : strategy_columns(spec.alphabet_size())) header.push_back(c);
  std::string csv = join_row(header);
  for (Count n : ns) {
    for (double e : eps) {
      const TradeoffPoint point = tradeoff_point(spec, n, e);
      const double rounds = static_cast<double>(n);
      std::vector<std::string> row{std::to_string(n), format_number(e), format_number(point.budget.mu),
                                   format_number(point.work_bound / rounds)};
      try {
        const FrontierOracle oracle = brute_force_frontier(spec, n, e);
        row.push_back(format_number(oracle.work / rounds));
        row.push_back(format_number(oracle.success_probability));
      } catch (const NoFeasibleType&) {
        row.push_back("nan");
        row.push_back("nan");
      }
      append_strategy(row, point.strategy);
      csv += join_row(row);
    }
  }
  return csv;
}

std::string run_kelly_compare(const EngineSpec& spec, const std::vector<double>& rs) {
  std::vector<std::string> header{"strategy", "log_growth_rate", "average_work_over_kT", "abs_difference"};
  for (auto& c : strategy_columns(spec.alphabet_size())) header.push_back(c);
  std::string csv = join_row(header);

  auto emit = [&](const std::string& label, const ProbDist& alice) {
    const BettingSpec bet = BettingSpec::fair(spec.prior(), spec.bob(), alice);
    const double growth = log_growth_rate(bet);
    const double work = average_work(spec, alice) / spec.kT();
    std::vector<std::string> row{label, format_number(growth), format_number(work),
                                 format_number(std::abs(growth - work))};
    append_strategy(row, alice);
    csv += join_row(row);
  };
  if (spec.prior().has_full_support()) emit("prior", spec.prior());
  emit("bob", spec.bob());
  for (double r : rs) {
    const ProbDist tilt = optimal_strategy(spec, RiskProfile(r)).weights;
    if (tilt.has_full_support()) emit("tilt_r=" + format_number(r), tilt);
  }
  return csv;
}

std::string run_simulate(const std::string& config_path, double r, std::optional<double> kT, unsigned threads,
                         Invocation& inv) {
  io::SimConfigDocument doc = io::sim_config_from_json(io::read_json_file(config_path));
  const EngineSpec spec = kT ? doc.spec.with_kT(*kT) : doc.spec;
  const RiskProfile profile(r);
  ProbDist strategy = doc.strategy ? *doc.strategy : optimal_strategy(spec, profile).weights;
  inv.seed = doc.seed;
  SimConfig config{doc.seed, doc.rounds, doc.trials, spec, std::move(strategy), doc.target};
  return io::to_json(simulate(config, profile, threads)).dump(2) + "\n";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw BadFlag("range must look like start:stop:step, got '" + text + "'");
  const double start = parse_number(parts[0]);
  const double stop = parse_number(parts[1]);
  const double step = parse_number(parts[2]);
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw BadFlag("range needs finite bounds and a positive step: '" + text + "'");
  }
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double v = start + static_cast<double>(i) * step;
    if (v > stop + kGridSlack * step) break;
    grid.push_back(v);
    if (grid.size() > 1'000'000) throw BadFlag("range has too many points");
  }
  return grid;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') != std::string::npos) return parse_range(text);
  std::vector<double> values;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) values.push_back(parse_number(p));
  if (values.empty()) throw BadFlag("empty grid");
  return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial Szilard engine: risk-sensitive work extraction", "szilard"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string out_path;
  std::optional<double> kT;
  app.add_option("--out", out_path, "Write the primary output here (manifest goes to <out>.manifest.json)");
  app.add_option("--kT", kT, "Override the spec's thermal energy scale")->check(CLI::PositiveNumber);

  std::string spec_path;
  auto add_spec = [&](CLI::App* sub) {
    sub->add_option("--spec", spec_path, "Engine spec JSON {prior, bob, kT}")->required();
  };

  auto* divergence = app.add_subcommand("divergence", "Renyi divergences D_alpha(P||Q^B)");
  add_spec(divergence);
  std::vector<std::string> alphas;
  divergence->add_option("--alpha", alphas, "Orders to evaluate (number or inf); repeatable");

  auto* strategy = app.add_subcommand("strategy", "Optimal CARA strategy, certainty equivalent, expected work");
  add_spec(strategy);
  double r = 0.0;
  strategy->add_option("--r", r, "CARA risk parameter")->required();

  auto* sweep = app.add_subcommand("ce-sweep", "Certainty equivalent and dominance audit over an r grid");
  add_spec(sweep);
  std::string r_grid;
  sweep->add_option("--r-grid", r_grid, "start:stop:step or comma list")->required();

  auto* frontier = app.add_subcommand("frontier", "Finite-n work bound vs exhaustive type oracle");
  add_spec(frontier);
  std::vector<Count> ns;
  std::string eps_grid;
  std::vector<std::string> eps_single;
  frontier->add_option("--n", ns, "Number of rounds; repeatable")->required()->check(CLI::PositiveNumber);
  frontier->add_option("--eps-grid", eps_grid, "Comma list or start:stop:step of epsilon values");
  frontier->add_option("--eps", eps_single, "Single epsilon; repeatable");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo run; writes a SimReport JSON");
  std::string config_path;
  unsigned threads = 0;
  simulate_cmd->add_option("--config", config_path, "Simulation config JSON")->required();
  simulate_cmd->add_option("--r", r, "CARA risk parameter")->required();
  simulate_cmd->add_option("--threads", threads, "Worker threads (0 = hardware); results do not depend on it");

  auto* kelly = app.add_subcommand("kelly-compare", "Kelly growth rate vs engine work under fair odds");
  add_spec(kelly);
  std::string kelly_grid = "0.5,1,2,5";
  kelly->add_option("--r-grid", kelly_grid, "Risk parameters of the tilted strategies to tabulate");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadFlags;
  }

  Invocation inv;
  inv.output_path = out_path;
  inv.spec_path = spec_path;
  if (kT) inv.parameters["kT"] = format_number(*kT);

  std::string output;
  try {
    if (divergence->parsed()) {
      inv.command = "divergence";
      for (std::size_t i = 0; i < alphas.size(); ++i) inv.parameters["alpha." + std::to_string(i)] = alphas[i];
      output = run_divergence(load_spec(spec_path, kT), alphas);
    } else if (strategy->parsed()) {
      inv.command = "strategy";
      inv.parameters["r"] = format_number(r);
      output = run_strategy(load_spec(spec_path, kT), r);
    } else if (sweep->parsed()) {
      inv.command = "ce-sweep";
      inv.parameters["r_grid"] = r_grid;
      const auto grid = parse_grid(r_grid);
      output = run_ce_sweep(load_spec(spec_path, kT), grid);
    } else if (frontier->parsed()) {
      inv.command = "frontier";
      std::vector<double> eps;
      if (!eps_grid.empty()) eps = parse_grid(eps_grid);
      for (const auto& e : eps_single) eps.push_back(parse_number(e));
      if (eps.empty()) throw BadFlag("frontier needs --eps or --eps-grid");
      std::string n_list;
      for (Count n : ns) n_list += (n_list.empty() ? "" : ",") + std::to_string(n);
      std::string eps_list;
      for (double e : eps) eps_list += (eps_list.empty() ? "" : ",") + format_number(e);
      inv.parameters["n"] = n_list;
      inv.parameters["epsilon"] = eps_list;
      output = run_frontier(load_spec(spec_path, kT), ns, eps);
    } else if (simulate_cmd->parsed()) {
      inv.command = "simulate";
      inv.spec_path = config_path;
      inv.parameters["r"] = format_number(r);
      output = run_simulate(config_path, r, kT, threads, inv);
    } else if (kelly->parsed()) {
      inv.command = "kelly-compare";
      inv.parameters["r_grid"] = kelly_grid;
      output = run_kelly_compare(load_spec(spec_path, kT), parse_grid(kelly_grid));
    }
  } catch (const BadFlag& e) {
    err << "szilard: " << e.what() << '\n';
    return kBadFlags;
  } catch (const ValidationError& e) {
    err << "szilard: invalid input: " << e.what() << '\n';
    return kInvalidSpec;
  } catch (const DomainError& e) {
    err << "szilard: domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "szilard: internal error: " << e.what() << '\n';
    return kInternalError;
  }

  const std::string manifest = manifest_json(inv).dump(2) + "\n";
  if (out_path.empty()) {
    out << output;
    err << "manifest: " << manifest_json(inv).dump() << '\n';
    return kOk;
  }
  std::ofstream file(out_path, std::ios::binary);
  std::ofstream manifest_file(out_path + ".manifest.json", std::ios::binary);
  if (!file || !manifest_file) {
    err << "szilard: cannot write " << out_path << '\n';
    return kInternalError;
  }
  file << output;
  manifest_file << manifest;
  return kOk;
}

}  // namespace szilard::cli
