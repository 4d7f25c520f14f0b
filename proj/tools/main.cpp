#include <cmath>
#include <csignal>
#include <cstdio>
#include <map>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ssdec/sim.hpp"

using namespace ssdec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInterrupted = 130;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void handle_sigint(int) { request_stop(); }

std::vector<double> parse_eps_grid(const std::string& text, bool log_spaced) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start = 0, stop = 0;
    int count = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d", &start, &stop, &count) != 3 || count < 1)
      throw UsageError("bad --eps range, expected start:stop:count: " + text);
    if (count == 1) {
      out.push_back(start);
    } else if (log_spaced) {
      if (start <= 0 || stop <= 0) throw UsageError("log-spaced --eps needs positive bounds");
      for (int i = 0; i < count; ++i)
        out.push_back(start * std::pow(stop / start, double(i) / (count - 1)));
    } else {
      for (int i = 0; i < count; ++i)
        out.push_back(start + (stop - start) * double(i) / (count - 1));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  if (out.empty()) throw UsageError("empty --eps grid");
  return out;
}

// "red21" / "rep24" / "con27" -> (variant, m)
std::pair<std::string, std::size_t> parse_synd_shorthand(const std::string& s) {
  std::size_t pos = 0;
  while (pos < s.size() && !std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == 0 || pos == s.size())
    throw UsageError("bad --synd value, expected e.g. red21: " + s);
  return {s.substr(0, pos), std::stoul(s.substr(pos))};
}

SelectStrategy parse_strategy(const std::string& s) {
  if (s == "exhaustive") return SelectStrategy::Exhaustive;
  if (s == "greedy") return SelectStrategy::Greedy;
  throw UsageError("unknown strategy: " + s);
}

DeltaMode parse_delta_mode(const std::string& s) {
  if (s == "uniform") return DeltaMode::Uniform;
  if (s == "per_row") return DeltaMode::PerRow;
  throw UsageError("unknown delta mode: " + s);
}

void write_matrix_file(const std::filesystem::path& path, const BitMatrix& M) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << M.to_string();
}

int cmd_codes_list() {
  for (const auto& id : builtin_code_ids()) std::cout << id << "\n";
  return kExitOk;
}

int cmd_codes_inspect(const std::string& code_id) {
  StabilizerCode code;
  try {
    code = build_code(code_id);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  auto report = validate_code(code);
  std::cout << "code: " << code.name << "\n"
            << "n: " << code.n << "\n"
            << "rank: " << report.rank_H << "\n"
            << "k_q: " << code.k_q << "\n"
            << "stabilizer weights:";
  for (auto w : report.stabilizer_weights) std::cout << ' ' << w;
  std::cout << "\n"
            << "kernel dim: " << report.kernel_dim << "\n"
            << "rank(D): " << report.rank_D << "\n"
            << "sector distance: " << report.sector_distance << "\n"
            << "D: derived (lex-greedy over weight-4 kernel vectors)\n"
            << "valid: " << (report.ok ? "yes" : "no") << "\n";
  for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
  return report.ok ? kExitOk : kExitInternal;
}

SyndromeCode make_synd_code(const std::string& code_id, const std::string& variant,
                            std::size_t m, const std::string& strategy) {
  StabilizerCode code;
  try {
    code = build_code(code_id);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (m == 0) m = code.H.rows() + (code_id == "product16" ? 17 : 25);
  try {
    return build_variant(code, variant, m, parse_strategy(strategy));
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

int cmd_synd_code(const std::string& code_id, const std::string& variant, std::size_t m,
                  const std::string& strategy, double q, const std::string& out_dir,
                  bool distance_only) {
  auto sc = make_synd_code(code_id, variant, m, strategy);
  if (distance_only) {
    std::cout << "d_min: " << sc.d_min << "\nmultiplicity: " << sc.multiplicity << "\n";
    return kExitOk;
  }
  std::map<std::size_t, std::size_t> profile;
  for (auto w : sc.row_weights) ++profile[w];
  std::cout << "label: " << sc.label << "\n"
            << "m: " << sc.m << "\n"
            << "k_s: " << sc.k_s << "\n"
            << "d_min: " << sc.d_min << "\n"
            << "multiplicity: " << sc.multiplicity << "\n"
            << "row weights:";
  for (auto [w, c] : profile) std::cout << ' ' << c << "x w" << w;
  std::cout << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", average_delta(sc.H_o, q));
  std::cout << "average delta (q=" << q << "): " << buf << "\n";

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_matrix_file(std::filesystem::path(out_dir) / "H_o.txt", sc.H_o);
    write_matrix_file(std::filesystem::path(out_dir) / "G_s.txt", sc.G_s);
    std::cout << "wrote: " << out_dir << "/H_o.txt, " << out_dir << "/G_s.txt\n";
  }
  return kExitOk;
}

void load_config_file(const std::string& path, RunConfig& cfg, std::string& eps_text,
                      bool& eps_log) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << f.rdbuf();
  std::string text = buffer.str();

  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    // JSON run manifest: replay its embedded config
    auto j = nlohmann::json::parse(text);
    const auto& c = j.contains("config") ? j["config"] : j;
    if (c.contains("code")) cfg.code_id = c["code"];
    if (c.contains("variant")) cfg.variant = c["variant"];
    if (c.contains("m")) cfg.m = c["m"];
    if (c.contains("strategy")) cfg.strategy = parse_strategy(c["strategy"]);
    if (c.contains("decoder")) cfg.decoder = parse_decoder_kind(c["decoder"]);
    if (c.contains("q")) cfg.noise.q = double(c["q"]);
    if (c.contains("delta")) cfg.noise.delta = double(c["delta"]);
    if (c.contains("delta_mode")) cfg.noise.delta_mode = parse_delta_mode(c["delta_mode"]);
    if (c.contains("seed")) cfg.master_seed = c["seed"];
    if (c.contains("target_failures")) cfg.stopping.target_failures = c["target_failures"];
    if (c.contains("max_trials")) cfg.stopping.max_trials = c["max_trials"];
    if (c.contains("workers")) cfg.workers = c["workers"];
    if (c.contains("epsilon")) {
      cfg.epsilon_grid = c["epsilon"].get<std::vector<double>>();
      eps_text.clear();
    }
    return;
  }

  // flat key=value lines mirroring the flag names
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) continue;
    if (key == "code") cfg.code_id = val;
    else if (key == "variant") cfg.variant = val;
    else if (key == "m") cfg.m = std::stoul(val);
    else if (key == "strategy") cfg.strategy = parse_strategy(val);
    else if (key == "decoder") cfg.decoder = parse_decoder_kind(val);
    else if (key == "q") cfg.noise.q = std::stod(val);
    else if (key == "delta") cfg.noise.delta = std::stod(val);
    else if (key == "delta_mode") cfg.noise.delta_mode = parse_delta_mode(val);
    else if (key == "eps") eps_text = val;
    else if (key == "eps_log") eps_log = (val == "1" || val == "true");
    else if (key == "seed") cfg.master_seed = std::stoull(val);
    else if (key == "target_failures") cfg.stopping.target_failures = std::stoull(val);
    else if (key == "max_trials") cfg.stopping.max_trials = std::stoull(val);
    else if (key == "workers") cfg.workers = unsigned(std::stoul(val));
    else throw UsageError("unknown config key: " + key);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-shot decoding of stabilizer syndromes under faulty measurements"};
  app.require_subcommand(1);

  // codes
  auto* codes = app.add_subcommand("codes", "list or inspect the built-in codes");
  codes->require_subcommand(1);
  codes->add_subcommand("list", "print the built-in code ids");
  std::string inspect_code;
  auto* inspect = codes->add_subcommand("inspect", "structural report for one code");
  inspect->add_option("--code", inspect_code, "code id")->required();

  // synd-code
  auto* synd = app.add_subcommand("synd-code", "construct syndrome error-correcting codes");
  synd->require_subcommand(1);
  std::string sc_code = "product16", sc_variant = "red", sc_strategy = "exhaustive";
  std::string sc_out_dir;
  std::size_t sc_m = 0;
  double sc_q = 0.013;
  auto add_sc_flags = [&](CLI::App* cmd, bool with_variant) {
    cmd->add_option("--code", sc_code, "code id")->required();
    if (with_variant)
      cmd->add_option("--variant", sc_variant, "red, rep or con")->required();
    cmd->add_option("--m", sc_m, "measurement count (0 = full redundant set)");
    cmd->add_option("--strategy", sc_strategy, "exhaustive or greedy");
    cmd->add_option("--q", sc_q, "per-interaction failure probability for the delta report");
    cmd->add_option("--out-dir", sc_out_dir, "write H_o.txt and G_s.txt here");
  };
  auto* sc_build = synd->add_subcommand("build", "build a named variant and report it");
  add_sc_flags(sc_build, true);
  auto* sc_select = synd->add_subcommand("select", "subset selection over redundant rows");
  add_sc_flags(sc_select, false);
  auto* sc_dist = synd->add_subcommand("distance", "print only d_min and multiplicity");
  add_sc_flags(sc_dist, true);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo failure-rate sweep");
  std::string sim_code = "product16", sim_variant = "red", sim_synd, sim_strategy = "exhaustive";
  std::string sim_decoder = "map", sim_delta_mode = "uniform";
  std::string eps_text = "0.01:0.04:4", config_path, csv_path, manifest_path;
  std::size_t sim_m = 0;
  double sim_q = -1, sim_delta = -1;
  bool eps_log = false;
  std::uint64_t seed = 1, target_failures = 100, max_trials = 10'000'000;
  unsigned workers = 1;
  simulate->add_option("--config", config_path,
                       "key=value config file or a JSON manifest from a previous run");
  simulate->add_option("--code", sim_code, "code id");
  simulate->add_option("--synd", sim_synd, "syndrome-code shorthand, e.g. red21");
  simulate->add_option("--variant", sim_variant, "red, rep or con");
  simulate->add_option("--m", sim_m, "measurement count (0 = full redundant set)");
  simulate->add_option("--strategy", sim_strategy, "exhaustive or greedy");
  simulate->add_option("--decoder", sim_decoder, "map, deg_map or passthrough");
  simulate->add_option("--q", sim_q, "per-interaction failure probability");
  simulate->add_option("--delta", sim_delta, "explicit uniform syndrome flip probability");
  simulate->add_option("--delta-mode", sim_delta_mode, "uniform or per_row");
  simulate->add_option("--eps", eps_text, "epsilon grid: start:stop:count or comma list");
  simulate->add_flag("--eps-log", eps_log, "log-spaced start:stop:count grid");
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--target-failures", target_failures, "stop a point at this many failures");
  simulate->add_option("--max-trials", max_trials, "hard trial cap per point");
  simulate->add_option("--workers", workers, "worker thread count");
  simulate->add_option("--csv", csv_path, "CSV output path (default: stdout)");
  simulate->add_option("--manifest", manifest_path, "JSON run manifest output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (codes->parsed()) {
      if (codes->get_subcommand("list")->parsed()) return cmd_codes_list();
      return cmd_codes_inspect(inspect_code);
    }

    if (synd->parsed()) {
      if (sc_select->parsed()) sc_variant = "red";
      return cmd_synd_code(sc_code, sc_variant, sc_m, sc_strategy, sc_q, sc_out_dir,
                           sc_dist->parsed());
    }

    // simulate
    RunConfig cfg;
    cfg.epsilon_grid.clear();
    if (!config_path.empty()) load_config_file(config_path, cfg, eps_text, eps_log);

    auto given = [&](const std::string& name) { return simulate->count(name) > 0; };
    if (config_path.empty() || given("--code")) cfg.code_id = sim_code;
    if (config_path.empty() || given("--variant")) cfg.variant = sim_variant;
    if (config_path.empty() || given("--m")) cfg.m = sim_m;
    if (given("--synd")) std::tie(cfg.variant, cfg.m) = parse_synd_shorthand(sim_synd);
    if (config_path.empty() || given("--strategy")) cfg.strategy = parse_strategy(sim_strategy);
    if (config_path.empty() || given("--decoder")) cfg.decoder = parse_decoder_kind(sim_decoder);
    if (given("--q") || (config_path.empty() && sim_q >= 0)) cfg.noise.q = sim_q;
    if (given("--delta") || (config_path.empty() && sim_delta >= 0)) cfg.noise.delta = sim_delta;
    if (config_path.empty() || given("--delta-mode"))
      cfg.noise.delta_mode = parse_delta_mode(sim_delta_mode);
    if (config_path.empty() || given("--seed")) cfg.master_seed = seed;
    if (config_path.empty() || given("--target-failures"))
      cfg.stopping.target_failures = target_failures;
    if (config_path.empty() || given("--max-trials")) cfg.stopping.max_trials = max_trials;
    if (config_path.empty() || given("--workers")) cfg.workers = workers;
    if (cfg.epsilon_grid.empty() || given("--eps") || given("--eps-log") || !eps_text.empty())
      if (!eps_text.empty()) cfg.epsilon_grid = parse_eps_grid(eps_text, eps_log);

    if (!cfg.noise.q && !cfg.noise.delta)
      throw UsageError("simulate needs --q or --delta (or a config providing one)");

    std::ofstream csv_file;
    std::ostream* csv = &std::cout;
    if (!csv_path.empty()) {
      csv_file.open(csv_path);
      if (!csv_file) throw std::runtime_error("cannot write " + csv_path);
      csv = &csv_file;
    }

    clear_stop();
    std::signal(SIGINT, handle_sigint);

    Simulation sim(cfg);
    std::cerr << "code " << cfg.code_id << ", synd " << sim.synd_code().label << ", decoder "
              << decoder_kind_name(cfg.decoder) << ", " << cfg.epsilon_grid.size()
              << " grid points, seed " << cfg.master_seed << "\n";

    write_csv_header(*csv);
    csv->flush();
    std::size_t done = 0;
    auto result = sim.run_sweep([&](const PointResult& pt) {
      RunResult partial;
      partial.config = cfg;
      partial.synd_label = sim.synd_code().label;
      partial.points.push_back(pt);
      write_csv_rows(*csv, partial);
      csv->flush();
      ++done;
      char line[160];
      std::snprintf(line, sizeof line,
                    "eps %.6g: trials %llu, failures %llu, p_e %.4g [%.4g, %.4g] (%.1fs)\n",
                    pt.epsilon, (unsigned long long)pt.trials, (unsigned long long)pt.failures,
                    pt.p_e, pt.ci_low, pt.ci_high, pt.wall_seconds);
      std::cerr << line;
    });

    if (!manifest_path.empty()) {
      std::ofstream mf(manifest_path);
      if (!mf) throw std::runtime_error("cannot write " + manifest_path);
      mf << manifest_json(result) << "\n";
    }

    if (stop_requested()) {
      std::cerr << "interrupted after " << done << " point(s); partial CSV flushed\n";
      return kExitInterrupted;
    }
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
