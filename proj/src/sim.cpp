#include "ssdec/sim.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace ssdec {

namespace {

constexpr std::uint64_t kBatch = 4096;  // stopping checked at batch boundaries
constexpr double kZ95 = 1.959963984540054;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::atomic<bool> g_stop{false};

}  // namespace

void request_stop() { g_stop.store(true, std::memory_order_relaxed); }
bool stop_requested() { return g_stop.load(std::memory_order_relaxed); }
void clear_stop() { g_stop.store(false, std::memory_order_relaxed); }

std::string decoder_kind_name(DecoderKind k) {
  switch (k) {
    case DecoderKind::Map: return "map";
    case DecoderKind::DegMap: return "deg_map";
    case DecoderKind::Passthrough: return "passthrough";
  }
  return "?";
}

DecoderKind parse_decoder_kind(const std::string& s) {
  if (s == "map") return DecoderKind::Map;
  if (s == "deg_map") return DecoderKind::DegMap;
  if (s == "passthrough") return DecoderKind::Passthrough;
  throw std::invalid_argument("unknown decoder: " + s);
}

std::pair<double, double> wilson_interval(std::uint64_t failures, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  const double n = double(trials);
  const double p = double(failures) / n;
  const double z2 = kZ95 * kZ95;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  double lo = std::max(0.0, (center - half) / denom);
  double hi = std::min(1.0, (center + half) / denom);
  if (failures == 0) lo = 0.0;  // avoid floating-point residue at the boundary
  if (failures == trials) hi = 1.0;
  return {lo, hi};
}

Simulation::Simulation(RunConfig config) : config_(std::move(config)) {
  if (config_.epsilon_grid.empty())
    throw std::invalid_argument("Simulation: empty epsilon grid");
  for (double e : config_.epsilon_grid)
    if (!(e > 0.0 && e < 0.5))
      throw std::invalid_argument("Simulation: epsilon values must be in (0, 0.5)");
  if (config_.stopping.target_failures < 1)
    throw std::invalid_argument("Simulation: target_failures must be >= 1");

  const StabilizerCode code = build_code(config_.code_id);
  std::size_t m = config_.m;
  if (m == 0) {
    const std::size_t cand = config_.code_id == "product16" ? 17 : 25;
    m = code.H.rows() + cand;
  }
  synd_ = build_variant(code, config_.variant, m, config_.strategy);
  tables_ = build_decoder_tables(synd_.code, config_.master_seed);
  decoder_delta_ = resolve_delta(config_.noise, synd_.H_o);
}

PointResult Simulation::run_point(double epsilon, std::size_t point_index) const {
  const auto t0 = std::chrono::steady_clock::now();

  MapDecoder map_dec(synd_, tables_.leader);
  DegMapDecoder deg_dec(synd_, tables_.enumerator);
  deg_dec.prepare(epsilon);

  const std::size_t n = synd_.code.n;
  const std::size_t m = synd_.m;
  const BitVector zero_e(n);

  auto run_trial = [&](std::uint64_t trial, std::uint64_t& tie_events) -> bool {
    RngStream rng_e = derive_stream(config_.master_seed, point_index, trial, 0);
    RngStream rng_z = derive_stream(config_.master_seed, point_index, trial, 1);
    RngStream rng_tie = derive_stream(config_.master_seed, point_index, trial, 2);

    const BitVector e = sample_error(n, epsilon, rng_e);
    BitVector ztilde = mat_vec_mul(synd_.H_o, e);
    ztilde ^= sample_syndrome_noise(m, config_.noise, synd_.row_weights, rng_z);

    BitVector e_hat;
    switch (config_.decoder) {
      case DecoderKind::Map: {
        const DecodeOutcome out = map_dec.decode(ztilde, epsilon, decoder_delta_, rng_tie);
        if (out.ties > 1) ++tie_events;
        e_hat = out.error_estimate;
        break;
      }
      case DecoderKind::DegMap: {
        const DecodeOutcome out = deg_dec.decode(ztilde, epsilon, decoder_delta_, rng_tie);
        if (out.ties > 1) ++tie_events;
        e_hat = out.error_estimate;
        break;
      }
      case DecoderKind::Passthrough:
        e_hat = zero_e;
        break;
    }
    return is_logical_failure(synd_.code, e, e_hat);
  };

  PointResult res;
  res.epsilon = epsilon;
  res.delta = decoder_delta_;

  const unsigned workers = std::max(1u, config_.workers);
  while (res.failures < config_.stopping.target_failures &&
         res.trials < config_.stopping.max_trials && !stop_requested()) {
    const std::uint64_t batch =
        std::min<std::uint64_t>(kBatch, config_.stopping.max_trials - res.trials);
    const std::uint64_t first = res.trials;

    std::vector<std::uint64_t> fail_parts(workers, 0), tie_parts(workers, 0);
    auto work = [&](unsigned wi) {
      const std::uint64_t lo = first + batch * wi / workers;
      const std::uint64_t hi = first + batch * (wi + 1) / workers;
      for (std::uint64_t t = lo; t < hi; ++t)
        if (run_trial(t, tie_parts[wi])) ++fail_parts[wi];
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (unsigned wi = 0; wi < workers; ++wi) threads.emplace_back(work, wi);
      for (auto& th : threads) th.join();
    }
    for (unsigned wi = 0; wi < workers; ++wi) {
      res.failures += fail_parts[wi];
      res.tie_events += tie_parts[wi];
    }
    res.trials += batch;
  }

  if (res.trials > 0) {
    res.p_e = double(res.failures) / double(res.trials);
    std::tie(res.ci_low, res.ci_high) = wilson_interval(res.failures, res.trials);
  }
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

RunResult Simulation::run_sweep(const std::function<void(const PointResult&)>& on_point) const {
  RunResult out;
  out.config = config_;
  out.synd_label = synd_.label;
  out.code_fingerprint = fingerprint(synd_.code.H_full);
  out.synd_fingerprint = fingerprint(synd_.H_o);
  for (std::size_t i = 0; i < config_.epsilon_grid.size(); ++i) {
    PointResult pr = run_point(config_.epsilon_grid[i], i);
    if (pr.trials == 0) break;  // cancelled before any batch finished
    if (on_point) on_point(pr);
    out.points.push_back(std::move(pr));
    if (stop_requested()) break;
  }
  return out;
}

void write_csv_header(std::ostream& os) {
  os << "code,synd_code,decoder,q,delta,epsilon,trials,failures,p_e,ci_low,ci_high,ties,seed\n";
}

void write_csv_rows(std::ostream& os, const RunResult& result) {
  for (const PointResult& p : result.points) {
    os << result.config.code_id << ',' << result.synd_label << ','
       << decoder_kind_name(result.config.decoder) << ','
       << (result.config.noise.q ? fmt_double(*result.config.noise.q) : "") << ','
       << fmt_double(p.delta) << ',' << fmt_double(p.epsilon) << ',' << p.trials << ','
       << p.failures << ',' << fmt_double(p.p_e) << ',' << fmt_double(p.ci_low) << ','
       << fmt_double(p.ci_high) << ',' << p.tie_events << ',' << result.config.master_seed
       << '\n';
  }
}

std::string manifest_json(const RunResult& result) {
  nlohmann::json cfg;
  cfg["code"] = result.config.code_id;
  cfg["variant"] = result.config.variant;
  cfg["m"] = result.config.m;
  cfg["strategy"] =
      result.config.strategy == SelectStrategy::Exhaustive ? "exhaustive" : "greedy";
  cfg["decoder"] = decoder_kind_name(result.config.decoder);
  cfg["epsilon"] = result.config.epsilon_grid;
  if (result.config.noise.q) cfg["q"] = *result.config.noise.q;
  if (result.config.noise.delta) cfg["delta"] = *result.config.noise.delta;
  cfg["delta_mode"] =
      result.config.noise.delta_mode == DeltaMode::Uniform ? "uniform" : "per_row";
  cfg["seed"] = result.config.master_seed;
  cfg["target_failures"] = result.config.stopping.target_failures;
  cfg["max_trials"] = result.config.stopping.max_trials;
  cfg["workers"] = result.config.workers;

  nlohmann::json points = nlohmann::json::array();
  for (const PointResult& p : result.points) {
    points.push_back({{"epsilon", p.epsilon},
                      {"delta", p.delta},
                      {"trials", p.trials},
                      {"failures", p.failures},
                      {"p_e", p.p_e},
                      {"ci_low", p.ci_low},
                      {"ci_high", p.ci_high},
                      {"ties", p.tie_events},
                      {"wall_seconds", p.wall_seconds}});
  }

  nlohmann::json j;
  j["config"] = cfg;
  j["synd_code"] = result.synd_label;
  j["code_fingerprint"] = result.code_fingerprint;
  j["synd_fingerprint"] = result.synd_fingerprint;
  j["results"] = points;
  return j.dump(2);
}

}  // namespace ssdec
