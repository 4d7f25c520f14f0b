#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssdec/decoder.hpp"
#include "ssdec/noise.hpp"
#include "ssdec/syndrome_code.hpp"

namespace ssdec {

enum class DecoderKind { Map, DegMap, Passthrough };

std::string decoder_kind_name(DecoderKind k);
DecoderKind parse_decoder_kind(const std::string& s);

struct StoppingRule {
  std::uint64_t max_trials = 10'000'000;
  std::uint64_t target_failures = 100;
};

struct RunConfig {
  std::string code_id = "product16";
  std::string variant = "red";
  std::size_t m = 0;  // 0 means the full redundant construction
  SelectStrategy strategy = SelectStrategy::Exhaustive;
  DecoderKind decoder = DecoderKind::Map;
  NoiseSpec noise;
  std::vector<double> epsilon_grid;
  StoppingRule stopping;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
};

struct PointResult {
  double epsilon = 0.0;
  double delta = 0.0;            // scalar delta used by the decoder likelihood
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double p_e = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t tie_events = 0;  // trials whose argmax was tied
  double wall_seconds = 0.0;
};

struct RunResult {
  RunConfig config;
  std::string synd_label;
  std::uint64_t code_fingerprint = 0;
  std::uint64_t synd_fingerprint = 0;
  std::vector<PointResult> points;
};

// 95% Wilson score interval.
std::pair<double, double> wilson_interval(std::uint64_t failures, std::uint64_t trials);

// Cooperative cancellation, checked at batch boundaries; async-signal-safe.
void request_stop();
bool stop_requested();
void clear_stop();

// Owns the code, syndrome code, decoder tables and decoders for one config.
// Trials are deterministic functions of (master seed, point, trial), so the
// results are bit-identical for any worker count.
class Simulation {
public:
  explicit Simulation(RunConfig config);

  PointResult run_point(double epsilon, std::size_t point_index) const;
  RunResult run_sweep(const std::function<void(const PointResult&)>& on_point = {}) const;

  const StabilizerCode& code() const { return synd_.code; }
  const SyndromeCode& synd_code() const { return synd_; }
  const DecoderTables& tables() const { return tables_; }

private:
  RunConfig config_;
  SyndromeCode synd_;
  DecoderTables tables_;
  double decoder_delta_ = 0.0;
};

void write_csv_header(std::ostream& os);
void write_csv_rows(std::ostream& os, const RunResult& result);
std::string manifest_json(const RunResult& result);

}  // namespace ssdec
