#include "doctest.h"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ssdec/sim.hpp"

using namespace ssdec;

TEST_CASE("wilson interval") {
  auto [lo0, hi0] = wilson_interval(0, 100);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(0.037).epsilon(0.02));

  auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo < 0.5);
  CHECK(hi > 0.5);
  CHECK(hi - 0.5 == doctest::Approx(0.5 - lo).epsilon(1e-9));

  auto [l1, h1] = wilson_interval(100, 100);
  CHECK(h1 == 1.0);
  CHECK(l1 < 1.0);
}

TEST_CASE("decoder kind names round trip") {
  for (auto k : {DecoderKind::Map, DecoderKind::DegMap, DecoderKind::Passthrough})
    CHECK(parse_decoder_kind(decoder_kind_name(k)) == k);
  CHECK_THROWS(parse_decoder_kind("bogus"));
}

TEST_CASE("worker count never changes the result") {
  RunConfig cfg;
  cfg.code_id = "product16";
  cfg.variant = "red";
  cfg.m = 21;
  cfg.decoder = DecoderKind::Map;
  cfg.noise.q = 0.013;
  cfg.epsilon_grid = {0.02};
  cfg.stopping.target_failures = 30;
  cfg.stopping.max_trials = 200000;
  cfg.master_seed = 11;

  cfg.workers = 1;
  auto one = Simulation(cfg).run_sweep();
  cfg.workers = 3;
  auto three = Simulation(cfg).run_sweep();

  REQUIRE(one.points.size() == 1);
  REQUIRE(three.points.size() == 1);
  CHECK(one.points[0].trials == three.points[0].trials);
  CHECK(one.points[0].failures == three.points[0].failures);
  CHECK(one.points[0].p_e == three.points[0].p_e);
  CHECK(one.points[0].tie_events == three.points[0].tie_events);
}

TEST_CASE("noiseless syndrome, tiny data errors: no failures") {
  RunConfig cfg;
  cfg.code_id = "product16";
  cfg.variant = "red";
  cfg.m = 24;
  cfg.noise.delta = 0.0;
  cfg.epsilon_grid = {1e-6};
  cfg.stopping.max_trials = 10000;
  cfg.master_seed = 3;
  auto res = Simulation(cfg).run_sweep();
  CHECK(res.points[0].trials >= 10000);
  CHECK(res.points[0].failures == 0);
}

TEST_CASE("without syndrome noise, repetition and redundancy are equivalent") {
  // delta = 0 makes the decoder condition on the exact syndrome, so the
  // choice of syndrome code cannot matter; matched seeds see identical
  // error sequences and must produce identical failure counts
  RunConfig cfg;
  cfg.code_id = "toric18";
  cfg.noise.delta = 0.0;
  cfg.epsilon_grid = {0.03};
  cfg.stopping.target_failures = 60;
  cfg.stopping.max_trials = 100000;
  cfg.master_seed = 5;

  cfg.variant = "red";
  cfg.m = 27;
  auto red = Simulation(cfg).run_sweep();
  cfg.variant = "rep";
  cfg.m = 24;
  auto rep = Simulation(cfg).run_sweep();

  CHECK(red.points[0].trials == rep.points[0].trials);
  CHECK(red.points[0].failures == rep.points[0].failures);
}

TEST_CASE("passthrough failure rate matches the closed-form coset mass") {
  const double eps = 0.1;
  RunConfig cfg;
  cfg.code_id = "product16";
  cfg.variant = "red";
  cfg.m = 24;
  cfg.decoder = DecoderKind::Passthrough;
  cfg.noise.delta = 0.0;
  cfg.epsilon_grid = {eps};
  cfg.stopping.max_trials = 200000;
  cfg.stopping.target_failures = 1u << 30;  // run all trials
  cfg.master_seed = 17;

  Simulation sim(cfg);
  const auto& code = sim.code();
  const auto* h = sim.tables().enumerator.coset_hist(0);
  double p_trivial = 0;
  for (std::size_t w = 0; w <= code.n; ++w)
    p_trivial += double(h[w]) * std::pow(eps, double(w)) * std::pow(1 - eps, double(code.n - w));
  const double expected = 1 - p_trivial;

  auto res = sim.run_sweep();
  const auto& pt = res.points[0];
  double sigma = std::sqrt(expected * (1 - expected) / double(pt.trials));
  CHECK(std::abs(pt.p_e - expected) < 3 * sigma);
}

TEST_CASE("failure rate grows with epsilon (up to CI overlap)") {
  RunConfig cfg;
  cfg.code_id = "product16";
  cfg.variant = "rep";
  cfg.m = 21;
  cfg.noise.q = 0.013;
  cfg.epsilon_grid = {0.01, 0.04};
  cfg.stopping.target_failures = 60;
  cfg.stopping.max_trials = 300000;
  cfg.master_seed = 23;
  auto res = Simulation(cfg).run_sweep();
  REQUIRE(res.points.size() == 2);
  CHECK(res.points[0].ci_low <= res.points[1].ci_high);
  CHECK(res.points[0].p_e <= res.points[1].p_e);
}

TEST_CASE("sweep reports each point and consistent intervals") {
  RunConfig cfg;
  cfg.code_id = "product16";
  cfg.variant = "rep";
  cfg.m = 21;
  cfg.noise.q = 0.013;
  cfg.epsilon_grid = {0.02, 0.03};
  cfg.stopping.target_failures = 20;
  cfg.stopping.max_trials = 100000;
  cfg.master_seed = 9;

  std::size_t seen = 0;
  auto res = Simulation(cfg).run_sweep([&](const PointResult& pt) {
    ++seen;
    CHECK(pt.failures <= pt.trials);
    CHECK(pt.p_e == double(pt.failures) / double(pt.trials));
    CHECK(pt.ci_low <= pt.p_e);
    CHECK(pt.p_e <= pt.ci_high);
  });
  CHECK(seen == 2);
  CHECK(res.points.size() == 2);
  CHECK(res.synd_label == "rep(21,7)");
}

TEST_CASE("csv and manifest round trip the run") {
  RunConfig cfg;
  cfg.code_id = "toric18";
  cfg.variant = "rep";
  cfg.m = 24;
  cfg.noise.q = 0.013;
  cfg.epsilon_grid = {0.02};
  cfg.stopping.target_failures = 10;
  cfg.stopping.max_trials = 50000;
  cfg.master_seed = 31;
  auto res = Simulation(cfg).run_sweep();

  std::ostringstream csv;
  write_csv_header(csv);
  write_csv_rows(csv, res);
  auto text = csv.str();
  CHECK(text.find("code,synd_code,decoder,q,delta,epsilon,trials,failures,p_e,ci_low,ci_high,"
                  "ties,seed") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.find("toric18") != std::string::npos);

  auto manifest = nlohmann::json::parse(manifest_json(res));
  CHECK(manifest["config"]["code"] == "toric18");
  CHECK(manifest["config"]["seed"] == 31);
  CHECK(manifest["results"].size() == 1);
  CHECK(manifest["results"][0]["trials"] == res.points[0].trials);
}
