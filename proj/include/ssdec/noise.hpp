#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ssdec/gf2.hpp"

namespace ssdec {

// Splittable counter-seeded stream (splitmix64). Each Monte Carlo trial
// derives its own stream from (master seed, point, trial, purpose), so the
// draw sequence is independent of scheduling.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
  std::uint64_t state_;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t point,
                        std::uint64_t trial, std::uint64_t purpose);

enum class DeltaMode { Uniform, PerRow };

struct NoiseSpec {
  double epsilon = 0.0;                 // data BSC, must be < 0.5
  std::optional<double> q;              // per-interaction failure probability
  DeltaMode delta_mode = DeltaMode::Uniform;
  std::optional<double> delta;          // explicit uniform delta
  std::uint64_t seed = 0;
};

// Pr(z_j != z~_j) for a stabilizer of the given weight: the odd-term
// binomial sum, evaluated in closed form as (1 - (1-2q)^w) / 2.
double row_flip_probability(std::size_t weight, double q);

// Same sum evaluated term by term; cross-check path for the closed form.
double row_flip_probability_binomial(std::size_t weight, double q);

// Mean of row_flip_probability over the rows of H_o.
double average_delta(const BitMatrix& H_o, double q);

// Each of n bits set independently with probability epsilon.
BitVector sample_error(std::size_t n, double epsilon, RngStream& rng);

// Uniform mode flips each bit with the spec's delta; per-row mode flips bit
// j with row_flip_probability(row_weights[j], q).
BitVector sample_syndrome_noise(std::size_t m, const NoiseSpec& spec,
                                const std::vector<std::size_t>& row_weights, RngStream& rng);

// The scalar delta the decoder likelihood uses: explicit override if set,
// otherwise average_delta from q and the row weights.
double resolve_delta(const NoiseSpec& spec, const BitMatrix& H_o);

}  // namespace ssdec
