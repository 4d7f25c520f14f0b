#include "ssdec/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace ssdec {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  std::uint64_t z = h;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t point,
                        std::uint64_t trial, std::uint64_t purpose) {
  std::uint64_t h = mix(master_seed, 0x5353444543ull);  // stream domain tag
  h = mix(h, point);
  h = mix(h, trial);
  h = mix(h, purpose);
  return RngStream(h);
}

double row_flip_probability(std::size_t weight, double q) {
  if (q < 0.0 || q > 0.5) throw std::invalid_argument("row_flip_probability: q out of [0, 0.5]");
  return (1.0 - std::pow(1.0 - 2.0 * q, double(weight))) / 2.0;
}

double row_flip_probability_binomial(std::size_t weight, double q) {
  if (q < 0.0 || q > 0.5) throw std::invalid_argument("row_flip_probability: q out of [0, 0.5]");
  double sum = 0.0;
  for (std::size_t i = 1; i <= weight; i += 2) {
    double binom = 1.0;
    for (std::size_t j = 0; j < i; ++j)
      binom = binom * double(weight - j) / double(j + 1);
    sum += binom * std::pow(q, double(i)) * std::pow(1.0 - q, double(weight - i));
  }
  return sum;
}

double average_delta(const BitMatrix& H_o, double q) {
  if (H_o.rows() == 0) throw std::invalid_argument("average_delta: empty matrix");
  double sum = 0.0;
  for (std::size_t i = 0; i < H_o.rows(); ++i)
    sum += row_flip_probability(H_o.row(i).weight(), q);
  return sum / double(H_o.rows());
}

BitVector sample_error(std::size_t n, double epsilon, RngStream& rng) {
  BitVector e(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng.bernoulli(epsilon)) e.set(i, true);
  return e;
}

BitVector sample_syndrome_noise(std::size_t m, const NoiseSpec& spec,
                                const std::vector<std::size_t>& row_weights, RngStream& rng) {
  BitVector noise(m);
  if (spec.delta_mode == DeltaMode::Uniform) {
    if (!spec.delta && !spec.q)
      throw std::invalid_argument("sample_syndrome_noise: uniform mode needs delta or q");
    double d;
    if (spec.delta) {
      d = *spec.delta;
    } else {
      double sum = 0.0;
      for (std::size_t w : row_weights) sum += row_flip_probability(w, *spec.q);
      d = sum / double(m);
    }
    if (d < 0.0 || d >= 0.5)
      throw std::invalid_argument("sample_syndrome_noise: delta out of [0, 0.5)");
    for (std::size_t j = 0; j < m; ++j)
      if (rng.bernoulli(d)) noise.set(j, true);
  } else {
    if (!spec.q) throw std::invalid_argument("sample_syndrome_noise: per-row mode needs q");
    if (row_weights.size() != m)
      throw std::invalid_argument("sample_syndrome_noise: row weight count mismatch");
    for (std::size_t j = 0; j < m; ++j)
      if (rng.bernoulli(row_flip_probability(row_weights[j], *spec.q))) noise.set(j, true);
  }
  return noise;
}

double resolve_delta(const NoiseSpec& spec, const BitMatrix& H_o) {
  if (spec.delta) return *spec.delta;
  if (spec.q) return average_delta(H_o, *spec.q);
  throw std::invalid_argument("resolve_delta: neither delta nor q given");
}

}  // namespace ssdec
