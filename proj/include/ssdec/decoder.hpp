#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssdec/codes.hpp"
#include "ssdec/noise.hpp"
#include "ssdec/syndrome_code.hpp"

namespace ssdec {

// Error patterns and syndromes are packed little-endian into words: bit i of
// the word is position i of the vector. Requires n <= 26.

// e*(s) per syndrome: a minimum-weight error with that syndrome, chosen
// uniformly among the minimum-weight candidates with the build seed.
struct CosetLeaderTable {
  std::size_t n = 0;
  std::size_t k_s = 0;  // n - k = rank(H)
  std::uint64_t build_seed = 0;
  std::vector<std::uint32_t> leader;        // indexed by packed syndrome
  std::vector<std::uint16_t> leader_weight;
  std::vector<std::uint32_t> tie_count;     // candidates at the leader weight
};

CosetLeaderTable build_coset_leader_table(const StabilizerCode& code, std::uint64_t seed);

// Per coset (syndrome s, logical label l): the codeword-weight histogram of
// its 2^rank(D) members and a minimum-weight representative.
struct CosetEnumeratorTable {
  std::size_t n = 0;
  std::size_t k_s = 0;
  std::size_t k_q = 0;
  // hist[((s << k_q) | l) * (n + 1) + w]
  std::vector<std::uint64_t> hist;
  std::vector<std::uint32_t> min_member;
  std::vector<std::uint16_t> min_weight;

  std::size_t coset_count() const { return std::size_t(1) << (k_s + k_q); }
  const std::uint64_t* coset_hist(std::size_t idx) const { return hist.data() + idx * (n + 1); }
};

CosetEnumeratorTable build_coset_enumerator_table(const StabilizerCode& code);

struct DecodeOutcome {
  BitVector syndrome_estimate;
  BitVector error_estimate;
  std::uint32_t coset_syndrome = 0;  // packed s
  std::uint32_t coset_logical = 0;   // packed label
  double score = 0.0;                // log domain, additive constants dropped
  std::uint32_t ties = 1;            // argmax candidates seen
};

// Syndrome-reduced MAP: argmax over the 2^(n-k) syndromes of
// d(s G_s, z~) log(delta/(1-delta)) + w(e*(s)) log(eps/(1-eps)).
class MapDecoder {
public:
  MapDecoder(const SyndromeCode& synd_code, const CosetLeaderTable& table);

  DecodeOutcome decode(const BitVector& ztilde, double epsilon, double delta,
                       RngStream& rng) const;

private:
  std::size_t n_, k_s_, m_;
  const CosetLeaderTable* table_;
  std::vector<std::uint64_t> encoded_;  // s G_s per packed syndrome, m-bit packed
  std::vector<std::uint64_t> label_cols_;
  std::size_t k_q_;
};

// Degenerate MAP via the per-coset factorization: the likelihood is constant
// on a coset, so score = d(z(s), z~) log(delta/(1-delta)) +
// log sum_w N_w (eps/(1-eps))^w.
class DegMapDecoder {
public:
  DegMapDecoder(const SyndromeCode& synd_code, const CosetEnumeratorTable& table);

  // Precomputes the per-coset prior mass for one epsilon; decode falls back
  // to a local computation when called with a different epsilon.
  void prepare(double epsilon);

  DecodeOutcome decode(const BitVector& ztilde, double epsilon, double delta,
                       RngStream& rng) const;

private:
  std::vector<double> coset_log_mass(double epsilon) const;

  std::size_t n_, k_s_, k_q_, m_;
  const CosetEnumeratorTable* table_;
  std::vector<std::uint64_t> encoded_;
  double prepared_epsilon_ = -1.0;
  std::vector<double> prepared_mass_;
};

// Reference decoders enumerating all 2^n error patterns.
DecodeOutcome naive_map_decode(const StabilizerCode& code, const SyndromeCode& synd_code,
                               const BitVector& ztilde, double epsilon, double delta,
                               RngStream& rng);
DecodeOutcome naive_deg_map_decode(const StabilizerCode& code, const SyndromeCode& synd_code,
                                   const BitVector& ztilde, double epsilon, double delta,
                                   RngStream& rng);

// Failure iff the residual e_true xor e_hat is outside rowspace(D). Fast
// path: syndromes differ, or the residual has a nonzero logical label.
bool is_logical_failure(const StabilizerCode& code, const BitVector& e_true,
                        const BitVector& e_hat);

// Reference path deciding membership by reduction against D.
bool is_logical_failure_by_span(const StabilizerCode& code, const BitVector& e_true,
                                const BitVector& e_hat);

// Both tables for a code; one build, shared across all trials.
struct DecoderTables {
  CosetLeaderTable leader;
  CosetEnumeratorTable enumerator;
};

DecoderTables build_decoder_tables(const StabilizerCode& code, std::uint64_t seed);

// Versioned binary container with an FNV-64 integrity checksum, keyed by
// (code id, code fingerprint, build seed).
void save_tables(const DecoderTables& tables, const std::string& path,
                 const StabilizerCode& code);
std::optional<DecoderTables> load_tables(const std::string& path, const StabilizerCode& code,
                                         std::uint64_t seed);

}  // namespace ssdec
