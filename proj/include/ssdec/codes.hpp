#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssdec/gf2.hpp"

namespace ssdec {

// One CSS sector: stabilizer rows H_full (with built-in redundancy), a
// full-row-rank subset H (the first rank(H_full) independent rows),
// degeneracy generators D spanning the subspace used for coset
// equivalence, and a logical labeler L with k_q rows.
struct StabilizerCode {
  std::string name;
  std::size_t n = 0;    // qubits per sector
  std::size_t n_q = 0;
  std::size_t k_q = 0;
  BitMatrix H_full;
  BitMatrix H;
  BitMatrix D;
  BitMatrix L;
};

// Collects all weight-4 kernel vectors of H (sorted lexicographically) and
// greedily keeps independent ones until rank(D) == rank(H). Throws if the
// weight-4 kernel vectors do not span a subspace of that rank.
BitMatrix derive_degeneracy_matrix(const BitMatrix& H);

// L with k_q rows: L D^T = 0 and v -> v L^T has full rank k_q on
// ker(H)/rowspace(D). For e, e' with equal syndrome,
// e xor e' in rowspace(D)  <=>  (e xor e') L^T = 0.
BitMatrix build_coset_labeler(const BitMatrix& H, const BitMatrix& D, std::size_t k_q);

// [[16,2]] product code sector (8x16 stabilizer matrix, one built-in
// redundant weight-4 row). A caller-supplied D overrides the derived one.
StabilizerCode build_product_16_2(std::optional<BitMatrix> D_override = std::nullopt);

// [[18,2]] toric code sector (9x18, last row = sum of the others).
StabilizerCode build_toric_18_2(std::optional<BitMatrix> D_override = std::nullopt);

std::vector<std::string> builtin_code_ids();
StabilizerCode build_code(const std::string& id);

struct CodeReport {
  bool ok = true;
  std::vector<std::string> violations;
  std::vector<std::size_t> stabilizer_weights;  // weights of H_full rows
  std::size_t sector_distance = 0;              // min weight in ker(H) \ rowspace(D)
  std::size_t kernel_dim = 0;
  std::size_t rank_H = 0;
  std::size_t rank_D = 0;
};

CodeReport validate_code(const StabilizerCode& code);

}  // namespace ssdec
