#pragma once

#include <string>
#include <vector>

#include "ssdec/codes.hpp"
#include "ssdec/gf2.hpp"

namespace ssdec {

// The (m, n-k) syndrome error-correcting code built on top of a stabilizer
// sector: H_o = [H; P], generator G_s = [I | A] with A^T H = P.
struct SyndromeCode {
  StabilizerCode code;
  BitMatrix H_o;
  BitMatrix P;
  BitMatrix A;
  BitMatrix G_s;
  std::size_t m = 0;
  std::size_t k_s = 0;
  std::size_t d_min = 0;
  std::uint64_t multiplicity = 0;
  std::vector<std::size_t> row_weights;  // weights of H_o rows
  std::string label;
};

// Product code: the printed redundant weight-4 row followed by the 16
// weight-6 sums r_i + r_j, i in the grid-row checks, j in the grid-column
// checks (inner loop over j).
BitMatrix generate_candidates_product(const StabilizerCode& code);

// Toric code: the printed redundant row followed by all 24 weight-6
// combinations of the vertex checks (found by the 2^9 enumeration),
// sorted lexicographically.
BitMatrix generate_candidates_toric(const StabilizerCode& code);

// H_o = [H; redundant_rows]; every redundant row must lie in rowspace(H).
SyndromeCode assemble(const StabilizerCode& code, const BitMatrix& redundant_rows,
                      std::string label);

// Each selected base row (H, or H_full when include_builtin_redundant)
// appears `repeats` times in H_o.
SyndromeCode build_repetition(const StabilizerCode& code, std::size_t repeats,
                              bool include_builtin_redundant);

enum class SelectStrategy { Exhaustive, Greedy };

// Keeps H and picks target_m - (n-k) of the candidate rows maximizing
// (d_min, -multiplicity), tie-broken by the lexicographically least index
// subset. Exhaustive enumerates every subset; greedy drops one row at a
// time.
SyndromeCode select_rows(const StabilizerCode& code, const BitMatrix& candidates,
                         std::size_t target_m, SelectStrategy strategy);

// Appends one duplicate of each indicated H_o row of `base`.
SyndromeCode build_concatenated_mixed(const StabilizerCode& code, const SyndromeCode& base,
                                      const std::vector<std::size_t>& extra_repeats);

// Named constructions: variant in {red, rep, con} with the measurement
// count m, e.g. ("red", 24) on product16.
SyndromeCode build_variant(const StabilizerCode& code, const std::string& variant,
                           std::size_t m, SelectStrategy strategy = SelectStrategy::Exhaustive);

}  // namespace ssdec
