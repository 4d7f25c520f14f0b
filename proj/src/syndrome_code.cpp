#include "ssdec/syndrome_code.hpp"

#include <bit>
#include <limits>
#include <stdexcept>

namespace ssdec {

namespace {

std::string make_label(const std::string& kind, std::size_t m, std::size_t ks) {
  return kind + "(" + std::to_string(m) + "," + std::to_string(ks) + ")";
}

// True if the index set of a precedes that of b lexicographically.
bool subset_lex_less(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t diff = a ^ b;
  if (diff == 0) return false;
  return a & (diff & -diff);
}

struct SubsetScore {
  std::size_t d_min = 0;
  std::uint64_t multiplicity = 0;

  bool better_than(const SubsetScore& o) const {
    if (d_min != o.d_min) return d_min > o.d_min;
    return multiplicity < o.multiplicity;
  }
  bool equals(const SubsetScore& o) const {
    return d_min == o.d_min && multiplicity == o.multiplicity;
  }
};

// Distance/multiplicity of [I | A restricted to mask] from precomputed
// message-weight and tail tables. floor_d aborts early once the subset is
// provably worse than floor_d.
SubsetScore score_subset(const std::vector<std::uint64_t>& tails,
                         const std::vector<std::size_t>& msg_weight,
                         std::uint64_t mask, std::size_t floor_d) {
  SubsetScore s;
  s.d_min = std::numeric_limits<std::size_t>::max();
  for (std::size_t u = 1; u < tails.size(); ++u) {
    const std::size_t w = msg_weight[u] + std::size_t(std::popcount(tails[u] & mask));
    if (w < s.d_min) {
      s.d_min = w;
      s.multiplicity = 1;
      if (w < floor_d) return s;
    } else if (w == s.d_min) {
      ++s.multiplicity;
    }
  }
  return s;
}

SyndromeCode select_rows_impl(const StabilizerCode& code, const BitMatrix& candidates,
                              std::size_t target_m, SelectStrategy strategy,
                              std::uint64_t required_mask) {
  const std::size_t ks = code.H.rows();
  const std::size_t t = candidates.rows();
  if (t > 64) throw std::invalid_argument("select_rows: more than 64 candidates");
  if (target_m < ks || target_m > ks + t)
    throw std::invalid_argument("select_rows: infeasible target_m");
  const std::size_t keep = target_m - ks;
  if ((required_mask & ~((t == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << t) - 1))) != 0 ||
      std::size_t(std::popcount(required_mask)) > keep)
    throw std::invalid_argument("select_rows: bad required row set");

  const BitMatrix A = express_rows(code.H, candidates);
  std::vector<std::uint64_t> row_bits(ks, 0);
  for (std::size_t i = 0; i < ks; ++i)
    for (std::size_t j = 0; j < t; ++j)
      if (A.get(i, j)) row_bits[i] |= std::uint64_t(1) << j;

  // tails[u] = message u encoded over all candidate columns.
  const std::size_t total = std::size_t(1) << ks;
  std::vector<std::uint64_t> tails(total, 0);
  std::vector<std::size_t> msg_weight(total, 0);
  for (std::size_t u = 1; u < total; ++u) {
    tails[u] = tails[u & (u - 1)] ^ row_bits[std::countr_zero(std::uint64_t(u))];
    msg_weight[u] = std::size_t(std::popcount(std::uint64_t(u)));
  }

  std::uint64_t best_mask = 0;
  SubsetScore best{0, 0};
  bool have_best = false;

  if (strategy == SelectStrategy::Exhaustive) {
    const std::uint64_t full = (t == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << t) - 1);
    // Gosper's hack over the free positions; required rows are always in.
    const std::uint64_t free_bits = full & ~required_mask;
    std::vector<std::size_t> free_idx;
    for (std::size_t j = 0; j < t; ++j)
      if (free_bits & (std::uint64_t(1) << j)) free_idx.push_back(j);
    const std::size_t pick = keep - std::size_t(std::popcount(required_mask));
    if (pick > free_idx.size())
      throw std::invalid_argument("select_rows: infeasible target_m with required rows");

    std::uint64_t comb = (pick == 0) ? 0 : ((std::uint64_t(1) << pick) - 1);
    const std::uint64_t limit = std::uint64_t(1) << free_idx.size();
    do {
      std::uint64_t mask = required_mask;
      std::uint64_t c = comb;
      while (c) {
        const int b = std::countr_zero(c);
        mask |= std::uint64_t(1) << free_idx[std::size_t(b)];
        c &= c - 1;
      }
      const SubsetScore s = score_subset(tails, msg_weight, mask, have_best ? best.d_min : 0);
      if (!have_best || s.better_than(best) ||
          (s.equals(best) && subset_lex_less(mask, best_mask))) {
        best = s;
        best_mask = mask;
        have_best = true;
      }
      if (pick == 0) break;
      // next combination with the same popcount
      const std::uint64_t lo = comb & -comb;
      const std::uint64_t carry = comb + lo;
      comb = carry | (((comb ^ carry) >> 2) / lo);
    } while (comb < limit && pick > 0);
  } else {
    std::uint64_t mask = (t == 64) ? ~std::uint64_t(0) : ((std::uint64_t(1) << t) - 1);
    while (std::size_t(std::popcount(mask)) > keep) {
      std::uint64_t pick_mask = 0;
      SubsetScore pick_score{0, 0};
      bool have = false;
      for (std::size_t j = 0; j < t; ++j) {
        const std::uint64_t bit = std::uint64_t(1) << j;
        if (!(mask & bit) || (required_mask & bit)) continue;
        const std::uint64_t trial = mask & ~bit;
        const SubsetScore s = score_subset(tails, msg_weight, trial, 0);
        // >= on ties: dropping the larger index keeps the lex-least subset
        if (!have || s.better_than(pick_score) || s.equals(pick_score)) {
          pick_score = s;
          pick_mask = trial;
          have = true;
        }
      }
      if (!have) throw std::invalid_argument("select_rows: required rows exceed target");
      mask = pick_mask;
      best = pick_score;
    }
    best_mask = mask;
    have_best = true;
  }

  if (!have_best) throw std::logic_error("select_rows: no subset evaluated");

  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < t; ++j)
    if (best_mask & (std::uint64_t(1) << j)) idx.push_back(j);
  return assemble(code, candidates.submatrix_rows(idx), make_label("sel", target_m, ks));
}

}  // namespace

BitMatrix generate_candidates_product(const StabilizerCode& code) {
  if (code.name != "product16")
    throw std::invalid_argument("generate_candidates_product: wrong code");
  BitMatrix cand(0, code.n);
  cand.append_row(code.H_full.row(7));  // printed redundant weight-4 row
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 4; j < 8; ++j)
      cand.append_row(code.H_full.row(i) ^ code.H_full.row(j));
  return cand;
}

BitMatrix generate_candidates_toric(const StabilizerCode& code) {
  if (code.name != "toric18")
    throw std::invalid_argument("generate_candidates_toric: wrong code");
  std::vector<BitVector> weight6;
  const std::size_t rows = code.H_full.rows();
  BitVector v(code.n);
  for (std::uint64_t u = 1; u < (std::uint64_t(1) << rows); ++u) {
    v ^= code.H_full.row(std::size_t(std::countr_zero(u)));  // Gray order
    if (v.weight() == 6) weight6.push_back(v);
  }
  // The rows of H_full are dependent, so distinct combinations can produce
  // the same vector; keep each row once.
  std::sort(weight6.begin(), weight6.end(),
            [](const BitVector& a, const BitVector& b) { return a.lex_less(b); });
  weight6.erase(std::unique(weight6.begin(), weight6.end()), weight6.end());
  BitMatrix cand(0, code.n);
  cand.append_row(code.H_full.row(8));  // printed redundant row
  for (auto& w : weight6) cand.append_row(std::move(w));
  return cand;
}

SyndromeCode assemble(const StabilizerCode& code, const BitMatrix& redundant_rows,
                      std::string label) {
  SyndromeCode sc;
  sc.code = code;
  sc.P = redundant_rows.rows() ? redundant_rows : BitMatrix(0, code.n);
  sc.A = express_rows(code.H, sc.P);  // throws naming any row outside rowspace(H)
  sc.H_o = code.H.vstack(sc.P);
  sc.G_s = BitMatrix::identity(code.H.rows()).hstack(sc.A.rows() ? sc.A : BitMatrix(code.H.rows(), 0));
  sc.m = sc.H_o.rows();
  sc.k_s = code.H.rows();
  const MinDistance md = min_distance(sc.G_s);
  sc.d_min = md.d_min;
  sc.multiplicity = md.multiplicity;
  for (std::size_t i = 0; i < sc.m; ++i) sc.row_weights.push_back(sc.H_o.row(i).weight());
  sc.label = std::move(label);
  return sc;
}

SyndromeCode build_repetition(const StabilizerCode& code, std::size_t repeats,
                              bool include_builtin_redundant) {
  if (repeats < 1) throw std::invalid_argument("build_repetition: repeats must be >= 1");
  const BitMatrix& base = include_builtin_redundant ? code.H_full : code.H;
  BitMatrix redundant(0, code.n);
  for (std::size_t i = code.H.rows(); i < base.rows(); ++i)
    redundant.append_row(base.row(i));
  for (std::size_t r = 1; r < repeats; ++r)
    for (std::size_t i = 0; i < base.rows(); ++i) redundant.append_row(base.row(i));
  const std::size_t m = base.rows() * repeats;
  return assemble(code, redundant,
                  make_label(include_builtin_redundant ? "con" : "rep", m, code.H.rows()));
}

SyndromeCode select_rows(const StabilizerCode& code, const BitMatrix& candidates,
                         std::size_t target_m, SelectStrategy strategy) {
  return select_rows_impl(code, candidates, target_m, strategy, 0);
}

SyndromeCode build_concatenated_mixed(const StabilizerCode& code, const SyndromeCode& base,
                                      const std::vector<std::size_t>& extra_repeats) {
  BitMatrix redundant = base.P;
  for (std::size_t i : extra_repeats) {
    if (i >= base.H_o.rows())
      throw std::invalid_argument("build_concatenated_mixed: row index out of range");
    redundant.append_row(base.H_o.row(i));
  }
  return assemble(code, redundant,
                  make_label("con", base.m + extra_repeats.size(), base.k_s));
}

SyndromeCode build_variant(const StabilizerCode& code, const std::string& variant,
                           std::size_t m, SelectStrategy strategy) {
  const std::size_t ks = code.H.rows();
  SyndromeCode sc;
  if (variant == "rep") {
    if (m % ks != 0)
      throw std::invalid_argument("rep variant: m must be a multiple of " + std::to_string(ks));
    sc = build_repetition(code, m / ks, false);
  } else if (variant == "con") {
    if (code.name == "product16" && m == 28) {
      // one extra copy of the first four measurements on top of red(24,7)
      sc = build_concatenated_mixed(code, build_variant(code, "red", 24, strategy),
                                    {0, 1, 2, 3});
    } else if (m % code.H_full.rows() == 0) {
      sc = build_repetition(code, m / code.H_full.rows(), true);
    } else {
      throw std::invalid_argument("con variant: unsupported m for " + code.name);
    }
  } else if (variant == "red") {
    const BitMatrix cand = code.name == "product16" ? generate_candidates_product(code)
                                                    : generate_candidates_toric(code);
    if (m == ks + cand.rows()) {
      sc = assemble(code, cand, "");
    } else if (code.name == "product16" && m == 21) {
      // Composition with the printed redundant row dropped: 7 weight-4 plus
      // 14 weight-6 rows, matching the reported average delta of 0.0654 at
      // q = 0.013. The prose's alternative (8 weight-4 + 13 weight-6) is
      // reachable via select_rows with the full candidate set.
      std::vector<std::size_t> w6(cand.rows() - 1);
      for (std::size_t i = 0; i < w6.size(); ++i) w6[i] = i + 1;
      sc = select_rows(code, cand.submatrix_rows(w6), m, strategy);
    } else {
      // keep the printed redundant row, select among the weight-6 rows
      sc = select_rows_impl(code, cand, m, strategy, 1);
    }
  } else {
    throw std::invalid_argument("unknown variant: " + variant);
  }
  sc.label = make_label(variant, sc.m, sc.k_s);
  return sc;
}

}  // namespace ssdec
