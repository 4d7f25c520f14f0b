#include "ssdec/codes.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ssdec {

namespace {

constexpr const char* kProductHX = R"(
1111000000000000
0000111100000000
0000000011110000
0000000000001111
1000100010001000
0100010001000100
0010001000100010
0001000100010001
)";

constexpr const char* kToricHX = R"(
110000000100000100
011000000010000010
101000000001000001
000110000100100000
000011000010010000
000101000001001000
000000110000100100
000000011000010010
000000101000001001
)";

std::vector<BitVector> enumerate_span(const BitMatrix& M) {
  const auto rr = row_reduce(M);
  std::vector<BitVector> basis;
  for (std::size_t i = 0; i < rr.rank; ++i) basis.push_back(rr.reduced.row(i));
  if (basis.size() > 24) throw std::invalid_argument("enumerate_span: dimension too large");
  std::vector<BitVector> out;
  out.reserve(std::size_t(1) << basis.size());
  BitVector v(M.cols());
  out.push_back(v);
  const std::uint64_t total = std::uint64_t(1) << basis.size();
  for (std::uint64_t i = 1; i < total; ++i) {
    v ^= basis[std::countr_zero(i)];
    out.push_back(v);
  }
  return out;
}

StabilizerCode finish_code(std::string name, const char* hx_text, std::size_t n_q,
                           std::size_t k_q, std::optional<BitMatrix> D_override) {
  StabilizerCode c;
  c.name = std::move(name);
  c.H_full = BitMatrix::from_string(hx_text);
  c.n = c.H_full.cols();
  c.n_q = n_q;
  c.k_q = k_q;

  const std::size_t r = rank(c.H_full);
  std::vector<std::size_t> keep(r);
  for (std::size_t i = 0; i < r; ++i) keep[i] = i;
  c.H = c.H_full.submatrix_rows(keep);
  if (rank(c.H) != r)
    throw std::logic_error("leading rows of H_full are not independent");

  c.D = D_override ? std::move(*D_override) : derive_degeneracy_matrix(c.H);
  c.L = build_coset_labeler(c.H, c.D, c.k_q);
  return c;
}

}  // namespace

BitMatrix derive_degeneracy_matrix(const BitMatrix& H) {
  const BitMatrix K = kernel_basis(H);
  if (K.rows() == 0)
    throw std::invalid_argument("derive_degeneracy_matrix: trivial kernel");

  std::vector<BitVector> weight4;
  for (const BitVector& v : enumerate_span(K))
    if (v.weight() == 4) weight4.push_back(v);
  std::sort(weight4.begin(), weight4.end(),
            [](const BitVector& a, const BitVector& b) { return a.lex_less(b); });

  const std::size_t target = rank(H);
  BitMatrix D(0, H.cols());
  for (const BitVector& v : weight4) {
    BitMatrix trial = D;
    trial.append_row(v);
    if (rank(trial) == trial.rows()) D = std::move(trial);
    if (D.rows() == target) return D;
  }
  throw std::invalid_argument(
      "derive_degeneracy_matrix: weight-4 kernel vectors span rank " +
      std::to_string(D.rows()) + " < " + std::to_string(target) +
      "; supply D explicitly");
}

BitMatrix build_coset_labeler(const BitMatrix& H, const BitMatrix& D, std::size_t k_q) {
  const std::size_t n = H.cols();
  const BitMatrix K = kernel_basis(H);

  // Extend a basis of rowspace(D) to a basis of ker(H) by g_1..g_{k_q}.
  BitMatrix ext = D;
  std::vector<BitVector> logicals;
  for (std::size_t i = 0; i < K.rows() && logicals.size() < k_q; ++i) {
    BitMatrix trial = ext;
    trial.append_row(K.row(i));
    if (rank(trial) == trial.rows()) {
      ext = std::move(trial);
      logicals.push_back(K.row(i));
    }
  }
  if (logicals.size() != k_q)
    throw std::logic_error("build_coset_labeler: could not extend D basis inside ker(H)");

  // Each labeler row l_i solves M l_i^T = unit(rank(D)+i) with
  // M = [D; g_1..g_kq], which forces l_i D^T = 0 and l_i . g_j = delta_ij.
  BitMatrix M = D;
  for (const auto& g : logicals) M.append_row(g);
  const auto rr = row_reduce(M);
  if (rr.rank != M.rows())
    throw std::logic_error("build_coset_labeler: degenerate constraint system");

  BitMatrix L(0, n);
  for (std::size_t i = 0; i < k_q; ++i) {
    BitVector b(M.rows());
    b.set(D.rows() + i, true);
    const BitVector tb = mat_vec_mul(rr.transform, b);
    BitVector l(n);
    for (std::size_t j = 0; j < rr.rank; ++j)
      if (tb.get(j)) l.set(rr.pivots[j], true);
    if (mat_vec_mul(M, l) != b)
      throw std::logic_error("build_coset_labeler: inconsistent labeler system");
    L.append_row(std::move(l));
  }
  return L;
}

StabilizerCode build_product_16_2(std::optional<BitMatrix> D_override) {
  return finish_code("product16", kProductHX, 16, 2, std::move(D_override));
}

StabilizerCode build_toric_18_2(std::optional<BitMatrix> D_override) {
  return finish_code("toric18", kToricHX, 18, 2, std::move(D_override));
}

std::vector<std::string> builtin_code_ids() { return {"product16", "toric18"}; }

StabilizerCode build_code(const std::string& id) {
  if (id == "product16") return build_product_16_2();
  if (id == "toric18") return build_toric_18_2();
  throw std::invalid_argument("unknown code id: " + id);
}

CodeReport validate_code(const StabilizerCode& code) {
  CodeReport rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    rep.violations.push_back(std::move(msg));
  };

  rep.rank_H = rank(code.H);
  const std::size_t rank_full = rank(code.H_full);
  if (rank_full != rep.rank_H)
    fail("rank(H_full) != rank(H)");
  for (std::size_t i = 0; i < code.H_full.rows(); ++i) {
    rep.stabilizer_weights.push_back(code.H_full.row(i).weight());
    if (!rowspace_contains(code.H, code.H_full.row(i)))
      fail("H_full row " + std::to_string(i) + " outside rowspace(H)");
  }

  for (std::size_t i = 0; i < code.D.rows(); ++i)
    if (!mat_vec_mul(code.H, code.D.row(i)).is_zero())
      fail("D row " + std::to_string(i) + " not in ker(H)");
  rep.rank_D = rank(code.D);
  if (rep.rank_D != rep.rank_H) fail("rank(D) != rank(H)");

  const BitMatrix K = kernel_basis(code.H);
  rep.kernel_dim = K.rows();
  if (rep.kernel_dim - rep.rank_D != code.k_q)
    fail("dim ker(H) - rank(D) != k_q");

  if (code.L.rows() != code.k_q) fail("L does not have k_q rows");
  for (std::size_t i = 0; i < code.L.rows(); ++i)
    for (std::size_t j = 0; j < code.D.rows(); ++j)
      if (code.L.row(i).dot(code.D.row(j))) fail("L D^T != 0");

  // Labeler must have full rank k_q on ker(H).
  BitMatrix labels(0, code.k_q);
  for (std::size_t i = 0; i < K.rows(); ++i)
    labels.append_row(mat_vec_mul(code.L, K.row(i)));
  if (rank(labels) != code.k_q) fail("labeler not full rank on ker(H)");

  // Sector distance: min weight over ker(H) \ rowspace(D). Membership is
  // decided by reduction against D, not via the labeler under test.
  std::size_t best = code.n + 1;
  for (const BitVector& v : enumerate_span(K)) {
    if (v.is_zero()) continue;
    if (rowspace_contains(code.D, v)) continue;
    best = std::min(best, v.weight());
  }
  rep.sector_distance = best;
  return rep;
}

}  // namespace ssdec
