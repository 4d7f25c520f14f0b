#include "doctest.h"

#include <array>
#include <set>

#include "fixtures.hpp"
#include "ssdec/codes.hpp"

using namespace ssdec;

namespace {

// All weight-4 vectors of ker(H), found by exhaustive kernel-span enumeration.
std::vector<BitVector> weight4_kernel_vectors(const BitMatrix& H) {
  auto K = kernel_basis(H);
  std::vector<BitVector> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << K.rows()); ++mask) {
    BitVector acc(H.cols());
    for (std::size_t i = 0; i < K.rows(); ++i)
      if ((mask >> i) & 1) acc ^= K.row(i);
    if (acc.weight() == 4) out.push_back(acc);
  }
  return out;
}

}  // namespace

TEST_CASE("product code matches the published matrix") {
  auto code = build_product_16_2();
  CHECK(code.H_full == BitMatrix::from_string(fixtures::kProductHX));
  CHECK(code.n == 16);
  CHECK(code.n_q == 16);
  CHECK(code.k_q == 2);
  CHECK(code.H.rows() == 7);
  CHECK(rank(code.H_full) == 7);

  for (std::size_t i = 0; i < 8; ++i) CHECK(code.H_full.row(i).weight() == 4);

  // the single built-in redundancy: all eight rows sum to zero
  BitVector sum(16);
  for (std::size_t i = 0; i < 8; ++i) sum ^= code.H_full.row(i);
  CHECK(sum.is_zero());
}

TEST_CASE("toric code matches the published matrix") {
  auto code = build_toric_18_2();
  CHECK(code.H_full == BitMatrix::from_string(fixtures::kToricHX));
  CHECK(code.n == 18);
  CHECK(code.k_q == 2);
  CHECK(code.H.rows() == 8);
  CHECK(rank(code.H_full) == 8);

  BitVector sum(18);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(code.H_full.row(i).weight() == 4);
    sum ^= code.H_full.row(i);
  }
  CHECK(sum.is_zero());

  // each qubit/edge touches exactly two vertex checks
  for (std::size_t j = 0; j < 18; ++j) {
    std::size_t colw = 0;
    for (std::size_t i = 0; i < 9; ++i) colw += code.H_full.get(i, j);
    CHECK(colw == 2);
  }
}

TEST_CASE("H is the first independent rows of H_full") {
  for (const auto& id : builtin_code_ids()) {
    auto code = build_code(id);
    for (std::size_t i = 0; i < code.H.rows(); ++i) CHECK(code.H.row(i) == code.H_full.row(i));
    CHECK(rank(code.H) == code.H.rows());
    for (std::size_t i = 0; i < code.H_full.rows(); ++i)
      CHECK(rowspace_contains(code.H, code.H_full.row(i)));
  }
}

TEST_CASE("toric degeneracy generators are the nine plaquettes") {
  auto code = build_toric_18_2();
  auto w4 = weight4_kernel_vectors(code.H);
  CHECK(w4.size() == 9);
  CHECK(rank(code.D) == 8);
  CHECK(code.D.rows() == 8);

  // each edge appears in exactly two plaquettes
  for (std::size_t j = 0; j < 18; ++j) {
    std::size_t colw = 0;
    for (const auto& v : w4) colw += v.get(j);
    CHECK(colw == 2);
  }
}

TEST_CASE("product degeneracy candidates are the 36 rectangle patterns") {
  auto code = build_product_16_2();
  auto w4 = weight4_kernel_vectors(code.H);
  CHECK(w4.size() == 36);
  CHECK(rank(code.D) == 7);

  // every weight-4 kernel vector is a 2x2 rectangle of the 4x4 qubit grid
  std::set<std::string> found;
  for (const auto& v : w4) found.insert(v.to_string());
  std::size_t rectangles = 0;
  for (int r1 = 0; r1 < 4; ++r1)
    for (int r2 = r1 + 1; r2 < 4; ++r2)
      for (int c1 = 0; c1 < 4; ++c1)
        for (int c2 = c1 + 1; c2 < 4; ++c2) {
          BitVector v(16);
          v.set(4 * r1 + c1, true);
          v.set(4 * r1 + c2, true);
          v.set(4 * r2 + c1, true);
          v.set(4 * r2 + c2, true);
          rectangles += found.count(v.to_string());
        }
  CHECK(rectangles == 36);
}

TEST_CASE("derive_degeneracy_matrix fails on an invertible square matrix") {
  CHECK_THROWS(derive_degeneracy_matrix(BitMatrix::identity(5)));
}

TEST_CASE("labeler structure and soundness on the full kernel") {
  for (const auto& id : builtin_code_ids()) {
    auto code = build_code(id);
    CHECK(code.L.rows() == code.k_q);
    CHECK(mat_mul(code.L, code.D.transpose()) == BitMatrix(code.k_q, code.D.rows()));

    auto K = kernel_basis(code.H);
    std::size_t zero_label = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << K.rows()); ++mask) {
      BitVector v(code.n);
      for (std::size_t i = 0; i < K.rows(); ++i)
        if ((mask >> i) & 1) v ^= K.row(i);
      bool in_span = rowspace_contains(code.D, v);
      bool label_zero = mat_vec_mul(code.L, v).is_zero();
      CHECK(in_span == label_zero);
      zero_label += label_zero;
    }
    // exactly one coset per label value
    CHECK(zero_label == (std::uint64_t(1) << code.D.rows()));
  }
}

TEST_CASE("toric weight-3 logicals carry a nonzero label") {
  auto code = build_toric_18_2();
  auto K = kernel_basis(code.H);
  std::size_t checked = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << K.rows()); ++mask) {
    BitVector v(code.n);
    for (std::size_t i = 0; i < K.rows(); ++i)
      if ((mask >> i) & 1) v ^= K.row(i);
    if (v.weight() != 3) continue;
    CHECK_FALSE(rowspace_contains(code.D, v));
    CHECK_FALSE(mat_vec_mul(code.L, v).is_zero());
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("validate_code reports for both builtin codes") {
  auto tor = validate_code(build_toric_18_2());
  CHECK(tor.ok);
  CHECK(tor.violations.empty());
  CHECK(tor.kernel_dim == 10);
  CHECK(tor.rank_H == 8);
  CHECK(tor.rank_D == 8);
  CHECK(tor.sector_distance == 3);
  for (auto w : tor.stabilizer_weights) CHECK(w == 4);

  auto prod = validate_code(build_product_16_2());
  CHECK(prod.ok);
  CHECK(prod.kernel_dim == 9);
  CHECK(prod.rank_H == 7);
  CHECK(prod.rank_D == 7);
  CHECK(prod.sector_distance == 4);  // regression value for the default D
}

TEST_CASE("D override is respected and validated") {
  auto base = build_toric_18_2();
  auto code = build_toric_18_2(base.D);
  CHECK(code.D == base.D);
  CHECK(validate_code(code).ok);
}

TEST_CASE("code registry") {
  auto ids = builtin_code_ids();
  REQUIRE(ids.size() == 2);
  for (const auto& id : ids) CHECK(build_code(id).name == id);
  CHECK_THROWS(build_code("nosuch"));
}
