#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ssdec {

// Dense bit-packed vector over GF(2). Bits beyond size() are kept zero so
// that word-level comparisons and popcounts need no masking.
class BitVector {
public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : len_(n), w_((n + 63) / 64, 0) {}

  // Parses a row of '0'/'1' characters; spaces are ignored.
  static BitVector from_string(std::string_view s);

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v) {
    const std::uint64_t m = std::uint64_t(1) << (i & 63);
    if (v)
      w_[i >> 6] |= m;
    else
      w_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  std::size_t weight() const;

  // Parity of the AND with another vector of equal length.
  bool dot(const BitVector& o) const;

  bool is_zero() const;

  BitVector& operator^=(const BitVector& o);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  bool operator==(const BitVector& o) const = default;

  // Lexicographic on the printed form: bit 0 is the leftmost character.
  bool lex_less(const BitVector& o) const;

  const std::vector<std::uint64_t>& words() const { return w_; }

  // Low word, for vectors of at most 64 bits.
  std::uint64_t as_u64() const { return w_.empty() ? 0 : w_[0]; }
  static BitVector from_u64(std::uint64_t bits, std::size_t n);

  std::string to_string() const;

private:
  std::size_t len_ = 0;
  std::vector<std::uint64_t> w_;
};

// Dense bit-packed matrix over GF(2), stored as rows. Immutable by
// convention: operations return new values.
class BitMatrix {
public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows, BitVector(cols)) {}

  // One row per line; '0'/'1' with optional spaces. Blank lines ignored.
  static BitMatrix from_string(std::string_view text);
  static BitMatrix identity(std::size_t n);
  static BitMatrix from_rows(std::vector<BitVector> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const BitVector& row(std::size_t i) const { return data_[i]; }
  bool get(std::size_t i, std::size_t j) const { return data_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool v) { data_[i].set(j, v); }

  void append_row(BitVector r);

  BitMatrix transpose() const;
  BitMatrix vstack(const BitMatrix& below) const;
  BitMatrix hstack(const BitMatrix& right) const;
  BitMatrix submatrix_rows(const std::vector<std::size_t>& idx) const;

  bool operator==(const BitMatrix& o) const = default;

  std::string to_string() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BitVector> data_;
};

// result[i] = parity(row_i AND v)
BitVector mat_vec_mul(const BitMatrix& M, const BitVector& v);

BitMatrix mat_mul(const BitMatrix& A, const BitMatrix& B);

struct RowReduceResult {
  BitMatrix reduced;           // reduced row-echelon form
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
  BitMatrix transform;         // transform * M == reduced
};

RowReduceResult row_reduce(const BitMatrix& M);

std::size_t rank(const BitMatrix& M);

// Basis of the right kernel {v : M v^T = 0}; cols - rank(M) rows.
BitMatrix kernel_basis(const BitMatrix& M);

bool rowspace_contains(const BitMatrix& M, const BitVector& v);

// Solves A^T H = P for A, requiring H of full row rank and every row of P
// in rowspace(H). A has H.rows() rows and P.rows() columns.
BitMatrix express_rows(const BitMatrix& H, const BitMatrix& P);

struct MinDistance {
  std::size_t d_min = 0;
  std::uint64_t multiplicity = 0;
};

// Minimum nonzero codeword weight of rowspace(G) and its multiplicity, by
// Gray-code enumeration of the 2^rank codewords.
MinDistance min_distance(const BitMatrix& G);

// h[w] = number of codewords of rowspace(G) with weight w.
std::vector<std::uint64_t> weight_enumerator(const BitMatrix& G);

// Column j of M packed into a word, bit i = M(i, j). Requires rows <= 64.
std::vector<std::uint64_t> column_masks(const BitMatrix& M);

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fingerprint(const BitMatrix& M);

}  // namespace ssdec
