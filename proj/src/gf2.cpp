#include "ssdec/gf2.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace ssdec {

BitVector BitVector::from_string(std::string_view s) {
  std::vector<bool> bits;
  for (char c : s) {
    if (c == '0')
      bits.push_back(false);
    else if (c == '1')
      bits.push_back(true);
    else if (c == ' ' || c == '\t')
      continue;
    else
      throw std::invalid_argument("bad character in bit string");
  }
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) v.set(i, true);
  return v;
}

std::size_t BitVector::weight() const {
  std::size_t w = 0;
  for (std::uint64_t x : w_) w += std::popcount(x);
  return w;
}

bool BitVector::dot(const BitVector& o) const {
  if (len_ != o.len_) throw std::invalid_argument("dot: length mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
  return std::popcount(acc) & 1;
}

bool BitVector::is_zero() const {
  for (std::uint64_t x : w_)
    if (x) return false;
  return true;
}

BitVector& BitVector::operator^=(const BitVector& o) {
  if (len_ != o.len_) throw std::invalid_argument("xor: length mismatch");
  for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
  return *this;
}

bool BitVector::lex_less(const BitVector& o) const {
  const std::size_t n = std::min(len_, o.len_);
  for (std::size_t i = 0; i < n; ++i) {
    const bool a = get(i), b = o.get(i);
    if (a != b) return b;  // '0' < '1'
  }
  return len_ < o.len_;
}

BitVector BitVector::from_u64(std::uint64_t bits, std::size_t n) {
  BitVector v(n);
  if (n > 0) {
    if (n < 64) bits &= (std::uint64_t(1) << n) - 1;
    v.w_[0] = bits;
  }
  return v;
}

std::string BitVector::to_string() const {
  std::string s(len_, '0');
  for (std::size_t i = 0; i < len_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

BitMatrix BitMatrix::from_string(std::string_view text) {
  std::vector<BitVector> rows;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    bool blank = true;
    for (char c : line)
      if (c != ' ' && c != '\t' && c != '\r') blank = false;
    if (blank) continue;
    rows.push_back(BitVector::from_string(line));
    if (end == text.size()) break;
  }
  return from_rows(std::move(rows));
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BitMatrix BitMatrix::from_rows(std::vector<BitVector> rows) {
  BitMatrix m;
  m.rows_ = rows.size();
  m.cols_ = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows)
    if (r.size() != m.cols_)
      throw std::invalid_argument("from_rows: ragged rows");
  m.data_ = std::move(rows);
  return m;
}

void BitMatrix::append_row(BitVector r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw std::invalid_argument("append_row: width mismatch");
  data_.push_back(std::move(r));
  ++rows_;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) t.set(j, i, true);
  return t;
}

BitMatrix BitMatrix::vstack(const BitMatrix& below) const {
  if (below.rows_ == 0) return *this;
  if (rows_ == 0) return below;
  if (cols_ != below.cols_) throw std::invalid_argument("vstack: width mismatch");
  BitMatrix m = *this;
  for (std::size_t i = 0; i < below.rows_; ++i) m.append_row(below.row(i));
  return m;
}

BitMatrix BitMatrix::hstack(const BitMatrix& right) const {
  if (rows_ != right.rows_) throw std::invalid_argument("hstack: height mismatch");
  BitMatrix m(rows_, cols_ + right.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j)
      if (get(i, j)) m.set(i, j, true);
    for (std::size_t j = 0; j < right.cols_; ++j)
      if (right.get(i, j)) m.set(i, cols_ + j, true);
  }
  return m;
}

BitMatrix BitMatrix::submatrix_rows(const std::vector<std::size_t>& idx) const {
  std::vector<BitVector> rows;
  rows.reserve(idx.size());
  for (std::size_t i : idx) rows.push_back(data_.at(i));
  return from_rows(std::move(rows));
}

std::string BitMatrix::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < rows_; ++i) {
    out += data_[i].to_string();
    out += '\n';
  }
  return out;
}

BitVector mat_vec_mul(const BitMatrix& M, const BitVector& v) {
  if (v.size() != M.cols()) throw std::invalid_argument("mat_vec_mul: dimension mismatch");
  BitVector r(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i)
    if (M.row(i).dot(v)) r.set(i, true);
  return r;
}

BitMatrix mat_mul(const BitMatrix& A, const BitMatrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
  BitMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    BitVector acc(B.cols());
    for (std::size_t k = 0; k < A.cols(); ++k)
      if (A.get(i, k)) acc ^= B.row(k);
    for (std::size_t j = 0; j < B.cols(); ++j)
      if (acc.get(j)) C.set(i, j, true);
  }
  return C;
}

RowReduceResult row_reduce(const BitMatrix& M) {
  const std::size_t r = M.rows(), c = M.cols();
  std::vector<BitVector> work;
  work.reserve(r);
  for (std::size_t i = 0; i < r; ++i) work.push_back(M.row(i));
  std::vector<BitVector> trans;
  trans.reserve(r);
  for (std::size_t i = 0; i < r; ++i) {
    BitVector t(r);
    t.set(i, true);
    trans.push_back(std::move(t));
  }

  RowReduceResult res;
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < c && pivot_row < r; ++col) {
    std::size_t sel = pivot_row;
    while (sel < r && !work[sel].get(col)) ++sel;
    if (sel == r) continue;
    std::swap(work[sel], work[pivot_row]);
    std::swap(trans[sel], trans[pivot_row]);
    for (std::size_t i = 0; i < r; ++i) {
      if (i != pivot_row && work[i].get(col)) {
        work[i] ^= work[pivot_row];
        trans[i] ^= trans[pivot_row];
      }
    }
    res.pivots.push_back(col);
    ++pivot_row;
  }
  res.rank = pivot_row;
  res.reduced = BitMatrix::from_rows(std::move(work));
  res.transform = BitMatrix::from_rows(std::move(trans));
  return res;
}

std::size_t rank(const BitMatrix& M) { return row_reduce(M).rank; }

BitMatrix kernel_basis(const BitMatrix& M) {
  const auto rr = row_reduce(M);
  const std::size_t c = M.cols();
  std::vector<bool> is_pivot(c, false);
  for (std::size_t p : rr.pivots) is_pivot[p] = true;

  std::vector<BitVector> basis;
  for (std::size_t free_col = 0; free_col < c; ++free_col) {
    if (is_pivot[free_col]) continue;
    BitVector v(c);
    v.set(free_col, true);
    for (std::size_t i = 0; i < rr.rank; ++i)
      if (rr.reduced.get(i, free_col)) v.set(rr.pivots[i], true);
    basis.push_back(std::move(v));
  }
  auto out = BitMatrix::from_rows(std::move(basis));
  return out.rows() == 0 ? BitMatrix(0, c) : out;
}

bool rowspace_contains(const BitMatrix& M, const BitVector& v) {
  if (v.size() != M.cols()) throw std::invalid_argument("rowspace_contains: dimension mismatch");
  const auto rr = row_reduce(M);
  BitVector w = v;
  for (std::size_t i = 0; i < rr.rank; ++i)
    if (w.get(rr.pivots[i])) w ^= rr.reduced.row(i);
  return w.is_zero();
}

BitMatrix express_rows(const BitMatrix& H, const BitMatrix& P) {
  if (P.cols() != H.cols()) throw std::invalid_argument("express_rows: width mismatch");
  const auto rr = row_reduce(H);
  if (rr.rank != H.rows()) throw std::invalid_argument("express_rows: H is not full row rank");

  // A column i holds the combination of H's rows equal to P row i.
  BitMatrix A(H.rows(), P.rows());
  for (std::size_t i = 0; i < P.rows(); ++i) {
    BitVector w = P.row(i);
    BitVector coeff(H.rows());
    for (std::size_t j = 0; j < rr.rank; ++j) {
      if (w.get(rr.pivots[j])) {
        w ^= rr.reduced.row(j);
        coeff ^= rr.transform.row(j);
      }
    }
    if (!w.is_zero())
      throw std::invalid_argument("express_rows: P row " + std::to_string(i) +
                                  " not in rowspace(H)");
    for (std::size_t j = 0; j < H.rows(); ++j)
      if (coeff.get(j)) A.set(j, i, true);
  }
  return A;
}

namespace {

// Row basis plus Gray-code visit of all 2^rank codewords.
template <typename F>
void for_each_codeword(const BitMatrix& G, F&& visit) {
  const auto rr = row_reduce(G);
  std::vector<BitVector> basis;
  for (std::size_t i = 0; i < rr.rank; ++i) basis.push_back(rr.reduced.row(i));
  const std::size_t k = basis.size();
  if (k > 30) throw std::invalid_argument("codeword enumeration: rank too large");

  BitVector cw(G.cols());
  visit(cw);
  const std::uint64_t total = std::uint64_t(1) << k;
  for (std::uint64_t i = 1; i < total; ++i) {
    cw ^= basis[std::countr_zero(i)];
    visit(cw);
  }
}

}  // namespace

MinDistance min_distance(const BitMatrix& G) {
  MinDistance md;
  md.d_min = G.cols() + 1;
  bool nonzero_seen = false;
  for_each_codeword(G, [&](const BitVector& cw) {
    const std::size_t w = cw.weight();
    if (w == 0) return;
    nonzero_seen = true;
    if (w < md.d_min) {
      md.d_min = w;
      md.multiplicity = 1;
    } else if (w == md.d_min) {
      ++md.multiplicity;
    }
  });
  if (!nonzero_seen) throw std::invalid_argument("min_distance: trivial rowspace");
  return md;
}

std::vector<std::uint64_t> weight_enumerator(const BitMatrix& G) {
  std::vector<std::uint64_t> h(G.cols() + 1, 0);
  for_each_codeword(G, [&](const BitVector& cw) { ++h[cw.weight()]; });
  return h;
}

std::vector<std::uint64_t> column_masks(const BitMatrix& M) {
  if (M.rows() > 64) throw std::invalid_argument("column_masks: more than 64 rows");
  std::vector<std::uint64_t> cols(M.cols(), 0);
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j)
      if (M.get(i, j)) cols[j] |= std::uint64_t(1) << i;
  return cols;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t fingerprint(const BitMatrix& M) {
  const std::string s = M.to_string();
  std::uint64_t dims[2] = {M.rows(), M.cols()};
  std::uint64_t h = fnv1a64(dims, sizeof dims);
  return fnv1a64(s.data(), s.size(), h);
}

}  // namespace ssdec
