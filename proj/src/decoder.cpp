#include "ssdec/decoder.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ssdec {

namespace {

constexpr std::uint16_t kUnset = 0xffff;

void check_channel_params(double epsilon, double delta) {
  if (!(epsilon >= 0.0 && epsilon < 0.5))
    throw std::invalid_argument("decode: epsilon must be in [0, 0.5)");
  if (!(delta >= 0.0 && delta < 0.5))
    throw std::invalid_argument("decode: delta must be in [0, 0.5)");
}

// d * log(x) with the convention 0 * (-inf) = 0.
double weighted_log(std::size_t count, double log_ratio) {
  return count == 0 ? 0.0 : double(count) * log_ratio;
}

std::vector<std::uint64_t> packed_rows(const BitMatrix& M) {
  if (M.cols() > 64) throw std::invalid_argument("packed_rows: too wide");
  std::vector<std::uint64_t> out(M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) out[i] = M.row(i).as_u64();
  return out;
}

// encoded[s] = s G_s, packed; Gray-free prefix recurrence over messages.
std::vector<std::uint64_t> encode_all_syndromes(const BitMatrix& G_s) {
  const auto rows = packed_rows(G_s);
  const std::size_t total = std::size_t(1) << G_s.rows();
  std::vector<std::uint64_t> enc(total, 0);
  for (std::size_t s = 1; s < total; ++s)
    enc[s] = enc[s & (s - 1)] ^ rows[std::countr_zero(std::uint64_t(s))];
  return enc;
}

struct ArgmaxTracker {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  std::uint32_t ties = 0;
  bool any = false;

  // Uniform choice among exact score ties via reservoir sampling.
  void offer(double score, std::size_t idx, RngStream& rng) {
    if (!any || score > best) {
      best = score;
      best_idx = idx;
      ties = 1;
      any = true;
    } else if (score == best) {
      ++ties;
      if (rng.below(ties) == 0) best_idx = idx;
    }
  }
};

}  // namespace

CosetLeaderTable build_coset_leader_table(const StabilizerCode& code, std::uint64_t seed) {
  const std::size_t n = code.n;
  if (n > 26) throw std::invalid_argument("build_coset_leader_table: n too large");
  const std::size_t ks = code.H.rows();
  const auto hcols = column_masks(code.H);

  CosetLeaderTable t;
  t.n = n;
  t.k_s = ks;
  t.build_seed = seed;
  const std::size_t syndromes = std::size_t(1) << ks;
  t.leader.assign(syndromes, 0);
  t.leader_weight.assign(syndromes, kUnset);
  t.tie_count.assign(syndromes, 0);

  RngStream rng(seed);
  std::size_t assigned = 0;

  for (std::size_t w = 0; w <= n && assigned < syndromes; ++w) {
    std::uint64_t e = (w == 0) ? 0 : ((std::uint64_t(1) << w) - 1);
    const std::uint64_t limit = std::uint64_t(1) << n;
    while (true) {
      std::uint32_t s = 0;
      for (std::uint64_t bits = e; bits; bits &= bits - 1)
        s ^= std::uint32_t(hcols[std::size_t(std::countr_zero(bits))]);
      if (t.leader_weight[s] == kUnset) {
        t.leader_weight[s] = std::uint16_t(w);
        t.leader[s] = std::uint32_t(e);
        t.tie_count[s] = 1;
        ++assigned;
      } else if (t.leader_weight[s] == w) {
        ++t.tie_count[s];
        if (rng.below(t.tie_count[s]) == 0) t.leader[s] = std::uint32_t(e);
      }
      if (w == 0) break;
      const std::uint64_t lo = e & -e;
      const std::uint64_t carry = e + lo;
      e = carry | (((e ^ carry) >> 2) / lo);
      if (e >= limit) break;
    }
  }
  if (assigned != syndromes)
    throw std::logic_error("build_coset_leader_table: syndrome map incomplete");
  return t;
}

CosetEnumeratorTable build_coset_enumerator_table(const StabilizerCode& code) {
  const std::size_t n = code.n;
  if (n > 26) throw std::invalid_argument("build_coset_enumerator_table: n too large");
  const std::size_t ks = code.H.rows();
  const std::size_t kq = code.L.rows();
  const auto hcols = column_masks(code.H);
  const auto lcols = column_masks(code.L);

  CosetEnumeratorTable t;
  t.n = n;
  t.k_s = ks;
  t.k_q = kq;
  const std::size_t cosets = std::size_t(1) << (ks + kq);
  t.hist.assign(cosets * (n + 1), 0);
  t.min_member.assign(cosets, 0);
  t.min_weight.assign(cosets, kUnset);

  std::uint64_t e = 0;
  std::uint32_t s = 0, l = 0;
  auto record = [&]() {
    const std::size_t w = std::size_t(std::popcount(e));
    const std::size_t idx = (std::size_t(s) << kq) | l;
    ++t.hist[idx * (n + 1) + w];
    if (w < t.min_weight[idx]) {
      t.min_weight[idx] = std::uint16_t(w);
      t.min_member[idx] = std::uint32_t(e);
    }
  };
  record();
  for (std::uint64_t i = 1; i < (std::uint64_t(1) << n); ++i) {
    const std::size_t b = std::size_t(std::countr_zero(i));  // Gray-code step
    e ^= std::uint64_t(1) << b;
    s ^= std::uint32_t(hcols[b]);
    l ^= std::uint32_t(lcols[b]);
    record();
  }
  return t;
}

MapDecoder::MapDecoder(const SyndromeCode& synd_code, const CosetLeaderTable& table)
    : n_(synd_code.code.n),
      k_s_(synd_code.k_s),
      m_(synd_code.m),
      table_(&table),
      encoded_(encode_all_syndromes(synd_code.G_s)),
      label_cols_(column_masks(synd_code.code.L)),
      k_q_(synd_code.code.L.rows()) {
  if (table.n != n_ || table.k_s != k_s_)
    throw std::invalid_argument("MapDecoder: table/code mismatch");
}

DecodeOutcome MapDecoder::decode(const BitVector& ztilde, double epsilon, double delta,
                                 RngStream& rng) const {
  check_channel_params(epsilon, delta);
  if (ztilde.size() != m_) throw std::invalid_argument("MapDecoder: ztilde length mismatch");
  const std::uint64_t zt = ztilde.as_u64();
  const double log_a = std::log(delta / (1.0 - delta));
  const double log_b = std::log(epsilon / (1.0 - epsilon));

  ArgmaxTracker arg;
  for (std::size_t s = 0; s < encoded_.size(); ++s) {
    const std::size_t d = std::size_t(std::popcount(encoded_[s] ^ zt));
    const std::size_t w = table_->leader_weight[s];
    arg.offer(weighted_log(d, log_a) + weighted_log(w, log_b), s, rng);
  }

  DecodeOutcome out;
  out.coset_syndrome = std::uint32_t(arg.best_idx);
  const std::uint64_t e = table_->leader[arg.best_idx];
  std::uint32_t l = 0;
  for (std::uint64_t bits = e; bits; bits &= bits - 1)
    l ^= std::uint32_t(label_cols_[std::size_t(std::countr_zero(bits))]);
  out.coset_logical = l;
  out.syndrome_estimate = BitVector::from_u64(arg.best_idx, k_s_);
  out.error_estimate = BitVector::from_u64(e, n_);
  out.score = arg.best;
  out.ties = arg.ties;
  return out;
}

DegMapDecoder::DegMapDecoder(const SyndromeCode& synd_code, const CosetEnumeratorTable& table)
    : n_(synd_code.code.n),
      k_s_(synd_code.k_s),
      k_q_(synd_code.code.L.rows()),
      m_(synd_code.m),
      table_(&table),
      encoded_(encode_all_syndromes(synd_code.G_s)) {
  if (table.n != n_ || table.k_s != k_s_ || table.k_q != k_q_)
    throw std::invalid_argument("DegMapDecoder: table/code mismatch");
}

std::vector<double> DegMapDecoder::coset_log_mass(double epsilon) const {
  const double r = epsilon / (1.0 - epsilon);
  std::vector<double> pow_r(n_ + 1);
  pow_r[0] = 1.0;
  for (std::size_t w = 1; w <= n_; ++w) pow_r[w] = pow_r[w - 1] * r;

  std::vector<double> mass(table_->coset_count());
  for (std::size_t idx = 0; idx < mass.size(); ++idx) {
    const std::uint64_t* h = table_->coset_hist(idx);
    double sum = 0.0;
    for (std::size_t w = 0; w <= n_; ++w)
      if (h[w]) sum += double(h[w]) * pow_r[w];
    mass[idx] = sum > 0.0 ? std::log(sum) : -std::numeric_limits<double>::infinity();
  }
  return mass;
}

void DegMapDecoder::prepare(double epsilon) {
  prepared_mass_ = coset_log_mass(epsilon);
  prepared_epsilon_ = epsilon;
}

DecodeOutcome DegMapDecoder::decode(const BitVector& ztilde, double epsilon, double delta,
                                    RngStream& rng) const {
  check_channel_params(epsilon, delta);
  if (ztilde.size() != m_) throw std::invalid_argument("DegMapDecoder: ztilde length mismatch");
  const std::uint64_t zt = ztilde.as_u64();
  const double log_a = std::log(delta / (1.0 - delta));

  std::vector<double> local;
  const std::vector<double>* mass = &prepared_mass_;
  if (epsilon != prepared_epsilon_) {
    local = coset_log_mass(epsilon);
    mass = &local;
  }

  ArgmaxTracker arg;
  for (std::size_t idx = 0; idx < mass->size(); ++idx) {
    const double m = (*mass)[idx];
    if (m == -std::numeric_limits<double>::infinity()) continue;  // empty coset
    const std::size_t s = idx >> k_q_;
    const std::size_t d = std::size_t(std::popcount(encoded_[s] ^ zt));
    arg.offer(weighted_log(d, log_a) + m, idx, rng);
  }

  DecodeOutcome out;
  out.coset_syndrome = std::uint32_t(arg.best_idx >> k_q_);
  out.coset_logical = std::uint32_t(arg.best_idx & ((std::size_t(1) << k_q_) - 1));
  out.syndrome_estimate = BitVector::from_u64(out.coset_syndrome, k_s_);
  out.error_estimate = BitVector::from_u64(table_->min_member[arg.best_idx], n_);
  out.score = arg.best;
  out.ties = arg.ties;
  return out;
}

DecodeOutcome naive_map_decode(const StabilizerCode& code, const SyndromeCode& synd_code,
                               const BitVector& ztilde, double epsilon, double delta,
                               RngStream& rng) {
  check_channel_params(epsilon, delta);
  const std::size_t n = code.n;
  if (n > 26) throw std::invalid_argument("naive_map_decode: n too large");
  const auto hocols = column_masks(synd_code.H_o);
  const std::uint64_t zt = ztilde.as_u64();
  const double log_a = std::log(delta / (1.0 - delta));
  const double log_b = std::log(epsilon / (1.0 - epsilon));

  ArgmaxTracker arg;
  std::uint64_t e = 0, z = 0;
  arg.offer(weighted_log(std::size_t(std::popcount(z ^ zt)), log_a), 0, rng);
  for (std::uint64_t i = 1; i < (std::uint64_t(1) << n); ++i) {
    const std::size_t b = std::size_t(std::countr_zero(i));
    e ^= std::uint64_t(1) << b;
    z ^= hocols[b];
    const std::size_t d = std::size_t(std::popcount(z ^ zt));
    const std::size_t w = std::size_t(std::popcount(e));
    arg.offer(weighted_log(d, log_a) + weighted_log(w, log_b), std::size_t(e), rng);
  }

  DecodeOutcome out;
  out.error_estimate = BitVector::from_u64(arg.best_idx, n);
  out.syndrome_estimate = mat_vec_mul(code.H, out.error_estimate);
  out.coset_syndrome = std::uint32_t(out.syndrome_estimate.as_u64());
  out.coset_logical = std::uint32_t(mat_vec_mul(code.L, out.error_estimate).as_u64());
  out.score = arg.best;
  out.ties = arg.ties;
  return out;
}

DecodeOutcome naive_deg_map_decode(const StabilizerCode& code, const SyndromeCode& synd_code,
                                   const BitVector& ztilde, double epsilon, double delta,
                                   RngStream& rng) {
  check_channel_params(epsilon, delta);
  const std::size_t n = code.n;
  if (n > 26) throw std::invalid_argument("naive_deg_map_decode: n too large");
  const std::size_t ks = code.H.rows();
  const std::size_t kq = code.L.rows();
  const auto hocols = column_masks(synd_code.H_o);
  const auto hcols = column_masks(code.H);
  const auto lcols = column_masks(code.L);
  const std::uint64_t zt = ztilde.as_u64();
  const double log_a = std::log(delta / (1.0 - delta));
  const double log_b = std::log(epsilon / (1.0 - epsilon));

  const std::size_t cosets = std::size_t(1) << (ks + kq);
  std::vector<double> sum(cosets, 0.0);
  std::vector<std::uint32_t> min_member(cosets, 0);
  std::vector<std::uint16_t> min_weight(cosets, kUnset);

  std::uint64_t e = 0, z = 0;
  std::uint32_t s = 0, l = 0;
  auto accumulate = [&]() {
    const std::size_t d = std::size_t(std::popcount(z ^ zt));
    const std::size_t w = std::size_t(std::popcount(e));
    const std::size_t idx = (std::size_t(s) << kq) | l;
    sum[idx] += std::exp(weighted_log(d, log_a) + weighted_log(w, log_b));
    if (w < min_weight[idx]) {
      min_weight[idx] = std::uint16_t(w);
      min_member[idx] = std::uint32_t(e);
    }
  };
  accumulate();
  for (std::uint64_t i = 1; i < (std::uint64_t(1) << n); ++i) {
    const std::size_t b = std::size_t(std::countr_zero(i));
    e ^= std::uint64_t(1) << b;
    z ^= hocols[b];
    s ^= std::uint32_t(hcols[b]);
    l ^= std::uint32_t(lcols[b]);
    accumulate();
  }

  ArgmaxTracker arg;
  for (std::size_t idx = 0; idx < cosets; ++idx)
    if (sum[idx] > 0.0) arg.offer(std::log(sum[idx]), idx, rng);

  DecodeOutcome out;
  out.coset_syndrome = std::uint32_t(arg.best_idx >> kq);
  out.coset_logical = std::uint32_t(arg.best_idx & ((std::size_t(1) << kq) - 1));
  out.syndrome_estimate = BitVector::from_u64(out.coset_syndrome, ks);
  out.error_estimate = BitVector::from_u64(min_member[arg.best_idx], n);
  out.score = arg.best;
  out.ties = arg.ties;
  return out;
}

bool is_logical_failure(const StabilizerCode& code, const BitVector& e_true,
                        const BitVector& e_hat) {
  const BitVector diff = e_true ^ e_hat;
  if (!mat_vec_mul(code.H, diff).is_zero()) return true;  // syndromes differ
  return !mat_vec_mul(code.L, diff).is_zero();
}

bool is_logical_failure_by_span(const StabilizerCode& code, const BitVector& e_true,
                                const BitVector& e_hat) {
  return !rowspace_contains(code.D, e_true ^ e_hat);
}

DecoderTables build_decoder_tables(const StabilizerCode& code, std::uint64_t seed) {
  return DecoderTables{build_coset_leader_table(code, seed),
                       build_coset_enumerator_table(code)};
}

namespace {

constexpr char kMagic[8] = {'S', 'S', 'D', 'T', 'B', 'L', '0', '1'};

template <typename T>
void put(std::string& buf, const T& v) {
  buf.append(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void put_vec(std::string& buf, const std::vector<T>& v) {
  put(buf, std::uint64_t(v.size()));
  buf.append(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(T));
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;
  bool ok = true;

  template <typename T>
  T get() {
    T v{};
    if (pos + sizeof v > buf.size()) {
      ok = false;
      return v;
    }
    std::memcpy(&v, buf.data() + pos, sizeof v);
    pos += sizeof v;
    return v;
  }

  template <typename T>
  std::vector<T> get_vec() {
    const auto count = get<std::uint64_t>();
    std::vector<T> v;
    if (!ok || pos + count * sizeof(T) > buf.size()) {
      ok = false;
      return v;
    }
    v.resize(count);
    std::memcpy(v.data(), buf.data() + pos, count * sizeof(T));
    pos += count * sizeof(T);
    return v;
  }
};

}  // namespace

void save_tables(const DecoderTables& tables, const std::string& path,
                 const StabilizerCode& code) {
  std::string payload;
  put(payload, std::uint64_t(code.name.size()));
  payload.append(code.name);
  put(payload, fingerprint(code.H_full));
  put(payload, tables.leader.build_seed);

  put(payload, std::uint64_t(tables.leader.n));
  put(payload, std::uint64_t(tables.leader.k_s));
  put_vec(payload, tables.leader.leader);
  put_vec(payload, tables.leader.leader_weight);
  put_vec(payload, tables.leader.tie_count);

  put(payload, std::uint64_t(tables.enumerator.n));
  put(payload, std::uint64_t(tables.enumerator.k_s));
  put(payload, std::uint64_t(tables.enumerator.k_q));
  put_vec(payload, tables.enumerator.hist);
  put_vec(payload, tables.enumerator.min_member);
  put_vec(payload, tables.enumerator.min_weight);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("save_tables: cannot open " + path);
  f.write(kMagic, sizeof kMagic);
  const std::uint64_t checksum = fnv1a64(payload.data(), payload.size());
  f.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
  f.write(payload.data(), std::streamsize(payload.size()));
  if (!f) throw std::runtime_error("save_tables: write failed for " + path);
}

std::optional<DecoderTables> load_tables(const std::string& path, const StabilizerCode& code,
                                         std::uint64_t seed) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return std::nullopt;
  char magic[8];
  std::uint64_t checksum = 0;
  f.read(magic, sizeof magic);
  f.read(reinterpret_cast<char*>(&checksum), sizeof checksum);
  if (!f || std::memcmp(magic, kMagic, sizeof magic) != 0) return std::nullopt;
  std::string payload((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (fnv1a64(payload.data(), payload.size()) != checksum) return std::nullopt;

  Reader r{payload};
  const auto name_len = r.get<std::uint64_t>();
  if (!r.ok || r.pos + name_len > payload.size()) return std::nullopt;
  const std::string name = payload.substr(r.pos, name_len);
  r.pos += name_len;
  const auto fp = r.get<std::uint64_t>();
  const auto stored_seed = r.get<std::uint64_t>();
  if (!r.ok || name != code.name || fp != fingerprint(code.H_full) || stored_seed != seed)
    return std::nullopt;

  DecoderTables t;
  t.leader.build_seed = stored_seed;
  t.leader.n = r.get<std::uint64_t>();
  t.leader.k_s = r.get<std::uint64_t>();
  t.leader.leader = r.get_vec<std::uint32_t>();
  t.leader.leader_weight = r.get_vec<std::uint16_t>();
  t.leader.tie_count = r.get_vec<std::uint32_t>();

  t.enumerator.n = r.get<std::uint64_t>();
  t.enumerator.k_s = r.get<std::uint64_t>();
  t.enumerator.k_q = r.get<std::uint64_t>();
  t.enumerator.hist = r.get_vec<std::uint64_t>();
  t.enumerator.min_member = r.get_vec<std::uint32_t>();
  t.enumerator.min_weight = r.get_vec<std::uint16_t>();
  if (!r.ok || r.pos != payload.size()) return std::nullopt;
  return t;
}

}  // namespace ssdec
