#include "prodexp/codes.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "prodexp/errors.hpp"

namespace prodexp {

namespace {

constexpr std::uint64_t kBruteLimit = 1u << 24;

std::uint64_t saturating_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

// Evaluation point of coordinate j in the RS evaluation view: omega^{-j}.
Elem rs_point(const Field& field, int j) { return field.omega_pow(-j); }

void require_length(std::span<const Elem> word, int n) {
  if (static_cast<int>(word.size()) != n) {
    throw std::invalid_argument("word length " + std::to_string(word.size()) + " does not match code length " +
                                std::to_string(n));
  }
}

Decoded brute_nearest(std::span<const Elem> word, const LinearCode& code) {
  const std::uint64_t count = saturating_pow(code.field().size(), code.dimension());
  if (count > kBruteLimit) throw LimitExceeded("brute-force decoding needs q^k <= 2^24");
  const int k = code.dimension();
  const int q = code.field().size();
  Word message(k, 0);
  Decoded best{Word(code.length(), 0), std::numeric_limits<int>::max()};
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (int j = k - 1; j >= 0; --j) {
      message[j] = static_cast<Elem>(rest % q);
      rest /= q;
    }
    Word c = code.encode(message);
    int d = hamming_distance(word, c);
    if (d < best.distance || (d == best.distance && c < best.codeword)) {
      best.distance = d;
      best.codeword = std::move(c);
    }
  }
  return best;
}

// Berlekamp-Welch on the evaluation view of a primitive RS code.
std::optional<Decoded> berlekamp_welch(std::span<const Elem> word, const CyclicCode& code) {
  const Field& field = code.field();
  const int n = code.length();
  const int k = code.dimension();
  const int e = (n - k) / 2;
  // Unknowns: Q_0..Q_{e+k-1}, then E_0..E_{e-1}; E is monic of degree e.
  const int cols = 2 * e + k;
  Matrix a(n, Word(cols, 0));
  Word b(n, 0);
  for (int j = 0; j < n; ++j) {
    const Elem x = rs_point(field, j);
    Elem xp = 1;
    for (int i = 0; i < e + k; ++i) {
      a[j][i] = xp;
      if (i < e) a[j][e + k + i] = field.mul(word[j], xp);
      xp = field.mul(xp, x);
    }
    b[j] = field.mul(word[j], field.pow(x, e));
  }
  auto sol = solve(a, b, cols, field);
  if (!sol) return std::nullopt;
  Poly q(Word(sol->begin(), sol->begin() + e + k));
  Word ecoef(sol->begin() + e + k, sol->end());
  ecoef.push_back(1);
  Poly err(std::move(ecoef));
  auto [f, rem] = poly_divmod(q, err, field);
  if (!rem.is_zero() || f.degree() >= k) return std::nullopt;
  Decoded out{Word(n, 0), 0};
  for (int j = 0; j < n; ++j) out.codeword[j] = f.eval(rs_point(field, j), field);
  out.distance = hamming_distance(word, out.codeword);
  if (out.distance > e) return std::nullopt;
  return out;
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t c = 1;
  for (int i = 1; i <= r; ++i) c = c * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
  return c;
}

}  // namespace

// Exact nearest codeword of a primitive RS code. Every word is within n - k
// of the code, so the nearest codeword agrees with it on at least k
// positions and in particular passes through some (k-1)-subset S. The
// codewords through S form the pencil f_S + lambda * g_S with g_S vanishing
// on S; each other position j pins down one lambda:
//   lambda_j = y_j / g_S(x_j) - sum_a y_a * w_a / (x_j - x_a)
// with barycentric weights w_a. The coefficients depend on positions only.
class InformationSetTable {
 public:
  explicit InformationSetTable(const CyclicCode& code);
  Decoded nearest(std::span<const Elem> word) const;
  // Largest agreement of any codeword with `word`; skips reconstruction.
  int max_agreement(std::span<const Elem> word) const;

 private:
  Field field_;
  int n_;
  int s_;
  std::vector<Elem> pts_;
  std::vector<std::vector<int>> subsets_;
  std::vector<std::vector<int>> others_;
  // Per subset, per other position: s coefficients then 1/g_S(x_j).
  std::vector<std::vector<Elem>> coef_;
};

namespace {

Decoded information_set_nearest(std::span<const Elem> word, const CyclicCode& code) {
  return InformationSetTable(code).nearest(word);
}

}  // namespace

InformationSetTable::InformationSetTable(const CyclicCode& code)
    : field_(code.field()), n_(code.length()), s_(std::max(code.dimension() - 1, 0)) {
  if (!code.is_primitive_rs()) throw std::invalid_argument("information-set decoding needs a primitive RS code");
  if (binomial(n_, s_) > (1u << 20)) throw LimitExceeded("information-set decoding needs C(n, k-1) <= 2^20");
  pts_.resize(n_);
  for (int j = 0; j < n_; ++j) pts_[j] = rs_point(field_, j);
  if (code.dimension() == 0) return;
  std::vector<int> subset(s_);
  for (int i = 0; i < s_; ++i) subset[i] = i;
  std::vector<bool> in_subset(n_);
  while (true) {
    std::fill(in_subset.begin(), in_subset.end(), false);
    for (int v : subset) in_subset[v] = true;
    std::vector<Elem> bary(s_);
    for (int a = 0; a < s_; ++a) {
      Elem den = 1;
      for (int b = 0; b < s_; ++b) {
        if (b != a) den = field_.mul(den, pts_[subset[a]] ^ pts_[subset[b]]);
      }
      bary[a] = field_.inv(den);
    }
    std::vector<int> others;
    std::vector<Elem> coef;
    for (int j = 0; j < n_; ++j) {
      if (in_subset[j]) continue;
      others.push_back(j);
      Elem g = 1;
      for (int a = 0; a < s_; ++a) {
        const Elem diff = pts_[j] ^ pts_[subset[a]];
        coef.push_back(field_.div(bary[a], diff));
        g = field_.mul(g, diff);
      }
      coef.push_back(field_.inv(g));
    }
    subsets_.push_back(subset);
    others_.push_back(std::move(others));
    coef_.push_back(std::move(coef));
    int i = s_ - 1;
    while (i >= 0 && subset[i] == n_ - s_ + i) --i;
    if (i < 0) break;
    ++subset[i];
    for (int j = i + 1; j < s_; ++j) subset[j] = subset[j - 1] + 1;
  }
}

// Every codeword agreeing with the word on >= k positions is found through a
// (k-1)-subset of its agreement set, and interpolation guarantees one exists.
int InformationSetTable::max_agreement(std::span<const Elem> word) const {
  require_length(word, n_);
  if (subsets_.empty()) return n_ - weight(word);
  int best = 0;
  std::vector<int> counts(field_.size());
  for (std::size_t t = 0; t < subsets_.size(); ++t) {
    const auto& sub = subsets_[t];
    const auto& coef = coef_[t];
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t c = 0;
    int top = 0;
    for (int j : others_[t]) {
      Elem lambda = 0;
      for (int a = 0; a < s_; ++a) lambda ^= field_.mul(word[sub[a]], coef[c++]);
      lambda ^= field_.mul(word[j], coef[c++]);
      top = std::max(top, ++counts[lambda]);
    }
    best = std::max(best, s_ + top);
  }
  return best;
}

Decoded InformationSetTable::nearest(std::span<const Elem> word) const {
  require_length(word, n_);
  if (subsets_.empty()) return {Word(n_, 0), weight(word)};
  int best_agree = -1;
  std::vector<std::pair<std::size_t, Elem>> best_sets;
  std::vector<int> counts(field_.size());
  for (std::size_t t = 0; t < subsets_.size(); ++t) {
    const auto& sub = subsets_[t];
    const auto& coef = coef_[t];
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t c = 0;
    for (int j : others_[t]) {
      Elem lambda = 0;
      for (int a = 0; a < s_; ++a) lambda ^= field_.mul(word[sub[a]], coef[c++]);
      lambda ^= field_.mul(word[j], coef[c++]);
      ++counts[lambda];
    }
    const int top = *std::max_element(counts.begin(), counts.end());
    const int agree = s_ + top;
    if (agree < best_agree) continue;
    if (agree > best_agree) best_sets.clear();
    best_agree = agree;
    for (int lam = 0; lam < field_.size(); ++lam) {
      if (counts[lam] == top) best_sets.emplace_back(t, static_cast<Elem>(lam));
    }
  }

  Decoded best{Word(n_, 0), std::numeric_limits<int>::max()};
  for (const auto& [t, lam] : best_sets) {
    const auto& sub = subsets_[t];
    Poly f;
    Poly g({1});
    for (int a = 0; a < s_; ++a) {
      Poly basis({1});
      Elem den = 1;
      for (int b = 0; b < s_; ++b) {
        if (b == a) continue;
        basis = poly_mul(basis, Poly({pts_[sub[b]], 1}), field_);
        den = field_.mul(den, pts_[sub[a]] ^ pts_[sub[b]]);
      }
      f = poly_add(f, poly_scale(basis, field_.div(word[sub[a]], den), field_));
      g = poly_mul(g, Poly({pts_[sub[a]], 1}), field_);
    }
    f = poly_add(f, poly_scale(g, lam, field_));
    Word cw(n_);
    for (int j = 0; j < n_; ++j) cw[j] = f.eval(pts_[j], field_);
    const int d = hamming_distance(word, cw);
    if (d < best.distance || (d == best.distance && cw < best.codeword)) {
      best.distance = d;
      best.codeword = std::move(cw);
    }
  }
  return best;
}

LinearCode::LinearCode(const Field& field, int length, Matrix generator, Matrix parity)
    : field_(field), length_(length), generator_(std::move(generator)), parity_(std::move(parity)) {}

LinearCode LinearCode::from_generator(const Field& field, int length, Matrix rows) {
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != length) throw std::invalid_argument("generator row length mismatch");
  }
  RowEchelon ech = row_reduce(std::move(rows), field);
  Matrix parity = null_space(ech.rows, length, field);
  return LinearCode(field, length, std::move(ech.rows), std::move(parity));
}

LinearCode LinearCode::from_parity(const Field& field, int length, Matrix parity) {
  for (const auto& r : parity) {
    if (static_cast<int>(r.size()) != length) throw std::invalid_argument("parity row length mismatch");
  }
  Matrix gen = null_space(parity, length, field);
  return from_generator(field, length, std::move(gen));
}

bool LinearCode::contains(std::span<const Elem> word) const {
  require_length(word, length_);
  for (const auto& h : parity_) {
    if (dot(h, word, field_) != 0) return false;
  }
  return true;
}

Word LinearCode::encode(std::span<const Elem> message) const {
  if (static_cast<int>(message.size()) != dimension()) throw std::invalid_argument("message length mismatch");
  Word c(length_, 0);
  for (int r = 0; r < dimension(); ++r) {
    if (message[r] == 0) continue;
    for (int j = 0; j < length_; ++j) c[j] ^= field_.mul(message[r], generator_[r][j]);
  }
  return c;
}

LinearCode LinearCode::dual() const { return from_generator(field_, length_, parity_); }

CyclicCode::CyclicCode(const Field& field, int length, Poly check) : length_(length), check_(std::move(check)) {
  if (length < 1) throw std::invalid_argument("cyclic code length must be positive");
  if (check_.is_zero()) throw std::invalid_argument("check polynomial must be nonzero");
  auto [gen, rem] = poly_divmod(Poly::cyclotomic_modulus(length), check_, field);
  if (!rem.is_zero()) throw std::invalid_argument("check polynomial does not divide x^n - 1");
  generator_ = std::move(gen);
  const int k = check_.degree();
  Matrix rows;
  for (int j = 0; j < k; ++j) {
    Word row(length, 0);
    for (int i = 0; i <= generator_.degree(); ++i) row[(i + j) % length] = generator_[i];
    rows.push_back(std::move(row));
  }
  linear_ = std::make_shared<const LinearCode>(LinearCode::from_generator(field, length, std::move(rows)));

  if (length == field.group_order()) {
    std::vector<Elem> roots;
    for (int i = 0; i < k; ++i) roots.push_back(field.omega_pow(i));
    Poly rs = Poly::from_roots(roots, field);
    // Equal up to a nonzero scalar.
    const Elem scale = field.div(check_.coeffs().back(), rs.coeffs().back());
    primitive_rs_ = poly_scale(rs, scale, field) == check_;
  }
}

MultiPoly CyclicCode::check_multipoly() const {
  return MultiPoly::from_univariate(check_, 1, length_, 0);
}

const LinearCode& linear_of(const Code& code) {
  return std::visit(
      [](const auto& c) -> const LinearCode& {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, CyclicCode>) {
          return c.linear();
        } else {
          return c;
        }
      },
      code);
}

const CyclicCode* cyclic_of(const Code& code) { return std::get_if<CyclicCode>(&code); }

bool is_primitive_rs(const Code& code) {
  const CyclicCode* c = cyclic_of(code);
  return c != nullptr && c->is_primitive_rs();
}

CyclicCode rs_primitive(const Field& field, int rate_num, int rate_den) {
  const int n = field.group_order();
  if (rate_den <= 0 || rate_num < 0 || rate_num > rate_den) throw std::invalid_argument("rate must lie in [0, 1]");
  if ((n * rate_num) % rate_den != 0) {
    throw std::invalid_argument("n = " + std::to_string(n) + " times rate " + std::to_string(rate_num) + "/" +
                                std::to_string(rate_den) + " is not an integer");
  }
  const int k = n * rate_num / rate_den;
  std::vector<Elem> roots;
  for (int i = 0; i < k; ++i) roots.push_back(field.omega_pow(i));
  return CyclicCode(field, n, Poly::from_roots(roots, field));
}

CyclicCode repetition2() { return CyclicCode(Field::make(1), 2, Poly({1, 1})); }

bool cyclic_contains(const CyclicCode& code, std::span<const Elem> word) {
  require_length(word, code.length());
  return poly_mul_mod_cyclic(code.check_poly(), Poly(Word(word.begin(), word.end())), code.length(), code.field())
      .is_zero();
}

bool code_contains(const Code& code, std::span<const Elem> word) {
  if (const CyclicCode* c = cyclic_of(code)) return cyclic_contains(*c, word);
  return linear_of(code).contains(word);
}

CyclicCode dual_code(const CyclicCode& code) {
  // The dual is generated by the reciprocal of p, so its check polynomial
  // is (x^n - 1) / p^rec.
  Poly rec = poly_reciprocal(code.check_poly());
  auto [check, rem] = poly_divmod(Poly::cyclotomic_modulus(code.length()), rec, code.field());
  if (!rem.is_zero()) throw std::logic_error("reciprocal check polynomial does not divide x^n - 1");
  return CyclicCode(code.field(), code.length(), std::move(check));
}

LinearCode dual_code(const LinearCode& code) { return code.dual(); }

std::uint64_t codeword_count(const Code& code) {
  return saturating_pow(field_of(code).size(), dimension_of(code));
}

std::vector<Word> enumerate_codewords(const LinearCode& code, std::uint64_t limit) {
  const std::uint64_t count = saturating_pow(code.field().size(), code.dimension());
  if (count > limit) throw LimitExceeded("code has more than " + std::to_string(limit) + " codewords");
  const int k = code.dimension();
  const int q = code.field().size();
  std::vector<Word> out;
  out.reserve(count);
  Word message(k, 0);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t rest = idx;
    for (int j = k - 1; j >= 0; --j) {
      message[j] = static_cast<Elem>(rest % q);
      rest /= q;
    }
    out.push_back(code.encode(message));
  }
  return out;
}

int min_distance(const Code& code, DistanceMode mode) {
  const LinearCode& lin = linear_of(code);
  if (lin.dimension() == 0) throw Undefined("minimum distance of the zero code");
  if (mode == DistanceMode::KnownRS) {
    if (!is_primitive_rs(code)) throw std::invalid_argument("known_rs mode needs a primitive RS code");
    const int d = lin.length() - lin.dimension() + 1;
    if (codeword_count(code) <= (1u << 16)) {
      if (min_distance(code, DistanceMode::Exhaustive) != d) throw std::logic_error("RS distance cross-check failed");
    }
    return d;
  }
  if (codeword_count(code) > kBruteLimit) throw LimitExceeded("exhaustive minimum distance needs q^k <= 2^24");
  int best = lin.length();
  for (const auto& c : enumerate_codewords(lin, kBruteLimit)) {
    const int w = weight(c);
    if (w > 0) best = std::min(best, w);
  }
  return best;
}

Fraction relative_min_distance(const Code& code) {
  const int d = is_primitive_rs(code) ? min_distance(code, DistanceMode::KnownRS)
                                      : min_distance(code, DistanceMode::Exhaustive);
  return frac(d, length_of(code));
}

Decoded nearest_codeword(std::span<const Elem> word, const Code& code, DecodeStrategy strategy) {
  const LinearCode& lin = linear_of(code);
  require_length(word, lin.length());
  switch (strategy) {
    case DecodeStrategy::Brute:
      return brute_nearest(word, lin);
    case DecodeStrategy::BoundedDistance: {
      if (!is_primitive_rs(code)) throw std::invalid_argument("bounded-distance decoding needs a primitive RS code");
      auto r = berlekamp_welch(word, *cyclic_of(code));
      if (!r) throw DecodingFailure("no codeword within floor((d-1)/2)");
      return *r;
    }
    case DecodeStrategy::InformationSet:
      if (!is_primitive_rs(code)) throw std::invalid_argument("information-set decoding needs a primitive RS code");
      return information_set_nearest(word, *cyclic_of(code));
    case DecodeStrategy::Auto:
      break;
  }
  if (codeword_count(code) <= (1u << 12)) return brute_nearest(word, lin);
  if (is_primitive_rs(code)) {
    const CyclicCode& cyc = *cyclic_of(code);
    if (auto r = berlekamp_welch(word, cyc)) {
      // Within the unique-decoding radius the result is also the nearest.
      return *r;
    }
    return information_set_nearest(word, cyc);
  }
  return brute_nearest(word, lin);
}

Distance delta_to_code(std::span<const Elem> word, const Code& code, DecodeStrategy strategy) {
  const int n = length_of(code);
  try {
    return {frac(nearest_codeword(word, code, strategy).distance, n), true};
  } catch (const DecodingFailure&) {
    const int d = min_distance(code, DistanceMode::KnownRS);
    return {frac((d - 1) / 2 + 1, n), false};
  }
}

LineDecoder::LineDecoder(Code code) : code_(std::move(code)) {
  const LinearCode& lin = linear_of(code_);
  const std::uint64_t words = saturating_pow(lin.field().size(), lin.length());
  const std::uint64_t cws = codeword_count(code_);
  if (words <= (1u << 16) && words * cws <= (1u << 22)) {
    codewords_ = enumerate_codewords(lin);
    std::sort(codewords_.begin(), codewords_.end());
    const int q = lin.field().size();
    table_.resize(words);
    Word w(lin.length());
    for (std::uint64_t idx = 0; idx < words; ++idx) {
      std::uint64_t rest = idx;
      for (int j = lin.length() - 1; j >= 0; --j) {
        w[j] = static_cast<Elem>(rest % q);
        rest /= q;
      }
      int best = std::numeric_limits<int>::max();
      std::uint32_t arg = 0;
      // codewords_ is sorted, so the first minimizer is the lexicographic one.
      for (std::uint32_t c = 0; c < codewords_.size(); ++c) {
        const int d = hamming_distance(w, codewords_[c]);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      table_[idx] = arg;
    }
  } else if (is_primitive_rs(code_) && cws > (1u << 12)) {
    // Too many information sets: decode() falls back to bounded decoding and
    // reports LimitExceeded only when a word lies beyond its radius.
    try {
      info_set_ = std::make_shared<const InformationSetTable>(*cyclic_of(code_));
    } catch (const LimitExceeded&) {
      bounded_only_ = true;
    }
  }
}

Decoded LineDecoder::decode(std::span<const Elem> word) const {
  if (!table_.empty()) {
    const LinearCode& lin = linear_of(code_);
    require_length(word, lin.length());
    const int q = lin.field().size();
    std::uint64_t idx = 0;
    for (Elem e : word) idx = idx * q + e;
    const Word& c = codewords_[table_[idx]];
    return {c, hamming_distance(word, c)};
  }
  if (info_set_ || bounded_only_) {
    if (auto r = berlekamp_welch(word, *cyclic_of(code_))) return *r;
    if (bounded_only_) throw LimitExceeded("word lies beyond the bounded radius and exact decoding is too large");
    return info_set_->nearest(word);
  }
  return nearest_codeword(word, code_, DecodeStrategy::Auto);
}

int LineDecoder::distance(std::span<const Elem> word) const {
  if (info_set_) {
    if (auto r = berlekamp_welch(word, *cyclic_of(code_))) return r->distance;
    return static_cast<int>(word.size()) - info_set_->max_agreement(word);
  }
  return decode(word).distance;
}

}  // namespace prodexp
