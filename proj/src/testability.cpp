#include "prodexp/testability.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "prodexp/errors.hpp"
#include "prodexp/parallel.hpp"

namespace prodexp {

FlatTest FlatTest::make(const Shape& shape, int k) {
  FlatTest t;
  t.shape = shape;
  t.k = k;
  t.flats = enumerate_flats(shape, k);
  for (const auto& wf : t.flats) t.total_cells += wf.flat.cell_count(shape);
  return t;
}

std::string FlatTest::name() const { return "T_" + std::to_string(shape.size()) + "^" + std::to_string(k); }

FlatDistance::FlatDistance(const CodeFamily& family) : family_(family) {
  for (int a = 0; a < family.dims(); ++a) {
    const LinearCode& lin = linear_of(family.code(a));
    std::vector<bool> zero(lin.length(), true);
    for (const auto& row : lin.generator()) {
      for (int j = 0; j < lin.length(); ++j) {
        if (row[j] != 0) zero[j] = false;
      }
    }
    zero_coord_.push_back(std::move(zero));
  }
}

const std::vector<TensorWord>& FlatDistance::codewords_for(const std::vector<int>& axes) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(axes);
  if (it != cache_.end()) return it->second;
  auto words = product_codewords(family_.restrict_axes(axes));
  return cache_.emplace(axes, std::move(words)).first->second;
}

const std::vector<TensorWord>& FlatDistance::product_codewords_cached() const {
  std::vector<int> all(family_.dims());
  for (int a = 0; a < family_.dims(); ++a) all[a] = a;
  return codewords_for(all);
}

int FlatDistance::product_distance(const TensorWord& w) const {
  int best = std::numeric_limits<int>::max();
  for (const auto& c : product_codewords_cached()) best = std::min(best, hamming_distance(w, c));
  return best;
}

int FlatDistance::restricted_distance(const TensorWord& w, const Flat& flat) const {
  const TensorWord r = restrict(w, flat);
  // A fixed coordinate where the code vanishes punctures the product code to {0}.
  std::vector<bool> free(family_.dims(), false);
  for (int a : flat.free_axes) free[a] = true;
  for (int a = 0; a < family_.dims(); ++a) {
    if (!free[a] && zero_coord_[a][flat.base[a]]) return hamming_weight(r);
  }
  if (flat.free_axes.size() == 1) return family_.decoder(flat.free_axes[0]).distance(r.entries());
  int best = std::numeric_limits<int>::max();
  for (const auto& c : codewords_for(flat.free_axes)) best = std::min(best, hamming_distance(r, c));
  return best;
}

namespace {

// Lines need no restriction copies; the decoders read them in place.
std::uint64_t line_distance_sum(const TensorWord& w, const FlatDistance& dist) {
  const CodeFamily& fam = dist.family();
  std::uint64_t sum = 0;
  for (int a = 0; a < fam.dims(); ++a) {
    const LineDecoder& dec = fam.decoder(a);
    for_each_line(w.shape(), a, [&](std::size_t, std::size_t first, std::size_t stride) {
      sum += static_cast<std::uint64_t>(dec.distance(line_values(w, a, first, stride)));
    });
  }
  return sum;
}

bool has_zero_coordinate(const CodeFamily& fam) {
  for (int a = 0; a < fam.dims(); ++a) {
    const LinearCode& lin = linear_of(fam.code(a));
    for (int j = 0; j < lin.length(); ++j) {
      bool zero = true;
      for (const auto& row : lin.generator()) zero = zero && row[j] == 0;
      if (zero) return true;
    }
  }
  return false;
}

}  // namespace

Expectation test_expectation(const TensorWord& w, const FlatTest& test, const FlatDistance& dist) {
  if (w.shape() != test.shape || dist.family().shape() != test.shape) {
    throw std::invalid_argument("word, test and family shapes differ");
  }
  Expectation e;
  e.cells = test.total_cells;
  if (test.k == 1 && !has_zero_coordinate(dist.family())) {
    e.distance_sum = line_distance_sum(w, dist);
    return e;
  }
  for (const auto& wf : test.flats) e.distance_sum += static_cast<std::uint64_t>(dist.restricted_distance(w, wf.flat));
  return e;
}

Fraction test_expectation(const TensorWord& w, const FlatTest& test, const CodeFamily& family) {
  FlatDistance dist(family);
  return test_expectation(w, test, dist).value();
}

namespace {

std::uint64_t checked_pow(int q, std::uint64_t e, std::uint64_t limit, const std::string& what) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (v > limit / static_cast<std::uint64_t>(q)) throw LimitExceeded(what + " exceeds the enumeration limit");
    v *= static_cast<std::uint64_t>(q);
  }
  return v;
}

void word_from_index(std::uint64_t idx, int q, TensorWord& w) {
  for (std::size_t j = w.size(); j-- > 0;) {
    w[j] = static_cast<Elem>(idx % static_cast<std::uint64_t>(q));
    idx /= static_cast<std::uint64_t>(q);
  }
}

// Ratio num/den kept as a pair of integers; smaller ratio wins, then smaller index.
struct RatioBest {
  bool have = false;
  std::uint64_t num = 0, den = 1, index = 0;
  void offer(std::uint64_t n, std::uint64_t d, std::uint64_t i) {
    const auto lhs = static_cast<unsigned __int128>(n) * den;
    const auto rhs = static_cast<unsigned __int128>(num) * d;
    if (!have || lhs < rhs || (lhs == rhs && i < index)) {
      have = true;
      num = n;
      den = d;
      index = i;
    }
  }
  void merge(const RatioBest& o) {
    if (o.have) offer(o.num, o.den, o.index);
  }
};

Fraction ratio_fraction(std::uint64_t num, std::uint64_t den) {
  return Fraction(static_cast<long long>(num)) / Fraction(static_cast<long long>(den));
}

}  // namespace

RobustnessExact rho_r_exact(const FlatTest& test, const CodeFamily& family, int jobs) {
  if (test.shape != family.shape()) throw std::invalid_argument("test and family shapes differ");
  const int q = family.field().size();
  const std::uint64_t N = shape_size(family.shape());
  const std::uint64_t words = checked_pow(q, N, 1u << 24, "word space");
  FlatDistance dist(family);
  const auto& cws = dist.product_codewords_cached();
  if (cws.size() == words) throw Undefined("every word is a product codeword; robustness is undefined");

  const std::uint64_t chunks = std::min<std::uint64_t>(words, 256);
  std::vector<RatioBest> best(chunks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::uint64_t lo = words * c / chunks, hi = words * (c + 1) / chunks;
    TensorWord w(family.shape());
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      word_from_index(idx, q, w);
      const int d = dist.product_distance(w);
      if (d == 0) continue;
      // E / delta = (S / T) / (d / N); T and N are common, so compare S / d.
      best[c].offer(test_expectation(w, test, dist).distance_sum, static_cast<std::uint64_t>(d), idx);
    }
  });
  RatioBest all;
  for (const auto& b : best) all.merge(b);
  RobustnessExact out;
  out.value = ratio_fraction(all.num * N, all.den * test.total_cells);
  out.minimizer = TensorWord(family.shape());
  word_from_index(all.index, q, out.minimizer);
  out.words = words;
  return out;
}

namespace {

Fraction known_relative_distance(const Code& code) { return relative_min_distance(code); }

int known_min_distance(const Code& code) {
  return min_distance(code, is_primitive_rs(code) ? DistanceMode::KnownRS : DistanceMode::Exhaustive);
}

struct PoolWord {
  TensorWord word;
  std::optional<TensorWord> planted;  // a product codeword near the word, if known
};

Elem random_nonzero(std::mt19937_64& rng, int q) { return static_cast<Elem>(1 + rng() % static_cast<unsigned>(q - 1)); }

// Adversarial pool entry `index`: a product codeword plus a structured corruption.
PoolWord adversarial_word(const CodeFamily& family, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq ss{seed, std::uint64_t{0xad}, index};
  std::mt19937_64 rng(ss);
  const Shape shape = family.shape();
  const int m = family.dims();
  const int q = family.field().size();
  TensorWord c = random_product_codeword(family, rng);
  TensorWord w = c;
  auto pick_line = [&](int axis) {
    const std::size_t target = rng() % line_count(shape, axis);
    std::size_t f0 = 0, st = 1;
    for_each_line(shape, axis, [&](std::size_t line, std::size_t first, std::size_t stride) {
      if (line == target) {
        f0 = first;
        st = stride;
      }
    });
    return std::pair<std::size_t, std::size_t>{f0, st};
  };
  switch (index % 4) {
    case 0: {  // one line, random positions corrupted
      const int axis = static_cast<int>(rng() % m);
      auto [first, stride] = pick_line(axis);
      const int len = shape[axis];
      const int errs = 1 + static_cast<int>(rng() % len);
      for (int e = 0; e < errs; ++e) w[first + (rng() % len) * stride] ^= random_nonzero(rng, q);
      break;
    }
    case 1: {  // sparse cells anywhere
      const std::size_t N = w.size();
      const int errs = 1 + static_cast<int>(rng() % std::max<std::size_t>(1, 2 * static_cast<std::size_t>(shape[0])));
      for (int e = 0; e < errs; ++e) w[rng() % N] ^= random_nonzero(rng, q);
      break;
    }
    case 2: {  // diagonal: cells with coordinate sum = s mod n_0
      const int n0 = shape[0];
      const int s = static_cast<int>(rng() % n0);
      const bool full = rng() % 2 == 0;
      std::vector<int> idx(m);
      for (std::size_t off = 0; off < w.size(); ++off) {
        std::size_t r = off;
        int sum = 0;
        for (int a = m - 1; a >= 0; --a) {
          sum += static_cast<int>(r % shape[a]);
          r /= shape[a];
        }
        if (sum % n0 == s && (full || rng() % 2)) w[off] ^= random_nonzero(rng, q);
      }
      break;
    }
    default: {  // one or two lines replaced by other line codewords
      const int lines = 1 + static_cast<int>(rng() % 2);
      for (int t = 0; t < lines; ++t) {
        const int axis = static_cast<int>(rng() % m);
        auto [first, stride] = pick_line(axis);
        const LinearCode& lin = linear_of(family.code(axis));
        Word msg(lin.dimension());
        for (auto& v : msg) v = static_cast<Elem>(rng() % q);
        const Word add = lin.encode(msg);
        for (int s = 0; s < shape[axis]; ++s) w[first + s * stride] ^= add[s];
      }
    }
  }
  return {std::move(w), std::move(c)};
}

PoolWord uniform_word(const CodeFamily& family, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq ss{seed, std::uint64_t{0x55}, index};
  std::mt19937_64 rng(ss);
  return {random_word(family.shape(), family.field(), rng), std::nullopt};
}

// Upper bound on the distance to the product code from candidate codewords:
// the planted one, zero, and alternating direction decoding.
int product_distance_upper(const TensorWord& w, const CodeFamily& family, const std::optional<TensorWord>& planted) {
  int best = hamming_weight(w);
  if (planted) best = std::min(best, hamming_distance(w, *planted));
  try {
    TensorWord y = w;
    for (int round = 0; round < 2 * family.dims(); ++round) {
      TensorWord next = nearest_in_direction(y, family, round % family.dims()).word;
      if (next == y && round > 0) break;
      y = std::move(next);
      if (product_contains(y, family)) {
        best = std::min(best, hamming_distance(w, y));
        break;
      }
    }
  } catch (const LimitExceeded&) {
  }
  return best;
}

bool is_rs_cube(const CodeFamily& family) {
  const Code& c0 = family.code(0);
  return family.dims() == 3 && family.same_code_everywhere() && is_primitive_rs(c0) && length_of(c0) % 3 == 0 &&
         3 * dimension_of(c0) == length_of(c0);
}

}  // namespace

RobustnessSampled rho_r_sampled_upper(const FlatTest& test, const CodeFamily& family, std::size_t random_words,
                                      std::size_t adversarial, std::uint64_t seed, int jobs,
                                      const Fraction& threshold) {
  if (test.shape != family.shape()) throw std::invalid_argument("test and family shapes differ");
  if (random_words + adversarial == 0) throw std::invalid_argument("sampling needs at least one word");
  FlatDistance dist(family);
  // Small product codes are enumerated; otherwise candidates within half the
  // product distance are certified nearest.
  const bool enumerable = codeword_count(family.code(0)) > 0 && [&] {
    try {
      std::uint64_t v = 1;
      for (const auto& c : family.codes()) {
        const std::uint64_t k = static_cast<std::uint64_t>(dimension_of(c));
        v *= checked_pow(field_of(c).size(), k, 1u << 16, "product code");
        if (v > (1u << 16)) return false;
      }
      return true;
    } catch (const LimitExceeded&) {
      return false;
    }
  }();
  std::uint64_t product_d = 1;
  for (const auto& c : family.codes()) product_d *= static_cast<std::uint64_t>(known_min_distance(c));

  const bool cube = is_rs_cube(family);
  const std::size_t fixed = cube ? 1 : 0;
  const std::size_t total = fixed + adversarial + random_words;
  const std::uint64_t N = shape_size(family.shape());

  struct Item {
    bool skipped = false;
    bool exact = false;
    std::uint64_t num = 0, den = 1;  // ratio (S / T) / (d / N) = S N / (T d)
  };
  std::vector<Item> items(total);
  parallel_for(total, jobs, [&](std::size_t i) {
    PoolWord pw;
    if (i < fixed) {
      pw = {counterexample_word(family.field()), TensorWord(family.shape())};
    } else if (i < fixed + adversarial) {
      pw = adversarial_word(family, seed, i - fixed);
    } else {
      pw = uniform_word(family, seed, i - fixed - adversarial);
    }
    int d;
    bool exact;
    if (enumerable) {
      d = dist.product_distance(pw.word);
      exact = true;
    } else {
      d = product_distance_upper(pw.word, family, pw.planted);
      exact = 2 * static_cast<std::uint64_t>(d) < product_d;
    }
    if (d == 0) {
      items[i].skipped = true;
      return;
    }
    const Expectation e = test_expectation(pw.word, test, dist);
    items[i] = {false, exact, e.distance_sum * N, e.cells * static_cast<std::uint64_t>(d)};
  });

  RobustnessSampled out;
  for (const auto& it : items) {
    if (it.skipped) {
      ++out.skipped;
      continue;
    }
    const Fraction r = ratio_fraction(it.num, it.den);
    if (!out.lower_estimate || r < *out.lower_estimate) out.lower_estimate = r;
    if (it.exact) {
      ++out.exact;
      if (!out.upper || r < *out.upper) out.upper = r;
    } else {
      ++out.inexact;
    }
    if (r < threshold) ++(it.exact ? out.below_threshold_exact : out.below_threshold_inexact);
  }
  return out;
}

namespace {

std::vector<TensorWord> direction_codewords(const CodeFamily& family, int axis, std::uint64_t limit) {
  auto line_words = enumerate_codewords(linear_of(family.code(axis)));
  const Shape shape = family.shape();
  const std::size_t lines = line_count(shape, axis);
  std::uint64_t count = 1;
  for (std::size_t l = 0; l < lines; ++l) {
    if (count > limit / line_words.size()) throw LimitExceeded("direction code exceeds the enumeration limit");
    count *= line_words.size();
  }
  std::vector<TensorWord> out;
  out.reserve(count);
  std::vector<std::size_t> choice(lines, 0);
  while (true) {
    TensorWord w(shape);
    for_each_line(shape, axis, [&](std::size_t line, std::size_t first, std::size_t stride) {
      set_line(w, axis, first, stride, line_words[choice[line]]);
    });
    out.push_back(std::move(w));
    std::size_t i = 0;
    for (; i < lines; ++i) {
      if (++choice[i] < line_words.size()) break;
      choice[i] = 0;
    }
    if (i == lines) return out;
  }
}

struct LineScales {
  std::vector<std::uint64_t> scale;
  std::uint64_t lcm = 1;
  explicit LineScales(const Shape& shape) {
    for (int a = 0; a < static_cast<int>(shape.size()); ++a) lcm = std::lcm(lcm, line_count(shape, a));
    for (int a = 0; a < static_cast<int>(shape.size()); ++a) scale.push_back(lcm / line_count(shape, a));
  }
};

// min over product codewords c of sum_i |c_i - c|_i scale_i, first minimizer.
std::pair<std::uint64_t, std::size_t> agreement_denominator(const std::vector<const TensorWord*>& tuple,
                                                            const std::vector<TensorWord>& product,
                                                            const LineScales& ls) {
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::size_t arg = 0;
  for (std::size_t p = 0; p < product.size(); ++p) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      s += nonzero_lines(*tuple[i] + product[p], static_cast<int>(i)) * ls.scale[i];
    }
    if (s < best) {
      best = s;
      arg = p;
    }
  }
  return {best, arg};
}

}  // namespace

AgreementExact rho_a_exact(const CodeFamily& family, int jobs) {
  const int m = family.dims();
  std::vector<std::vector<TensorWord>> members;
  std::uint64_t tuples = 1;
  for (int a = 0; a < m; ++a) {
    members.push_back(direction_codewords(family, a, 1u << 20));
    if (tuples > (1u << 24) / members.back().size()) throw LimitExceeded("tuple space exceeds the enumeration limit");
    tuples *= members.back().size();
  }
  const auto product = product_codewords(family, 1u << 16);
  const LineScales ls(family.shape());
  const std::uint64_t N = shape_size(family.shape());

  const std::uint64_t chunks = std::min<std::uint64_t>(tuples, 256);
  std::vector<RatioBest> best(chunks);
  parallel_for(chunks, jobs, [&](std::size_t c) {
    const std::uint64_t lo = tuples * c / chunks, hi = tuples * (c + 1) / chunks;
    std::vector<const TensorWord*> tuple(m);
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t r = idx;
      for (int a = m - 1; a >= 0; --a) {
        tuple[a] = &members[a][r % members[a].size()];
        r /= members[a].size();
      }
      std::uint64_t pair_sum = 0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) pair_sum += static_cast<std::uint64_t>(hamming_distance(*tuple[i], *tuple[j]));
      if (pair_sum == 0) continue;
      const auto [den, arg] = agreement_denominator(tuple, product, ls);
      (void)arg;
      // ratio = (pair_sum / (m^2 N)) / (den / (m lcm)) = pair_sum lcm / (m N den)
      best[c].offer(pair_sum, den, idx);
    }
  });
  RatioBest all;
  for (const auto& b : best) all.merge(b);
  if (!all.have) throw Undefined("every tuple agrees; agreement testability is undefined");
  AgreementExact out;
  out.value = ratio_fraction(all.num * ls.lcm, static_cast<std::uint64_t>(m) * N * all.den);
  std::uint64_t r = all.index;
  out.minimizer.resize(m);
  for (int a = m - 1; a >= 0; --a) {
    out.minimizer[a] = members[a][r % members[a].size()];
    r /= members[a].size();
  }
  out.tuples = tuples;
  return out;
}

std::string describe(const CodeFamily& family) {
  auto name = [](const Code& c) {
    std::ostringstream os;
    const CyclicCode* cyc = cyclic_of(c);
    if (is_primitive_rs(c)) {
      os << "RS[" << length_of(c) << "," << dimension_of(c) << "]";
    } else if (cyc && dimension_of(c) == 1 && cyc->check_poly() == Poly({1, 1})) {
      os << "rep[" << length_of(c) << ",1]";
    } else {
      os << (cyc ? "cyclic[" : "linear[") << length_of(c) << "," << dimension_of(c) << "]";
    }
    return os.str();
  };
  std::ostringstream os;
  if (family.same_code_everywhere()) {
    os << name(family.code(0)) << "^" << family.dims();
  } else {
    for (int a = 0; a < family.dims(); ++a) os << (a ? " x " : "") << name(family.code(a));
  }
  os << " over GF(2^" << family.field().degree() << ")";
  return os.str();
}

namespace {

Fraction min_relative_distance(const CodeFamily& family) {
  Fraction best = 1;
  for (const auto& c : family.codes()) best = std::min(best, known_relative_distance(c));
  return best;
}

CheckReport make_check(std::string name, const Fraction& lhs, const Fraction& rhs, const std::string& instance,
                       std::string detail, const std::string& relation = ">=", const std::string& mode = "exact") {
  CheckReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.relation = relation;
  r.holds = relation == ">=" ? lhs >= rhs : lhs <= rhs;
  r.mode = mode;
  r.instance = instance;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

CheckReport check_agreement_chain(const CodeFamily& family, const Fraction& rho_a) {
  const int m = family.dims();
  const int q = family.field().size();
  const std::uint64_t N = shape_size(family.shape());
  const std::uint64_t words = checked_pow(q, N, 1u << 20, "word space");
  const auto product = product_codewords(family, 1u << 16);
  const LineScales ls(family.shape());
  const Fraction factor = 1 + 2 / rho_a;
  Fraction worst = 0;
  std::uint64_t failures = 0;
  TensorWord x(family.shape());
  for (std::uint64_t idx = 0; idx < words; ++idx) {
    word_from_index(idx, q, x);
    std::vector<TensorWord> ys;
    std::uint64_t dsum = 0;
    for (int a = 0; a < m; ++a) {
      auto near = nearest_in_direction(x, family, a);
      dsum += static_cast<std::uint64_t>(near.distance);
      ys.push_back(std::move(near.word));
    }
    std::vector<const TensorWord*> tuple;
    for (const auto& y : ys) tuple.push_back(&y);
    const auto [den, arg] = agreement_denominator(tuple, product, ls);
    (void)den;
    const std::uint64_t xz = static_cast<std::uint64_t>(hamming_distance(x, product[arg]));
    // ||x - z|| <= d_x (1 + 2/rho_a), with d_x = dsum / (m N)
    if (dsum == 0) {
      if (xz != 0) ++failures;
      continue;
    }
    const Fraction ratio = Fraction(static_cast<long long>(xz * m)) / Fraction(static_cast<long long>(dsum));
    worst = std::max(worst, ratio);
    if (ratio > factor) ++failures;
  }
  CheckReport r = make_check("agreement_chain", worst, factor, describe(family),
                             "max over words of ||x - z|| / d_x against 1 + 2/rho_a; " + std::to_string(words) +
                                 " words, " + std::to_string(failures) + " failures",
                             "<=");
  r.holds = failures == 0;
  return r;
}

std::vector<CheckReport> check_lemma_robust_agreement(const CodeFamily& family, int jobs) {
  const std::string inst = describe(family);
  const Fraction rr = rho_r_exact(FlatTest::make(family.shape(), 1), family, jobs).value;
  const Fraction ra = rho_a_exact(family, jobs).value;
  const Fraction dmin = min_relative_distance(family);
  std::vector<CheckReport> out;
  out.push_back(make_check("robust_from_agreement", rr, ra / 4, inst,
                           "rho_r = " + to_string(rr) + ", rho_a = " + to_string(ra) + "; rho_r >= rho_a / 4"));
  out.push_back(make_check("agreement_from_robust", ra, rr / (rr + 1) * dmin, inst,
                           "rho_a >= rho_r / (rho_r + 1) * min delta(C_i), min delta = " + to_string(dmin)));
  out.push_back(make_check("rho_r_at_most_1", rr, Fraction(1), inst, "rho_r(T_m^1) <= 1", "<="));
  out.push_back(make_check("rho_a_at_most_2", ra, Fraction(2), inst, "rho_a <= 2", "<="));
  if (shape_size(family.shape()) * family.field().degree() <= 20) {
    out.push_back(check_agreement_chain(family, ra));
  }
  return out;
}

CheckReport check_composition(const Code& code, int m, int k1, int k2, std::size_t samples, std::uint64_t seed,
                              int jobs) {
  if (!(1 <= k1 && k1 < k2 && k2 < m)) throw std::invalid_argument("composition needs 1 <= k1 < k2 < m");
  const CodeFamily fam = CodeFamily::uniform(code, m);
  const std::string inst = describe(fam);
  const FlatTest t1 = FlatTest::make(fam.shape(), k1);
  const FlatTest t2 = FlatTest::make(fam.shape(), k2);
  const CodeFamily sub = CodeFamily::uniform(code, k2);
  const Fraction inner = rho_r_exact(FlatTest::make(sub.shape(), k1), sub, jobs).value;
  const std::string label = "rho_r(" + t1.name() + ") >= rho_r(" + t2.name() + ") * rho_r(T_" + std::to_string(k2) +
                            "^" + std::to_string(k1) + ")";

  bool exact = true;
  try {
    checked_pow(fam.field().size(), shape_size(fam.shape()), 1u << 24, "word space");
  } catch (const LimitExceeded&) {
    exact = false;
  }
  if (exact) {
    const Fraction a = rho_r_exact(t1, fam, jobs).value;
    const Fraction b = rho_r_exact(t2, fam, jobs).value;
    return make_check("composition", a, b * inner, inst,
                      label + ": " + to_string(a) + " vs " + to_string(b) + " * " + to_string(inner));
  }

  // Sampled: pool minima with exact product distances (the product code is enumerated).
  FlatDistance dist(fam);
  const std::size_t total = 2 * samples;
  struct Item {
    bool skip = true;
    std::uint64_t s1 = 0, s2 = 0, d = 0;
  };
  std::vector<Item> items(total);
  parallel_for(total, jobs, [&](std::size_t i) {
    PoolWord pw = i < samples ? adversarial_word(fam, seed, i) : uniform_word(fam, seed, i - samples);
    const int d = dist.product_distance(pw.word);
    if (d == 0) return;
    items[i] = {false, test_expectation(pw.word, t1, dist).distance_sum, test_expectation(pw.word, t2, dist).distance_sum,
                static_cast<std::uint64_t>(d)};
  });
  const std::uint64_t N = shape_size(fam.shape());
  std::optional<Fraction> min1, min2;
  std::size_t pointwise_fail = 0, used = 0;
  for (const auto& it : items) {
    if (it.skip) continue;
    ++used;
    const Fraction r1 = ratio_fraction(it.s1 * N, t1.total_cells * it.d);
    const Fraction r2 = ratio_fraction(it.s2 * N, t2.total_cells * it.d);
    if (!min1 || r1 < *min1) min1 = r1;
    if (!min2 || r2 < *min2) min2 = r2;
    if (r1 < r2 * inner) ++pointwise_fail;
  }
  if (!min1) throw Undefined("sample pool contained only product codewords");
  CheckReport r = make_check("composition", *min1, *min2 * inner, inst,
                             label + " on pool minima over " + std::to_string(used) + " words; pointwise failures " +
                                 std::to_string(pointwise_fail) + "; rho_r(T_" + std::to_string(k2) + "^" +
                                 std::to_string(k1) + ") = " + to_string(inner),
                             ">=", "sampled");
  r.holds = r.holds && pointwise_fail == 0;
  return r;
}

PsTrialSummary run_ps_corollary(const CyclicCode& code, std::size_t trials, std::uint64_t seed, int jobs) {
  if (!code.is_primitive_rs()) throw std::invalid_argument("planted trials need a primitive RS code");
  const int n = code.length();
  const int k = code.dimension();
  if (2 * k >= n) throw std::invalid_argument("planted trials need k < n/2");
  const CodeFamily fam = CodeFamily::uniform(code, 2);
  const Field& f = code.field();
  const int N = n * n;
  // delta(c1, c2) <= (1/2 - k/n)^2 means at most floor((n - 2k)^2 / 4) cells.
  const int budget = (n - 2 * k) * (n - 2 * k) / 4;
  const int wmin = n - k + 1;
  const int max_lines = budget / wmin;
  const Poly& g = code.generator_poly();

  struct Trial {
    bool nondegenerate = false;
    bool ok = false;
    int cells = 0;
    int found1 = 0, found2 = 0;
  };
  std::vector<Trial> results(trials);
  parallel_for(trials, jobs, [&](std::size_t t) {
    std::seed_seq ss{seed, static_cast<std::uint64_t>(t)};
    std::mt19937_64 rng(ss);
    const TensorWord c = random_product_codeword(fam, rng);
    TensorWord e1(fam.shape()), e2(fam.shape());
    const int l1 = max_lines > 0 ? static_cast<int>(rng() % (max_lines + 1)) : 0;
    const int l2 = max_lines - l1 > 0 ? static_cast<int>(rng() % (max_lines - l1 + 1)) : 0;
    // Minimum-weight line codeword: a scaled cyclic shift of the generator polynomial.
    auto plant = [&](TensorWord& e, int axis, int count) {
      std::vector<int> used;
      while (static_cast<int>(used.size()) < count) {
        const int line = static_cast<int>(rng() % n);
        if (std::find(used.begin(), used.end(), line) != used.end()) continue;
        used.push_back(line);
        const int shift = static_cast<int>(rng() % n);
        const Elem lam = random_nonzero(rng, f.size());
        for (int j = 0; j <= g.degree(); ++j) {
          const int pos = (j + shift) % n;
          std::vector<int> idx = axis == 0 ? std::vector<int>{pos, line} : std::vector<int>{line, pos};
          e.set(idx, e.at(idx) ^ f.mul(lam, g[j]));
        }
      }
    };
    plant(e1, 0, l1);
    plant(e2, 1, l2);
    const TensorWord c1 = c + e1, c2 = c + e2;
    Trial& r = results[t];
    r.cells = hamming_distance(c1, c2);
    r.nondegenerate = r.cells > 0;
    if (r.cells > budget) throw std::logic_error("planted perturbation exceeds the budget");
    auto decode_to_product = [&](const TensorWord& w, int axis) -> std::optional<int> {
      try {
        TensorWord y = nearest_in_direction(w, fam, axis).word;
        if (product_contains(y, fam)) return hamming_distance(w, y);
        y = nearest_in_direction(y, fam, 1 - axis).word;
        if (product_contains(y, fam)) return hamming_distance(w, y);
      } catch (const LimitExceeded&) {
      }
      return std::nullopt;
    };
    const auto f1 = decode_to_product(c1, 1);
    const auto f2 = decode_to_product(c2, 0);
    r.found1 = f1.value_or(-1);
    r.found2 = f2.value_or(-1);
    r.ok = f1 && f2 && *f1 <= 2 * r.cells && *f2 <= 2 * r.cells;
  });

  PsTrialSummary s;
  s.trials = trials;
  for (const auto& r : results) {
    s.nondegenerate += r.nondegenerate;
    s.violations += !r.ok;
    s.max_perturbed_cells = std::max(s.max_perturbed_cells, r.cells);
    if (r.nondegenerate && r.ok) {
      const Fraction ratio = Fraction(std::max(r.found1, r.found2)) / Fraction(r.cells);
      s.worst_ratio = std::max(s.worst_ratio, ratio);
    }
  }
  s.max_delta = frac(s.max_perturbed_cells, N);
  return s;
}

CheckReport check_ps_corollary(const CyclicCode& code, std::size_t trials, std::uint64_t seed, int jobs) {
  const PsTrialSummary s = run_ps_corollary(code, trials, seed, jobs);
  const CodeFamily fam = CodeFamily::uniform(code, 2);
  CheckReport r = make_check(
      "ps_corollary", Fraction(static_cast<long long>(s.violations)), Fraction(0), describe(fam),
      std::to_string(s.trials) + " trials, " + std::to_string(s.nondegenerate) +
          " with delta(c1,c2) > 0, max delta " + to_string(s.max_delta) + ", worst found/delta " +
          to_string(s.worst_ratio) + " (bound 2)",
      "<=", "sampled");
  r.name = "ps_corollary_violations";
  return r;
}

PaperConstants paper_constants(int m, const Fraction& rho_r_T21) {
  if (m < 3) throw std::invalid_argument("constants are defined for m >= 3");
  PaperConstants c;
  c.m = m;
  c.M = (m - 2) * (m + 3) / 2;
  const Fraction twelve = pow(Fraction(12), static_cast<unsigned>(m - 2));
  c.alpha_r = rho_r_T21 / twelve * pow(frac(2, 3), static_cast<unsigned>(c.M));
  c.alpha_a = frac(2, 3) * c.alpha_r / (1 + c.alpha_r);
  const unsigned e = static_cast<unsigned>(c.M + 1);
  c.alpha = [e, twelve](const Fraction& rho) { return pow(rho, e) / (4 * twelve); };
  return c;
}

Fraction hyperplane_bound(const Fraction& delta, int k) { return pow(delta, static_cast<unsigned>(k)) / 12; }

Fraction robust_tm1_bound(const Fraction& rho_r_T21, const Fraction& delta, int m) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  const unsigned M = static_cast<unsigned>((m - 2) * (m + 3) / 2);
  return rho_r_T21 * pow(delta, M) / pow(Fraction(12), static_cast<unsigned>(m - 2));
}

CheckReport check_hyperplane_bound(const Code& code, int k, int jobs) {
  if (k < 2) throw std::invalid_argument("hyperplane test needs k >= 2");
  const CodeFamily fam = CodeFamily::uniform(code, k);
  const FlatTest t = FlatTest::make(fam.shape(), k - 1);
  const Fraction rr = rho_r_exact(t, fam, jobs).value;
  const Fraction d = known_relative_distance(code);
  return make_check("hyperplane_bound", rr, hyperplane_bound(d, k), describe(fam),
                    "rho_r(" + t.name() + ") >= delta^" + std::to_string(k) + " / 12, delta = " + to_string(d));
}

CheckReport check_robust_tm1(const Code& code, int m, int jobs) {
  const CodeFamily fam = CodeFamily::uniform(code, m);
  const CodeFamily fam2 = CodeFamily::uniform(code, 2);
  const Fraction rm = rho_r_exact(FlatTest::make(fam.shape(), 1), fam, jobs).value;
  const Fraction r2 = rho_r_exact(FlatTest::make(fam2.shape(), 1), fam2, jobs).value;
  const Fraction d = known_relative_distance(code);
  return make_check("robust_tm1", rm, robust_tm1_bound(r2, d, m), describe(fam),
                    "rho_r(T_" + std::to_string(m) + "^1) >= rho_r(T_2^1) delta^M / 12^(m-2), rho_r(T_2^1) = " +
                        to_string(r2));
}

CheckReport check_prop_main(const Code& code, int m, int jobs) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  const CodeFamily fam = CodeFamily::uniform(code, m);
  const Fraction rm = rho_r_exact(FlatTest::make(fam.shape(), 1), fam, jobs).value;
  const Fraction rho = rho_exact(fam).value;
  const unsigned M = static_cast<unsigned>((m - 2) * (m + 3) / 2);
  const Fraction bound = pow(rho, M + 1) / (4 * pow(Fraction(12), static_cast<unsigned>(m - 2)));
  return make_check("prop_main", rm, bound, describe(fam),
                    "rho_r(T_" + std::to_string(m) + "^1) >= rho^(M+1) / (4 * 12^(m-2)), rho = " + to_string(rho));
}

CheckReport check_monotonicity(const Code& code, int jobs) {
  (void)jobs;
  const Fraction r2 = rho_exact(CodeFamily::uniform(code, 2)).value;
  const Fraction r3 = rho_exact(CodeFamily::uniform(code, 3)).value;
  return make_check("monotonicity", r2, r3, describe(CodeFamily::uniform(code, 3)),
                    "rho(C, C) >= rho(C, C, C)");
}

}  // namespace prodexp
