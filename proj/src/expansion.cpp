#include "prodexp/expansion.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "prodexp/errors.hpp"
#include "prodexp/parallel.hpp"

namespace prodexp {

Fraction decomposition_cost(const Decomposition& d) {
  Fraction total = 0;
  for (std::size_t i = 0; i < d.parts.size(); ++i) total += line_weight(d.parts[i], static_cast<int>(i));
  return total;
}

bool is_valid_decomposition(const Decomposition& d, const TensorWord& word, const CodeFamily& family) {
  if (static_cast<int>(d.parts.size()) != family.dims()) return false;
  TensorWord sum(family.shape());
  for (int i = 0; i < family.dims(); ++i) {
    if (d.parts[i].shape() != family.shape() || !direction_contains(d.parts[i], family, i)) return false;
    sum = sum + d.parts[i];
  }
  return sum == word;
}

TensorWord counterexample_word(const Field& field) {
  const int n = field.group_order();
  if (n % 3 != 0) throw std::invalid_argument("counterexample needs 3 | q - 1");
  const long long k = n / 3;
  TensorWord a(Shape{n, n, n});
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int l = ((2 * n - i - j) % n);
      a.set(std::vector<int>{i, j, l}, field.omega_pow(-k * j - 2 * k * l));
    }
  }
  return a;
}

bool line_disjoint_support(const TensorWord& w) {
  for (int axis = 0; axis < w.dims(); ++axis) {
    const int len = w.shape()[axis];
    bool ok = true;
    for_each_line(w.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
      if (!ok) return;
      int hits = 0;
      for (int s = 0; s < len && hits < 2; ++s) hits += w[first + static_cast<std::size_t>(s) * stride] != 0;
      if (hits > 1) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<std::size_t> greedy_line_packing(const TensorWord& w) {
  const int m = w.dims();
  // used[axis] marks lines of that direction, indexed by the offset with the axis coordinate zeroed.
  std::vector<std::vector<bool>> used(m, std::vector<bool>(w.size(), false));
  std::vector<std::size_t> chosen;
  for (std::size_t off = 0; off < w.size(); ++off) {
    if (w[off] == 0) continue;
    std::vector<std::size_t> keys(m);
    bool free = true;
    for (int a = 0; a < m && free; ++a) {
      const std::size_t coord = (off / w.stride(a)) % static_cast<std::size_t>(w.shape()[a]);
      keys[a] = off - coord * w.stride(a);
      free = !used[a][keys[a]];
    }
    if (!free) continue;
    for (int a = 0; a < m; ++a) used[a][keys[a]] = true;
    chosen.push_back(off);
  }
  return chosen;
}

namespace {

std::size_t max_line_count(const Shape& shape) {
  std::size_t best = 0;
  for (int a = 0; a < static_cast<int>(shape.size()); ++a) best = std::max(best, line_count(shape, a));
  return best;
}

Fraction bound_from_cover(const TensorWord& w, std::size_t cover) {
  return norm(w) * Fraction(static_cast<long long>(max_line_count(w.shape()))) /
         Fraction(static_cast<long long>(cover));
}

}  // namespace

ExpansionCertificate certify_upper_bound(const TensorWord& w, const CodeFamily& family) {
  if (w.shape() != family.shape()) throw std::invalid_argument("witness shape does not match family");
  if (hamming_weight(w) == 0) throw std::invalid_argument("zero witness certifies nothing");
  if (!sum_contains(w, family)) throw std::invalid_argument("witness is not in the sum code");
  ExpansionCertificate cert;
  cert.witness = w;
  cert.line_disjoint = line_disjoint_support(w);
  cert.cover_lower_bound = cert.line_disjoint ? static_cast<std::size_t>(hamming_weight(w))
                                              : greedy_line_packing(w).size();
  cert.bound = bound_from_cover(w, cert.cover_lower_bound);
  return cert;
}

CertificateCheck verify_certificate(const ExpansionCertificate& cert, const CodeFamily& family) {
  const TensorWord& w = cert.witness;
  if (w.shape() != family.shape()) return {false, "witness shape does not match family"};
  if (hamming_weight(w) == 0) return {false, "witness is zero"};
  if (!sum_contains(w, family, SumMethod::DualTensor)) return {false, "witness fails a dual tensor check"};
  if (cert.cover_lower_bound == 0) return {false, "cover lower bound is zero"};
  if (cert.line_disjoint) {
    if (!line_disjoint_support(w)) return {false, "support is not line-disjoint"};
    if (cert.cover_lower_bound > static_cast<std::size_t>(hamming_weight(w))) {
      return {false, "cover lower bound exceeds the support size"};
    }
  } else if (cert.cover_lower_bound > greedy_line_packing(w).size()) {
    return {false, "cover lower bound exceeds the line-disjoint packing"};
  }
  if (cert.bound != bound_from_cover(w, cert.cover_lower_bound)) return {false, "bound does not match evidence"};
  return {true, "ok"};
}

namespace {

constexpr char kHex[] = "0123456789abcdef";

std::string hex(Elem v) {
  std::string s;
  if (v >= 16) s += kHex[v >> 4];
  s += kHex[v & 15];
  return s;
}

Elem parse_hex(const std::string& tok, int limit) {
  std::size_t used = 0;
  const unsigned long v = std::stoul(tok, &used, 16);
  if (used != tok.size() || v >= static_cast<unsigned long>(limit)) throw std::invalid_argument("bad entry: " + tok);
  return static_cast<Elem>(v);
}

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) return line;
  }
  throw std::invalid_argument("certificate is truncated");
}

}  // namespace

void write_certificate(std::ostream& out, const ExpansionCertificate& cert, const CodeFamily& family) {
  out << "certificate v1\n";
  out << "field 2^" << family.field().degree() << '\n';
  for (const auto& code : family.codes()) {
    if (const CyclicCode* c = cyclic_of(code)) {
      out << "code cyclic " << c->length();
      for (Elem v : c->check_poly().coeffs()) out << ' ' << hex(v);
    } else {
      const LinearCode& lin = linear_of(code);
      out << "code linear " << lin.length() << ' ' << lin.dimension();
      for (const auto& row : lin.generator()) {
        for (Elem v : row) out << ' ' << hex(v);
      }
    }
    out << '\n';
  }
  out << "bound " << to_string(cert.bound) << '\n';
  out << "line_disjoint " << (cert.line_disjoint ? 1 : 0) << '\n';
  out << "cover_lower_bound " << cert.cover_lower_bound << '\n';
  out << "witness\n";
  write_tensor(out, cert.witness, family.field());
  out << "end\n";
}

ParsedCertificate read_certificate(std::istream& in) {
  if (next_line(in) != "certificate v1") throw std::invalid_argument("not a v1 certificate");
  std::istringstream fl(next_line(in));
  std::string tok, deg;
  fl >> tok >> deg;
  if (tok != "field" || deg.rfind("2^", 0) != 0) throw std::invalid_argument("expected 'field 2^d'");
  const Field field = Field::make(std::stoi(deg.substr(2)));

  std::vector<Code> codes;
  std::string line = next_line(in);
  while (line.rfind("code ", 0) == 0) {
    std::istringstream cl(line);
    std::string kind;
    int n = 0;
    cl >> tok >> kind >> n;
    if (kind == "cyclic") {
      std::vector<Elem> coeffs;
      while (cl >> tok) coeffs.push_back(parse_hex(tok, field.size()));
      codes.emplace_back(CyclicCode(field, n, Poly(coeffs)));
    } else if (kind == "linear") {
      int k = 0;
      cl >> k;
      Matrix rows(k, Word(n));
      for (auto& row : rows) {
        for (auto& v : row) {
          if (!(cl >> tok)) throw std::invalid_argument("generator matrix is truncated");
          v = parse_hex(tok, field.size());
        }
      }
      codes.emplace_back(LinearCode::from_generator(field, n, rows));
    } else {
      throw std::invalid_argument("unknown code kind: " + kind);
    }
    line = next_line(in);
  }
  if (codes.empty()) throw std::invalid_argument("certificate lists no codes");

  ExpansionCertificate cert;
  auto field_value = [&](const std::string& key) {
    std::istringstream ls(line);
    std::string name, value;
    ls >> name >> value;
    if (name != key) throw std::invalid_argument("expected '" + key + "'");
    line = next_line(in);
    return value;
  };
  cert.bound = parse_fraction(field_value("bound"));
  cert.line_disjoint = field_value("line_disjoint") == "1";
  cert.cover_lower_bound = std::stoull(field_value("cover_lower_bound"));
  if (line != "witness") throw std::invalid_argument("expected 'witness'");
  ParsedTensor t = read_tensor(in);
  if (t.field_degree != field.degree()) throw std::invalid_argument("witness field differs from family field");
  cert.witness = std::move(t.word);
  if (next_line(in) != "end") throw std::invalid_argument("expected 'end'");
  return {std::move(cert), CodeFamily(std::move(codes))};
}

AmbiguitySpace::AmbiguitySpace(const CodeFamily& family, std::size_t max_columns) : family_(family) {
  const Shape shape = family.shape();
  const std::size_t n_cells = shape_size(shape);
  std::size_t cols = 0;
  for (int a = 0; a < family.dims(); ++a) {
    offsets_.push_back(static_cast<int>(cols));
    cols += line_count(shape, a) * static_cast<std::size_t>(dimension_of(family.code(a)));
  }
  if (cols > max_columns || n_cells > max_columns) {
    throw LimitExceeded("ambiguity space needs a " + std::to_string(n_cells) + " x " + std::to_string(cols) +
                        " system");
  }
  columns_ = static_cast<int>(cols);
  phi_rows_.assign(n_cells, Word(cols, 0));
  for (int a = 0; a < family.dims(); ++a) {
    const Matrix& gen = linear_of(family.code(a)).generator();
    const int k = static_cast<int>(gen.size());
    for_each_line(shape, a, [&](std::size_t line, std::size_t first, std::size_t stride) {
      for (int r = 0; r < k; ++r) {
        const std::size_t col = offsets_[a] + line * k + r;
        for (int s = 0; s < shape[a]; ++s) phi_rows_[first + s * stride][col] = gen[r][s];
      }
    });
  }
  const Field& f = family.field();
  image_pivots_ = row_reduce(phi_rows_, f).pivots;
  kernel_ = null_space(phi_rows_, columns_, f);

  std::uint64_t l = 1;
  for (int a = 0; a < family.dims(); ++a) l = std::lcm(l, static_cast<std::uint64_t>(line_count(shape, a)));
  denominator_ = l;
  for (int a = 0; a < family.dims(); ++a) scale_.push_back(l / line_count(shape, a));
}

Word AmbiguitySpace::particular(const TensorWord& word) const {
  if (word.shape() != family_.shape()) throw std::invalid_argument("word shape does not match family");
  auto x = solve(phi_rows_, word.entries(), columns_, family_.field());
  if (!x) throw std::invalid_argument("word is not in the sum code; no decomposition exists");
  return *x;
}

Decomposition AmbiguitySpace::parts(std::span<const Elem> coeffs) const {
  const Shape shape = family_.shape();
  Decomposition d;
  for (int a = 0; a < family_.dims(); ++a) {
    const LinearCode& lin = linear_of(family_.code(a));
    const int k = lin.dimension();
    TensorWord part(shape);
    for_each_line(shape, a, [&](std::size_t line, std::size_t first, std::size_t stride) {
      auto msg = coeffs.subspan(offsets_[a] + line * k, k);
      if (std::all_of(msg.begin(), msg.end(), [](Elem v) { return v == 0; })) return;
      set_line(part, a, first, stride, lin.encode(msg));
    });
    d.parts.push_back(std::move(part));
  }
  return d;
}

TensorWord AmbiguitySpace::image(std::span<const Elem> coeffs) const {
  TensorWord sum(family_.shape());
  for (const auto& p : parts(coeffs).parts) sum = sum + p;
  return sum;
}

std::uint64_t AmbiguitySpace::scaled_cost(std::span<const Elem> coeffs) const {
  std::uint64_t total = 0;
  const Shape shape = family_.shape();
  for (int a = 0; a < family_.dims(); ++a) {
    const std::size_t k = static_cast<std::size_t>(dimension_of(family_.code(a)));
    const std::size_t lines = line_count(shape, a);
    std::uint64_t nonzero = 0;
    for (std::size_t line = 0; line < lines; ++line) {
      const Elem* p = coeffs.data() + offsets_[a] + line * k;
      for (std::size_t r = 0; r < k; ++r) {
        if (p[r]) {
          ++nonzero;
          break;
        }
      }
    }
    total += nonzero * scale_[a];
  }
  return total;
}

namespace {

std::uint64_t checked_power(int q, int e, std::uint64_t limit, const char* what) {
  std::uint64_t v = 1;
  for (int i = 0; i < e; ++i) {
    if (v > limit / static_cast<std::uint64_t>(q)) throw LimitExceeded(std::string(what) + " exceeds the enumeration limit");
    v *= static_cast<std::uint64_t>(q);
  }
  return v;
}

// x ^= c * z
void axpy(Word& x, Elem c, const Word& z, const Field& f) {
  if (c == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i) x[i] ^= f.mul(c, z[i]);
}

// Minimum cost over x0 + span(kernel), first minimizer in enumeration order.
std::pair<std::uint64_t, Word> coset_minimum(const AmbiguitySpace& space, const Word& x0) {
  const Field& f = space.family().field();
  const int q = f.size();
  const Matrix& ker = space.kernel();
  const int dim = space.dimension();
  Word x = x0;
  std::vector<int> digits(dim, 0);
  std::uint64_t best = space.scaled_cost(x);
  Word best_x = x;
  while (true) {
    int i = 0;
    for (; i < dim; ++i) {
      const int old = digits[i];
      const int now = (old + 1) % q;
      digits[i] = now;
      axpy(x, static_cast<Elem>(old ^ now), ker[i], f);
      if (now != 0) break;
    }
    if (i == dim) break;
    const std::uint64_t c = space.scaled_cost(x);
    if (c < best) {
      best = c;
      best_x = x;
    }
  }
  return {best, best_x};
}

std::pair<std::uint64_t, Word> local_search(const AmbiguitySpace& space, const Word& x0, std::uint64_t seed) {
  const Field& f = space.family().field();
  const int q = f.size();
  const Matrix& ker = space.kernel();
  std::uint64_t best = space.scaled_cost(x0);
  Word best_x = x0;
  for (int restart = 0; restart < 8; ++restart) {
    Word x = x0;
    std::seed_seq ss{seed, static_cast<std::uint64_t>(restart)};
    std::mt19937_64 rng(ss);
    if (restart > 0) {
      for (const auto& z : ker) axpy(x, static_cast<Elem>(rng() % q), z, f);
    }
    std::uint64_t cost = space.scaled_cost(x);
    bool improved = true;
    while (improved) {
      improved = false;
      for (const auto& z : ker) {
        for (int lam = 1; lam < q; ++lam) {
          Word y = x;
          axpy(y, static_cast<Elem>(lam), z, f);
          const std::uint64_t c = space.scaled_cost(y);
          if (c < cost) {
            cost = c;
            x = std::move(y);
            improved = true;
          }
        }
      }
    }
    if (cost < best) {
      best = cost;
      best_x = std::move(x);
    }
  }
  return {best, best_x};
}

DecompositionResult finish(const AmbiguitySpace& space, const TensorWord& word, std::uint64_t cost, const Word& x,
                           bool exact) {
  DecompositionResult r;
  r.decomposition = space.parts(x);
  r.cost = Fraction(static_cast<long long>(cost)) / Fraction(static_cast<long long>(space.cost_denominator()));
  r.exact = exact;
  if (!is_valid_decomposition(r.decomposition, word, space.family()) || decomposition_cost(r.decomposition) != r.cost) {
    throw std::logic_error("decomposition failed revalidation");
  }
  return r;
}

}  // namespace

DecompositionResult min_decomposition(const TensorWord& word, const AmbiguitySpace& space,
                                      DecompositionStrategy strategy, std::uint64_t seed) {
  const Word x0 = space.particular(word);
  if (strategy == DecompositionStrategy::Exhaustive) {
    checked_power(space.family().field().size(), space.dimension(), 1u << 24, "ambiguity space");
    auto [cost, x] = coset_minimum(space, x0);
    return finish(space, word, cost, x, true);
  }
  auto [cost, x] = local_search(space, x0, seed);
  return finish(space, word, cost, x, false);
}

DecompositionResult min_decomposition(const TensorWord& word, const CodeFamily& family, DecompositionStrategy strategy,
                                      std::uint64_t seed) {
  return min_decomposition(word, AmbiguitySpace(family), strategy, seed);
}

RhoExact rho_exact(const CodeFamily& family) {
  AmbiguitySpace space(family);
  const int q = family.field().size();
  const std::uint64_t words = checked_power(q, space.sum_dimension(), 1u << 20, "sum code");
  checked_power(q, space.dimension(), 1u << 24, "ambiguity space");
  if (words <= 1) throw Undefined("sum code has no nonzero word");
  const auto& pivots = space.image_pivots();
  const std::uint64_t N = shape_size(family.shape());
  const std::uint64_t den = space.cost_denominator();

  bool have = false;
  std::uint64_t best_num = 0, best_den = 1;
  RhoExact out;
  Word x0(space.coefficient_count(), 0);
  for (std::uint64_t idx = 1; idx < words; ++idx) {
    std::uint64_t r = idx;
    for (std::size_t j = 0; j < pivots.size(); ++j) {
      x0[pivots[j]] = static_cast<Elem>(r % q);
      r /= q;
    }
    const TensorWord c = space.image(x0);
    auto [cost, x] = coset_minimum(space, x0);
    // ratio = (|c| / N) / (cost / den) = |c| den / (N cost)
    const std::uint64_t num = static_cast<std::uint64_t>(hamming_weight(c)) * den;
    const std::uint64_t dd = N * cost;
    if (!have || static_cast<unsigned __int128>(num) * best_den < static_cast<unsigned __int128>(best_num) * dd) {
      have = true;
      best_num = num;
      best_den = dd;
      out.minimizer = c;
      out.decomposition = space.parts(x);
    }
  }
  out.value = Fraction(static_cast<long long>(best_num)) / Fraction(static_cast<long long>(best_den));
  return out;
}

namespace {

// sum over axes of prod w^{-k r i_r} on {i : i_1 + ... + i_m = 0 mod n}
TensorWord generalized_diagonal(const CodeFamily& family) {
  const Field& f = family.field();
  const int m = family.dims();
  const int n = length_of(family.code(0));
  const long long k = dimension_of(family.code(0));
  TensorWord w(family.shape());
  std::vector<int> idx(m, 0);
  for (std::size_t off = 0; off < w.size(); ++off) {
    std::size_t r = off;
    for (int a = m - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % n);
      r /= n;
    }
    long long s = 0, e = 0;
    for (int a = 0; a < m; ++a) {
      s += idx[a];
      e -= k * a * idx[a];
    }
    if (s % n == 0) w[off] = f.omega_pow(e);
  }
  return w;
}

struct Candidate {
  TensorWord word;
  std::optional<Fraction> known_cost;  // cost of a decomposition we built it from
};

Candidate random_candidate(const CodeFamily& family, std::uint64_t seed, std::size_t index) {
  std::seed_seq ss{seed, static_cast<std::uint64_t>(index)};
  std::mt19937_64 rng(ss);
  const Shape shape = family.shape();
  const int m = family.dims();
  Decomposition d;
  for (int a = 0; a < m; ++a) d.parts.emplace_back(shape);
  const unsigned mask = static_cast<unsigned>(family.field().size() - 1);
  auto plant_line = [&](int axis, std::size_t line_no) {
    const LinearCode& lin = linear_of(family.code(axis));
    Word msg(lin.dimension());
    for (auto& v : msg) v = static_cast<Elem>(rng() & mask);
    for_each_line(shape, axis, [&](std::size_t line, std::size_t first, std::size_t stride) {
      if (line == line_no) set_line(d.parts[axis], axis, first, stride, lin.encode(msg));
    });
  };
  switch (index % 3) {
    case 0:
      for (int a = 0; a < m; ++a) d.parts[a] = random_direction_codeword(family, a, rng);
      break;
    case 1: {
      const int lines = 1 + static_cast<int>(rng() % 3);
      for (int t = 0; t < lines; ++t) {
        const int axis = static_cast<int>(rng() % m);
        plant_line(axis, rng() % line_count(shape, axis));
      }
      break;
    }
    default: {
      // Cross: one line per axis through a common random point.
      std::vector<int> point(m);
      for (int a = 0; a < m; ++a) point[a] = static_cast<int>(rng() % shape[a]);
      for (int a = 0; a < m; ++a) {
        std::vector<int> base = point;
        base[a] = 0;
        std::size_t target = 0;
        for_each_line(shape, a, [&](std::size_t line, std::size_t first, std::size_t) {
          if (first == d.parts[a].offset(base)) target = line;
        });
        plant_line(a, target);
      }
    }
  }
  TensorWord sum(shape);
  for (const auto& p : d.parts) sum = sum + p;
  return {std::move(sum), decomposition_cost(d)};
}

}  // namespace

RhoSampled rho_upper_sampled(const CodeFamily& family, std::size_t samples, std::uint64_t seed, int jobs) {
  if (samples == 0) throw std::invalid_argument("rho_upper_sampled needs at least one sample");
  std::vector<Candidate> fixed;
  RhoSampled out;
  const Code& c0 = family.code(0);
  if (family.dims() == 3 && family.same_code_everywhere() && is_primitive_rs(c0) && length_of(c0) % 3 == 0 &&
      3 * dimension_of(c0) == length_of(c0)) {
    fixed.push_back({counterexample_word(family.field()), std::nullopt});
    out.counterexample_in_pool = true;
  }
  if (family.equal_length_cyclic() && family.same_code_everywhere()) {
    TensorWord diag = generalized_diagonal(family);
    if (sum_contains(diag, family) && !(out.counterexample_in_pool && diag == fixed.front().word)) {
      fixed.push_back({std::move(diag), std::nullopt});
    }
  }

  std::optional<AmbiguitySpace> space;
  bool exhaustive = false;
  try {
    space.emplace(family, 1024);
    std::uint64_t v = 1;
    for (int i = 0; i < space->dimension() && v <= (1u << 16); ++i) v *= family.field().size();
    exhaustive = v <= (1u << 16);
  } catch (const LimitExceeded&) {
  }

  const std::size_t total = fixed.size() + samples;
  struct Ratio {
    std::optional<Fraction> certified, heuristic;
  };
  std::vector<Ratio> ratios(total);
  parallel_for(total, jobs, [&](std::size_t i) {
    Candidate cand = i < fixed.size() ? fixed[i] : random_candidate(family, seed, i - fixed.size());
    const TensorWord& w = cand.word;
    if (hamming_weight(w) == 0) return;
    const Fraction nw = norm(w);
    Fraction lower = Fraction(static_cast<long long>(certify_upper_bound(w, family).cover_lower_bound)) /
                     Fraction(static_cast<long long>(max_line_count(w.shape())));
    std::optional<Fraction> found = cand.known_cost;
    if (space) {
      DecompositionResult r = min_decomposition(
          w, *space, exhaustive ? DecompositionStrategy::Exhaustive : DecompositionStrategy::LocalSearch, seed);
      if (r.exact) lower = std::max(lower, r.cost);
      if (!found || r.cost < *found) found = r.cost;
    }
    ratios[i].certified = nw / lower;
    if (found) ratios[i].heuristic = nw / *found;
  });

  bool have_c = false, have_h = false;
  for (const auto& r : ratios) {
    if (r.certified && (!have_c || *r.certified < out.certified_upper)) {
      out.certified_upper = *r.certified;
      have_c = true;
    }
    if (r.heuristic && (!have_h || *r.heuristic < out.heuristic)) {
      out.heuristic = *r.heuristic;
      have_h = true;
    }
    out.pool_size += r.certified.has_value();
  }
  if (!have_c) throw Undefined("sample pool contained only zero words");
  if (!have_h) out.heuristic = out.certified_upper;
  return out;
}

}  // namespace prodexp
