#include "prodexp/tensor.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "prodexp/errors.hpp"

namespace prodexp {

std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

TensorWord::TensorWord(Shape shape) : TensorWord(shape, std::vector<Elem>(shape_size(shape), 0)) {}

TensorWord::TensorWord(Shape shape, std::vector<Elem> entries) : shape_(std::move(shape)), entries_(std::move(entries)) {
  if (shape_.empty()) throw std::invalid_argument("tensor shape must have at least one axis");
  for (int s : shape_) {
    if (s < 1) throw std::invalid_argument("tensor side lengths must be positive");
  }
  if (entries_.size() != shape_size(shape_)) throw std::invalid_argument("entry count does not match shape");
  strides_.assign(shape_.size(), 1);
  for (int i = static_cast<int>(shape_.size()) - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * shape_[i + 1];
}

std::size_t TensorWord::offset(std::span<const int> index) const {
  if (index.size() != shape_.size()) throw std::invalid_argument("index rank mismatch");
  std::size_t off = 0;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= shape_[i]) throw std::out_of_range("tensor index out of range");
    off += strides_[i] * static_cast<std::size_t>(index[i]);
  }
  return off;
}

TensorWord operator+(const TensorWord& a, const TensorWord& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("adding tensors of different shapes");
  TensorWord out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= b[i];
  return out;
}

int hamming_weight(const TensorWord& w) { return weight(w.entries()); }

int hamming_distance(const TensorWord& a, const TensorWord& b) {
  if (a.shape() != b.shape()) throw std::invalid_argument("distance between tensors of different shapes");
  return hamming_distance(a.entries(), b.entries());
}

Fraction norm(const TensorWord& w) { return frac(hamming_weight(w), static_cast<std::int64_t>(w.size())); }

std::size_t line_count(const Shape& shape, int axis) {
  return shape_size(shape) / static_cast<std::size_t>(shape.at(axis));
}

Word line_values(const TensorWord& w, int axis, std::size_t first, std::size_t stride) {
  Word out(w.shape()[axis]);
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = w[first + s * stride];
  return out;
}

void set_line(TensorWord& w, int axis, std::size_t first, std::size_t stride, std::span<const Elem> values) {
  for (int s = 0; s < w.shape()[axis]; ++s) w[first + static_cast<std::size_t>(s) * stride] = values[s];
}

std::size_t nonzero_lines(const TensorWord& w, int axis) {
  std::size_t count = 0;
  const int len = w.shape().at(axis);
  for_each_line(w.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
    for (int s = 0; s < len; ++s) {
      if (w[first + static_cast<std::size_t>(s) * stride] != 0) {
        ++count;
        return;
      }
    }
  });
  return count;
}

Fraction line_weight(const TensorWord& w, int axis) {
  if (axis < 0 || axis >= w.dims()) throw std::out_of_range("axis out of range");
  return frac(static_cast<std::int64_t>(nonzero_lines(w, axis)),
              static_cast<std::int64_t>(line_count(w.shape(), axis)));
}

std::size_t Flat::cell_count(const Shape& shape) const {
  std::size_t n = 1;
  for (int a : free_axes) n *= static_cast<std::size_t>(shape[a]);
  return n;
}

namespace {

// Row-major iteration over all index tuples of `shape` with the given axes pinned to zero.
template <typename Fn>
void for_each_index(const Shape& shape, const std::vector<bool>& pinned, Fn&& fn) {
  std::vector<int> idx(shape.size(), 0);
  while (true) {
    fn(static_cast<const std::vector<int>&>(idx));
    int i = static_cast<int>(shape.size()) - 1;
    for (; i >= 0; --i) {
      if (pinned[i]) continue;
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
    if (i < 0) return;
  }
}

void combinations(int m, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> c(k);
  std::iota(c.begin(), c.end(), 0);
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == m - k + i) --i;
    if (i < 0) return;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

}  // namespace

std::vector<WeightedFlat> enumerate_flats(const Shape& shape, int k) {
  const int m = static_cast<int>(shape.size());
  if (k < 1 || k > m - 1) throw std::invalid_argument("flat dimension must lie in [1, m-1]");
  std::vector<std::vector<int>> dirs;
  combinations(m, k, dirs);
  std::vector<WeightedFlat> out;
  std::size_t total = 0;
  for (const auto& axes : dirs) {
    std::vector<bool> pinned(m, false);
    for (int a : axes) pinned[a] = true;
    for_each_index(shape, pinned, [&](const std::vector<int>& base) {
      Flat f{axes, base};
      total += f.cell_count(shape);
      out.push_back({std::move(f), Fraction(0)});
    });
  }
  for (auto& wf : out) {
    wf.weight = frac(static_cast<std::int64_t>(wf.flat.cell_count(shape)), static_cast<std::int64_t>(total));
  }
  return out;
}

TensorWord restrict(const TensorWord& w, const Flat& flat) {
  const int m = w.dims();
  if (static_cast<int>(flat.base.size()) != m) throw std::invalid_argument("flat rank does not match word");
  std::vector<bool> free(m, false);
  Shape sub_shape;
  for (std::size_t i = 0; i < flat.free_axes.size(); ++i) {
    const int a = flat.free_axes[i];
    if (a < 0 || a >= m || free[a] || (i > 0 && a <= flat.free_axes[i - 1])) {
      throw std::invalid_argument("flat free axes must be distinct, ascending and in range");
    }
    free[a] = true;
    sub_shape.push_back(w.shape()[a]);
  }
  for (int i = 0; i < m; ++i) {
    if (flat.base[i] < 0 || flat.base[i] >= w.shape()[i] || (free[i] && flat.base[i] != 0)) {
      throw std::invalid_argument("flat base point is incompatible with the shape");
    }
  }
  if (sub_shape.empty()) return TensorWord(Shape{1}, {w.at(flat.base)});
  TensorWord out(sub_shape);
  std::vector<bool> pinned(m, true);
  for (int a : flat.free_axes) pinned[a] = false;
  std::size_t k = 0;
  for_each_index(w.shape(), pinned, [&](const std::vector<int>& idx) {
    std::vector<int> full(idx);
    for (int i = 0; i < m; ++i) {
      if (!free[i]) full[i] = flat.base[i];
    }
    out[k++] = w.at(full);
  });
  return out;
}

TensorWord apply_along_axis(const TensorWord& w, int axis, const Matrix& rows, const Field& field) {
  Shape out_shape = w.shape();
  out_shape[axis] = static_cast<int>(rows.size());
  if (rows.empty()) {
    // No rows: the image is the zero-dimensional space along this axis.
    return TensorWord();
  }
  TensorWord out(out_shape);
  const int len = w.shape()[axis];
  for_each_line(w.shape(), axis, [&](std::size_t line, std::size_t first, std::size_t stride) {
    (void)line;
    // Same outer/inner position in the output, with the output stride.
    const std::size_t inner = stride;
    const std::size_t block = inner * static_cast<std::size_t>(len);
    const std::size_t outer = first / block;
    const std::size_t in = first % block;
    const std::size_t out_first = outer * inner * rows.size() + in;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      Elem acc = 0;
      for (int t = 0; t < len; ++t) acc ^= field.mul(rows[j][t], w[first + static_cast<std::size_t>(t) * stride]);
      out[out_first + j * stride] = acc;
    }
  });
  return out;
}

CodeFamily::CodeFamily(std::vector<Code> codes, std::vector<std::shared_ptr<const LineDecoder>> decoders)
    : codes_(std::move(codes)), decoders_(std::move(decoders)) {}

CodeFamily::CodeFamily(std::vector<Code> codes) : codes_(std::move(codes)) {
  if (codes_.empty()) throw std::invalid_argument("code family must be nonempty");
  for (const auto& c : codes_) {
    if (!(field_of(c) == field_of(codes_.front()))) throw std::invalid_argument("family codes use different fields");
  }
  // Share decoders between identical codes.
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    std::shared_ptr<const LineDecoder> dec;
    for (std::size_t j = 0; j < i; ++j) {
      if (linear_of(codes_[j]).generator() == linear_of(codes_[i]).generator() &&
          length_of(codes_[j]) == length_of(codes_[i])) {
        dec = decoders_[j];
        break;
      }
    }
    if (!dec) dec = std::make_shared<const LineDecoder>(codes_[i]);
    decoders_.push_back(std::move(dec));
  }
}

CodeFamily CodeFamily::uniform(const Code& code, int m) {
  if (m < 1) throw std::invalid_argument("family needs at least one axis");
  return CodeFamily(std::vector<Code>(m, code));
}

Shape CodeFamily::shape() const {
  Shape s;
  for (const auto& c : codes_) s.push_back(length_of(c));
  return s;
}

CodeFamily CodeFamily::restrict_axes(std::span<const int> axes) const {
  std::vector<Code> codes;
  std::vector<std::shared_ptr<const LineDecoder>> decs;
  for (int a : axes) {
    codes.push_back(codes_.at(a));
    decs.push_back(decoders_.at(a));
  }
  if (codes.empty()) throw std::invalid_argument("restricted family needs at least one axis");
  return CodeFamily(std::move(codes), std::move(decs));
}

bool CodeFamily::equal_length_cyclic() const {
  for (const auto& c : codes_) {
    if (!cyclic_of(c) || length_of(c) != length_of(codes_.front())) return false;
  }
  return true;
}

bool CodeFamily::same_code_everywhere() const {
  for (const auto& c : codes_) {
    if (length_of(c) != length_of(codes_.front()) ||
        linear_of(c).generator() != linear_of(codes_.front()).generator()) {
      return false;
    }
  }
  return true;
}

namespace {

void require_family_shape(const TensorWord& w, const CodeFamily& family) {
  if (w.shape() != family.shape()) throw std::invalid_argument("word shape does not match code family");
}

}  // namespace

bool direction_contains(const TensorWord& w, const CodeFamily& family, int axis) {
  require_family_shape(w, family);
  bool ok = true;
  for_each_line(w.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
    if (ok && !code_contains(family.code(axis), line_values(w, axis, first, stride))) ok = false;
  });
  return ok;
}

bool product_contains(const TensorWord& w, const CodeFamily& family) {
  for (int axis = 0; axis < family.dims(); ++axis) {
    if (!direction_contains(w, family, axis)) return false;
  }
  return true;
}

bool sum_contains(const TensorWord& w, const CodeFamily& family, SumMethod method) {
  require_family_shape(w, family);
  if (method == SumMethod::Auto) {
    method = family.equal_length_cyclic() ? SumMethod::CheckPoly : SumMethod::DualTensor;
  }
  const Field& field = family.field();
  if (method == SumMethod::CheckPoly) {
    if (!family.equal_length_cyclic()) {
      throw std::invalid_argument("check-polynomial membership needs equal-length cyclic codes");
    }
    MultiPoly acc = to_multipoly(w);
    const int m = family.dims();
    const int n = length_of(family.code(0));
    for (int i = 0; i < m && !acc.is_zero(); ++i) {
      MultiPoly p = MultiPoly::from_univariate(cyclic_of(family.code(i))->check_poly(), m, n, i);
      acc = poly_mul_mod_ideal(acc, p, field);
    }
    return acc.is_zero();
  }
  // Coordinates of w against the tensor basis h_1 (x) ... (x) h_m of the dual product.
  TensorWord acc = w;
  for (int axis = 0; axis < family.dims(); ++axis) {
    const Matrix& parity = linear_of(family.code(axis)).parity();
    if (parity.empty()) return true;
    acc = apply_along_axis(acc, axis, parity, field);
  }
  return hamming_weight(acc) == 0;
}

DirectionalNearest nearest_in_direction(const TensorWord& w, const CodeFamily& family, int axis) {
  require_family_shape(w, family);
  if (axis < 0 || axis >= family.dims()) throw std::out_of_range("axis out of range");
  DirectionalNearest out{w, 0};
  const LineDecoder& dec = family.decoder(axis);
  for_each_line(w.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
    Decoded d = dec.decode(line_values(w, axis, first, stride));
    set_line(out.word, axis, first, stride, d.codeword);
    out.distance += d.distance;
  });
  return out;
}

TensorWord encode_product(const TensorWord& message, const CodeFamily& family) {
  Shape expect;
  for (const auto& c : family.codes()) expect.push_back(dimension_of(c));
  if (message.shape() != expect) throw std::invalid_argument("message shape must be (k_1, ..., k_m)");
  TensorWord acc = message;
  for (int axis = 0; axis < family.dims(); ++axis) {
    const LinearCode& lin = linear_of(family.code(axis));
    Matrix transposed(lin.length(), Word(lin.dimension(), 0));
    for (int r = 0; r < lin.dimension(); ++r) {
      for (int j = 0; j < lin.length(); ++j) transposed[j][r] = lin.generator()[r][j];
    }
    acc = apply_along_axis(acc, axis, transposed, family.field());
  }
  return acc;
}

TensorWord random_word(const Shape& shape, const Field& field, std::mt19937_64& rng) {
  TensorWord w(shape);
  const unsigned mask = static_cast<unsigned>(field.size() - 1);
  for (auto& e : w.entries()) e = static_cast<Elem>(rng() & mask);
  return w;
}

TensorWord random_product_codeword(const CodeFamily& family, std::mt19937_64& rng) {
  Shape ks;
  for (const auto& c : family.codes()) ks.push_back(dimension_of(c));
  for (int k : ks) {
    if (k == 0) return TensorWord(family.shape());
  }
  return encode_product(random_word(ks, family.field(), rng), family);
}

TensorWord random_direction_codeword(const CodeFamily& family, int axis, std::mt19937_64& rng) {
  const LinearCode& lin = linear_of(family.code(axis));
  TensorWord w(family.shape());
  const unsigned mask = static_cast<unsigned>(family.field().size() - 1);
  Word msg(lin.dimension());
  for_each_line(w.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
    for (auto& v : msg) v = static_cast<Elem>(rng() & mask);
    set_line(w, axis, first, stride, lin.encode(msg));
  });
  return w;
}

std::vector<TensorWord> product_codewords(const CodeFamily& family, std::uint64_t limit) {
  Shape ks;
  int dim = 1;
  for (const auto& c : family.codes()) {
    ks.push_back(dimension_of(c));
    dim *= dimension_of(c);
  }
  const int q = family.field().size();
  std::uint64_t count = 1;
  for (int i = 0; i < dim; ++i) {
    if (count > limit / static_cast<std::uint64_t>(q)) {
      throw LimitExceeded("product code has more than " + std::to_string(limit) + " codewords");
    }
    count *= static_cast<std::uint64_t>(q);
  }
  std::vector<TensorWord> out;
  if (dim == 0) {
    out.emplace_back(family.shape());
    return out;
  }
  out.reserve(count);
  TensorWord msg(ks);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    std::uint64_t r = idx;
    for (int j = dim - 1; j >= 0; --j) {
      msg[static_cast<std::size_t>(j)] = static_cast<Elem>(r % static_cast<std::uint64_t>(q));
      r /= static_cast<std::uint64_t>(q);
    }
    out.push_back(encode_product(msg, family));
  }
  return out;
}

MultiPoly to_multipoly(const TensorWord& w) {
  const int n = w.shape().front();
  for (int s : w.shape()) {
    if (s != n) throw std::invalid_argument("polynomial view needs equal side lengths");
  }
  MultiPoly p(w.dims(), n);
  // Row-major offsets coincide with the packed exponent keys.
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0) p.set_packed(i, w[i]);
  }
  return p;
}

TensorWord from_multipoly(const MultiPoly& p) {
  TensorWord w(Shape(p.num_vars(), p.period()));
  for (const auto& [key, v] : p.packed_terms()) w[key] = v;
  return w;
}

void write_tensor(std::ostream& out, const TensorWord& w, const Field& field) {
  out << "shape";
  for (int s : w.shape()) out << ' ' << s;
  out << " field 2^" << field.degree() << '\n';
  const int row = w.shape().back();
  static constexpr char kHex[] = "0123456789abcdef";
  for (std::size_t i = 0; i < w.size(); i += static_cast<std::size_t>(row)) {
    for (int j = 0; j < row; ++j) {
      const Elem v = w[i + static_cast<std::size_t>(j)];
      if (j) out << ' ';
      if (v >= 16) out << kHex[v >> 4];
      out << kHex[v & 15];
    }
    out << '\n';
  }
}

std::string format_tensor(const TensorWord& w, const Field& field) {
  std::ostringstream os;
  write_tensor(os, w, field);
  return os.str();
}

ParsedTensor read_tensor(std::istream& in) {
  std::string header;
  while (header.empty() && std::getline(in, header)) {
  }
  std::istringstream hs(header);
  std::string tok;
  hs >> tok;
  if (tok != "shape") throw std::invalid_argument("tensor header must start with 'shape'");
  Shape shape;
  ParsedTensor out;
  while (hs >> tok) {
    if (tok == "field") {
      std::string f;
      hs >> f;
      if (f.rfind("2^", 0) != 0) throw std::invalid_argument("field must be written as 2^d");
      out.field_degree = std::stoi(f.substr(2));
      break;
    }
    shape.push_back(std::stoi(tok));
  }
  if (shape.empty() || out.field_degree == 0) throw std::invalid_argument("malformed tensor header: " + header);
  TensorWord w(shape);
  const int row = shape.back();
  const int limit = 1 << out.field_degree;
  for (std::size_t i = 0; i < w.size(); i += static_cast<std::size_t>(row)) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("tensor body is truncated");
    std::istringstream ls(line);
    for (int j = 0; j < row; ++j) {
      std::string hex;
      if (!(ls >> hex)) throw std::invalid_argument("tensor row is too short");
      std::size_t used = 0;
      const unsigned long v = std::stoul(hex, &used, 16);
      if (used != hex.size() || v >= static_cast<unsigned long>(limit)) {
        throw std::invalid_argument("bad tensor entry: " + hex);
      }
      w[i + static_cast<std::size_t>(j)] = static_cast<Elem>(v);
    }
    std::string extra;
    if (ls >> extra) throw std::invalid_argument("tensor row is too long");
  }
  out.word = std::move(w);
  return out;
}

}  // namespace prodexp
