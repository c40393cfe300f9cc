#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "prodexp/codes.hpp"
#include "prodexp/poly.hpp"
#include "prodexp/rational.hpp"

namespace prodexp {

using Shape = std::vector<int>;

std::size_t shape_size(const Shape& shape);

// Word on the grid [n_1] x ... x [n_m], stored row-major (last index fastest).
// Index (i_1, ..., i_m) is zero-based; a line in direction j varies only i_j.
class TensorWord {
 public:
  TensorWord() = default;
  explicit TensorWord(Shape shape);
  TensorWord(Shape shape, std::vector<Elem> entries);

  const Shape& shape() const { return shape_; }
  int dims() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Elem>& entries() const { return entries_; }
  std::vector<Elem>& entries() { return entries_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::size_t offset(std::span<const int> index) const;
  Elem at(std::span<const int> index) const { return entries_[offset(index)]; }
  void set(std::span<const int> index, Elem v) { entries_[offset(index)] = v; }
  Elem operator[](std::size_t i) const { return entries_[i]; }
  Elem& operator[](std::size_t i) { return entries_[i]; }

  bool operator==(const TensorWord& other) const {
    return shape_ == other.shape_ && entries_ == other.entries_;
  }

 private:
  Shape shape_;
  std::vector<std::size_t> strides_;
  std::vector<Elem> entries_;
};

TensorWord operator+(const TensorWord& a, const TensorWord& b);
int hamming_weight(const TensorWord& w);
int hamming_distance(const TensorWord& a, const TensorWord& b);
// Normalized Hamming weight |w| / N.
Fraction norm(const TensorWord& w);

// Number of lines in direction `axis`, N / n_axis.
std::size_t line_count(const Shape& shape, int axis);

// Calls fn(line_index, first_offset, stride) for every line of direction
// `axis`, in row-major order of the base points.
template <typename Fn>
void for_each_line(const Shape& shape, int axis, Fn&& fn) {
  std::size_t stride = 1;
  for (int i = static_cast<int>(shape.size()) - 1; i > axis; --i) stride *= static_cast<std::size_t>(shape[i]);
  const std::size_t inner = stride;
  const std::size_t block = inner * static_cast<std::size_t>(shape[axis]);
  const std::size_t total = shape_size(shape);
  std::size_t line = 0;
  for (std::size_t outer = 0; outer < total; outer += block) {
    for (std::size_t in = 0; in < inner; ++in) fn(line++, outer + in, stride);
  }
}

Word line_values(const TensorWord& w, int axis, std::size_t first, std::size_t stride);
void set_line(TensorWord& w, int axis, std::size_t first, std::size_t stride, std::span<const Elem> values);

// |x|_i: number of direction-i lines on which the word is nonzero.
std::size_t nonzero_lines(const TensorWord& w, int axis);
// ||x||_i as an exact fraction.
Fraction line_weight(const TensorWord& w, int axis);

// Axis-parallel flat: the free axes vary, the rest are fixed at `base`.
struct Flat {
  std::vector<int> free_axes;  // ascending
  std::vector<int> base;       // zero on free axes

  std::size_t cell_count(const Shape& shape) const;
};

struct WeightedFlat {
  Flat flat;
  Fraction weight;
};

// All k-flats grouped by direction set (lexicographic), each weighted by
// its size over the total size. Requires 1 <= k <= m - 1.
std::vector<WeightedFlat> enumerate_flats(const Shape& shape, int k);

// Restriction to a flat; axis order preserved ascending.
TensorWord restrict(const TensorWord& w, const Flat& flat);

// Applies `rows` (out_len x n_axis) along one axis: out_j = sum_t rows[j][t] in_t.
TensorWord apply_along_axis(const TensorWord& w, int axis, const Matrix& rows, const Field& field);

// One code per axis, all over the same field.
class CodeFamily {
 public:
  explicit CodeFamily(std::vector<Code> codes);
  static CodeFamily uniform(const Code& code, int m);

  int dims() const { return static_cast<int>(codes_.size()); }
  const Code& code(int axis) const { return codes_[axis]; }
  const std::vector<Code>& codes() const { return codes_; }
  const Field& field() const { return field_of(codes_.front()); }
  Shape shape() const;
  const LineDecoder& decoder(int axis) const { return *decoders_[axis]; }

  // Family of the codes on the given axes (the restriction of the product
  // code to a flat with those free axes).
  CodeFamily restrict_axes(std::span<const int> axes) const;
  // All codes cyclic with a common length.
  bool equal_length_cyclic() const;
  bool same_code_everywhere() const;

 private:
  CodeFamily(std::vector<Code> codes, std::vector<std::shared_ptr<const LineDecoder>> decoders);

  std::vector<Code> codes_;
  std::vector<std::shared_ptr<const LineDecoder>> decoders_;
};

// Every line of every direction lies in the code of that direction.
bool product_contains(const TensorWord& w, const CodeFamily& family);
// Every direction-`axis` line lies in that axis's code (membership in C^(axis)).
bool direction_contains(const TensorWord& w, const CodeFamily& family, int axis);

enum class SumMethod {
  CheckPoly,   // w * prod p_i(x_i) = 0 modulo (x_i^n - 1); equal-length cyclic families
  DualTensor,  // orthogonal to the tensor product of the dual bases
  Auto,
};

bool sum_contains(const TensorWord& w, const CodeFamily& family, SumMethod method = SumMethod::Auto);

struct DirectionalNearest {
  TensorWord word;   // lies in C^(axis)
  int distance = 0;  // Hamming distance to the input (sum over lines)
  Fraction delta() const { return frac(distance, static_cast<std::int64_t>(word.size())); }
};

// Line-by-line nearest decoding; exact because C^(i) is a direct sum of line codes.
DirectionalNearest nearest_in_direction(const TensorWord& w, const CodeFamily& family, int axis);

// Row-major encoding of a message tensor of shape (k_1, ..., k_m).
TensorWord encode_product(const TensorWord& message, const CodeFamily& family);
TensorWord random_product_codeword(const CodeFamily& family, std::mt19937_64& rng);
// Uniform element of C^(axis).
TensorWord random_direction_codeword(const CodeFamily& family, int axis, std::mt19937_64& rng);
TensorWord random_word(const Shape& shape, const Field& field, std::mt19937_64& rng);

// All product codewords; throws LimitExceeded above `limit`.
std::vector<TensorWord> product_codewords(const CodeFamily& family, std::uint64_t limit = 1u << 20);

// Coefficient tensor as a polynomial in m variables (entry (i_1..i_m) is the
// coefficient of x_1^{i_1}...x_m^{i_m}); equal side lengths required.
MultiPoly to_multipoly(const TensorWord& w);
TensorWord from_multipoly(const MultiPoly& p);

// Text format: "shape n_1 ... n_m field 2^d", then one line per row of the
// last axis, entries as lowercase hex.
std::string format_tensor(const TensorWord& w, const Field& field);
void write_tensor(std::ostream& out, const TensorWord& w, const Field& field);
struct ParsedTensor {
  TensorWord word;
  int field_degree = 0;
};
ParsedTensor read_tensor(std::istream& in);

}  // namespace prodexp
