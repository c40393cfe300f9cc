#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "prodexp/gf.hpp"
#include "prodexp/linalg.hpp"
#include "prodexp/poly.hpp"
#include "prodexp/rational.hpp"

namespace prodexp {

// Linear code given by a generator basis; the parity basis spans the dual.
class LinearCode {
 public:
  // Rows may be dependent; they are reduced to a basis.
  static LinearCode from_generator(const Field& field, int length, Matrix rows);
  static LinearCode from_parity(const Field& field, int length, Matrix parity);

  const Field& field() const { return field_; }
  int length() const { return length_; }
  int dimension() const { return static_cast<int>(generator_.size()); }
  // Reduced row echelon basis.
  const Matrix& generator() const { return generator_; }
  const Matrix& parity() const { return parity_; }

  bool contains(std::span<const Elem> word) const;
  // message (length k) times the generator.
  Word encode(std::span<const Elem> message) const;
  LinearCode dual() const;

 private:
  LinearCode(const Field& field, int length, Matrix generator, Matrix parity);

  Field field_;
  int length_;
  Matrix generator_;
  Matrix parity_;
};

// Cyclic code of length n: a in code iff p(x) a(x) = 0 mod (x^n - 1), with
// the check polynomial p dividing x^n - 1. Dimension is deg p.
class CyclicCode {
 public:
  // Throws std::invalid_argument unless p | x^n - 1.
  CyclicCode(const Field& field, int length, Poly check);

  const Field& field() const { return linear_->field(); }
  int length() const { return length_; }
  int dimension() const { return check_.degree(); }
  const Poly& check_poly() const { return check_; }
  // (x^n - 1) / p.
  const Poly& generator_poly() const { return generator_; }
  // The check polynomial as a univariate element of F[x]/(x^n - 1).
  MultiPoly check_multipoly() const;
  const LinearCode& linear() const { return *linear_; }

  // True when n = q - 1 and p = (x - 1)(x - w)...(x - w^{k-1}).
  bool is_primitive_rs() const { return primitive_rs_; }

 private:
  int length_;
  Poly check_;
  Poly generator_;
  std::shared_ptr<const LinearCode> linear_;
  bool primitive_rs_ = false;
};

using Code = std::variant<CyclicCode, LinearCode>;

const LinearCode& linear_of(const Code& code);
inline const Field& field_of(const Code& code) { return linear_of(code).field(); }
inline int length_of(const Code& code) { return linear_of(code).length(); }
inline int dimension_of(const Code& code) { return linear_of(code).dimension(); }
const CyclicCode* cyclic_of(const Code& code);
bool is_primitive_rs(const Code& code);

// Primitive Reed-Solomon code of length q - 1 and dimension n * num / den.
CyclicCode rs_primitive(const Field& field, int rate_num, int rate_den);
// Length-2 repetition code over GF(2): check polynomial x + 1.
CyclicCode repetition2();

bool cyclic_contains(const CyclicCode& code, std::span<const Elem> word);
bool code_contains(const Code& code, std::span<const Elem> word);

CyclicCode dual_code(const CyclicCode& code);
LinearCode dual_code(const LinearCode& code);

// Number of codewords q^k, saturating at UINT64_MAX.
std::uint64_t codeword_count(const Code& code);
// All codewords in message order; throws LimitExceeded above `limit`.
std::vector<Word> enumerate_codewords(const LinearCode& code, std::uint64_t limit = 1u << 24);

enum class DistanceMode { Exhaustive, KnownRS };
// Minimum nonzero Hamming weight. Throws Undefined for the zero code and
// LimitExceeded when exhaustive search exceeds 2^24 codewords.
int min_distance(const Code& code, DistanceMode mode);
Fraction relative_min_distance(const Code& code);

enum class DecodeStrategy {
  Brute,            // full enumeration, requires q^k <= 2^24
  BoundedDistance,  // Berlekamp-Welch, primitive RS only, radius floor((d-1)/2)
  InformationSet,   // exact for primitive RS: best codeword through k-1 positions
  Auto,             // exact; picks the cheapest applicable route
};

struct Decoded {
  Word codeword;
  int distance = 0;
};

// Nearest codeword. Brute and InformationSet break ties toward the
// lexicographically smallest codeword (elements compared by bit value).
// BoundedDistance throws DecodingFailure beyond its radius.
Decoded nearest_codeword(std::span<const Elem> word, const Code& code, DecodeStrategy strategy);

struct Distance {
  Fraction value;
  // When false, `value` is a certified lower bound: bounded decoding failed,
  // so the true distance exceeds floor((d-1)/2).
  bool exact = true;
};

Distance delta_to_code(std::span<const Elem> word, const Code& code,
                       DecodeStrategy strategy = DecodeStrategy::Auto);

class InformationSetTable;

// Reusable exact decoder for one code. Small codes get a full lookup table
// over F_q^n; primitive RS codes use bounded decoding with an
// information-set fallback.
class LineDecoder {
 public:
  explicit LineDecoder(Code code);

  const Code& code() const { return code_; }
  Decoded decode(std::span<const Elem> word) const;
  int distance(std::span<const Elem> word) const;

 private:
  Code code_;
  std::vector<std::uint32_t> table_;  // word index -> codeword index
  std::vector<Word> codewords_;
  std::shared_ptr<const InformationSetTable> info_set_;
  bool bounded_only_ = false;
};

}  // namespace prodexp
