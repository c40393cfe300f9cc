#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "prodexp/tensor.hpp"

namespace prodexp {

// c = a_1 + ... + a_m with a_i in C^(i).
struct Decomposition {
  std::vector<TensorWord> parts;
};

// sum_i ||a_i||_i
Fraction decomposition_cost(const Decomposition& d);
// Both invariants: a_i in C^(i) and the parts sum to `word`.
bool is_valid_decomposition(const Decomposition& d, const TensorWord& word, const CodeFamily& family);

// a_{ijl} = w^{-kj} w^{-2kl} [i+j+l = 0 mod n] on the n^3 cube, n = q - 1, k = n/3.
TensorWord counterexample_word(const Field& field);

// Every axis-parallel line meets the support at most once.
bool line_disjoint_support(const TensorWord& w);

// Greedy set of support cells, no two on a common line (row-major scan).
// Its size bounds the minimum line cover of the support from below.
std::vector<std::size_t> greedy_line_packing(const TensorWord& w);

struct ExpansionCertificate {
  TensorWord witness;
  Fraction bound;
  bool line_disjoint = false;
  std::size_t cover_lower_bound = 0;
};

// Every decomposition of w has sum_i |a_i|_i >= L (L = cover_lower_bound), so
// rho <= ||w|| * max_i |L_i| / L. Throws std::invalid_argument when w is zero
// or outside the sum code.
ExpansionCertificate certify_upper_bound(const TensorWord& w, const CodeFamily& family);

struct CertificateCheck {
  bool valid = false;
  std::string reason;
};

// Re-derives everything from the witness; the membership test uses the dual
// tensor, independently of the check polynomials.
CertificateCheck verify_certificate(const ExpansionCertificate& cert, const CodeFamily& family);

// Text record: "certificate v1", one "code ..." line per axis, bound,
// evidence lines, then the witness in tensor format between "witness" and "end".
void write_certificate(std::ostream& out, const ExpansionCertificate& cert, const CodeFamily& family);
struct ParsedCertificate {
  ExpansionCertificate certificate;
  CodeFamily family;
};
ParsedCertificate read_certificate(std::istream& in);

// The linear map from per-line messages (axis-major, lines in for_each_line
// order, k_i symbols each) onto F^N, whose image is the sum code and whose
// kernel is the ambiguity space.
class AmbiguitySpace {
 public:
  explicit AmbiguitySpace(const CodeFamily& family, std::size_t max_columns = 1024);

  const CodeFamily& family() const { return family_; }
  int coefficient_count() const { return columns_; }
  int dimension() const { return static_cast<int>(kernel_.size()); }
  int sum_dimension() const { return static_cast<int>(image_pivots_.size()); }
  const Matrix& kernel() const { return kernel_; }
  // Coefficient positions whose unit vectors map to a basis of the sum code.
  const std::vector<int>& image_pivots() const { return image_pivots_; }

  Word particular(const TensorWord& word) const;  // throws when word is not in the sum code
  TensorWord image(std::span<const Elem> coeffs) const;
  Decomposition parts(std::span<const Elem> coeffs) const;

  // Integer cost sum_i (nonzero blocks on axis i) * scale_i, with
  // scale_i = cost_denominator() / |L_i|.
  std::uint64_t scaled_cost(std::span<const Elem> coeffs) const;
  std::uint64_t cost_denominator() const { return denominator_; }

 private:
  CodeFamily family_;
  int columns_ = 0;
  std::vector<int> offsets_;  // first coefficient of each axis
  Matrix phi_rows_;           // N x columns
  Matrix kernel_;
  std::vector<int> image_pivots_;
  std::vector<std::uint64_t> scale_;
  std::uint64_t denominator_ = 1;
};

enum class DecompositionStrategy { Exhaustive, LocalSearch };

struct DecompositionResult {
  Decomposition decomposition;
  Fraction cost;
  bool exact = false;  // false: cost is only an upper bound on the minimum
};

// Exhaustive requires q^dim <= 2^24 for the ambiguity space.
DecompositionResult min_decomposition(const TensorWord& word, const CodeFamily& family,
                                      DecompositionStrategy strategy, std::uint64_t seed = 0);
DecompositionResult min_decomposition(const TensorWord& word, const AmbiguitySpace& space,
                                      DecompositionStrategy strategy, std::uint64_t seed = 0);

struct RhoExact {
  Fraction value;
  TensorWord minimizer;
  Decomposition decomposition;
};

// min over nonzero c in the sum code of ||c|| / min cost; needs |sum code| <= 2^20.
RhoExact rho_exact(const CodeFamily& family);

struct RhoSampled {
  // Certified: min of ||c|| / (lower bound on the minimum cost).
  Fraction certified_upper;
  // Heuristic: min of ||c|| / (best cost found); not a bound on rho.
  Fraction heuristic;
  std::size_t pool_size = 0;
  bool counterexample_in_pool = false;
};

// Pool: counterexample word (cube RS families), sparse and diagonal sum
// codewords, then `samples` random sum codewords. Throws
// std::invalid_argument when samples == 0.
RhoSampled rho_upper_sampled(const CodeFamily& family, std::size_t samples, std::uint64_t seed, int jobs = 1);

}  // namespace prodexp
