#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "prodexp/gf.hpp"

namespace prodexp {

// Dense univariate polynomial over a Field, coefficients low degree first,
// trailing zeros trimmed. The zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Elem> coeffs);

  static Poly monomial(int degree, Elem coeff = 1);
  // x^n - 1 (= x^n + 1 in characteristic 2).
  static Poly cyclotomic_modulus(int n);
  // prod (x - r) over the given roots.
  static Poly from_roots(std::span<const Elem> roots, const Field& field);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Elem operator[](int i) const {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : Elem{0};
  }
  const std::vector<Elem>& coeffs() const { return coeffs_; }

  Elem eval(Elem x, const Field& field) const;

  bool operator==(const Poly& other) const { return coeffs_ == other.coeffs_; }

 private:
  void trim();
  std::vector<Elem> coeffs_;
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b, const Field& field);
Poly poly_scale(const Poly& a, Elem c, const Field& field);
// Quotient and remainder; b must be nonzero.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b, const Field& field);
// Product reduced modulo x^n - 1.
Poly poly_mul_mod_cyclic(const Poly& a, const Poly& b, int n, const Field& field);
// x^deg(p) * p(1/x).
Poly poly_reciprocal(const Poly& p);

// Sparse polynomial in num_vars variables reduced modulo the ideal
// (x_1^n - 1, ..., x_m^n - 1): every exponent lies in [0, n) and every stored
// coefficient is nonzero. Exponent tuples are packed into a mixed-radix key
// with the first variable most significant, so iteration order is
// lexicographic in the exponent tuple.
class MultiPoly {
 public:
  using Exponents = std::vector<int>;

  MultiPoly(int num_vars, int period);

  static MultiPoly constant(int num_vars, int period, Elem value);
  // Embeds a univariate polynomial as a polynomial in variable `var`,
  // folding exponents modulo the period.
  static MultiPoly from_univariate(const Poly& p, int num_vars, int period, int var);

  int num_vars() const { return num_vars_; }
  int period() const { return period_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Elem coeff(const Exponents& exps) const;
  // Adds `value` to the coefficient at `exps` (exponents reduced modulo n).
  void add_term(const Exponents& exps, Elem value);

  template <typename Fn>
  void for_each_term(Fn&& fn) const {
    Exponents e(num_vars_);
    for (const auto& [key, value] : terms_) {
      unpack(key, e);
      fn(static_cast<const Exponents&>(e), value);
    }
  }

  bool same_shape(const MultiPoly& other) const {
    return num_vars_ == other.num_vars_ && period_ == other.period_;
  }
  bool operator==(const MultiPoly& other) const {
    return same_shape(other) && terms_ == other.terms_;
  }

  std::uint64_t pack(const Exponents& exps) const;
  void unpack(std::uint64_t key, Exponents& exps) const;

  // Raw access for routines that accumulate into packed keys.
  const std::map<std::uint64_t, Elem>& packed_terms() const { return terms_; }
  void set_packed(std::uint64_t key, Elem value);

 private:
  int num_vars_;
  int period_;
  std::map<std::uint64_t, Elem> terms_;
};

// a * b reduced modulo the ideal: exponents add modulo n per variable.
// Throws std::invalid_argument on mismatched variable count or period.
MultiPoly poly_mul_mod_ideal(const MultiPoly& a, const MultiPoly& b, const Field& field);

// p(x_1^{n-1}, ..., x_m^{n-1}) reduced modulo the ideal. An involution.
MultiPoly star_transform(const MultiPoly& p);

// (p(1), p(omega^-1), ..., p(omega^{1-n})) for univariate p with n = q - 1.
std::vector<Elem> dft_evaluate(const MultiPoly& p, const Field& field);

}  // namespace prodexp
