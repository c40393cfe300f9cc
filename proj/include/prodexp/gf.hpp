#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace prodexp {

// Element of GF(2^m), m <= 8, in polynomial basis: bit j is the coefficient of x^j.
using Elem = std::uint8_t;

// Carry-less shift-and-add product of a and b reduced by `modulus` (degree `degree`).
Elem clmul_reduce(Elem a, Elem b, unsigned modulus, int degree);

// Trial division by every polynomial of degree 1..degree/2.
bool is_irreducible_gf2(unsigned poly, int degree);

// Binary extension field GF(2^m) with the class of x as the distinguished
// primitive element. Multiplication runs through log/antilog tables built
// from (and checked against) clmul_reduce at construction.
class Field {
 public:
  // Supported degrees 1..8; throws std::invalid_argument otherwise.
  static Field make(int degree);

  int degree() const { return degree_; }
  unsigned modulus() const { return modulus_; }
  int size() const { return 1 << degree_; }
  // Order of the multiplicative group, q - 1.
  int group_order() const { return size() - 1; }
  Elem omega() const { return degree_ == 1 ? Elem{1} : Elem{2}; }

  static Elem add(Elem a, Elem b) { return a ^ b; }
  static Elem sub(Elem a, Elem b) { return a ^ b; }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  // a^e for any integer e (negative exponents require a != 0).
  Elem pow(Elem a, long long e) const;
  // omega^e, e taken modulo q - 1.
  Elem omega_pow(long long e) const;
  // Discrete log base omega; a must be nonzero.
  int log(Elem a) const;
  int multiplicative_order(Elem a) const;

  bool operator==(const Field& other) const {
    return degree_ == other.degree_ && modulus_ == other.modulus_;
  }

 private:
  Field(int degree, unsigned modulus);

  int degree_;
  unsigned modulus_;
  std::array<Elem, 512> exp_{};
  std::array<int, 256> log_{};
};

}  // namespace prodexp
