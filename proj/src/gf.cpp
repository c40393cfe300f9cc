#include "prodexp/gf.hpp"

#include <stdexcept>
#include <string>

namespace prodexp {

namespace {

// x^m + lower terms; all primitive so that x generates the multiplicative group.
constexpr std::array<unsigned, 9> kModulus = {
    0,
    0x3,    // x + 1
    0x7,    // x^2 + x + 1
    0xB,    // x^3 + x + 1
    0x13,   // x^4 + x + 1
    0x25,   // x^5 + x^2 + 1
    0x43,   // x^6 + x + 1
    0x83,   // x^7 + x + 1
    0x11D,  // x^8 + x^4 + x^3 + x^2 + 1
};

int poly_degree(unsigned p) {
  int d = -1;
  while (p) {
    p >>= 1;
    ++d;
  }
  return d;
}

unsigned gf2_mod(unsigned a, unsigned b) {
  int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a)) a ^= b << (da - db);
  return a;
}

}  // namespace

Elem clmul_reduce(Elem a, Elem b, unsigned modulus, int degree) {
  unsigned acc = 0;
  unsigned shifted = a;
  for (int bit = 0; bit < degree; ++bit) {
    if (b & (1u << bit)) acc ^= shifted;
    shifted <<= 1;
    if (shifted & (1u << degree)) shifted ^= modulus;
  }
  return static_cast<Elem>(acc);
}

bool is_irreducible_gf2(unsigned poly, int degree) {
  if (poly_degree(poly) != degree) return false;
  for (unsigned d = 2; poly_degree(d) <= degree / 2; ++d) {
    if (gf2_mod(poly, d) == 0) return false;
  }
  return true;
}

Field::Field(int degree, unsigned modulus) : degree_(degree), modulus_(modulus) {
  if (!is_irreducible_gf2(modulus, degree)) {
    throw std::logic_error("configured modulus is reducible for degree " + std::to_string(degree));
  }
  const int order = group_order();
  Elem x = 1;
  for (int i = 0; i < order; ++i) {
    exp_[i] = x;
    exp_[i + order] = x;
    log_[x] = i;
    x = clmul_reduce(x, omega(), modulus_, degree_);
    if (x == 1 && i + 1 < order) {
      throw std::logic_error("x is not primitive for modulus of degree " + std::to_string(degree));
    }
  }
  if (x != 1) throw std::logic_error("omega power cycle does not close");
  for (int i = 2 * order; i < static_cast<int>(exp_.size()); ++i) exp_[i] = exp_[i % order];
}

Field Field::make(int degree) {
  if (degree < 1 || degree > 8) {
    throw std::invalid_argument("extension degree must be in [1, 8], got " + std::to_string(degree));
  }
  return Field(degree, kModulus[degree]);
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return exp_[(group_order() - log_[a]) % group_order()];
}

Elem Field::pow(Elem a, long long e) const {
  if (a == 0) {
    if (e < 0) throw std::domain_error("negative power of zero");
    return e == 0 ? 1 : 0;
  }
  const long long order = group_order();
  long long r = (static_cast<long long>(log_[a]) * (e % order)) % order;
  if (r < 0) r += order;
  return exp_[r];
}

Elem Field::omega_pow(long long e) const {
  const long long order = group_order();
  long long r = e % order;
  if (r < 0) r += order;
  return exp_[r];
}

int Field::log(Elem a) const {
  if (a == 0) throw std::domain_error("log of zero");
  return log_[a];
}

int Field::multiplicative_order(Elem a) const {
  if (a == 0) throw std::domain_error("order of zero");
  Elem x = a;
  int k = 1;
  while (x != 1) {
    x = clmul_reduce(x, a, modulus_, degree_);
    ++k;
  }
  return k;
}

}  // namespace prodexp
