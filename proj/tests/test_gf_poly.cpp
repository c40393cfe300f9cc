#include <random>
#include <stdexcept>

#include "doctest.h"
#include "prodexp/codes.hpp"
#include "prodexp/gf.hpp"
#include "prodexp/poly.hpp"

using namespace prodexp;

namespace {

MultiPoly random_multipoly(std::mt19937_64& rng, int vars, int period, const Field& field, int terms) {
  MultiPoly p(vars, period);
  for (int t = 0; t < terms; ++t) {
    MultiPoly::Exponents e(vars);
    for (auto& v : e) v = static_cast<int>(rng() % period);
    p.add_term(e, static_cast<Elem>(rng() % field.size()));
  }
  return p;
}

}  // namespace

TEST_CASE("field_make builds GF(4) with a primitive cube root of unity") {
  Field f = Field::make(2);
  CHECK(f.size() == 4);
  CHECK(f.omega() != 1);
  CHECK(f.pow(f.omega(), 3) == 1);
  CHECK(f.multiplicative_order(f.omega()) == 3);
}

TEST_CASE("field_make builds GF(16) with omega of order 15") {
  Field f = Field::make(4);
  CHECK(f.modulus() == 0x13u);
  CHECK(f.multiplicative_order(f.omega()) == 15);
}

TEST_CASE("GF(64) omega order by exhaustive powering") {
  Field f = Field::make(6);
  Elem x = 1;
  int first_return = 0;
  for (int k = 1; k <= 63; ++k) {
    x = clmul_reduce(x, f.omega(), f.modulus(), f.degree());
    if (x == 1) {
      first_return = k;
      break;
    }
  }
  CHECK(first_return == 63);
}

TEST_CASE("unsupported degrees are rejected") {
  CHECK_THROWS_AS(Field::make(0), std::invalid_argument);
  CHECK_THROWS_AS(Field::make(9), std::invalid_argument);
}

TEST_CASE("configured moduli are irreducible and the table path matches carry-less multiply") {
  for (int m = 1; m <= 8; ++m) {
    Field f = Field::make(m);
    CHECK(is_irreducible_gf2(f.modulus(), m));
    CHECK(f.multiplicative_order(f.omega()) == f.group_order());
    for (int a = 0; a < f.size(); ++a) {
      for (int b = 0; b < f.size(); ++b) {
        REQUIRE(f.mul(a, b) == clmul_reduce(a, b, f.modulus(), m));
      }
    }
  }
  CHECK_FALSE(is_irreducible_gf2(0x5, 2));  // x^2 + 1 = (x + 1)^2
}

TEST_CASE("field axioms on random triples") {
  std::mt19937_64 rng(7);
  for (int m = 1; m <= 8; ++m) {
    Field f = Field::make(m);
    for (int t = 0; t < 10000; ++t) {
      Elem a = rng() % f.size(), b = rng() % f.size(), c = rng() % f.size();
      REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
      REQUIRE(f.mul(a, b ^ c) == (f.mul(a, b) ^ f.mul(a, c)));
      REQUIRE((a ^ a) == 0);
      if (a != 0) REQUIRE(f.mul(a, f.inv(a)) == 1);
    }
  }
}

TEST_CASE("poly_mul_mod_ideal identities") {
  Field f = Field::make(2);
  const int n = 3;
  MultiPoly one = MultiPoly::constant(1, n, 1);
  MultiPoly b(1, n);
  b.add_term({1}, 3);
  b.add_term({2}, 1);
  CHECK(poly_mul_mod_ideal(one, b, f) == b);

  MultiPoly xn1(1, n), x(1, n);
  xn1.add_term({n - 1}, 1);
  x.add_term({1}, 1);
  CHECK(poly_mul_mod_ideal(xn1, x, f) == one);

  // (x - 1)(x - w)(x - w^2) = x^3 - 1, which vanishes modulo the ideal.
  MultiPoly prod = one;
  for (int i = 0; i < 3; ++i) {
    MultiPoly lin(1, n);
    lin.add_term({1}, 1);
    lin.add_term({0}, f.omega_pow(i));
    prod = poly_mul_mod_ideal(prod, lin, f);
  }
  CHECK(prod.is_zero());

  MultiPoly two_vars(2, n);
  CHECK_THROWS_AS(poly_mul_mod_ideal(two_vars, one, f), std::invalid_argument);
}

TEST_CASE("poly_mul_mod_ideal is commutative and associative") {
  Field f = Field::make(4);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    auto a = random_multipoly(rng, 3, 5, f, 6);
    auto b = random_multipoly(rng, 3, 5, f, 6);
    auto c = random_multipoly(rng, 3, 5, f, 6);
    REQUIRE(poly_mul_mod_ideal(a, b, f) == poly_mul_mod_ideal(b, a, f));
    REQUIRE(poly_mul_mod_ideal(poly_mul_mod_ideal(a, b, f), c, f) ==
            poly_mul_mod_ideal(a, poly_mul_mod_ideal(b, c, f), f));
  }
}

TEST_CASE("star_transform basics and involution") {
  const int n = 7;
  MultiPoly one = MultiPoly::constant(1, n, 1);
  CHECK(star_transform(one) == one);
  MultiPoly x(1, n);
  x.add_term({1}, 1);
  MultiPoly expect(1, n);
  expect.add_term({n - 1}, 1);
  CHECK(star_transform(x) == expect);

  Field f = Field::make(3);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    auto p = random_multipoly(rng, 2, n, f, 10);
    REQUIRE(star_transform(star_transform(p)) == p);
  }
}

TEST_CASE("star of the RS[15,5] check polynomial spans the dual") {
  Field f = Field::make(4);
  CyclicCode rs = rs_primitive(f, 1, 3);
  MultiPoly pstar = star_transform(rs.check_multipoly());
  const int n = 15;
  // Shifts x^j p*(x) are orthogonal to every generator row of the code.
  Matrix dual_rows;
  for (int j = 0; j < n; ++j) {
    MultiPoly shift(1, n);
    shift.add_term({j}, 1);
    MultiPoly w = poly_mul_mod_ideal(pstar, shift, f);
    Word row(n, 0);
    w.for_each_term([&](const MultiPoly::Exponents& e, Elem v) { row[e[0]] = v; });
    for (const auto& g : rs.linear().generator()) REQUIRE(dot(row, g, f) == 0);
    dual_rows.push_back(row);
  }
  CHECK(rank(dual_rows, f) == n - rs.dimension());
}

TEST_CASE("dft_evaluate") {
  Field f4 = Field::make(2);
  MultiPoly one = MultiPoly::constant(1, 3, 1);
  CHECK(dft_evaluate(one, f4) == Word{1, 1, 1});
  MultiPoly x(1, 3);
  x.add_term({1}, 1);
  const Elem w = f4.omega();
  CHECK(dft_evaluate(x, f4) == Word{1, f4.mul(w, w), w});
}

TEST_CASE("dft of low-degree polynomials lands in the RS code (sampled)") {
  Field f = Field::make(4);
  CyclicCode rs = rs_primitive(f, 1, 3);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    MultiPoly p(1, 15);
    for (int d = 0; d < 5; ++d) p.add_term({d}, static_cast<Elem>(rng() % 16));
    REQUIRE(cyclic_contains(rs, dft_evaluate(p, f)));
  }
  MultiPoly high(1, 15);
  high.add_term({5}, 1);
  CHECK_FALSE(cyclic_contains(rs, dft_evaluate(high, f)));
}
