#include <random>
#include <sstream>

#include "doctest.h"
#include "prodexp/tensor.hpp"

using namespace prodexp;

namespace {

CodeFamily rep2_family(int m) { return CodeFamily::uniform(repetition2(), m); }

CodeFamily rs3_family(int m) { return CodeFamily::uniform(rs_primitive(Field::make(2), 1, 3), m); }

// a'_{ijl} = [i+j+l = 0 mod n] for the n = 3 cube.
TensorWord diagonal_plane(int n) {
  TensorWord w(Shape{n, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int l = (2 * n - i - j) % n;
      w.set(std::vector<int>{i, j, l}, 1);
    }
  return w;
}

// Oracle for C^(axis): every combination of per-line codewords.
std::vector<TensorWord> direction_members(const CodeFamily& family, int axis) {
  auto line_words = enumerate_codewords(linear_of(family.code(axis)));
  const Shape shape = family.shape();
  const std::size_t lines = line_count(shape, axis);
  std::vector<TensorWord> out;
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

}  // namespace

TEST_CASE("shape and indexing") {
  TensorWord w(Shape{2, 3});
  CHECK(w.size() == 6);
  w.set(std::vector<int>{1, 2}, 3);
  CHECK(w[5] == 3);
  CHECK_THROWS_AS(w.at(std::vector<int>{2, 0}), std::out_of_range);
  CHECK_THROWS_AS(TensorWord(Shape{2, 2}, std::vector<Elem>(3)), std::invalid_argument);
}

TEST_CASE("enumerate_flats weights") {
  auto lines = enumerate_flats(Shape{2, 2}, 1);
  CHECK(lines.size() == 4);
  for (const auto& f : lines) CHECK(f.weight == frac(1, 4));

  auto l3 = enumerate_flats(Shape{3, 3, 3}, 1);
  CHECK(l3.size() == 27);
  for (const auto& f : l3) CHECK(f.weight == frac(1, 27));

  auto p3 = enumerate_flats(Shape{3, 3, 3}, 2);
  CHECK(p3.size() == 9);
  for (const auto& f : p3) CHECK(f.weight == frac(1, 9));

  auto mixed = enumerate_flats(Shape{2, 3, 5}, 1);
  Fraction total = 0;
  for (const auto& f : mixed) {
    CHECK(f.weight > 0);
    total += f.weight;
  }
  CHECK(total == 1);
  // Lines along the length-5 axis carry 5 / (3*15 + ... ) each.
  CHECK(mixed.back().weight == frac(5, 30 * 3));

  CHECK_THROWS_AS(enumerate_flats(Shape{2, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_flats(Shape{2, 2}, 0), std::invalid_argument);
}

TEST_CASE("restrict") {
  // [[a,b],[c,d]] with a=1, b=2, c=3, d=0 over GF(4).
  TensorWord w(Shape{2, 2}, {1, 2, 3, 0});
  // Line varying axis 0 at base (0,1) reads column 1: (b, d).
  CHECK(restrict(w, Flat{{0}, {0, 1}}).entries() == std::vector<Elem>{2, 0});
  CHECK(restrict(w, Flat{{1}, {1, 0}}).entries() == std::vector<Elem>{3, 0});
  CHECK(restrict(w, Flat{{0, 1}, {0, 0}}) == w);
  CHECK_THROWS_AS(restrict(w, Flat{{0}, {1, 1}}), std::invalid_argument);

  TensorWord a = diagonal_plane(3);
  for (const auto& wf : enumerate_flats(a.shape(), 1)) REQUIRE(hamming_weight(restrict(a, wf.flat)) == 1);
}

TEST_CASE("line_weight") {
  TensorWord z(Shape{3, 3, 3});
  for (int i = 0; i < 3; ++i) CHECK(line_weight(z, i) == 0);
  TensorWord one(Shape{2, 2});
  one[0] = 1;
  CHECK(line_weight(one, 0) == frac(1, 2));
  CHECK(line_weight(one, 1) == frac(1, 2));
  TensorWord a = diagonal_plane(3);
  for (int i = 0; i < 3; ++i) CHECK(line_weight(a, i) == 1);
}

TEST_CASE("sandwich bound between norm and line weight") {
  std::mt19937_64 rng(31);
  Field f = Field::make(2);
  for (int t = 0; t < 500; ++t) {
    Shape s{2 + static_cast<int>(rng() % 3), 2 + static_cast<int>(rng() % 3), 1 + static_cast<int>(rng() % 3)};
    TensorWord w = random_word(s, f, rng);
    for (auto& e : w.entries()) {
      if (rng() % 3) e = 0;
    }
    for (int i = 0; i < 3; ++i) {
      REQUIRE(norm(w) <= line_weight(w, i));
      REQUIRE(line_weight(w, i) <= s[i] * norm(w));
    }
  }
}

TEST_CASE("product_contains") {
  CodeFamily rep = rep2_family(2);
  CHECK(product_contains(TensorWord(Shape{2, 2}), rep));
  CHECK(product_contains(TensorWord(Shape{2, 2}, {1, 1, 1, 1}), rep));
  CHECK_FALSE(product_contains(TensorWord(Shape{2, 2}, {1, 0, 0, 0}), rep));
  CHECK_THROWS_AS(product_contains(TensorWord(Shape{3, 3}), rep), std::invalid_argument);

  // Rank-one tensor of [3,1] codewords over GF(4).
  CodeFamily fam = rs3_family(2);
  const Field& f = fam.field();
  TensorWord pure(Shape{3, 3});
  for (int i = 0; i < 9; ++i) pure[i] = f.mul(2, 3);
  CHECK(product_contains(pure, fam));
}

TEST_CASE("product code sits inside the sum code") {
  // Exhaustive at shape (2,2) over GF(2).
  CodeFamily rep = rep2_family(2);
  int prod = 0, sum = 0;
  for (int idx = 0; idx < 16; ++idx) {
    TensorWord w(Shape{2, 2}, {Elem(idx >> 3 & 1), Elem(idx >> 2 & 1), Elem(idx >> 1 & 1), Elem(idx & 1)});
    const bool p = product_contains(w, rep);
    const bool s = sum_contains(w, rep, SumMethod::CheckPoly);
    REQUIRE(s == sum_contains(w, rep, SumMethod::DualTensor));
    if (p) REQUIRE(s);
    prod += p;
    sum += s;
  }
  CHECK(prod == 2);
  CHECK(sum == 8);

  CodeFamily fam = rs3_family(3);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 200; ++t) {
    TensorWord c = random_product_codeword(fam, rng);
    REQUIRE(product_contains(c, fam));
    REQUIRE(sum_contains(c, fam));
  }
}

TEST_CASE("sum membership: check polynomial and dual tensor agree on shape (3,3) over GF(4)") {
  CodeFamily fam = rs3_family(2);
  std::mt19937_64 rng(99);
  int members = 0;
  for (int t = 0; t < 100000; ++t) {
    TensorWord w = random_word(Shape{3, 3}, fam.field(), rng);
    const bool a = sum_contains(w, fam, SumMethod::CheckPoly);
    REQUIRE(a == sum_contains(w, fam, SumMethod::DualTensor));
    members += a;
  }
  // The sum code has dimension 9 - 4 = 5, so about 1/256 of words are members.
  CHECK(members > 200);
  CHECK(members < 600);

  // Basis of the sum code (generators of C^(0) and C^(1)) and cosets by unit vectors.
  std::vector<TensorWord> basis;
  for (int axis = 0; axis < 2; ++axis) {
    for_each_line(fam.shape(), axis, [&](std::size_t, std::size_t first, std::size_t stride) {
      TensorWord b(fam.shape());
      set_line(b, axis, first, stride, linear_of(fam.code(axis)).generator()[0]);
      basis.push_back(b);
    });
  }
  for (const auto& b : basis) {
    REQUIRE(sum_contains(b, fam, SumMethod::CheckPoly));
    REQUIRE(sum_contains(b, fam, SumMethod::DualTensor));
    for (std::size_t pos = 0; pos < 9; ++pos) {
      for (Elem v = 1; v < 4; ++v) {
        TensorWord s = b;
        s[pos] ^= v;
        REQUIRE(sum_contains(s, fam, SumMethod::CheckPoly) == sum_contains(s, fam, SumMethod::DualTensor));
        // A single nonzero entry is never in this sum code.
        REQUIRE_FALSE(sum_contains(s, fam, SumMethod::CheckPoly));
      }
    }
  }
}

TEST_CASE("sum_contains for direction words and method applicability") {
  CodeFamily fam = rs3_family(3);
  std::mt19937_64 rng(8);
  for (int axis = 0; axis < 3; ++axis) {
    for (int t = 0; t < 20; ++t) REQUIRE(sum_contains(random_direction_codeword(fam, axis, rng), fam));
  }

  CodeFamily mixed(std::vector<Code>{repetition2(), rs_primitive(Field::make(1), 1, 1)});
  CHECK_THROWS_AS(sum_contains(TensorWord(Shape{2, 1}), mixed, SumMethod::CheckPoly), std::invalid_argument);
  CHECK(sum_contains(TensorWord(Shape{2, 1}), mixed, SumMethod::DualTensor));
}

TEST_CASE("flat restrictions of product codewords lie in the restricted product code") {
  CodeFamily fam = rs3_family(3);
  std::mt19937_64 rng(12);
  for (int t = 0; t < 30; ++t) {
    const bool codeword = t % 2 == 0;
    TensorWord w = codeword ? random_product_codeword(fam, rng) : random_direction_codeword(fam, 0, rng);
    for (int k = 1; k <= 2; ++k) {
      bool all = true;
      for (const auto& wf : enumerate_flats(w.shape(), k)) {
        CodeFamily sub = fam.restrict_axes(wf.flat.free_axes);
        all = all && product_contains(restrict(w, wf.flat), sub);
      }
      REQUIRE(all == product_contains(w, fam));
    }
  }
}

TEST_CASE("nearest_in_direction") {
  CodeFamily rep = rep2_family(2);
  TensorWord e(Shape{2, 2}, {1, 0, 0, 0});
  auto d = nearest_in_direction(e, rep, 1);
  CHECK(d.word == TensorWord(Shape{2, 2}));
  CHECK(d.delta() == frac(1, 4));

  CodeFamily fam = rs3_family(2);
  std::mt19937_64 rng(6);
  for (int axis = 0; axis < 2; ++axis) {
    auto members = direction_members(fam, axis);
    CHECK(members.size() == 64);
    for (int t = 0; t < 300; ++t) {
      TensorWord w = random_word(fam.shape(), fam.field(), rng);
      int best = 10;
      for (const auto& m : members) best = std::min(best, hamming_distance(w, m));
      auto got = nearest_in_direction(w, fam, axis);
      REQUIRE(got.distance == best);
      REQUIRE(hamming_distance(w, got.word) == best);
      REQUIRE(direction_contains(got.word, fam, axis));
    }
    TensorWord c = random_direction_codeword(fam, axis, rng);
    auto self = nearest_in_direction(c, fam, axis);
    CHECK(self.word == c);
    CHECK(self.distance == 0);
  }
}

TEST_CASE("product_codewords and encoding") {
  auto words = product_codewords(rep2_family(3));
  CHECK(words.size() == 2);
  auto fam = rs3_family(2);
  auto all = product_codewords(fam);
  CHECK(all.size() == 4);
  for (const auto& w : all) CHECK(product_contains(w, fam));
  CHECK_THROWS(product_codewords(CodeFamily::uniform(rs_primitive(Field::make(4), 1, 3), 2)));
}

TEST_CASE("multipoly round trip") {
  std::mt19937_64 rng(14);
  Field f = Field::make(3);
  for (int t = 0; t < 20; ++t) {
    TensorWord w = random_word(Shape{7, 7}, f, rng);
    REQUIRE(from_multipoly(to_multipoly(w)) == w);
  }
}

TEST_CASE("tensor serialization round trip") {
  std::mt19937_64 rng(15);
  for (int d : {1, 4, 8}) {
    Field f = Field::make(d);
    TensorWord w = random_word(Shape{3, 2, 5}, f, rng);
    std::string text = format_tensor(w, f);
    std::istringstream in(text);
    ParsedTensor p = read_tensor(in);
    CHECK(p.word == w);
    CHECK(p.field_degree == d);
  }
  Field f4 = Field::make(2);
  CHECK(format_tensor(TensorWord(Shape{2, 2}, {1, 2, 3, 0}), f4) == "shape 2 2 field 2^2\n1 2\n3 0\n");
  std::istringstream bad("shape 2 2 field 2^2\n1 2\n3\n");
  CHECK_THROWS_AS(read_tensor(bad), std::invalid_argument);
  std::istringstream big("shape 1 field 2^2\n4\n");
  CHECK_THROWS_AS(read_tensor(big), std::invalid_argument);
}
