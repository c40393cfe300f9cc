#include <map>
#include <random>
#include <sstream>

#include "doctest.h"
#include "prodexp/errors.hpp"
#include "prodexp/expansion.hpp"
#include "oracles.hpp"

using namespace prodexp;
using namespace prodexp::oracle;

namespace {

CodeFamily rep2_family(int m) { return CodeFamily::uniform(repetition2(), m); }
CodeFamily rs3_family(int m) { return CodeFamily::uniform(rs_primitive(Field::make(2), 1, 3), m); }

}  // namespace

// Values produced by tuple_oracle, frozen.
TEST_CASE("rho_exact matches the tuple oracle") {
  CHECK(oracle_rho(rep2_family(2)) == frac(1, 2));
  CHECK(oracle_rho(rep2_family(3)) == frac(1, 3));
  CHECK(oracle_rho(rs3_family(2)) == frac(1, 2));

  RhoExact r2 = rho_exact(rep2_family(2));
  CHECK(r2.value == frac(1, 2));
  CHECK(rho_exact(rep2_family(3)).value == frac(1, 3));
  CHECK(rho_exact(rs3_family(2)).value == frac(1, 2));
  CHECK(is_valid_decomposition(r2.decomposition, r2.minimizer, rep2_family(2)));
  CHECK(norm(r2.minimizer) / decomposition_cost(r2.decomposition) == frac(1, 2));

  // A full-space factor: every word is its own single-part decomposition.
  CodeFamily mixed(std::vector<Code>{repetition2(), repetition2(), rs_primitive(Field::make(1), 1, 1)});
  CHECK(oracle_rho(mixed) == 1);
  CHECK(rho_exact(mixed).value == 1);
  CHECK(rho_exact(mixed).value <= 1);
}

TEST_CASE("monotonicity in the number of factors") {
  CHECK(rho_exact(rep2_family(2)).value >= rho_exact(rep2_family(3)).value);
}

TEST_CASE("min_decomposition exhaustive equals the oracle on every sum codeword") {
  for (const auto& fam : {rep2_family(2), rep2_family(3), rs3_family(2)}) {
    AmbiguitySpace space(fam);
    auto best = tuple_oracle(fam);
    const int q = fam.field().size();
    std::uint64_t expected = 1;
    for (int i = 0; i < space.sum_dimension(); ++i) expected *= q;
    CHECK(best.size() == expected);
    for (const auto& [entries, cost] : best) {
      TensorWord w(fam.shape(), entries);
      DecompositionResult r = min_decomposition(w, space, DecompositionStrategy::Exhaustive);
      REQUIRE(r.exact);
      REQUIRE(r.cost == cost);
      REQUIRE(is_valid_decomposition(r.decomposition, w, fam));
    }
  }
}

TEST_CASE("min_decomposition examples") {
  CodeFamily rep = rep2_family(2);
  auto zero = min_decomposition(TensorWord(Shape{2, 2}), rep, DecompositionStrategy::Exhaustive);
  CHECK(zero.cost == 0);
  for (const auto& p : zero.decomposition.parts) CHECK(hamming_weight(p) == 0);

  TensorWord diag(Shape{2, 2}, {1, 0, 0, 1});
  auto d = min_decomposition(diag, rep, DecompositionStrategy::Exhaustive);
  CHECK(d.cost == 1);
  CHECK(line_weight(d.decomposition.parts[0], 0) == frac(1, 2));
  CHECK(line_weight(d.decomposition.parts[1], 1) == frac(1, 2));

  CHECK_THROWS_AS(min_decomposition(TensorWord(Shape{2, 2}, {1, 0, 0, 0}), rep, DecompositionStrategy::Exhaustive),
                  std::invalid_argument);
  CHECK_THROWS_AS(AmbiguitySpace(CodeFamily::uniform(rs_primitive(Field::make(4), 1, 3), 3)), LimitExceeded);
}

TEST_CASE("exhaustive cost never exceeds local search cost") {
  CodeFamily fam = rs3_family(2);
  AmbiguitySpace space(fam);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 300; ++t) {
    TensorWord w = random_direction_codeword(fam, 0, rng) + random_direction_codeword(fam, 1, rng);
    auto ex = min_decomposition(w, space, DecompositionStrategy::Exhaustive);
    auto ls = min_decomposition(w, space, DecompositionStrategy::LocalSearch, t);
    REQUIRE_FALSE(ls.exact);
    REQUIRE(is_valid_decomposition(ls.decomposition, w, fam));
    REQUIRE(ex.cost <= ls.cost);
  }
  CodeFamily fam3 = rs3_family(3);
  AmbiguitySpace space3(fam3);
  CHECK(space3.dimension() == 8);
  for (int t = 0; t < 30; ++t) {
    TensorWord w(fam3.shape());
    for (int a = 0; a < 3; ++a) w = w + random_direction_codeword(fam3, a, rng);
    auto ex = min_decomposition(w, space3, DecompositionStrategy::Exhaustive);
    auto ls = min_decomposition(w, space3, DecompositionStrategy::LocalSearch, t);
    REQUIRE(ex.cost <= ls.cost);
  }
}

TEST_CASE("counterexample word") {
  for (int d : {2, 4, 6}) {
    Field f = Field::make(d);
    const int n = f.group_order();
    TensorWord a = counterexample_word(f);
    CodeFamily fam = CodeFamily::uniform(rs_primitive(f, 1, 3), 3);
    CHECK(hamming_weight(a) == n * n);
    CHECK(line_disjoint_support(a));
    CHECK(sum_contains(a, fam, SumMethod::CheckPoly));
    for (int i = 0; i < 3; ++i) CHECK(line_weight(a, i) == 1);
    if (n == 3) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) CHECK((a.at(std::vector<int>{i, j, l}) != 0) == ((i + j + l) % 3 == 0));
    }
    if (n <= 15) CHECK(sum_contains(a, fam, SumMethod::DualTensor));
  }
  CHECK_THROWS_AS(counterexample_word(Field::make(3)), std::invalid_argument);
}

TEST_CASE("line_disjoint_support") {
  TensorWord w(Shape{3, 3});
  CHECK(line_disjoint_support(w));
  w[4] = 1;
  CHECK(line_disjoint_support(w));
  w[5] = 2;
  CHECK_FALSE(line_disjoint_support(w));
  w[5] = 0;
  w[0] = 1;
  CHECK(line_disjoint_support(w));
  w[3] = 1;  // shares column 0 with entry 0
  CHECK_FALSE(line_disjoint_support(w));
}

TEST_CASE("certify_upper_bound") {
  const std::vector<std::pair<int, Fraction>> cases{{2, frac(1, 3)}, {4, frac(1, 15)}, {6, frac(1, 63)}};
  for (const auto& [d, expect] : cases) {
    Field f = Field::make(d);
    CodeFamily fam = CodeFamily::uniform(rs_primitive(f, 1, 3), 3);
    TensorWord a = counterexample_word(f);
    ExpansionCertificate cert = certify_upper_bound(a, fam);
    CHECK(cert.bound == expect);
    CHECK(cert.line_disjoint);
    CHECK(cert.cover_lower_bound == static_cast<std::size_t>(hamming_weight(a)));
    // Line-disjoint support on the cube: bound = ||w|| n^2 / |supp w| = 1/n.
    CHECK(cert.bound == norm(a) * f.group_order() * f.group_order() / hamming_weight(a));
    if (d <= 4) {
      CHECK(verify_certificate(cert, fam).valid);
      std::stringstream ss;
      write_certificate(ss, cert, fam);
      ParsedCertificate back = read_certificate(ss);
      CHECK(back.certificate.bound == cert.bound);
      CHECK(back.certificate.witness == cert.witness);
      CHECK(back.family.shape() == fam.shape());
      CHECK(verify_certificate(back.certificate, back.family).valid);
    }
  }
  CodeFamily rep = rep2_family(2);
  CHECK_THROWS_AS(certify_upper_bound(TensorWord(Shape{2, 2}, {1, 0, 0, 0}), rep), std::invalid_argument);
  CHECK_THROWS_AS(certify_upper_bound(TensorWord(Shape{2, 2}), rep), std::invalid_argument);
}

TEST_CASE("tampered certificates are rejected") {
  Field f = Field::make(2);
  CodeFamily fam = rs3_family(3);
  ExpansionCertificate cert = certify_upper_bound(counterexample_word(f), fam);
  auto bad = cert;
  bad.bound = frac(1, 4);
  CHECK_FALSE(verify_certificate(bad, fam).valid);
  bad = cert;
  bad.cover_lower_bound = 10;
  CHECK_FALSE(verify_certificate(bad, fam).valid);
  bad = cert;
  bad.witness[0] ^= 1;
  CHECK_FALSE(verify_certificate(bad, fam).valid);
  std::istringstream junk("certificate v2\n");
  CHECK_THROWS_AS(read_certificate(junk), std::invalid_argument);
}

TEST_CASE("exact rho never exceeds a certificate bound") {
  for (const auto& fam : {rep2_family(2), rep2_family(3), rs3_family(2)}) {
    const Fraction rho = rho_exact(fam).value;
    for (const auto& [entries, cost] : tuple_oracle(fam)) {
      TensorWord w(fam.shape(), entries);
      if (hamming_weight(w) == 0) continue;
      ExpansionCertificate c = certify_upper_bound(w, fam);
      REQUIRE(rho <= c.bound);
      // The packing bound never exceeds the true minimum cost.
      REQUIRE(Fraction(static_cast<long long>(c.cover_lower_bound)) /
                  Fraction(static_cast<long long>(line_count(fam.shape(), 0))) <=
              cost);
    }
  }
}

TEST_CASE("rho_upper_sampled") {
  CHECK_THROWS_AS(rho_upper_sampled(rep2_family(2), 0, 1), std::invalid_argument);

  CodeFamily small = rs3_family(3);
  RhoSampled s = rho_upper_sampled(small, 30, 5);
  CHECK(s.counterexample_in_pool);
  CHECK(s.certified_upper <= frac(1, 3));
  RhoSampled again = rho_upper_sampled(small, 30, 5, 4);
  CHECK(again.certified_upper == s.certified_upper);
  CHECK(again.heuristic == s.heuristic);
  CHECK(again.pool_size == s.pool_size);

  // Sampling a family with exact rho: the certified bound is never below it.
  RhoSampled r2 = rho_upper_sampled(rs3_family(2), 60, 2);
  CHECK(r2.certified_upper >= frac(1, 2));
  CHECK_FALSE(r2.counterexample_in_pool);

  CodeFamily rs15 = CodeFamily::uniform(rs_primitive(Field::make(4), 1, 3), 3);
  RhoSampled big = rho_upper_sampled(rs15, 6, 9, 4);
  CHECK(big.counterexample_in_pool);
  CHECK(big.certified_upper <= frac(1, 15));
}
