// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "oracles.hpp"
#include "prodexp/errors.hpp"
#include "prodexp/expansion.hpp"
#include "prodexp/testability.hpp"

using namespace prodexp;

namespace {

const int kJobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

CodeFamily rep2(int m) { return CodeFamily::uniform(repetition2(), m); }
CyclicCode rs(int t) { return rs_primitive(Field::make(2 * t), 1, 3); }

Outcome criterion1() {
  Outcome o;
  for (int t = 1; t <= 3; ++t) {
    const Field f = Field::make(2 * t);
    const int n = f.group_order();
    const CodeFamily fam = CodeFamily::uniform(rs(t), 3);
    const TensorWord a = counterexample_word(f);
    o.require(sum_contains(a, fam, SumMethod::CheckPoly), "membership t=" + std::to_string(t));
    o.require(hamming_weight(a) == n * n, "support t=" + std::to_string(t));
    o.require(line_disjoint_support(a), "line-disjoint t=" + std::to_string(t));
    const ExpansionCertificate cert = certify_upper_bound(a, fam);
    o.require(cert.bound == frac(1, n), "bound t=" + std::to_string(t));
    o.note << " n=" << n << ":" << to_string(cert.bound);
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const CodeFamily fam = CodeFamily::uniform(rs(2), 3);
  std::mt19937_64 rng(2024);
  int disagreements = 0, members = 0;
  auto compare = [&](const TensorWord& w) {
    const bool a = sum_contains(w, fam, SumMethod::CheckPoly);
    const bool b = sum_contains(w, fam, SumMethod::DualTensor);
    disagreements += a != b;
    members += a;
  };
  compare(counterexample_word(Field::make(4)));
  for (int i = 0; i < 1000; ++i) {
    TensorWord w(fam.shape());
    for (int ax = 0; ax < 3; ++ax) w = w + random_direction_codeword(fam, ax, rng);
    compare(w);
  }
  for (int i = 0; i < 1000; ++i) compare(random_word(fam.shape(), fam.field(), rng));
  o.require(disagreements == 0, "methods disagree");
  o.require(members >= 1001, "sum codewords rejected");
  o.note << " 2001 words, " << disagreements << " disagreements, " << members << " members";
  return o;
}

struct TinyValues {
  Fraction rho, rho_r_line, rho_a;
  std::optional<Fraction> rho_r_plane;
};

// Oracle and implementation side by side for rep-[2,1]^m.
TinyValues tiny(int m, Outcome& o) {
  const CodeFamily fam = rep2(m);
  const std::string tag = " m=" + std::to_string(m);
  TinyValues v;
  v.rho = rho_exact(fam).value;
  o.require(v.rho == oracle::oracle_rho(fam), "rho" + tag);
  v.rho_r_line = rho_r_exact(FlatTest::make(fam.shape(), 1), fam, kJobs).value;
  o.require(v.rho_r_line == oracle::oracle_rho_r(fam, 1), "rho_r T^1" + tag);
  if (m == 3) {
    v.rho_r_plane = rho_r_exact(FlatTest::make(fam.shape(), 2), fam, kJobs).value;
    o.require(*v.rho_r_plane == oracle::oracle_rho_r(fam, 2), "rho_r T^2" + tag);
  }
  v.rho_a = rho_a_exact(fam, kJobs).value;
  o.require(v.rho_a == oracle::oracle_rho_a(fam), "rho_a" + tag);
  return v;
}

Outcome criterion3() {
  Outcome o;
  const TinyValues m2 = tiny(2, o), m3 = tiny(3, o);
  // Frozen fixtures from the oracles.
  o.require(m2.rho == frac(1, 2), "anchor rho(rep2, rep2) = 1/2");
  o.require(m3.rho == frac(1, 3), "rho m=3 fixture");
  o.require(m2.rho_r_line == frac(1, 2) && m3.rho_r_line == frac(1, 3) && *m3.rho_r_plane == frac(1, 2),
            "rho_r fixtures");
  o.require(m2.rho_a == frac(1, 2) && m3.rho_a == frac(4, 9), "rho_a fixtures");
  o.note << " rho " << to_string(m2.rho) << "," << to_string(m3.rho) << "; rho_r T_2^1 " << to_string(m2.rho_r_line)
         << ", T_3^1 " << to_string(m3.rho_r_line) << ", T_3^2 " << to_string(*m3.rho_r_plane) << "; rho_a "
         << to_string(m2.rho_a) << "," << to_string(m3.rho_a);
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int m : {2, 3}) {
    for (const auto& r : check_lemma_robust_agreement(rep2(m), kJobs)) {
      if (r.name == "robust_from_agreement" || r.name == "agreement_from_robust") {
        o.require(r.holds, r.name + " m=" + std::to_string(m));
        o.note << " m=" << m << " " << to_string(r.lhs) << r.relation << to_string(r.rhs) << ";";
      }
    }
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const CheckReport r = check_composition(repetition2(), 3, 1, 2, 0, 0, kJobs);
  o.require(r.holds && r.mode == "exact", "composition");
  o.note << " " << to_string(r.lhs) << " >= " << to_string(r.rhs);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::vector<std::pair<std::string, CodeFamily>> fams = {
      {"rep2^2", rep2(2)}, {"rep2^3", rep2(3)}, {"GF(4)[3,1]^2", CodeFamily::uniform(rs(1), 2)}};
  for (const auto& [name, fam] : fams) {
    for (int k = 1; k < fam.dims(); ++k) {
      const Fraction r = rho_r_exact(FlatTest::make(fam.shape(), k), fam, kJobs).value;
      o.require(r <= 1, "rho_r " + name);
      o.note << " " << name << " rho_r(T^" << k << ")=" << to_string(r);
    }
    const Fraction a = rho_a_exact(fam, kJobs).value;
    o.require(a <= 2, "rho_a " + name);
    o.note << " rho_a=" << to_string(a) << ";";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const PsTrialSummary s = run_ps_corollary(rs(2), 1000, 7, kJobs);
  o.require(s.violations == 0, "RS[15,5] violations");
  o.require(s.max_delta <= frac(1, 36), "delta budget");
  o.note << " RS[15,5]: " << s.trials << " trials, " << s.violations << " violations, " << s.nondegenerate
         << " with delta > 0 (line codewords weigh >= 11 > 6-cell budget)";
  const PsTrialSummary big = run_ps_corollary(rs(3), 40, 7, kJobs);
  o.require(big.violations == 0, "RS[63,21] violations");
  o.require(big.nondegenerate > 0, "RS[63,21] nondegenerate trials");
  o.note << "; RS[63,21]: " << big.trials << " trials, " << big.nondegenerate << " with delta > 0, max delta "
         << to_string(big.max_delta) << ", worst found/delta " << to_string(big.worst_ratio);
  return o;
}

Outcome criterion8() {
  Outcome o;
  const Field f = Field::make(4);
  const CyclicCode code = rs(2);
  std::unordered_set<std::uint64_t> seen;
  std::size_t failures = 0;
  const std::uint64_t total = 1u << 20;  // 16^5 polynomials of degree < 5
  seen.reserve(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<Elem> coeffs(5);
    for (int i = 0; i < 5; ++i) coeffs[i] = static_cast<Elem>((idx >> (4 * i)) & 15);
    const MultiPoly p = MultiPoly::from_univariate(Poly(coeffs), 1, 15, 0);
    const Word ev = dft_evaluate(p, f);
    failures += !cyclic_contains(code, ev);
    std::uint64_t key = 0;
    for (Elem e : ev) key = (key << 4) | e;
    seen.insert(key);
  }
  o.require(failures == 0, "evaluation vector outside the code");
  o.require(seen.size() == total, "evaluation map not injective");
  o.require(codeword_count(code) == total, "code size");
  o.note << " " << total << " polynomials, " << failures << " outside, " << seen.size() << " distinct, |C| = "
         << codeword_count(code);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const CodeFamily fam = CodeFamily::uniform(rs(2), 2);
  const FlatTest t = FlatTest::make(fam.shape(), 1);
  const RobustnessSampled s = rho_r_sampled_upper(t, fam, 1000, 200, 9, kJobs, frac(1, 72));
  o.require(s.below_threshold_exact == 0, "sampled ratio below 1/72");
  o.require(!s.upper || *s.upper >= frac(1, 72), "upper below 1/72");
  o.note << " upper " << (s.upper ? to_string(*s.upper) : "none") << " over " << s.exact << " exact samples; "
         << s.inexact << " inexact (lower estimate " << (s.lower_estimate ? to_string(*s.lower_estimate) : "none")
         << ", " << s.below_threshold_inexact << " below 1/72)";
  return o;
}

Outcome criterion10() {
  Outcome o;
  const PaperConstants c = paper_constants(3);
  o.require(c.M == 3, "M");
  o.require(c.alpha_r == frac(1, 2916), "alpha_r");
  o.require(c.alpha_a == frac(2, 3) * c.alpha_r / (1 + c.alpha_r), "alpha_a");
  for (const Fraction& rho : {frac(1, 2), frac(1, 3), frac(2, 7)}) {
    o.require(c.alpha(rho) == pow(rho, 4) / 48, "alpha(rho)");
  }
  o.note << " M=" << c.M << " alpha_r=" << to_string(c.alpha_r) << " alpha_a=" << to_string(c.alpha_a)
         << " alpha(1)=" << to_string(c.alpha(1));
  return o;
}

}  // namespace

int main() {
  using Fn = Outcome (*)();
  const std::vector<std::pair<const char*, Fn>> criteria = {
      {"counterexample certificate", criterion1}, {"membership cross-validation", criterion2},
      {"exact tiny-scale constants", criterion3}, {"robust/agreement inequalities", criterion4},
      {"test composition", criterion5},          {"rho_a <= 2 and rho_r <= 1", criterion6},
      {"planted trials", criterion7},  {"evaluation/check-polynomial equivalence", criterion8},
      {"sampled robustness not below 1/72", criterion9}, {"constants", criterion10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ";"
              << o.note.str() << " (" << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
