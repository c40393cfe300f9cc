#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "prodexp/expansion.hpp"
#include "prodexp/tensor.hpp"

namespace prodexp {

// Axis-parallel k-flat test T_m^k with size-proportional weights.
struct FlatTest {
  Shape shape;
  int k = 1;
  std::vector<WeightedFlat> flats;
  std::size_t total_cells = 0;  // sum of flat sizes, the common weight denominator

  static FlatTest make(const Shape& shape, int k);
  std::string name() const;  // "T_m^k"
};

// Distances of words, or of their flat restrictions, to restricted product codes.
// Restrictions with k = 1 use line decoders; larger flats enumerate the
// restricted product code (at most 2^20 codewords).
class FlatDistance {
 public:
  explicit FlatDistance(const CodeFamily& family);

  const CodeFamily& family() const { return family_; }
  // Hamming distance of the restriction of w to `flat` from the restricted product code.
  int restricted_distance(const TensorWord& w, const Flat& flat) const;
  // Exact Hamming distance to the whole product code by enumeration.
  int product_distance(const TensorWord& w) const;
  const std::vector<TensorWord>& product_codewords_cached() const;

 private:
  const std::vector<TensorWord>& codewords_for(const std::vector<int>& axes) const;

  CodeFamily family_;
  std::vector<std::vector<bool>> zero_coord_;  // [axis][coordinate]: every codeword vanishes there
  mutable std::mutex mutex_;
  mutable std::map<std::vector<int>, std::vector<TensorWord>> cache_;
};

// E_{I in T} delta(w|_I, code|_I), as (sum of Hamming distances) / total_cells.
struct Expectation {
  std::uint64_t distance_sum = 0;
  std::uint64_t cells = 1;
  Fraction value() const { return Fraction(static_cast<long long>(distance_sum)) / Fraction(static_cast<long long>(cells)); }
};
Expectation test_expectation(const TensorWord& w, const FlatTest& test, const FlatDistance& dist);
Fraction test_expectation(const TensorWord& w, const FlatTest& test, const CodeFamily& family);

struct RobustnessExact {
  Fraction value;
  TensorWord minimizer;
  std::uint64_t words = 0;
};

// min over words outside the product code of E / delta(w, product); needs q^N <= 2^24.
RobustnessExact rho_r_exact(const FlatTest& test, const CodeFamily& family, int jobs = 1);

struct RobustnessSampled {
  // min over samples whose product distance is exact (certified nearest codeword).
  std::optional<Fraction> upper;
  // min over all samples of E / (upper bound on the product distance): each
  // entry is at most the true ratio of its word.
  std::optional<Fraction> lower_estimate;
  std::size_t exact = 0;
  std::size_t inexact = 0;
  std::size_t skipped = 0;  // codewords, ratio undefined
  // Samples whose ratio estimate lies below `threshold`; the exact ones are violations.
  std::size_t below_threshold_exact = 0;
  std::size_t below_threshold_inexact = 0;
};

// Pool: `adversarial` corrupted codewords (single line, sparse, diagonal) and
// the counterexample word when the family is an RS cube, then `random_words`
// uniform words. Per-sample RNG streams make the result independent of `jobs`.
RobustnessSampled rho_r_sampled_upper(const FlatTest& test, const CodeFamily& family, std::size_t random_words,
                                      std::size_t adversarial, std::uint64_t seed, int jobs = 1,
                                      const Fraction& threshold = Fraction(0));

struct AgreementExact {
  Fraction value;
  std::vector<TensorWord> minimizer;  // (c_1, ..., c_m)
  std::uint64_t tuples = 0;
};

// min over tuples of C^(i) words, not all equal, of E_{i,j}||c_i - c_j|| / min_c E_i ||c_i - c||_i.
AgreementExact rho_a_exact(const CodeFamily& family, int jobs = 1);

struct CheckReport {
  std::string name;
  bool holds = false;
  Fraction lhs;
  Fraction rhs;
  std::string relation = ">=";
  std::string mode = "exact";
  std::string instance;
  std::string detail;
};

// Human-readable family descriptor, e.g. "rep[2,1]^3 over GF(2)".
std::string describe(const CodeFamily& family);

// Both directions of the robustness/agreement relation, on exact values.
std::vector<CheckReport> check_lemma_robust_agreement(const CodeFamily& family, int jobs = 1);

// For every word x: ||x - z|| <= d_x (1 + 2 / rho_a), z the best agreement
// codeword for the nearest C^(i) words of x. Enumerates q^N <= 2^20 words.
CheckReport check_agreement_chain(const CodeFamily& family, const Fraction& rho_a);

// rho_r(T_m^k1) >= rho_r(T_m^k2) * rho_r(T_k2^k1) for the m-fold power of `code`.
// Exact when q^(n^m) <= 2^24; otherwise sampled on the adversarial pool
// (T_k2^k1 must still be exact).
CheckReport check_composition(const Code& code, int m, int k1, int k2, std::size_t samples = 1000,
                              std::uint64_t seed = 1, int jobs = 1);

struct PsTrialSummary {
  std::size_t trials = 0;
  std::size_t nondegenerate = 0;  // trials with delta(c1, c2) > 0
  std::size_t violations = 0;
  int max_perturbed_cells = 0;
  Fraction max_delta;
  Fraction worst_ratio;  // max over nondegenerate trials of found distance / delta(c1, c2)
};

// Planted trials for C (x) C with a primitive RS code, k < n/2: c in C (x) C,
// c1 = c + e1 (e1 in C^(0)), c2 = c + e2 (e2 in C^(1)) built from
// minimum-weight line codewords so that delta(c1, c2) <= (1/2 - k/n)^2.
// Each trial decodes c1 along axis 1 and c2 along axis 0 and checks that a
// product codeword within 2 delta(c1, c2) is found.
PsTrialSummary run_ps_corollary(const CyclicCode& code, std::size_t trials, std::uint64_t seed, int jobs = 1);
CheckReport check_ps_corollary(const CyclicCode& code, std::size_t trials, std::uint64_t seed, int jobs = 1);

struct PaperConstants {
  int m = 0;
  int M = 0;
  Fraction alpha_r;
  Fraction alpha_a;
  // rho^{M+1} / (4 * 12^{m-2})
  std::function<Fraction(const Fraction&)> alpha;
};

// Throws std::invalid_argument for m < 3.
PaperConstants paper_constants(int m, const Fraction& rho_r_T21 = frac(1, 72));

// delta(C)^k / 12
Fraction hyperplane_bound(const Fraction& delta, int k);
// rho_r(T_2^1) * delta^M / 12^{m-2}
Fraction robust_tm1_bound(const Fraction& rho_r_T21, const Fraction& delta, int m);

// rho_r(T_k^{k-1}, C^(x)k) >= delta(C)^k / 12 on exact values.
CheckReport check_hyperplane_bound(const Code& code, int k, int jobs = 1);
// rho_r(T_m^1, C^(x)m) >= rho_r(T_2^1, C^(x)2) delta^M / 12^{m-2} on exact values.
CheckReport check_robust_tm1(const Code& code, int m, int jobs = 1);
// rho_r(T_m^1, C^(x)m) >= alpha(rho(C, ..., C)) on exact values.
CheckReport check_prop_main(const Code& code, int m, int jobs = 1);
// rho(C_1, C_2) >= rho(C_1, C_2, C_3) on exact values.
CheckReport check_monotonicity(const Code& code, int jobs = 1);

}  // namespace prodexp
