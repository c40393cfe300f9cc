#include "prodexp/harness.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "prodexp/errors.hpp"
#include "prodexp/expansion.hpp"

namespace prodexp {

namespace {

const std::vector<std::string> kCommands = {"certify-counterexample", "verify-certificate", "rho-exact",
                                            "rho-sampled",            "robustness",         "agreement",
                                            "check-lemmas",           "ps-corollary",       "constants"};

const std::vector<std::string> kExactOnly = {"certify-counterexample", "verify-certificate", "rho-exact",
                                             "agreement", "check-lemmas", "constants"};
const std::vector<std::string> kSampledOnly = {"rho-sampled", "ps-corollary"};

bool among(const std::string& s, const std::vector<std::string>& list) {
  return std::find(list.begin(), list.end(), s) != list.end();
}

CheckReport equality_check(std::string name, const Fraction& lhs, const Fraction& rhs, std::string instance,
                           std::string detail, std::string mode = "exact") {
  CheckReport c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = "==";
  c.holds = lhs == rhs;
  c.mode = std::move(mode);
  c.instance = std::move(instance);
  c.detail = std::move(detail);
  return c;
}

CheckReport bound_check(std::string name, const Fraction& lhs, const std::string& relation, const Fraction& rhs,
                        std::string instance, std::string detail, std::string mode = "exact") {
  CheckReport c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  c.relation = relation;
  c.holds = relation == ">=" ? lhs >= rhs : lhs <= rhs;
  c.mode = std::move(mode);
  c.instance = std::move(instance);
  c.detail = std::move(detail);
  return c;
}

Fraction flag(bool b) { return Fraction(b ? 1 : 0); }

}  // namespace

Code instance_code(const ExperimentConfig& config) {
  if (config.instance == "rep2") return repetition2();
  const long long num = static_cast<long long>(boost::multiprecision::numerator(config.rate));
  const long long den = static_cast<long long>(boost::multiprecision::denominator(config.rate));
  return rs_primitive(Field::make(2 * config.t), static_cast<int>(num), static_cast<int>(den));
}

std::optional<ExperimentConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  ExperimentConfig cfg;
  CLI::App app{"Product code expansion and testability experiments", "prodexp"};
  app.set_config("--config", "", "Config file (TOML/INI); flags win");
  app.require_subcommand(1);
  app.fallthrough();
  std::string rate = "1/3", format = "jsonlines";
  std::uint64_t samples = 0, seed = 0;
  app.add_option("--instance", cfg.instance, "rs or rep2")->check(CLI::IsMember({"rs", "rep2"}));
  app.add_option("--t", cfg.t, "RS field parameter: GF(4^t), n = 4^t - 1")->check(CLI::Range(1, 4));
  app.add_option("--m", cfg.m, "Number of tensor factors")->check(CLI::Range(2, 8));
  app.add_option("--k", cfg.k, "Flat dimension of the test")->check(CLI::PositiveNumber);
  app.add_option("--rate", rate, "RS rate p/q");
  auto* samples_opt = app.add_option("--samples", samples, "Sample or trial count")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for sampled modes");
  app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "jsonlines or csv")->check(CLI::IsMember({"jsonlines", "csv"}));
  app.add_option("--out", cfg.out, "Report path (default: stdout)");
  app.add_option("--certificate", cfg.certificate, "Certificate path");
  for (const auto& name : kCommands) app.add_subcommand(name);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    cfg.rate = parse_fraction(rate);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--rate: ") + e.what());
  }
  cfg.format = parse_report_format(format);
  if (samples_opt->count() > 0) cfg.samples = samples;
  if (seed_opt->count() > 0) cfg.seed = seed;
  return cfg;
}

void validate(const ExperimentConfig& c) {
  if (!among(c.command, kCommands)) throw UsageError("unknown command: " + c.command);
  if (c.instance != "rs" && c.instance != "rep2") throw UsageError("--instance must be rs or rep2");
  if (c.t < 1 || c.t > 4) throw UsageError("--t must be in 1..4");
  if (c.m < 2 || c.m > 8) throw UsageError("--m must be in 2..8");
  if (c.jobs < 1) throw UsageError("--jobs must be positive");
  if (c.rate <= 0 || c.rate >= 1) throw UsageError("--rate must lie strictly between 0 and 1");
  if (c.instance == "rs") {
    const Fraction k = c.rate * Fraction((1 << (2 * c.t)) - 1);
    if (boost::multiprecision::denominator(k) != 1) throw UsageError("--rate times n must be an integer");
  }
  if (among(c.command, kExactOnly) && (c.samples || c.seed)) {
    throw UsageError(c.command + " is exact; --samples and --seed are not accepted");
  }
  if (among(c.command, kSampledOnly) && (!c.samples || !c.seed)) {
    throw UsageError(c.command + " is sampled; --samples and --seed are required");
  }
  if (c.command == "robustness") {
    if (c.k < 1 || c.k >= c.m) throw UsageError("--k must satisfy 1 <= k < m");
    if (c.samples.has_value() != c.seed.has_value()) throw UsageError("sampled robustness needs both --samples and --seed");
  }
  if (c.command == "certify-counterexample") {
    if (c.instance != "rs" || c.rate != frac(1, 3) || c.m != 3) {
      throw UsageError("certify-counterexample is defined for --instance rs, --rate 1/3, --m 3");
    }
  }
  if (c.command == "verify-certificate" && c.certificate.empty()) throw UsageError("verify-certificate needs --certificate");
  if (c.command == "ps-corollary") {
    if (c.instance != "rs") throw UsageError("ps-corollary needs --instance rs");
    if (c.rate >= frac(1, 2)) throw UsageError("ps-corollary needs rate below 1/2");
  }
  if (c.command == "constants" && c.m < 3) throw UsageError("constants are defined for m >= 3");
}

Outcome execute(const ExperimentConfig& c) {
  Outcome o;
  auto& rec = o.records;

  if (c.command == "constants") {
    const PaperConstants pc = paper_constants(c.m);
    const std::string inst = "m=" + std::to_string(c.m);
    rec.push_back(TestReport::exact("M", Fraction(pc.M), inst));
    auto ar = TestReport::exact("alpha_r", pc.alpha_r, inst);
    ar.detail = "rho_r(T_2^1) = 1/72";
    rec.push_back(ar);
    rec.push_back(TestReport::exact("alpha_a", pc.alpha_a, inst));
    auto al = TestReport::exact("alpha_at_1", pc.alpha(Fraction(1)), inst);
    al.detail = "alpha(rho) = rho^" + std::to_string(pc.M + 1) + " * " + to_string(pc.alpha(Fraction(1)));
    rec.push_back(al);
    return o;
  }

  if (c.command == "verify-certificate") {
    std::ifstream in(c.certificate);
    if (!in) throw UsageError("cannot open certificate " + c.certificate);
    const ParsedCertificate parsed = read_certificate(in);
    const CertificateCheck chk = verify_certificate(parsed.certificate, parsed.family);
    const std::string inst = describe(parsed.family);
    TestReport r;
    r.quantity = "rho";
    r.upper = parsed.certificate.bound;
    r.mode = "certificate";
    r.instance = inst;
    r.detail = "bound claimed by " + c.certificate;
    rec.push_back(r);
    rec.push_back(equality_check("certificate_valid", flag(chk.valid), Fraction(1), inst, chk.reason, "certificate"));
    return o;
  }

  const Code code = instance_code(c);

  if (c.command == "certify-counterexample") {
    const Field field = Field::make(2 * c.t);
    const int n = field.group_order();
    const CodeFamily fam = CodeFamily::uniform(code, 3);
    const std::string inst = describe(fam);
    const TensorWord a = counterexample_word(field);
    rec.push_back(equality_check("counterexample_in_sum_code", flag(sum_contains(a, fam, SumMethod::CheckPoly)),
                                 Fraction(1), inst, "check-polynomial membership"));
    rec.push_back(equality_check("support_size", Fraction(hamming_weight(a)), Fraction(n * n), inst, "|supp(a)| = n^2"));
    rec.push_back(equality_check("line_disjoint_support", flag(line_disjoint_support(a)), Fraction(1), inst,
                                 "every axis-parallel line meets the support at most once"));
    const ExpansionCertificate cert = certify_upper_bound(a, fam);
    TestReport r;
    r.quantity = "rho";
    r.upper = cert.bound;
    r.mode = "certificate";
    r.instance = inst;
    r.detail = "cover lower bound " + std::to_string(cert.cover_lower_bound);
    rec.push_back(r);
    rec.push_back(equality_check("bound_equals_1/n", cert.bound, frac(1, n), inst, "rho <= 1/n", "certificate"));
    std::ostringstream os;
    write_certificate(os, cert, fam);
    o.certificate_text = os.str();
    return o;
  }

  if (c.command == "ps-corollary") {
    const CyclicCode* cyc = cyclic_of(code);
    const PsTrialSummary s = run_ps_corollary(*cyc, *c.samples, *c.seed, c.jobs);
    const std::string inst = describe(CodeFamily::uniform(code, 2));
    CheckReport chk = bound_check("ps_corollary_violations", Fraction(static_cast<long long>(s.violations)), "<=",
                                  Fraction(0), inst,
                                  std::to_string(s.trials) + " trials, " + std::to_string(s.nondegenerate) +
                                      " with delta(c1,c2) > 0, max delta " + to_string(s.max_delta) +
                                      ", worst found/delta " + to_string(s.worst_ratio),
                                  "sampled");
    rec.push_back(chk);
    return o;
  }

  const CodeFamily fam = CodeFamily::uniform(code, c.m);
  const std::string inst = describe(fam);

  if (c.command == "rho-exact") {
    const RhoExact r = rho_exact(fam);
    auto t = TestReport::exact("rho", r.value, inst);
    t.detail = "minimizer weight " + std::to_string(hamming_weight(r.minimizer));
    rec.push_back(t);
    return o;
  }

  if (c.command == "rho-sampled") {
    const RhoSampled r = rho_upper_sampled(fam, *c.samples, *c.seed, c.jobs);
    TestReport t;
    t.quantity = "rho";
    t.upper = r.certified_upper;
    t.mode = "sampled";
    t.instance = inst;
    t.seed = c.seed;
    t.samples = *c.samples;
    t.detail = "heuristic " + to_string(r.heuristic) + ", pool " + std::to_string(r.pool_size) +
               (r.counterexample_in_pool ? ", counterexample in pool" : "");
    rec.push_back(t);
    return o;
  }

  if (c.command == "robustness") {
    const FlatTest test = FlatTest::make(fam.shape(), c.k);
    if (!c.samples) {
      const RobustnessExact r = rho_r_exact(test, fam, c.jobs);
      auto t = TestReport::exact("rho_r", r.value, inst, test.name());
      t.detail = std::to_string(r.words) + " words";
      rec.push_back(t);
      rec.push_back(bound_check("rho_r_at_most_1", r.value, "<=", Fraction(1), inst, test.name()));
      return o;
    }
    // The one-sided 1/72 consistency applies to the line test on C (x) C, rate <= 1/3.
    const bool threshold_applies = c.instance == "rs" && c.m == 2 && c.k == 1 && c.rate <= frac(1, 3);
    const Fraction threshold = threshold_applies ? frac(1, 72) : Fraction(0);
    const RobustnessSampled s = rho_r_sampled_upper(test, fam, *c.samples, *c.samples, *c.seed, c.jobs, threshold);
    TestReport t;
    t.quantity = "rho_r";
    t.upper = s.upper;
    t.mode = "sampled";
    t.instance = inst;
    t.test = test.name();
    t.seed = c.seed;
    t.samples = *c.samples;
    t.detail = std::to_string(s.exact) + " exact, " + std::to_string(s.inexact) + " inexact, " +
               std::to_string(s.skipped) + " codewords skipped; lower estimate " +
               (s.lower_estimate ? to_string(*s.lower_estimate) : std::string("none"));
    rec.push_back(t);
    if (threshold_applies) {
      CheckReport chk = bound_check("rho_r_sampled_not_below_1/72", s.upper.value_or(threshold), ">=", threshold,
                                    inst,
                                    std::to_string(s.below_threshold_exact) + " exact samples below 1/72, " +
                                        std::to_string(s.below_threshold_inexact) + " inexact below",
                                    "sampled");
      chk.holds = s.below_threshold_exact == 0;
      rec.push_back(chk);
    }
    return o;
  }

  if (c.command == "agreement") {
    const AgreementExact a = rho_a_exact(fam, c.jobs);
    auto t = TestReport::exact("rho_a", a.value, inst);
    t.detail = std::to_string(a.tuples) + " tuples";
    rec.push_back(t);
    rec.push_back(bound_check("rho_a_at_most_2", a.value, "<=", Fraction(2), inst, "agreement bound"));
    return o;
  }

  if (c.command == "check-lemmas") {
    for (auto& r : check_lemma_robust_agreement(fam, c.jobs)) rec.push_back(std::move(r));
    // Further checks run when their exact values fit the enumeration limits.
    auto optional_check = [&](auto&& fn) {
      try {
        rec.push_back(fn());
      } catch (const LimitExceeded&) {
      }
    };
    const bool tiny = shape_size(fam.shape()) * static_cast<std::size_t>(fam.field().degree()) <= 24;
    for (int k2 = 2; tiny && k2 < c.m; ++k2) {
      for (int k1 = 1; k1 < k2; ++k1) {
        optional_check([&] { return check_composition(code, c.m, k1, k2, 1, 0, c.jobs); });
      }
    }
    optional_check([&] { return check_hyperplane_bound(code, c.m, c.jobs); });
    if (c.m >= 3) {
      optional_check([&] { return check_robust_tm1(code, c.m, c.jobs); });
      optional_check([&] { return check_prop_main(code, c.m, c.jobs); });
    }
    optional_check([&] { return check_monotonicity(code, c.jobs); });
    return o;
  }

  throw UsageError("unknown command: " + c.command);
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    validate(config);
    o = execute(config);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const LimitExceeded& e) {
    err << "instance too large: " << e.what() << '\n';
    return 2;
  } catch (const Undefined& e) {
    err << "undefined: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream report;
  emit_report(report, o.records, config.format);
  std::string cert_path = config.certificate;
  if (config.command == "certify-counterexample" && cert_path.empty()) {
    cert_path = "counterexample-t" + std::to_string(config.t) + ".cert";
  }
  if (config.command == "certify-counterexample") {
    std::ofstream f(cert_path);
    if (!(f << o.certificate_text)) {
      err << "cannot write " << cert_path << '\n';
      return 2;
    }
  }
  if (config.out.empty()) {
    out << report.str();
  } else {
    std::ofstream f(config.out);
    if (!(f << report.str())) {
      err << "cannot write " << config.out << '\n';
      return 2;
    }
  }
  const bool violation = any_violation(o.records);
  if (violation) err << "violation: at least one check failed\n";
  return violation ? 1 : 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<ExperimentConfig> cfg;
  try {
    cfg = parse_args(args, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  if (!cfg) return 0;
  return run(*cfg, out, err);
}

}  // namespace prodexp
