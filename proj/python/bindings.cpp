#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "prodexp/errors.hpp"
#include "prodexp/expansion.hpp"
#include "prodexp/harness.hpp"
#include "prodexp/testability.hpp"

namespace py = pybind11;
using namespace prodexp;

namespace {

ExperimentConfig config(const std::string& instance, int m, int t, const std::string& rate) {
  ExperimentConfig c;
  c.instance = instance;
  c.m = m;
  c.t = t;
  c.rate = parse_fraction(rate);
  return c;
}

CodeFamily family(const std::string& instance, int m, int t, const std::string& rate) {
  return CodeFamily::uniform(instance_code(config(instance, m, t, rate)), m);
}

py::dict check_dict(const CheckReport& r) {
  py::dict d;
  d["name"] = r.name;
  d["holds"] = r.holds;
  d["lhs"] = to_string(r.lhs);
  d["relation"] = r.relation;
  d["rhs"] = to_string(r.rhs);
  d["mode"] = r.mode;
  d["instance"] = r.instance;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Product code expansion and testability (exact rationals as \"p/q\" strings)";

  py::register_exception<LimitExceeded>(mod, "LimitExceeded");
  py::register_exception<Undefined>(mod, "Undefined");

  mod.def("describe", [](const std::string& instance, int m, int t, const std::string& rate) {
    return describe(family(instance, m, t, rate));
  }, py::arg("instance"), py::arg("m"), py::arg("t") = 1, py::arg("rate") = "1/3");

  mod.def("certify_counterexample", [](int t) {
    const Field f = Field::make(2 * t);
    const CodeFamily fam = family("rs", 3, t, "1/3");
    const TensorWord a = counterexample_word(f);
    const ExpansionCertificate cert = certify_upper_bound(a, fam);
    std::ostringstream os;
    write_certificate(os, cert, fam);
    py::dict d;
    d["n"] = f.group_order();
    d["bound"] = to_string(cert.bound);
    d["support"] = hamming_weight(a);
    d["line_disjoint"] = cert.line_disjoint;
    d["in_sum_code"] = sum_contains(a, fam, SumMethod::CheckPoly);
    d["certificate"] = os.str();
    return d;
  }, py::arg("t"));

  mod.def("verify_certificate", [](const std::string& text) {
    std::istringstream in(text);
    const ParsedCertificate p = read_certificate(in);
    const CertificateCheck c = verify_certificate(p.certificate, p.family);
    py::dict d;
    d["valid"] = c.valid;
    d["reason"] = c.reason;
    d["bound"] = to_string(p.certificate.bound);
    return d;
  }, py::arg("text"));

  mod.def("rho_exact", [](const std::string& instance, int m, int t, const std::string& rate) {
    return to_string(rho_exact(family(instance, m, t, rate)).value);
  }, py::arg("instance"), py::arg("m"), py::arg("t") = 1, py::arg("rate") = "1/3");

  mod.def("rho_upper_sampled", [](const std::string& instance, int m, std::size_t samples, std::uint64_t seed, int t,
                                  const std::string& rate, int jobs) {
    const RhoSampled r = rho_upper_sampled(family(instance, m, t, rate), samples, seed, jobs);
    py::dict d;
    d["certified_upper"] = to_string(r.certified_upper);
    d["heuristic"] = to_string(r.heuristic);
    d["pool_size"] = r.pool_size;
    d["counterexample_in_pool"] = r.counterexample_in_pool;
    return d;
  }, py::arg("instance"), py::arg("m"), py::arg("samples"), py::arg("seed"), py::arg("t") = 1,
     py::arg("rate") = "1/3", py::arg("jobs") = 1);

  mod.def("rho_r_exact", [](const std::string& instance, int m, int k, int t, const std::string& rate, int jobs) {
    const CodeFamily fam = family(instance, m, t, rate);
    return to_string(rho_r_exact(FlatTest::make(fam.shape(), k), fam, jobs).value);
  }, py::arg("instance"), py::arg("m"), py::arg("k") = 1, py::arg("t") = 1, py::arg("rate") = "1/3",
     py::arg("jobs") = 1);

  mod.def("rho_r_sampled", [](const std::string& instance, int m, int k, std::size_t random_words,
                              std::size_t adversarial, std::uint64_t seed, int t, const std::string& rate, int jobs) {
    const CodeFamily fam = family(instance, m, t, rate);
    const RobustnessSampled s =
        rho_r_sampled_upper(FlatTest::make(fam.shape(), k), fam, random_words, adversarial, seed, jobs);
    py::dict d;
    d["upper"] = s.upper ? py::object(py::str(to_string(*s.upper))) : py::object(py::none());
    d["lower_estimate"] = s.lower_estimate ? py::object(py::str(to_string(*s.lower_estimate))) : py::object(py::none());
    d["exact"] = s.exact;
    d["inexact"] = s.inexact;
    d["skipped"] = s.skipped;
    return d;
  }, py::arg("instance"), py::arg("m"), py::arg("k"), py::arg("random_words"), py::arg("adversarial"),
     py::arg("seed"), py::arg("t") = 1, py::arg("rate") = "1/3", py::arg("jobs") = 1);

  mod.def("rho_a_exact", [](const std::string& instance, int m, int t, const std::string& rate, int jobs) {
    return to_string(rho_a_exact(family(instance, m, t, rate), jobs).value);
  }, py::arg("instance"), py::arg("m"), py::arg("t") = 1, py::arg("rate") = "1/3", py::arg("jobs") = 1);

  mod.def("check_lemmas", [](const std::string& instance, int m, int t, const std::string& rate, int jobs) {
    py::list out;
    for (const auto& r : check_lemma_robust_agreement(family(instance, m, t, rate), jobs)) out.append(check_dict(r));
    return out;
  }, py::arg("instance"), py::arg("m"), py::arg("t") = 1, py::arg("rate") = "1/3", py::arg("jobs") = 1);

  mod.def("ps_corollary", [](int t, std::size_t trials, std::uint64_t seed, int jobs) {
    const CyclicCode code = rs_primitive(Field::make(2 * t), 1, 3);
    const PsTrialSummary s = run_ps_corollary(code, trials, seed, jobs);
    py::dict d;
    d["trials"] = s.trials;
    d["nondegenerate"] = s.nondegenerate;
    d["violations"] = s.violations;
    d["max_delta"] = to_string(s.max_delta);
    d["worst_ratio"] = to_string(s.worst_ratio);
    return d;
  }, py::arg("t"), py::arg("trials"), py::arg("seed"), py::arg("jobs") = 1);

  mod.def("paper_constants", [](int m, const std::string& rho_r_T21) {
    const PaperConstants c = paper_constants(m, parse_fraction(rho_r_T21));
    py::dict d;
    d["M"] = c.M;
    d["alpha_r"] = to_string(c.alpha_r);
    d["alpha_a"] = to_string(c.alpha_a);
    return d;
  }, py::arg("m"), py::arg("rho_r_T21") = "1/72");

  mod.def("alpha", [](int m, const std::string& rho) {
    return to_string(paper_constants(m).alpha(parse_fraction(rho)));
  }, py::arg("m"), py::arg("rho"));

  mod.def("run", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = run(args, out, err);
    return py::make_tuple(status, out.str(), err.str());
  }, py::arg("args"));
}
