#include "prodexp/report.hpp"

#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace prodexp {

using nlohmann::ordered_json;

TestReport TestReport::exact(std::string quantity, const Fraction& value, std::string instance, std::string test) {
  TestReport r;
  r.quantity = std::move(quantity);
  r.lower = value;
  r.upper = value;
  r.instance = std::move(instance);
  r.test = std::move(test);
  return r;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "jsonlines") return ReportFormat::JsonLines;
  if (name == "csv") return ReportFormat::Csv;
  throw std::invalid_argument("unknown report format: " + name);
}

namespace {

const std::vector<std::string> kColumns = {"kind",     "name",     "holds", "lower", "upper", "lhs",
                                           "relation", "rhs",      "mode",  "instance", "test", "seed",
                                           "samples",  "detail"};

std::string opt(const std::optional<Fraction>& f) { return f ? to_string(*f) : ""; }

std::vector<std::string> row(const Record& rec) {
  if (const auto* t = std::get_if<TestReport>(&rec)) {
    return {"quantity", t->quantity, "", opt(t->lower), opt(t->upper), "", "", "", t->mode, t->instance, t->test,
            t->seed ? std::to_string(*t->seed) : "", std::to_string(t->samples), t->detail};
  }
  const auto& c = std::get<CheckReport>(rec);
  return {"check", c.name, c.holds ? "true" : "false", "", "", to_string(c.lhs), c.relation, to_string(c.rhs),
          c.mode, c.instance, "", "", "", c.detail};
}

ordered_json to_json(const Record& rec) {
  ordered_json j;
  if (const auto* t = std::get_if<TestReport>(&rec)) {
    j["kind"] = "quantity";
    j["quantity"] = t->quantity;
    j["lower"] = t->lower ? ordered_json(to_string(*t->lower)) : ordered_json(nullptr);
    j["upper"] = t->upper ? ordered_json(to_string(*t->upper)) : ordered_json(nullptr);
    j["mode"] = t->mode;
    j["instance"] = t->instance;
    j["test"] = t->test;
    j["seed"] = t->seed ? ordered_json(*t->seed) : ordered_json(nullptr);
    j["samples"] = t->samples;
    j["detail"] = t->detail;
    return j;
  }
  const auto& c = std::get<CheckReport>(rec);
  j["kind"] = "check";
  j["name"] = c.name;
  j["holds"] = c.holds;
  j["lhs"] = to_string(c.lhs);
  j["relation"] = c.relation;
  j["rhs"] = to_string(c.rhs);
  j["mode"] = c.mode;
  j["instance"] = c.instance;
  j["detail"] = c.detail;
  return j;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void emit_report(std::ostream& out, const std::vector<Record>& records, ReportFormat format) {
  if (format == ReportFormat::JsonLines) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
    return;
  }
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& r : records) {
    const auto cells = row(r);
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
    out << '\n';
  }
}

bool any_violation(const std::vector<Record>& records) {
  for (const auto& r : records) {
    if (const auto* c = std::get_if<CheckReport>(&r); c && !c->holds) return true;
  }
  return false;
}

}  // namespace prodexp
