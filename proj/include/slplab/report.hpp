#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "slplab/birnbaum.hpp"
#include "slplab/factorization.hpp"
#include "slplab/stopping.hpp"

namespace slplab {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Machine-readable record of one demo run. Field names are frozen in
/// docs/report-schema.md; bump kSchemaVersion when they change.
struct Report {
  std::string demo_name;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> results;
  std::vector<EvidenceAssessment> assessments;
  std::vector<AuditVerdict> verdicts;
  std::vector<StoppingStudy> studies;
  std::vector<FactorizationReport> factorizations;
  std::string schema_version = kSchemaVersion;

  friend bool operator==(const Report&, const Report&) = default;
};

enum class ReportFormat { text, json, csv };

inline ReportFormat parse_format(const std::string& name) {
  if (name == "text") return ReportFormat::text;
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw invalid_input("unsupported format: " + name + " (expected text, json, or csv)");
}

// --------------------------------------------------------------------------
// JSON encoding

namespace detail {

using Json = nlohmann::ordered_json;

inline Json to_json(const Real& value) {
  Json j;
  if (value.is_exact()) {
    j["kind"] = "rational";
    j["numerator"] = numerator(value.rational()).str();
    j["denominator"] = denominator(value.rational()).str();
    j["value"] = value.value();
  } else {
    j["kind"] = "double";
    j["value"] = value.value();
  }
  return j;
}

inline Real real_from_json(const Json& j) {
  if (j.at("kind") == "rational") {
    return Real(Rational(Integer(j.at("numerator").get<std::string>()),
                         Integer(j.at("denominator").get<std::string>())));
  }
  return Real(j.at("value").get<double>());
}

inline Json to_json(const EvidenceAssessment& a) {
  Json j;
  j["p_value"] = to_json(a.p_value);
  j["distribution_used"] = to_string(a.distribution_used);
  j["source"] = a.source;
  j["trace"] = a.trace;
  j["index_preserved"] = a.index_preserved;
  return j;
}

inline SamplingDistribution distribution_from_string(const std::string& s) {
  if (s == "component-conditional") return SamplingDistribution::component_conditional;
  if (s == "mixture-unconditional") return SamplingDistribution::mixture_unconditional;
  if (s == "birnbaum-unconditional") return SamplingDistribution::birnbaum_unconditional;
  throw invalid_input("unknown sampling distribution tag: " + s);
}

inline EvidenceAssessment assessment_from_json(const Json& j) {
  EvidenceAssessment a;
  a.p_value = real_from_json(j.at("p_value"));
  a.distribution_used = distribution_from_string(j.at("distribution_used").get<std::string>());
  a.source = j.at("source").get<std::string>();
  a.trace = j.at("trace").get<std::string>();
  a.index_preserved = j.at("index_preserved").get<bool>();
  return a;
}

inline Json to_json(const PremiseFinding& f) {
  Json j;
  j["holds"] = f.holds;
  Json witnesses = Json::array();
  for (const auto& [left, right] : f.witnesses) {
    witnesses.push_back(Json::array({to_json(left), to_json(right)}));
  }
  j["witnesses"] = std::move(witnesses);
  return j;
}

inline PremiseFinding premise_from_json(const Json& j) {
  PremiseFinding f;
  f.holds = j.at("holds").get<bool>();
  for (const auto& w : j.at("witnesses")) {
    f.witnesses.emplace_back(assessment_from_json(w.at(0)), assessment_from_json(w.at(1)));
  }
  return f;
}

inline Json to_json(const AuditVerdict& v) {
  Json j;
  j["semantics"] = {{"premise1", to_string(v.semantics.premise1)},
                    {"premise2", to_string(v.semantics.premise2)},
                    {"evaluation_order", to_string(v.semantics.evaluation_order)}};
  j["weight_first"] = v.weight_first;
  j["premise1"] = to_json(v.premise1);
  j["premise2"] = to_json(v.premise2);
  j["conclusion"] = {{"holds", v.conclusion_true},
                     {"witness", Json::array({to_json(v.conclusion_witness.first),
                                              to_json(v.conclusion_witness.second)})}};
  j["verdict"] = to_string(v.verdict);
  return j;
}

inline PremiseSemantics premise_semantics_from_string(const std::string& s) {
  if (s == "unconditional") return PremiseSemantics::unconditional;
  if (s == "conditional") return PremiseSemantics::conditional;
  throw invalid_input("unknown premise semantics: " + s + " (expected unconditional|conditional)");
}

inline EvaluationOrder evaluation_order_from_string(const std::string& s) {
  if (s == "p1-first") return EvaluationOrder::premise1_first;
  if (s == "p2-first") return EvaluationOrder::premise2_first;
  throw invalid_input("unknown evaluation order: " + s + " (expected p1-first|p2-first)");
}

inline AuditVerdict verdict_from_json(const Json& j) {
  AuditVerdict v;
  const auto& sem = j.at("semantics");
  v.semantics.premise1 = premise_semantics_from_string(sem.at("premise1").get<std::string>());
  v.semantics.premise2 = premise_semantics_from_string(sem.at("premise2").get<std::string>());
  v.semantics.evaluation_order =
      evaluation_order_from_string(sem.at("evaluation_order").get<std::string>());
  v.weight_first = j.at("weight_first").get<double>();
  v.premise1 = premise_from_json(j.at("premise1"));
  v.premise2 = premise_from_json(j.at("premise2"));
  v.conclusion_true = j.at("conclusion").at("holds").get<bool>();
  v.conclusion_witness = {assessment_from_json(j.at("conclusion").at("witness").at(0)),
                          assessment_from_json(j.at("conclusion").at("witness").at(1))};
  const std::string verdict = j.at("verdict").get<std::string>();
  if (verdict == "invalid") {
    v.verdict = Verdict::invalid;
  } else if (verdict == "blocked-at-premise-1") {
    v.verdict = Verdict::blocked_at_premise_1;
  } else if (verdict == "blocked-at-premise-2") {
    v.verdict = Verdict::blocked_at_premise_2;
  } else if (verdict == "no-violation") {
    v.verdict = Verdict::no_violation;
  } else {
    throw invalid_input("unknown verdict tag: " + verdict);
  }
  return v;
}

inline Json to_json(const StoppingStudy& s) {
  Json j;
  j["replications"] = s.replications;
  j["seed"] = s.seed;
  j["max_trials"] = s.max_trials;
  // The cumulative stop counts are a nondecreasing step function; only
  // the change points (and the final n) are stored.
  Json fractions = Json::object();
  Json counts = Json::array();
  std::int64_t previous = -1;
  for (int n = 1; n <= s.max_trials; ++n) {
    const std::int64_t count = s.cumulative_stops[static_cast<std::size_t>(n) - 1];
    if (count != previous || n == s.max_trials) {
      counts.push_back(Json::array({n, count}));
      fractions[std::to_string(n)] = static_cast<double>(count) / s.replications;
      previous = count;
    }
  }
  j["stop_fraction_by_n"] = std::move(fractions);
  j["cumulative_stops"] = std::move(counts);
  j["final_fraction"] = s.final_fraction();
  j["standard_error"] = s.standard_error;
  return j;
}

inline StoppingStudy study_from_json(const Json& j) {
  StoppingStudy s;
  s.replications = j.at("replications").get<int>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.max_trials = j.at("max_trials").get<int>();
  s.cumulative_stops.assign(static_cast<std::size_t>(s.max_trials), 0);
  std::int64_t level = 0;
  std::size_t next = 0;
  const auto& counts = j.at("cumulative_stops");
  for (int n = 1; n <= s.max_trials; ++n) {
    if (next < counts.size() && counts.at(next).at(0).get<int>() == n) {
      level = counts.at(next).at(1).get<std::int64_t>();
      ++next;
    }
    s.cumulative_stops[static_cast<std::size_t>(n) - 1] = level;
  }
  s.standard_error = j.at("standard_error").get<double>();
  return s;
}

inline Json to_json(const FactorizationReport& r) {
  Json j;
  j["model"] = r.model;
  Json params = Json::array();
  for (const auto& p : r.params) params.push_back(rational_to_string(p));
  j["params"] = std::move(params);
  Json slices = Json::array();
  for (const auto& s : r.slices) {
    slices.push_back({{"statistic", s.statistic},
                      {"sequence_count", s.sequence_count},
                      {"conditional", rational_to_string(s.conditional)},
                      {"uniform", s.uniform},
                      {"parameter_free", s.parameter_free},
                      {"factorizes", s.factorizes}});
  }
  j["slices"] = std::move(slices);
  j["pass"] = r.pass;
  return j;
}

inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(integer_from_decimal_string(text));
    return Rational(integer_from_decimal_string(text.substr(0, slash)),
                    integer_from_decimal_string(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw invalid_input("malformed rational: " + text);
  }
}

inline FactorizationReport factorization_from_json(const Json& j) {
  FactorizationReport r;
  r.model = j.at("model").get<std::string>();
  for (const auto& p : j.at("params")) r.params.push_back(parse_rational(p.get<std::string>()));
  for (const auto& s : j.at("slices")) {
    FactorizationSlice slice;
    slice.statistic = s.at("statistic").get<std::string>();
    slice.sequence_count = s.at("sequence_count").get<std::int64_t>();
    slice.conditional = parse_rational(s.at("conditional").get<std::string>());
    slice.uniform = s.at("uniform").get<bool>();
    slice.parameter_free = s.at("parameter_free").get<bool>();
    slice.factorizes = s.at("factorizes").get<bool>();
    r.slices.push_back(std::move(slice));
  }
  r.pass = j.at("pass").get<bool>();
  return r;
}

}  // namespace detail

inline std::string serialize_json(const Report& report) {
  detail::Json j;
  j["schema_version"] = report.schema_version;
  j["demo"] = report.demo_name;
  j["inputs"] = report.inputs;
  j["results"] = report.results;
  j["assessments"] = detail::Json::array();
  for (const auto& a : report.assessments) j["assessments"].push_back(detail::to_json(a));
  j["verdicts"] = detail::Json::array();
  for (const auto& v : report.verdicts) j["verdicts"].push_back(detail::to_json(v));
  j["studies"] = detail::Json::array();
  for (const auto& s : report.studies) j["studies"].push_back(detail::to_json(s));
  j["factorizations"] = detail::Json::array();
  for (const auto& f : report.factorizations) j["factorizations"].push_back(detail::to_json(f));
  return j.dump(2) + "\n";
}

inline Report parse_report_json(const std::string& text) {
  detail::Json j;
  try {
    j = detail::Json::parse(text);
  } catch (const std::exception& e) {
    throw invalid_input(std::string("malformed report JSON: ") + e.what());
  }
  Report report;
  report.schema_version = j.at("schema_version").get<std::string>();
  require(report.schema_version == kSchemaVersion,
          "unsupported report schema version: " + report.schema_version);
  report.demo_name = j.at("demo").get<std::string>();
  report.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  report.results = j.at("results").get<std::map<std::string, std::string>>();
  for (const auto& a : j.at("assessments")) {
    report.assessments.push_back(detail::assessment_from_json(a));
  }
  for (const auto& v : j.at("verdicts")) report.verdicts.push_back(detail::verdict_from_json(v));
  for (const auto& s : j.at("studies")) report.studies.push_back(detail::study_from_json(s));
  for (const auto& f : j.at("factorizations")) {
    report.factorizations.push_back(detail::factorization_from_json(f));
  }
  return report;
}

// --------------------------------------------------------------------------
// CSV / text encodings

namespace detail {

inline std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace detail

/// CSV flattens the assessments, one row each.
inline std::string serialize_csv(const Report& report) {
  std::ostringstream out;
  out << "demo,assessment,p_value,exact,numerator,denominator,distribution_used,source\n";
  for (std::size_t i = 0; i < report.assessments.size(); ++i) {
    const auto& a = report.assessments[i];
    out << detail::csv_field(report.demo_name) << ',' << i << ','
        << compact_double(a.p_value.value()) << ',' << (a.p_value.is_exact() ? "true" : "false")
        << ',';
    if (a.p_value.is_exact()) {
      out << numerator(a.p_value.rational()).str() << ','
          << denominator(a.p_value.rational()).str();
    } else {
      out << ',';
    }
    out << ',' << detail::csv_field(to_string(a.distribution_used)) << ','
        << detail::csv_field(a.source) << '\n';
  }
  return out.str();
}

inline std::string serialize_text(const Report& report) {
  std::ostringstream out;
  out << "demo: " << report.demo_name << " (schema " << report.schema_version << ")\n";
  if (!report.inputs.empty()) {
    out << "inputs:\n";
    for (const auto& [k, v] : report.inputs) out << "  " << k << " = " << v << "\n";
  }
  if (!report.assessments.empty()) {
    out << "assessments:\n";
    for (const auto& a : report.assessments) {
      out << "  p = " << a.p_value.describe() << "  [" << to_string(a.distribution_used) << "]"
          << (a.index_preserved ? " [index preserved]" : "") << "\n      " << a.source
          << "\n      " << a.trace << "\n";
    }
  }
  for (const auto& v : report.verdicts) {
    out << "verdict under (premise1=" << to_string(v.semantics.premise1)
        << ", premise2=" << to_string(v.semantics.premise2) << ", "
        << to_string(v.semantics.evaluation_order) << "): " << to_string(v.verdict) << "\n"
        << "  premise 1 " << (v.premise1.holds ? "holds" : "fails");
    for (const auto& w : v.premise1.witnesses) {
      out << " (" << w.first.p_value.describe() << " vs " << w.second.p_value.describe() << ")";
    }
    out << "\n  premise 2 " << (v.premise2.holds ? "holds" : "fails");
    for (const auto& w : v.premise2.witnesses) {
      out << " (" << w.first.p_value.describe() << " vs " << w.second.p_value.describe() << ")";
    }
    out << "\n  conclusion " << (v.conclusion_true ? "holds" : "fails") << " ("
        << v.conclusion_witness.first.p_value.describe() << " vs "
        << v.conclusion_witness.second.p_value.describe() << ")\n";
  }
  for (const auto& s : report.studies) {
    out << "stopping study: reps=" << s.replications << " seed=" << s.seed
        << " n_max=" << s.max_trials << "\n  stop fraction at n=1: "
        << compact_double(s.stop_fraction_at(1))
        << ", at n_max: " << compact_double(s.final_fraction())
        << " (SE " << compact_double(s.standard_error) << ")\n";
  }
  for (const auto& f : report.factorizations) {
    out << "factorization of " << f.model << ": " << (f.pass ? "PASS" : "FAIL") << " over "
        << f.slices.size() << " slices\n";
    for (const auto& s : f.slices) {
      out << "  " << s.statistic << ": " << s.sequence_count
          << " sequences, conditional = " << rational_to_string(s.conditional)
          << (s.uniform && s.parameter_free && s.factorizes ? " ok" : " FAIL") << "\n";
    }
  }
  if (!report.results.empty()) {
    out << "results:\n";
    for (const auto& [k, v] : report.results) out << "  " << k << " = " << v << "\n";
  }
  return out.str();
}

inline std::string serialize(const Report& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return serialize_json(report);
    case ReportFormat::csv: return serialize_csv(report);
    case ReportFormat::text: return serialize_text(report);
  }
  throw invalid_input("unsupported format");
}

}  // namespace slplab
