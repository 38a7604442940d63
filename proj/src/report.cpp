#include "roughlab/report.hpp"

#include <cerrno>
#include <cstdio>
#include <fstream>
#include <system_error>

#include "roughlab/error.hpp"

namespace roughlab {

using nlohmann::json;

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns.size())
    throw ConfigurationError("csv row has " + std::to_string(cells.size()) + " cells for " +
                             std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(cells));
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_number(std::size_t value) { return std::to_string(value); }

std::string format_bool(bool value) { return value ? "1" : "0"; }

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote(cells[i]);
  }
  out += '\n';
}

json checks_json(const std::vector<ExponentCheck>& checks) {
  json out = json::array();
  for (const ExponentCheck& c : checks)
    out.push_back({{"name", c.name},
                   {"expected", c.expected},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"pass", c.pass}});
  return out;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  append_line(out, table.columns);
  for (const auto& row : table.rows) append_line(out, row);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  errno = 0;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), "cannot open '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), "cannot write '" + path + "'");
}

void write_csv(const std::string& path, const CsvTable& table) { write_text_file(path, to_csv(table)); }

void write_json(const std::string& path, const json& value) { write_text_file(path, value.dump(2) + "\n"); }

CsvTable trace_table(const SolutionTrace& trace) {
  CsvTable t({"iteration", "weighted_norm", "increment_norm", "contraction_factor"});
  double prev = trace.reference_norm;
  for (std::size_t k = 0; k < trace.increment_norms.size(); ++k) {
    const double inc = trace.increment_norms[k];
    t.add_row({format_number(k + 1), format_number(trace.weighted_norms.at(k + 1).value), format_number(inc),
               format_number(prev > 0.0 ? inc / prev : 0.0)});
    prev = inc;
  }
  return t;
}

CsvTable ratio_table(const InequalityReport& report) {
  CsvTable t({"member", "label", "family", "holdout", "center", "radius", "lhs", "rhs", "ratio"});
  for (const RatioSample& s : report.samples)
    t.add_row({format_number(s.member), s.label, s.family, format_bool(s.holdout), format_number(s.center),
               format_number(s.radius), format_number(s.lhs), format_number(s.rhs), format_number(s.ratio)});
  return t;
}

CsvTable beta_table(const std::vector<BetaReport>& reports) {
  CsvTable t({"a", "b", "t", "numeric", "exact", "relative_error"});
  for (const BetaReport& r : reports)
    for (const BetaRow& row : r.rows)
      t.add_row({format_number(r.a), format_number(r.b), format_number(row.t), format_number(row.numeric),
                 format_number(row.exact), format_number(row.relative_error)});
  return t;
}

CsvTable scan_table(const ScanResult& scan) {
  CsvTable t({"scale", "data_norm", "force_norm", "converged", "diverged", "iterations", "final_factor", "final_norm",
              "bilinear_ratio"});
  for (const ScanRow& r : scan.rows)
    t.add_row({format_number(r.scale), format_number(r.data_norm), format_number(r.force_norm),
               format_bool(r.converged), format_bool(r.diverged), std::to_string(r.iterations),
               format_number(r.final_factor), format_number(r.final_norm), format_number(r.bilinear_ratio)});
  return t;
}

CsvTable norm_table(const std::vector<std::pair<std::string, WeightedSupNorm>>& norms) {
  CsvTable t({"quantity", "space", "exponent", "gamma", "value", "argmax_time", "boundary_flag"});
  for (const auto& [name, n] : norms)
    t.add_row({name, n.space, format_number(n.norm.exponent), format_number(n.weight_exponent),
               format_number(n.value), format_number(n.argmax_time), format_bool(n.boundary)});
  return t;
}

CsvTable scaling_table(const ScalingReport& report) {
  CsvTable t({"identity", "base", "scaled", "relative_difference", "pass"});
  for (const ScalingIdentity& id : report.identities)
    t.add_row({id.name, format_number(id.base), format_number(id.scaled), format_number(id.relative_difference),
               format_bool(id.pass)});
  return t;
}

json to_json(const BudgetDecision& decision) {
  const BudgetInputs& in = decision.inputs;
  json out{{"inputs",
            {{"theorem", to_string(in.theorem)},
             {"n", in.n},
             {"rho", in.rho},
             {"alpha", in.alpha},
             {"q", in.q},
             {"varrho", in.varrho}}},
           {"accepted", decision.accepted()},
           {"violations", decision.violations}};
  if (const auto& b = decision.budget) {
    out["budget"] = {{"s", b->s},
                     {"p", b->p},
                     {"r", b->r},
                     {"r_force", b->r_force},
                     {"q_lower", b->q_lower},
                     {"resolution_weight", b->resolution_weight()},
                     {"force_weight", b->force_weight()},
                     {"bilinear_pair", {b->bilinear_pair().a, b->bilinear_pair().b}},
                     {"force_pair", {b->force_pair().a, b->force_pair().b}}};
  }
  return out;
}

json to_json(const InequalityReport& report) {
  json out{{"id", report.id},
           {"parameters", report.parameters},
           {"corpus_size", report.corpus_size},
           {"samples", report.samples.size()},
           {"skipped", report.skipped},
           {"fit_max_ratio", report.fit_max},
           {"holdout_max_ratio", report.holdout_max},
           {"holdout_factor", report.holdout_factor},
           {"all_finite", report.all_finite},
           {"checks", checks_json(report.checks)},
           {"pass", report.pass}};
  if (const auto& p = report.pointwise)
    out["pointwise"] = {{"fit_constant", p->fit_constant}, {"holdout_max", p->holdout_max},
                        {"inflation", p->inflation},       {"violations", p->violations},
                        {"points_checked", p->points_checked}, {"pass", p->pass}};
  return out;
}

json to_json(const BetaReport& report) {
  return {{"a", report.a},
          {"b", report.b},
          {"slope", report.slope},
          {"expected_slope", report.expected_slope},
          {"checks", checks_json(report.checks)},
          {"pass", report.pass}};
}

json to_json(const ScalingReport& report) {
  json ids = json::array();
  for (const ScalingIdentity& id : report.identities)
    ids.push_back({{"name", id.name},
                   {"base", id.base},
                   {"scaled", id.scaled},
                   {"relative_difference", id.relative_difference},
                   {"pass", id.pass}});
  return {{"theorem", to_string(report.theorem)},
          {"lambda", report.lambda},
          {"powers", {{"data", report.powers.data}, {"force", report.powers.force},
                      {"trajectory", report.powers.trajectory}}},
          {"tolerance", report.tolerance},
          {"identities", ids},
          {"pass", report.pass}};
}

json to_json(const ScanResult& scan) {
  json out{{"rows", scan.rows.size()},
           {"bilinear_constant", scan.bilinear_constant},
           {"downward_closed", scan.downward_closed},
           {"has_bracket", scan.has_bracket()}};
  out["last_converged"] = scan.last_converged ? json(*scan.last_converged) : json(nullptr);
  out["first_failed"] = scan.first_failed ? json(*scan.first_failed) : json(nullptr);
  return out;
}

json to_json(const WeightedSupNorm& norm) {
  return {{"space", norm.space},
          {"norm", describe(norm.norm)},
          {"weight_exponent", norm.weight_exponent},
          {"value", norm.value},
          {"argmax_time", norm.argmax_time},
          {"boundary", norm.boundary}};
}

json to_json(const SolutionTrace& trace) {
  return {{"converged", trace.converged},
          {"diverged", trace.diverged},
          {"iterations", trace.iterations},
          {"stop_reason", trace.stop_reason},
          {"reference_norm", trace.reference_norm},
          {"final_norm", to_json(trace.weighted_norms.back())},
          {"residual", trace.residual},
          {"relative_residual", trace.relative_residual},
          {"contraction_factors", trace.contraction_factors}};
}

}  // namespace roughlab
