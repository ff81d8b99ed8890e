#include "report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cli.hpp"

namespace curvelab::cli {

using nlohmann::json;

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json domain_json(const Domain& d) {
  return json::array({d.u_min, d.u_max, d.v_min, d.v_max});
}

}  // namespace

json vec_json(const Eigen::Vector3d& v) {
  return json::array({num(v(0)), num(v(1)), num(v(2))});
}

json mat_json(const Eigen::Matrix2d& m) {
  return json::array({json::array({num(m(0, 0)), num(m(0, 1))}),
                      json::array({num(m(1, 0)), num(m(1, 1))})});
}

json mat_json(const Eigen::Matrix3d& m) {
  json out = json::array();
  for (int i = 0; i < 3; ++i) out.push_back(vec_json(m.row(i).transpose()));
  return out;
}

json symbols_json(const Christoffel& c) {
  return json::array({mat_json(c[0]), mat_json(c[1])});
}

json frame_json(const FrameData& f) {
  json j;
  j["u"] = f.u;
  j["v"] = f.v;
  j["x"] = vec_json(f.x);
  j["x_u"] = vec_json(f.x_u);
  j["x_v"] = vec_json(f.x_v);
  j["x_partials"] = json::object();
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k <= d; ++k) {
      const std::string key = "x_" + std::string(static_cast<std::size_t>(d - k), 'u') +
                              std::string(static_cast<std::size_t>(k), 'v');
      j["x_partials"][key] = vec_json(f.x_partial(d - k, k));
    }
  }
  j["n"] = vec_json(f.n);
  j["n_u"] = vec_json(f.dn[0]);
  j["n_v"] = vec_json(f.dn[1]);
  j["g"] = mat_json(f.g);
  j["b"] = mat_json(f.b);
  j["e"] = mat_json(f.e);
  j["ginv"] = mat_json(f.g_inv);
  j["binv"] = mat_json(f.b_inv);
  j["einv"] = mat_json(f.e_inv);
  j["K"] = num(f.K);
  j["H"] = num(f.H);
  j["det_b_sign"] = f.det_b_sign;
  j["curved"] = f.curved;
  j["Gamma"] = symbols_json(f.Gamma);
  j["Pi"] = symbols_json(f.Pi);
  j["LambdaSym"] = symbols_json(f.LambdaSym);
  j["T"] = symbols_json(f.T);
  j["Ttilde"] = symbols_json(f.Ttilde);
  return j;
}

json identity_json(const IdentityReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"identity", c.description},
                      {"tolerance", c.tolerance},
                      {"max_residual", num(c.max_residual)},
                      {"rms_residual", num(c.rms_residual)},
                      {"worst_sample", c.worst_sample},
                      {"samples", c.samples},
                      {"pass", c.pass}});
  }
  return {{"surface", report.surface},
          {"samples", report.points.size()},
          {"all_pass", report.all_pass()},
          {"checks", checks}};
}

json fit_json(const MatrixFit& fit) {
  json j;
  j["target"] = fit.target;
  j["form"] = std::string(to_string(fit.form));
  j[fit.target == "n" ? "lambda" : "A"] = mat_json(fit.matrix);
  if (fit.target == "x") j["B"] = vec_json(fit.offset);
  j["residual_max_rel"] = num(fit.residual_max_rel);
  j["residual_rms"] = num(fit.residual_rms);
  j["cond"] = num(fit.condition_number);
  j["verdict"] = std::string(to_string(fit.verdict));
  return j;
}

json classification_json(const Classification& c) {
  json j = fit_json(c.fit);
  j["surface"] = c.surface;
  j["sampling"] = {{"strategy", std::string(to_string(c.samples.strategy))},
                   {"count", c.samples.count},
                   {"seed", c.samples.seed},
                   {"lattice", c.samples.lattice}};
  if (c.form == Form::II) {
    double worst = 0.0;
    for (double r : c.gauss_map_identity) worst = std::max(worst, r);
    j["gauss_map_identity"] = {
        {"identity", "Delta^II n - (1/2K) grad^I K - 2Hn"},
        {"max_relative_residual", num(worst)},
        {"samples", c.gauss_map_identity.size()}};
  }
  j["expected_verdict"] =
      c.expected ? json(std::string(to_string(*c.expected))) : json(nullptr);
  j["discrepancy"] = c.discrepancy;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json xval_json(const XvalReport& report) {
  json comps = json::array();
  for (const auto& c : report.comparisons) {
    json item = {{"quantity", c.quantity},
                 {"operator", c.signed_operator},
                 {"tolerance", c.tolerance},
                 {"max_abs", num(c.max_abs)},
                 {"max_rel", num(c.max_rel)},
                 {"best_sign", c.best_sign},
                 {"pass", c.pass}};
    if (!c.note.empty()) item["note"] = c.note;
    comps.push_back(item);
  }
  return {{"pipeline", std::string(to_string(report.pipeline))},
          {"surface", report.surface},
          {"samples", report.points.size()},
          {"operator_sign", report.operator_sign},
          {"all_pass", report.all_pass()},
          {"comparisons", comps},
          {"notes", report.notes}};
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["surface"] = c.surface;
  j["params"] = c.params;
  j["domain"] = c.domain ? domain_json(*c.domain) : json(nullptr);
  j["form"] = std::string(to_string(c.form));
  j["field"] = c.field;
  j["target"] = c.target;
  j["at"] = c.at ? json::array({c.at->first, c.at->second}) : json(nullptr);
  j["grid"] = c.grid ? json(*c.grid) : json(nullptr);
  j["strategy"] = std::string(to_string(c.strategy));
  j["count"] = c.count;
  j["seed"] = c.seed;
  j["tau_pass"] = c.thresholds.tau_pass;
  j["tau_fail"] = c.thresholds.tau_fail;
  j["k_min"] = c.k_min;
  j["order"] = c.jet_order;
  j["workers"] = c.workers;
  j["pipeline"] = c.pipeline;
  j["out"] = c.out_dir;
  j["format"] = c.format;
  return j;
}

std::string CsvTable::render() const {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i ? "," : "") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (std::isfinite(row[i])) {
        out << row[i];
      } else {
        out << "nan";
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace curvelab::cli
