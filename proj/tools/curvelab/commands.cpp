#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "report.hpp"

namespace curvelab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(3) << x;
  return s.str();
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::pass: return kExitOk;
    case Verdict::fail: return kExitFail;
    case Verdict::indeterminate: return kExitIndeterminate;
  }
  return kExitNumeric;
}

bool writes_csv(const RunConfig& c) { return c.format == "csv" || c.format == "both"; }

std::string csv_path(const RunConfig& c, const std::string& name) {
  return (fs::path(c.out_dir) / name).string();
}

std::string stem(const RunConfig& c) {
  std::string s = c.command + "-" + c.surface;
  if (c.command != "identities" && c.command != "xval") {
    s += "-" + std::string(to_string(c.form));
  }
  return s;
}

EngineOptions engine_options(const RunConfig& c, const SurfacePatch& patch) {
  EngineOptions e;
  e.jet_order = c.jet_order;
  e.k_min = c.k_min;
  e.allow_flat = patch.flat();
  return e;
}

SurfacePatch build_surface(const RunConfig& c) {
  ProbeOptions probe;
  probe.k_min = c.k_min;
  return make_surface(CatalogSpec{c.surface, c.params, c.domain}, probe);
}

const SamplePoint& require_at(const RunConfig& c) {
  if (!c.at) fail(ErrorKind::configuration, c.command + " needs --at u,v");
  return *c.at;
}

// ---------------------------------------------------------------- catalog

CommandResult run_catalog() {
  CommandResult r;
  json list = json::array();
  for (const auto& e : catalog()) {
    list.push_back({{"name", e.name},
                    {"defaults", e.defaults},
                    {"description", e.description}});
  }
  r.report = {{"surfaces", list}};
  r.summary = "catalog: " + std::to_string(list.size()) + " surfaces";
  return r;
}

// ------------------------------------------------------------------ forms

CommandResult run_forms(const RunConfig& c) {
  const SurfacePatch patch = build_surface(c);
  const auto [u, v] = require_at(c);
  const FrameData frame = evaluate_frame(patch, u, v, engine_options(c, patch));
  CommandResult r;
  r.report = frame_json(frame);
  r.report["surface"] = patch.name();
  r.summary = "forms " + patch.name() + " at (" + fmt(u) + ", " + fmt(v) +
              "): K = " + fmt(frame.K) + ", H = " + fmt(frame.H);
  return r;
}

// -------------------------------------------------------------- laplacian

struct FieldEvaluator {
  bool vector = false;
  std::function<Eigen::Vector3d(const FrameData&)> eval;
};

FieldEvaluator make_field(const RunConfig& c, const SurfacePatch& patch) {
  const Form form = c.form;
  if (c.field == "n") {
    return {true, [form](const FrameData& f) { return laplacian_gauss_map(form, f); }};
  }
  if (c.field == "x") {
    return {true, [form](const FrameData& f) { return laplacian_position(form, f); }};
  }
  ScalarField field;
  if (c.field == "u" || c.field == "v") {
    const bool is_u = c.field == "u";
    field = parametric_field(c.field, [is_u](const Jet2& u, const Jet2& v) {
      return is_u ? u : v;
    });
  } else {
    field = geometry_field(patch, c.field);
  }
  return {false, [form, field](const FrameData& f) {
            const double value =
                laplacian_scalar(form, f, field.evaluate(f.u, f.v, 2));
            return Eigen::Vector3d(value, 0.0, 0.0);
          }};
}

CommandResult run_laplacian(const RunConfig& c) {
  const SurfacePatch patch = build_surface(c);
  const EngineOptions engine = engine_options(c, patch);
  const FieldEvaluator field = make_field(c, patch);
  CommandResult r;
  r.report["surface"] = patch.name();
  r.report["form"] = std::string(to_string(c.form));
  r.report["field"] = c.field;

  if (c.grid) {
    SamplingOptions so;
    so.engine = engine;
    const SampleSet set = sample(patch, c.strategy, *c.grid, c.seed, so);
    CsvTable table;
    table.name = stem(c) + "-" + c.field + ".csv";
    table.header = {"u", "v"};
    if (field.vector) {
      table.header.insert(table.header.end(), {"lap_1", "lap_2", "lap_3"});
    } else {
      table.header.push_back("lap");
    }
    double worst = 0.0;
    for (const auto& [u, v] : set.points) {
      const Eigen::Vector3d val = field.eval(evaluate_frame(patch, u, v, engine));
      std::vector<double> row = {u, v, val(0)};
      if (field.vector) {
        row.push_back(val(1));
        row.push_back(val(2));
      }
      worst = std::max(worst, field.vector ? val.norm() : std::abs(val(0)));
      table.rows.push_back(std::move(row));
    }
    r.report["count"] = set.points.size();
    r.report["max_abs"] = worst;
    r.report["samples"] = writes_csv(c) ? json(csv_path(c, table.name)) : json(nullptr);
    r.summary = "laplacian " + std::string(to_string(c.form)) + " of " + c.field +
                " on " + patch.name() + ": " + std::to_string(set.points.size()) +
                " samples";
    r.tables.push_back(std::move(table));
    return r;
  }

  const auto [u, v] = require_at(c);
  const Eigen::Vector3d val = field.eval(evaluate_frame(patch, u, v, engine));
  r.report["at"] = json::array({u, v});
  r.report["value"] = field.vector ? vec_json(val) : json(val(0));
  r.summary = "laplacian " + std::string(to_string(c.form)) + " of " + c.field +
              " at (" + fmt(u) + ", " + fmt(v) + ") computed";
  return r;
}

// ------------------------------------------------------------- identities

CommandResult run_identities(const RunConfig& c) {
  const SurfacePatch patch = build_surface(c);
  const EngineOptions engine = engine_options(c, patch);
  SamplingOptions so;
  so.engine = engine;
  const SampleSet set = sample(patch, c.strategy, c.grid.value_or(c.count), c.seed, so);
  const IdentityReport rep = check_identities(patch, set.points, engine);

  CommandResult r;
  r.report = identity_json(rep);
  CsvTable table;
  table.name = stem(c) + "-residuals.csv";
  table.header = {"u", "v"};
  for (const auto& check : rep.checks) table.header.push_back(check.name);
  for (std::size_t p = 0; p < set.points.size(); ++p) {
    std::vector<double> row = {set.points[p].first, set.points[p].second};
    row.insert(row.end(), rep.residuals[p].begin(), rep.residuals[p].end());
    table.rows.push_back(std::move(row));
  }
  r.report["samples_csv"] = writes_csv(c) ? json(csv_path(c, table.name)) : json(nullptr);
  r.tables.push_back(std::move(table));

  int failed = 0;
  for (const auto& check : rep.checks) failed += check.pass ? 0 : 1;
  r.exit_code = rep.all_pass() ? kExitOk : kExitFail;
  r.summary = "identities on " + patch.name() + ": " +
              std::to_string(rep.checks.size() - static_cast<std::size_t>(failed)) + "/" +
              std::to_string(rep.checks.size()) + " hold over " +
              std::to_string(set.points.size()) + " samples";
  return r;
}

// ----------------------------------------------------------------- detect

CommandResult run_detect(const RunConfig& c) {
  const SurfacePatch patch = build_surface(c);
  FitOptions fit;
  fit.engine = engine_options(c, patch);
  fit.thresholds = c.thresholds;
  fit.workers = c.workers;
  const int count = c.grid.value_or(c.count);

  CommandResult r;
  MatrixFit result;
  std::vector<double> identity_channel;
  if (c.target == "n") {
    ClassifyOptions opts;
    opts.strategy = c.strategy;
    opts.count = count;
    opts.seed = c.seed;
    opts.fit = fit;
    const Classification cl = classify(patch, c.form, opts);
    r.report = classification_json(cl);
    result = cl.fit;
    identity_channel = cl.gauss_map_identity;
  } else if (c.target == "x") {
    SamplingOptions so;
    so.engine = fit.engine;
    const SampleSet set = sample(patch, c.strategy, count, c.seed, so);
    result = fit_position_affine(c.form, patch, set, fit);
    r.report = fit_json(result);
    r.report["surface"] = patch.name();
    r.report["sampling"] = {{"strategy", std::string(to_string(set.strategy))},
                            {"count", set.count},
                            {"seed", set.seed},
                            {"lattice", set.lattice}};
  } else {
    fail(ErrorKind::configuration, "unknown target '" + c.target + "' (n or x)");
  }

  CsvTable table;
  table.name = stem(c) + "-" + c.target + "-samples.csv";
  const std::string F = c.target;
  table.header = {"u", "v", F + "_1", F + "_2", F + "_3", "lap_1", "lap_2",
                  "lap_3", "res_1", "res_2", "res_3"};
  if (!identity_channel.empty()) table.header.push_back("gauss_map_identity");
  for (std::size_t p = 0; p < result.points.size(); ++p) {
    std::vector<double> row = {result.points[p].first, result.points[p].second};
    for (const auto* vec : {&result.values[p], &result.operator_values[p],
                            &result.residuals[p]}) {
      row.insert(row.end(), vec->data(), vec->data() + 3);
    }
    if (!identity_channel.empty()) row.push_back(identity_channel[p]);
    table.rows.push_back(std::move(row));
  }
  r.report["samples"] = writes_csv(c) ? json(csv_path(c, table.name)) : json(nullptr);
  r.tables.push_back(std::move(table));

  r.exit_code = exit_for(result.verdict);
  r.summary = "detect " + patch.name() + " form " + std::string(to_string(c.form)) +
              " (" + c.target + "): " + std::string(to_string(result.verdict)) +
              ", residual " + fmt(result.residual_max_rel);
  if (r.report.value("discrepancy", false)) {
    r.summary += " [differs from the classification result]";
  }
  return r;
}

// ------------------------------------------------------------------- xval

Pipeline infer_pipeline(const RunConfig& c, const SurfacePatch& patch) {
  if (!c.pipeline.empty()) return parse_pipeline(c.pipeline);
  switch (patch.kind()) {
    case SurfaceKind::quadric1: return Pipeline::quadric1;
    case SurfaceKind::quadric2: return Pipeline::quadric2;
    case SurfaceKind::helicoid:
    case SurfaceKind::ruled: return Pipeline::ruled;
    default:
      fail(ErrorKind::configuration,
           "no closed-form pipeline for '" + patch.name() + "'; pass --pipeline");
  }
}

CommandResult run_xval(const RunConfig& c) {
  const SurfacePatch patch = build_surface(c);
  const EngineOptions engine = engine_options(c, patch);
  const Pipeline pipeline = infer_pipeline(c, patch);
  SamplingOptions so;
  so.engine = engine;
  const SampleSet set =
      sample(patch, SamplingStrategy::grid, c.grid.value_or(25), c.seed, so);
  const XvalReport rep = cross_validate(pipeline, patch, set.points, engine);

  CommandResult r;
  r.report = xval_json(rep);
  int failed = 0;
  for (const auto& cmp : rep.comparisons) failed += cmp.pass ? 0 : 1;
  r.exit_code = rep.all_pass() ? kExitOk : kExitFail;
  r.summary = "xval " + std::string(to_string(pipeline)) + " on " + patch.name() +
              ": " + std::to_string(rep.comparisons.size() - static_cast<std::size_t>(failed)) +
              "/" + std::to_string(rep.comparisons.size()) +
              " quantities agree, operator sign " +
              (rep.operator_sign > 0 ? "+1" : "-1");
  return r;
}

std::string timestamp(std::string* compact) {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream iso;
  iso << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << '.' << std::setw(3)
      << std::setfill('0') << ms << 'Z';
  std::ostringstream flat;
  flat << std::put_time(&tm, "%Y%m%dT%H%M%S") << std::setw(3) << std::setfill('0')
       << ms << 'Z';
  *compact = flat.str();
  return iso.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::configuration, "cannot write '" + path.string() + "'");
  out << content;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  return kind == ErrorKind::configuration || kind == ErrorKind::construction
             ? kExitUsage
             : kExitNumeric;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"schema", kSchema},
          {"version", CURVELAB_VERSION_STRING},
          {"error", {{"kind", kind}, {"message", message}}}};
}

CommandResult execute(const RunConfig& config) {
  if (config.format != "json" && config.format != "csv" && config.format != "both") {
    fail(ErrorKind::configuration, "format must be json, csv or both");
  }
  CommandResult r;
  if (config.command == "catalog") {
    r = run_catalog();
  } else if (config.command == "forms") {
    r = run_forms(config);
  } else if (config.command == "laplacian") {
    r = run_laplacian(config);
  } else if (config.command == "identities") {
    r = run_identities(config);
  } else if (config.command == "detect") {
    r = run_detect(config);
  } else if (config.command == "xval") {
    r = run_xval(config);
  } else {
    fail(ErrorKind::configuration, "unknown command '" + config.command + "'");
  }
  json body;
  body["schema"] = kSchema;
  body["version"] = CURVELAB_VERSION_STRING;
  body["command"] = config.command;
  body["config"] = to_json(config);
  body["result"] = std::move(r.report);
  body["exit_code"] = r.exit_code;
  r.report = std::move(body);
  return r;
}

int run_command(int argc, const char* const* argv, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"curvelab: fundamental forms, Beltrami operators and Gauss map "
               "finite type on parametric surfaces"};
  app.set_version_flag("--version", CURVELAB_VERSION_STRING);
  app.require_subcommand(1, 1);

  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {"forms", "Fundamental forms, curvatures and Christoffel symbols at a point"},
      {"laplacian", "Beltrami operator of a field at a point or over samples"},
      {"identities", "Check the tensor and operator identities over samples"},
      {"detect", "Fit Delta^J n = Lambda n (or Delta^J x = A x + B) and classify"},
      {"xval", "Cross-validate a closed-form pipeline against the generic engine"},
      {"catalog", "List catalog surfaces and their default parameters"},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  std::string config_file, surface, form, field, target, at, domain, strategy,
      pipeline, out_dir, format;
  double r = 0, c = 0, l = 0, a = 0, b = 0, R = 0, tau_pass = 0, tau_fail = 0,
         k_min = 0;
  int grid = 0, count = 0, order = 0, workers = 0;
  std::uint64_t seed = 0, pair_seed = 0;
  std::vector<std::string> extra_params;

  auto* o_config = app.add_option("--config", config_file, "Key = value config file");
  auto* o_surface = app.add_option("--surface", surface, "Catalog surface name");
  auto* o_r = app.add_option("--r", r, "Radius (sphere, cylinder, torus tube)");
  auto* o_c = app.add_option("--c", c, "Parameter c (helicoid pitch, quadric1, catenoid)");
  auto* o_l = app.add_option("--l", l, "Helicoid pitch offset l");
  auto* o_a = app.add_option("--a", a, "Quadric / monge parameter a");
  auto* o_b = app.add_option("--b", b, "Quadric / monge parameter b");
  auto* o_R = app.add_option("--R", R, "Torus centre radius");
  auto* o_pair = app.add_option("--pair-seed", pair_seed, "Seed of the random ruled curve pair");
  auto* o_param = app.add_option("--param", extra_params, "Extra surface parameter key=value");
  auto* o_domain = app.add_option("--domain", domain, "u_min,u_max,v_min,v_max");
  auto* o_form = app.add_option("--form", form, "Fundamental form I, II or III");
  auto* o_field = app.add_option("--field", field, "n, x, u, v, K, H, x1..x3, n1..n3");
  auto* o_target = app.add_option("--target", target, "detect: fit n (Gauss map) or x (position)");
  auto* o_at = app.add_option("--at", at, "Parameter point u,v");
  auto* o_grid = app.add_option("--grid", grid, "Number of sample points");
  auto* o_count = app.add_option("--count", count, "Number of sample points (detect)");
  auto* o_strategy = app.add_option("--strategy", strategy, "grid or jittered-grid");
  auto* o_seed = app.add_option("--seed", seed, "Sampling seed");
  auto* o_tp = app.add_option("--tau-pass", tau_pass, "PASS threshold on residual_max_rel");
  auto* o_tf = app.add_option("--tau-fail", tau_fail, "FAIL threshold on residual_max_rel");
  auto* o_kmin = app.add_option("--k-min", k_min, "Flat-point threshold on |K|");
  auto* o_order = app.add_option("--order", order, "Jet order (3 or 4)");
  auto* o_workers = app.add_option("--workers", workers, "Threads for sample evaluation");
  auto* o_pipeline = app.add_option("--pipeline", pipeline, "ruled, quadric1 or quadric2");
  auto* o_out = app.add_option("--out", out_dir, "Output directory");
  auto* o_format = app.add_option("--format", format, "json, csv or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("usage", e.what()).dump() << '\n';
    return kExitUsage;
  }

  RunConfig cfg;
  try {
    cfg.command = app.get_subcommands().front()->get_name();
    if (o_config->count()) apply_config_file(config_file, cfg);

    // Flags override the config file.
    std::ostringstream flags;
    const auto set = [&](CLI::Option* o, const std::string& key, const std::string& value) {
      if (o->count()) flags << key << " = " << value << '\n';
    };
    set(o_surface, "surface", surface);
    set(o_domain, "domain", domain);
    set(o_form, "form", form);
    set(o_field, "field", field);
    set(o_target, "target", target);
    set(o_at, "at", at);
    set(o_grid, "grid", std::to_string(grid));
    set(o_count, "count", std::to_string(count));
    set(o_strategy, "strategy", strategy);
    set(o_seed, "seed", std::to_string(seed));
    set(o_pipeline, "pipeline", pipeline);
    set(o_format, "format", format);
    set(o_order, "order", std::to_string(order));
    set(o_workers, "workers", std::to_string(workers));
    apply_config_text(flags.str(), cfg);

    const auto num = [&](CLI::Option* o, double value, double& slot) {
      if (o->count()) slot = value;
    };
    const std::pair<CLI::Option*, std::pair<const char*, double>> surface_flags[] = {
        {o_r, {"r", r}}, {o_c, {"c", c}}, {o_l, {"l", l}}, {o_a, {"a", a}}, {o_b, {"b", b}}, {o_R, {"R", R}},
        {o_pair, {"seed", static_cast<double>(pair_seed)}}};
    for (const auto& [opt, kv] : surface_flags) {
      if (opt->count()) cfg.params[kv.first] = kv.second;
    }
    for (const auto& kv : extra_params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        fail(ErrorKind::configuration, "--param expects key=value, got '" + kv + "'");
      }
      RunConfig scratch;
      apply_config_text("params = {" + kv.substr(0, eq) + ": " + kv.substr(eq + 1) + "}",
                        scratch);
      for (const auto& [k, v] : scratch.params) cfg.params[k] = v;
    }
    num(o_tp, tau_pass, cfg.thresholds.tau_pass);
    num(o_tf, tau_fail, cfg.thresholds.tau_fail);
    num(o_kmin, k_min, cfg.k_min);
    (void)o_param;
    cfg.out_dir = resolve_out_dir(
        o_out->count() ? std::optional<std::string>(out_dir) : std::nullopt, cfg.out_dir);
    
    CommandResult result = execute(cfg);

    std::string compact;
    json report = result.report;
    report["timestamp"] = timestamp(&compact);

    fs::create_directories(cfg.out_dir);
    if (cfg.format == "json" || cfg.format == "both") {
      fs::path path = fs::path(cfg.out_dir) / (cfg.command + "-" + compact + ".json");
      for (int k = 2; fs::exists(path); ++k) {
        path = fs::path(cfg.out_dir) /
               (cfg.command + "-" + compact + "-" + std::to_string(k) + ".json");
      }
      write_file(path, report.dump(2) + "\n");
    }
    if (cfg.format == "csv" || cfg.format == "both") {
      for (const auto& table : result.tables) {
        write_file(fs::path(cfg.out_dir) / table.name, table.render());
      }
    }
    out << report.dump(2) << '\n';
    err << result.summary << '\n';
    return result.exit_code;
  } catch (const Error& e) {
    err << error_json(std::string(to_string(e.kind())), e.what()).dump() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << error_json("io", e.what()).dump() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << error_json("internal", e.what()).dump() << '\n';
    return kExitNumeric;
  }
}

}  // namespace curvelab::cli
