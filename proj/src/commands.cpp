#include "naimark_lab/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "naimark_lab/compatibility.hpp"
#include "naimark_lab/examples.hpp"
#include "naimark_lab/naimark.hpp"

namespace naimark_lab::cli {

using nlohmann::json;

namespace {

constexpr const char* kValidateSchema = "naimark-lab.validate/1";
constexpr const char* kCheckSchema = "naimark-lab.check/1";
constexpr const char* kNaimarkSchema = "naimark-lab.naimark/1";
constexpr const char* kRegionSchema = "naimark-lab.region/1";
constexpr const char* kExamplesSchema = "naimark-lab.examples/1";

json grid_to_json(const JointPovm& joint) {
  json cells = json::array();
  for (int c = 0; c < static_cast<int>(joint.cells().size()); ++c) {
    json multi = json::array();
    for (int k : unravel_index(c, joint.shape())) multi.push_back(k + 1);
    cells.push_back({{"outcome", multi}, {"effect", matrix_to_json(joint.cells()[static_cast<size_t>(c)])}});
  }
  return {{"shape", joint.shape()}, {"cells", cells}};
}

struct Loaded {
  std::vector<std::string> names;
  std::vector<Povm> povms;
  json entries = json::array();
  bool all_valid = true;
};

Loaded load_observables(const PovmDocument& doc, double tol) {
  Loaded out;
  for (const auto& spec : doc.observables) {
    json entry{{"name", spec.name}};
    const auto effects = spec.expand(doc.dim);
    entry["outcomes"] = effects.size();
    if (auto d = diagnose_povm(effects, doc.dim, tol)) {
      entry["valid"] = false;
      entry["defect"] = to_string(d->defect);
      entry["effect"] = d->effect >= 0 ? json(d->effect + 1) : json(nullptr);
      entry["magnitude"] = d->magnitude;
      entry["message"] = d->message();
      out.all_valid = false;
    } else {
      entry["valid"] = true;
      out.names.push_back(spec.name);
      out.povms.push_back(Povm::validate(effects, doc.dim, tol));
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

std::string verdict_word(bool compatible_certified, bool incompatible) {
  if (compatible_certified && incompatible) return "disagreement";
  if (compatible_certified) return "compatible";
  if (incompatible) return "incompatible";
  return "inconclusive";
}

char parse_axis(const std::string& s) {
  if (s == "x" || s == "y" || s == "z") return s[0];
  throw CLI::ValidationError("--axes", "axis must be x, y or z, got '" + s + "'");
}

std::optional<std::uint64_t> seed_from_env() {
  const char* raw = std::getenv("NAIMARK_LAB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const char* end = raw + std::char_traits<char>::length(raw);
  auto [ptr, ec] = std::from_chars(raw, end, v);
  if (ec != std::errc() || ptr != end)
    throw std::invalid_argument(std::string("NAIMARK_LAB_SEED is not an unsigned integer: ") + raw);
  return v;
}

bool outside_band_disagrees(const json& row) {
  const double l1 = row["lambda1"], l2 = row["lambda2"];
  const double margin = 1.0 - l1 * l1 - l2 * l2;
  if (std::abs(margin) < 0.02) return false;
  const std::string expect = margin > 0 ? "compatible" : "incompatible";
  for (const char* key : {"oracle", "closed_form"})
    if (row[key] != "n/a" && row[key] != expect) return true;
  // W-search can only certify; outside the region it must stay inconclusive.
  return margin > 0 ? row["w_search"] != "compatible" : row["w_search"] == "compatible";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Report validate_report(const PovmDocument& doc, double tol) {
  const Loaded loaded = load_observables(doc, tol);
  Report r;
  r.body = {{"schema", kValidateSchema}, {"dim", doc.dim}, {"tolerance", tol}, {"observables", loaded.entries},
            {"valid", loaded.all_valid}};
  r.exit_code = loaded.all_valid ? kOk : kAnalysisFailure;
  return r;
}

Report check_report(const PovmDocument& doc, const CheckOptions& opts) {
  const Loaded loaded = load_observables(doc, kDefaultTol);
  Report r;
  r.body = {{"schema", kCheckSchema}, {"dim", doc.dim},   {"seed", opts.seed},
            {"tolerance", opts.tol},  {"observables", loaded.entries}};
  if (!loaded.all_valid) {
    r.body["verdict"] = "invalid-input";
    r.body["note"] = "one or more observables failed validation";
    r.exit_code = kAnalysisFailure;
    return r;
  }
  if (loaded.povms.empty()) {
    r.body["verdict"] = "invalid-input";
    r.body["note"] = "document has no observables";
    r.exit_code = kAnalysisFailure;
    return r;
  }
  if (loaded.povms.size() == 1) {
    r.body["verdict"] = "compatible";
    r.body["note"] = "a single observable is trivially compatible";
    r.body["methods"] = json::object();
    return r;
  }

  json methods = json::object();
  bool certified = false;
  bool refuted = false;

  if (opts.oracle) {
    json m;
    try {
      const FeasibilityResult res = feasibility_oracle(loaded.povms);
      m = {{"status", to_string(res.status)}, {"iterations", res.iterations}, {"residual", res.residual}};
      if (res.joint) m["witness"] = grid_to_json(*res.joint);
      certified = certified || res.feasible;
      refuted = refuted || res.status == FeasibilityStatus::infeasible;
    } catch (const std::invalid_argument& e) {
      m = {{"status", "not-run"}, {"reason", e.what()}};
    }
    methods["oracle"] = std::move(m);
  }

  if (opts.w_search) {
    json m;
    const bool applicable = loaded.povms.size() == 2 && loaded.povms[0].size() == 2 && loaded.povms[1].size() == 2;
    if (!applicable) {
      m = {{"status", "not-applicable"}, {"reason", "needs exactly two two-outcome observables"}};
    } else {
      const DichotomicPair pair = DichotomicPair::make(loaded.povms[0], loaded.povms[1]);
      FindWOptions fo;
      fo.seed = opts.seed;
      fo.tol = opts.tol;
      fo.budget = opts.budget;
      fo.restarts = opts.restarts;
      const WSearch s = search_w(pair, fo);
      m = {{"status", s.found ? "compatible" : "inconclusive"},
           {"residual", s.best.residual},
           {"restarts", s.restarts_run},
           {"evaluations", s.evaluations},
           {"w", matrix_to_json(s.best.w)}};
      if (s.found) m["witness"] = grid_to_json(joint_from_w(pair, s.best.w, opts.tol));
      certified = certified || s.found;
    }
    methods["w_search"] = std::move(m);
  }

  if (opts.g_estimate) {
    EstimatorOptions eo;
    eo.seed = opts.seed;
    eo.tol = opts.tol;
    eo.budget = opts.budget;
    eo.restarts = opts.restarts;
    const IncompatibilityEstimate est = incompatibility_estimate(loaded.povms, eo);
    const bool ok = est.value <= opts.tol;
    json m{{"status", ok ? "compatible" : "inconclusive"},
           {"estimate", est.value},
           {"converged", est.converged},
           {"anc_dim", est.anc_dim},
           {"parameters", est.parameters},
           {"evaluations", est.evaluations},
           {"restart_values", est.restart_values}};
    if (!ok) m["note"] = "positive values are restricted-family estimates, not certificates";
    certified = certified || ok;
    methods["g_estimate"] = std::move(m);
  }

  r.body["methods"] = std::move(methods);
  const std::string verdict = verdict_word(certified, refuted);
  r.body["verdict"] = verdict;
  if (verdict == "disagreement") {
    r.body["note"] = "a compatibility certificate contradicts the oracle's infeasibility verdict";
    r.exit_code = kAnalysisFailure;
  }
  return r;
}

NaimarkResult naimark_report(const PovmDocument& doc, const std::optional<std::string>& observable) {
  const ObservableSpec* spec = nullptr;
  if (observable) {
    spec = doc.find(*observable);
    if (spec == nullptr) throw std::invalid_argument("unknown observable \"" + *observable + "\"");
  } else if (doc.observables.size() == 1) {
    spec = &doc.observables.front();
  } else {
    throw std::invalid_argument("document has several observables; pick one with --observable");
  }

  NaimarkResult out;
  const auto effects = spec->expand(doc.dim);
  if (auto d = diagnose_povm(effects, doc.dim)) {
    out.report.body = {{"schema", kNaimarkSchema}, {"observable", spec->name}, {"valid", false},
                       {"message", d->message()}};
    out.report.exit_code = kAnalysisFailure;
    return out;
  }
  const Povm povm = Povm::validate(effects, doc.dim);
  const bool two = povm.size() == 2;
  const NaimarkExtension ext = two ? dichotomic_extension(povm, identity(povm.dim())) : general_extension(povm);
  const ExtensionCheck check = verify_extension(ext, povm, 1e-9);
  const AncillaDimension minimal = minimal_ancilla_dim(povm);

  out.report.body = {{"schema", kNaimarkSchema},
                     {"observable", spec->name},
                     {"valid", true},
                     {"construction", two ? "dichotomic" : "general"},
                     {"outcomes", povm.size()},
                     {"sys_dim", ext.sys_dim()},
                     {"anc_dim", ext.anc_dim()},
                     {"extended_dim", ext.sys_dim() * ext.anc_dim()},
                     {"minimal_anc_dim", minimal.dim},
                     {"already_projective", minimal.already_projective},
                     {"deltas", check.deltas},
                     {"max_delta", check.max_delta},
                     {"passed", check.passed}};
  out.report.exit_code = check.passed ? kOk : kAnalysisFailure;

  out.extension.dim = ext.sys_dim() * ext.anc_dim();
  ObservableSpec projectors;
  projectors.name = spec->name + "_extension";
  projectors.effects = ext.pvm().effects();
  out.extension.observables.push_back(std::move(projectors));
  out.extension.metadata = {{"source_observable", spec->name},
                            {"sys_dim", ext.sys_dim()},
                            {"anc_dim", ext.anc_dim()},
                            {"ancilla_state", matrix_to_json(ext.ancilla_state())},
                            {"ordering", "system (x) ancilla"}};
  return out;
}

std::string region_csv(const std::vector<RegionRow>& rows) {
  std::ostringstream os;
  os << kRegionCsvHeader << "\n";
  for (const auto& r : rows) {
    os << format_double(r.lambda1) << ',' << format_double(r.lambda2) << ',' << to_string(r.w_search) << ','
       << to_string(r.oracle) << ',' << to_string(r.closed_form) << ',' << format_double(r.residual) << ','
       << (r.theta ? format_double(*r.theta) : "") << "\n";
  }
  return os.str();
}

Report region_summary(const std::vector<RegionRow>& rows, const RegionCommandOptions& opts) {
  json list = json::array();
  int disagreements = 0, errors = 0;
  for (const auto& r : rows) {
    json row{{"lambda1", r.lambda1},       {"lambda2", r.lambda2},          {"w_search", to_string(r.w_search)},
             {"oracle", to_string(r.oracle)}, {"closed_form", to_string(r.closed_form)}, {"residual", r.residual},
             {"theta", r.theta ? json(*r.theta) : json(nullptr)}};
    if (!r.error.empty()) {
      row["error"] = r.error;
      ++errors;
    }
    if (r.closed_form != RegionVerdict::not_applicable && outside_band_disagrees(row)) ++disagreements;
    list.push_back(std::move(row));
  }
  Report rep;
  rep.body = {{"schema", kRegionSchema},
              {"axes", {std::string(1, opts.axis1), std::string(1, opts.axis2)}},
              {"grid", opts.grid},
              {"seed", opts.scan.search.seed},
              {"budget", opts.scan.search.budget},
              {"rows", rows.size()},
              {"disagreements_outside_band", disagreements},
              {"point_errors", errors},
              {"points", std::move(list)}};
  return rep;
}

Report examples_report(int which) {
  const auto checks = which == 0 ? run_all_examples() : run_example(which);
  json list = json::array();
  bool all = true;
  for (const auto& c : checks) {
    list.push_back({{"example", c.example}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  Report r;
  r.body = {{"schema", kExamplesSchema}, {"which", which == 0 ? json("all") : json(which)}, {"checks", list},
            {"passed", all}};
  r.exit_code = all ? kOk : kAnalysisFailure;
  return r;
}

std::string render_human(const json& body) {
  std::ostringstream os;
  const std::string schema = body.value("schema", "");
  auto num = [](const json& j) { return j.is_number() ? format_double(j.get<double>()) : j.dump(); };

  if (schema == kValidateSchema) {
    for (const auto& o : body["observables"]) {
      os << o["name"].get<std::string>() << ": ";
      if (o["valid"].get<bool>())
        os << "valid (" << o["outcomes"] << " outcomes)\n";
      else
        os << "INVALID - " << o["message"].get<std::string>() << "\n";
    }
    os << (body["valid"].get<bool>() ? "all observables valid" : "validation failed") << "\n";
  } else if (schema == kCheckSchema) {
    for (const auto& o : body["observables"])
      if (!o["valid"].get<bool>()) os << o["name"].get<std::string>() << ": INVALID - " << o["message"].get<std::string>() << "\n";
    if (body.contains("methods")) {
      for (const auto& [name, m] : body["methods"].items()) {
        os << name << ": " << m["status"].get<std::string>();
        if (m.contains("residual")) os << "  residual " << num(m["residual"]);
        if (m.contains("estimate")) os << "  estimate " << num(m["estimate"]);
        if (m.contains("iterations")) os << "  iterations " << m["iterations"];
        if (m.contains("reason")) os << "  (" << m["reason"].get<std::string>() << ")";
        os << "\n";
        if (m.contains("witness")) {
          for (const auto& cell : m["witness"]["cells"]) {
            os << "  E" << cell["outcome"].dump() << " =";
            for (const auto& row : cell["effect"]) {
              os << " [";
              for (const auto& z : row) os << " " << num(z[0]) << (z[1].get<double>() < 0 ? "-" : "+")
                                           << format_double(std::abs(z[1].get<double>())) << "i";
              os << " ]";
            }
            os << "\n";
          }
        }
      }
    }
    os << "verdict: " << body["verdict"].get<std::string>() << "\n";
    if (body.contains("note")) os << "note: " << body["note"].get<std::string>() << "\n";
  } else if (schema == kNaimarkSchema) {
    os << "observable " << body["observable"].get<std::string>() << "\n";
    if (!body["valid"].get<bool>()) {
      os << "INVALID - " << body["message"].get<std::string>() << "\n";
    } else {
      os << "construction: " << body["construction"].get<std::string>() << ", ancilla dimension " << body["anc_dim"]
         << " (minimal " << body["minimal_anc_dim"] << "), projectors " << body["extended_dim"] << "x"
         << body["extended_dim"] << "\n";
      int i = 1;
      for (const auto& d : body["deltas"]) os << "  delta(" << i++ << ") = " << num(d) << "\n";
      os << "max delta " << num(body["max_delta"]) << (body["passed"].get<bool>() ? "  ok" : "  FAILED") << "\n";
    }
  } else if (schema == kRegionSchema) {
    os << "axes " << body["axes"][0].get<std::string>() << "," << body["axes"][1].get<std::string>() << ": "
       << body["rows"] << " points, " << body["disagreements_outside_band"]
       << " disagreements outside the 0.02 band, " << body["point_errors"] << " point errors\n";
  } else if (schema == kExamplesSchema) {
    for (const auto& c : body["checks"])
      os << (c["passed"].get<bool>() ? "PASS" : "FAIL") << "  [" << c["example"].get<std::string>() << "] "
         << c["name"].get<std::string>() << "  (" << c["detail"].get<std::string>() << ")\n";
    os << (body["passed"].get<bool>() ? "all checks passed" : "some checks FAILED") << "\n";
  } else {
    os << body.dump(2) << "\n";
  }
  return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Naimark-extension compatibility analysis for finite-outcome quantum measurements", "naimark-lab"};
  app.require_subcommand(1);

  std::string format = "human";
  auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "machine"}));
  };
  std::uint64_t seed = 0;
  bool seed_given = false;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) {
      seed = v;
      seed_given = true;
    }, "Random seed (default: $NAIMARK_LAB_SEED or 0)");
  };

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check every observable in a document");
  validate->add_option("file", file, "Measurement document")->required();
  double validate_tol = kDefaultTol;
  validate->add_option("--tol", validate_tol, "Validation tolerance");
  add_format(validate);

  auto* check = app.add_subcommand("check", "Decide compatibility of the observables in a document");
  check->add_option("file", file, "Measurement document")->required();
  std::string method = "all";
  CheckOptions check_opts;
  check->add_option("--method", method, "Methods to run")
      ->check(CLI::IsMember({"w-search", "oracle", "g-estimate", "all"}));
  check->add_option("--tol", check_opts.tol, "Certification tolerance for W-search and the g-estimate");
  check->add_option("--budget", check_opts.budget, "Objective evaluations per restart")->check(CLI::PositiveNumber);
  check->add_option("--restarts", check_opts.restarts, "Optimizer restarts")->check(CLI::PositiveNumber);
  add_seed(check);
  add_format(check);

  auto* naimark = app.add_subcommand("naimark", "Build and verify a Naimark extension of one observable");
  naimark->add_option("file", file, "Measurement document")->required();
  std::optional<std::string> observable;
  std::string out_path;
  naimark->add_option("--observable", observable, "Observable name (optional for single-observable documents)");
  naimark->add_option("--out", out_path, "Write the extension as a measurement document");
  add_format(naimark);

  auto* region = app.add_subcommand("region", "Scan the (lambda1, lambda2) compatibility region of two unsharp spins");
  std::string axes = "x,y";
  RegionCommandOptions region_opts;
  region->add_option("--axes", axes, "Two axis labels, e.g. x,y");
  region->add_option("--grid", region_opts.grid, "Points per axis")->check(CLI::Range(2, 1001));
  region->add_option("--budget", region_opts.scan.search.budget, "W-search evaluations per restart")
      ->check(CLI::PositiveNumber);
  region->add_option("--restarts", region_opts.scan.search.restarts, "W-search restarts")->check(CLI::PositiveNumber);
  region->add_option("--tol", region_opts.scan.search.tol, "W residual accepted as a solution");
  region->add_option("--threads", region_opts.scan.threads, "Worker threads (0: all cores)");
  region->add_option("--out", out_path, "CSV output file (default: stdout)");
  add_seed(region);
  add_format(region);

  auto* examples = app.add_subcommand("examples", "Reproduce the worked examples and assert their conclusions");
  std::string which = "all";
  examples->add_option("--which", which, "Example to run")->check(CLI::IsMember({"1", "2", "3", "4", "all"}));
  add_format(examples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  auto emit = [&](const Report& r) {
    out << (format == "machine" ? r.body.dump(2) + "\n" : render_human(r.body));
    return r.exit_code;
  };

  try {
    if (!seed_given) seed = seed_from_env().value_or(0);

    if (*validate) return emit(validate_report(load_document(file), validate_tol));

    if (*check) {
      check_opts.seed = seed;
      check_opts.oracle = method == "all" || method == "oracle";
      check_opts.w_search = method == "all" || method == "w-search";
      check_opts.g_estimate = method == "all" || method == "g-estimate";
      return emit(check_report(load_document(file), check_opts));
    }

    if (*naimark) {
      const NaimarkResult res = naimark_report(load_document(file), observable);
      if (!out_path.empty() && res.report.body["valid"].get<bool>()) {
        std::ofstream f(out_path);
        if (!f) throw DocumentError("", "cannot write " + out_path);
        f << serialize_document(res.extension);
      }
      Report r = res.report;
      if (out_path.empty() && r.body["valid"].get<bool>()) r.body["extension"] = json::parse(serialize_document(res.extension));
      if (!out_path.empty()) r.body["written_to"] = out_path;
      return emit(r);
    }

    if (*region) {
      const auto comma = axes.find(',');
      if (comma == std::string::npos) throw CLI::ValidationError("--axes", "expected two labels like x,y");
      region_opts.axis1 = parse_axis(axes.substr(0, comma));
      region_opts.axis2 = parse_axis(axes.substr(comma + 1));
      region_opts.scan.search.seed = seed;
      const auto rows = region_scan(axis_from_label(region_opts.axis1), axis_from_label(region_opts.axis2),
                                    square_grid(region_opts.grid), region_opts.scan);
      const std::string csv = region_csv(rows);
      if (out_path.empty()) {
        out << csv;
        return kOk;
      }
      std::ofstream f(out_path);
      if (!f) throw DocumentError("", "cannot write " + out_path);
      f << csv;
      Report summary = region_summary(rows, region_opts);
      if (format != "machine") summary.body.erase("points");
      return emit(summary);
    }

    if (*examples) return emit(examples_report(which == "all" ? 0 : std::stoi(which)));
  } catch (const DocumentError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const CLI::Error& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kAnalysisFailure;
  }
  return kInputError;
}

}  // namespace naimark_lab::cli
