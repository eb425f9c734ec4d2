#pragma once

// Command-line front end. run() parses arguments, executes one subcommand
// and returns the process exit code:
//   0 all checks pass, 1 verification failure, 2 usage or configuration
//   error, 3 numerical refusal.

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "bonnet/catalog.hpp"
#include "bonnet/charts.hpp"
#include "bonnet/errors.hpp"
#include "bonnet/json_io.hpp"
#include "bonnet/obj_export.hpp"
#include "bonnet/pipeline.hpp"
#include "bonnet/recovery.hpp"
#include "bonnet/report.hpp"

namespace bonnet::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kRefusal = 3 };

struct RunConfig {
  std::string surface = "homogeneous_torus";
  std::map<std::string, double> params;
  GridChart chart{0.0, std::numbers::pi, 0.0, std::numbers::pi, 65, 65};
  Complex c{1.0, 0.0};
  DerivMode deriv = DerivMode::analytic;
  std::string out_dir;  // empty: no files
  std::map<std::string, double> tolerances;
  bool json = false;
  std::string pair_path;  // roundtrip on an external pair

  void validate() const {
    chart.validate();
    if (c == Complex(0.0, 0.0)) throw PreconditionError("c must be nonzero");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw PreconditionError("c must be finite");
  }
};

// ---------------------------------------------------------------------------
// Argument parsing.

/// A real number, optionally a multiple or fraction of pi: "1.5", "pi",
/// "2pi", "-pi/2", "0.5*pi".
inline double parse_real(std::string s) {
  const auto trim = [](std::string t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
  };
  s = trim(s);
  auto plain = [](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw PreconditionError("not a number: '" + t + "'");
    }
    if (used != t.size()) throw PreconditionError("not a number: '" + t + "'");
    return v;
  };
  const auto p = s.find("pi");
  if (p == std::string::npos) return plain(s);
  std::string head = trim(s.substr(0, p));
  std::string tail = trim(s.substr(p + 2));
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  double factor = 1.0;
  if (head == "-")
    factor = -1.0;
  else if (!head.empty() && head != "+")
    factor = plain(head);
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') throw PreconditionError("not a number: '" + s + "'");
    divisor = plain(trim(tail.substr(1)));
    if (divisor == 0.0) throw PreconditionError("division by zero in '" + s + "'");
  }
  return factor * std::numbers::pi / divisor;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::pair<std::string, double> parse_assignment(const std::string& s, const char* what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw PreconditionError(std::string(what) + " expects KEY=VALUE, got '" + s + "'");
  return {s.substr(0, eq), parse_real(s.substr(eq + 1))};
}

inline int parse_count(const std::string& s) {
  const double v = parse_real(s);
  if (v != std::floor(v) || v < 3 || v > 1e5) throw PreconditionError("grid size must be an integer >= 3, got '" + s + "'");
  return static_cast<int>(v);
}

struct RawOptions {
  std::vector<std::string> params, tolerances;
  std::string chart = "0,pi,0,pi";
  std::string grid = "65x65";
  std::string c = "1,0";
  std::string deriv = "analytic";
};

inline RunConfig build_config(const RunConfig& base, const RawOptions& raw) {
  RunConfig cfg = base;
  for (const auto& p : raw.params) {
    const auto [k, v] = parse_assignment(p, "--param");
    cfg.params.insert_or_assign(k, v);
  }
  for (const auto& t : raw.tolerances) {
    const auto [k, v] = parse_assignment(t, "--tol");
    if (!(v >= 0.0)) throw PreconditionError("tolerance for '" + k + "' must be nonnegative");
    cfg.tolerances.insert_or_assign(k, v);
  }
  const auto ch = split(raw.chart, ',');
  if (ch.size() != 4) throw PreconditionError("--chart expects u0,u1,v0,v1");
  const auto gr = split(raw.grid, 'x');
  if (gr.size() != 1 && gr.size() != 2) throw PreconditionError("--grid expects NuxNv");
  const int nu = parse_count(gr[0]);
  const int nv = gr.size() == 2 ? parse_count(gr[1]) : nu;
  cfg.chart = GridChart(parse_real(ch[0]), parse_real(ch[1]), parse_real(ch[2]), parse_real(ch[3]), nu, nv);
  const auto cc = split(raw.c, ',');
  if (cc.size() > 2) throw PreconditionError("--c expects re,im");
  cfg.c = {parse_real(cc[0]), cc.size() == 2 ? parse_real(cc[1]) : 0.0};
  cfg.deriv = raw.deriv == "fd" ? DerivMode::finite_difference : DerivMode::analytic;
  cfg.validate();
  surface(cfg.surface, cfg.params, cfg.c);  // rejects unknown names and out-of-range parameters
  return cfg;
}

// ---------------------------------------------------------------------------
// Reports.

inline void add_all(Report& r, const std::vector<Measurement>& ms, const RunConfig& cfg, double floor = 0.0,
                    const std::string& prefix = "") {
  for (const auto& m : ms) {
    Measurement mm = m;
    mm.name = prefix + m.name;
    if (floor > 0.0 && mm.name.find("degenerate") == std::string::npos) mm.tolerance = std::max(mm.tolerance, floor);
    r.add(mm, cfg.tolerances);
  }
}

inline void require_known_overrides(const Report& r, const RunConfig& cfg) {
  for (const auto& [name, _] : cfg.tolerances)
    if (!r.find(name)) throw PreconditionError("--tol: no check named '" + name + "'");
}

inline const char* deriv_name(DerivMode m) { return m == DerivMode::analytic ? "analytic" : "fd"; }

inline ojson config_json(const std::string& command, const RunConfig& cfg) {
  ojson j;
  j["command"] = command;
  j["surface"] = cfg.surface;
  ojson params = ojson::object();
  for (const auto& [k, v] : cfg.params) params[k] = v;
  j["params"] = params;
  j["chart"] = to_json(cfg.chart);
  j["c"] = ojson::array({cfg.c.real(), cfg.c.imag()});
  j["deriv"] = deriv_name(cfg.deriv);
  ojson tol = ojson::object();
  for (const auto& [k, v] : cfg.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  if (!cfg.pair_path.empty()) j["pair"] = cfg.pair_path;
  return j;
}

inline ojson grid_fields(const GridChart& g) {
  ojson f;
  f["hu"] = g.hu();
  f["hv"] = g.hv();
  f["nodes"] = g.size();
  return f;
}

inline ojson report_document(const std::string& command, const RunConfig& cfg, ojson fields, const Report& r) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json(command, cfg);
  doc["fields"] = std::move(fields);
  doc["checks"] = to_json(r);
  doc["pass"] = r.all_pass();
  return doc;
}

inline void print_text(std::ostream& out, const std::string& command, const Report& r) {
  for (const auto& c : r.checks()) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  max=" << c.max << "  tol=" << c.tolerance;
    if (c.ratio) out << "  ratio=" << *c.ratio;
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << '\n';
  }
  if (r.all_pass()) {
    out << command << ": all " << r.checks().size() << " checks pass\n";
  } else {
    out << command << ": FAILED:";
    for (const auto& n : r.failures()) out << ' ' << n;
    out << '\n';
  }
}

inline int finish(const std::string& command, const RunConfig& cfg, ojson fields, const Report& r, std::ostream& out,
                  std::ostream& err) {
  require_known_overrides(r, cfg);
  const ojson doc = report_document(command, cfg, std::move(fields), r);
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream f(std::filesystem::path(cfg.out_dir) / (command + "_report.json"));
    if (!f) throw PreconditionError("cannot write report into '" + cfg.out_dir + "'");
    write_json(f, doc);
  }
  if (cfg.json)
    write_json(out, doc);
  else
    print_text(out, command, r);
  if (!r.all_pass()) {
    err << command << ": failing checks:";
    for (const auto& n : r.failures()) err << ' ' << n;
    err << '\n';
    return kFail;
  }
  return kPass;
}

// ---------------------------------------------------------------------------
// Commands.

inline int cmd_list(bool json, std::ostream& out) {
  if (json) {
    ojson doc;
    doc["schema_version"] = kSchemaVersion;
    ojson surfaces = ojson::array();
    for (const auto& s : surface_registry()) {
      ojson e;
      e["name"] = s.name;
      e["summary"] = s.summary;
      ojson ps = ojson::array();
      for (const auto& p : s.params) {
        ojson pj;
        pj["name"] = p.name;
        pj["default"] = p.default_value;
        pj["lower"] = p.lower;
        pj["upper"] = p.upper ? ojson(*p.upper) : ojson(nullptr);
        pj["bounds"] = "open";
        ps.push_back(pj);
      }
      e["params"] = ps;
      surfaces.push_back(e);
    }
    doc["surfaces"] = surfaces;
    write_json(out, doc);
    return kPass;
  }
  for (const auto& s : surface_registry()) {
    out << s.name;
    for (const auto& p : s.params) out << ' ' << describe_range(p);
    out << "\n    " << s.summary << '\n';
  }
  return kPass;
}

inline int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance in = make_instance(surface(cfg.surface, cfg.params, cfg.c), cfg.chart, cfg.deriv);
  const std::filesystem::path dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
  std::filesystem::create_directories(dir);

  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = config_json("synth", cfg);
  doc["fields"] = pair_fields_json(in.bp);
  Report r;
  r.add("integration_loop_defect", in.bp.loop_defect, in.bp.loop_defect,
        closure_tolerance(in.bp.dFp + in.bp.dFm) * cfg.chart.hu() * cfg.chart.hv());
  r.add("closure", in.bp.closure_residual, in.bp.closure_residual, closure_tolerance(in.bp.dFp + in.bp.dFm));
  doc["checks"] = to_json(r);
  {
    std::ofstream f(dir / "pair.json");
    if (!f) throw PreconditionError("cannot write into '" + dir.string() + "'");
    write_json(f, doc, 0);
  }
  write_obj((dir / "fplus.obj").string(), coordinates_in(in.bp.Fp, self_dual_basis()), bivector_obj_header("+"));
  write_obj((dir / "fminus.obj").string(), coordinates_in(in.bp.Fm, anti_self_dual_basis()), bivector_obj_header("-"));
  std::vector<std::string> written{"pair.json", "fplus.obj", "fminus.obj"};
  if (const auto X = stereographic(in.s.x)) {
    write_obj((dir / "x.obj").string(), *X,
              {"isothermic surface x, stereographic projection (x1,x2,x3)/(1-x4) from e4"});
    written.push_back("x.obj");
  } else {
    err << "warning: chart comes within 1e-3 of the projection pole e4; x.obj skipped\n";
  }
  if (cfg.json) {
    ojson j;
    j["out"] = dir.string();
    j["files"] = written;
    write_json(out, j);
  } else {
    out << "synth: wrote";
    for (const auto& w : written) out << ' ' << (dir / w).string();
    out << '\n';
  }
  return kPass;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Instance in = make_instance(surface(cfg.surface, cfg.params, cfg.c), cfg.chart, cfg.deriv);
  Report r;
  add_all(r, verify_measurements(in), cfg, fd_tolerance_floor(in));
  return finish("verify", cfg, grid_fields(cfg.chart), r, out, err);
}

inline int cmd_roundtrip(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report r;
  ojson fields;
  if (!cfg.pair_path.empty()) {
    const BonnetPairPatch bp = pair_from_json(read_json_file(cfg.pair_path));
    const Recovery rec = recover_isothermic(bp);
    add_all(r, rec.certificates, cfg);
    fields = grid_fields(bp.chart);
    fields["labels_swapped"] = rec.labels_swapped;
  } else {
    const Instance in = make_instance(surface(cfg.surface, cfg.params, cfg.c), cfg.chart, cfg.deriv);
    const RoundTrip rt = roundtrip_measurements(in);
    add_all(r, rt.measurements, cfg, fd_tolerance_floor(in));
    fields = grid_fields(cfg.chart);
    fields["labels_swapped"] = rt.rec.labels_swapped;
  }
  return finish("roundtrip", cfg, std::move(fields), r, out, err);
}

inline int cmd_converge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const IsothermicPatch p = surface(cfg.surface, cfg.params, cfg.c);
  const Instance coarse = make_instance(p, cfg.chart, cfg.deriv);
  const Instance fine = make_instance(p, cfg.chart.refined(), cfg.deriv);
  Report r;
  add_all(r, verify_measurements(coarse), cfg, fd_tolerance_floor(coarse), "h.");
  add_all(r, verify_measurements(fine), cfg, fd_tolerance_floor(fine), "h/2.");
  const DifferentialResiduals a = differential_residuals(coarse), b = differential_residuals(fine);
  const std::pair<const char*, std::pair<double, double>> rates[] = {
      {"rate.d_eta", {a.d_eta, b.d_eta}},
      {"rate.d_omega", {a.d_omega, b.d_omega}},
      {"rate.d_omega_wedge_x", {a.d_omega_wedge_x, b.d_omega_wedge_x}},
      {"rate.product_rule", {a.product_rule, b.product_rule}},
  };
  for (const auto& [name, v] : rates) {
    // Sampled derivatives: the one-sided boundary stencils cap the order at 1.
    // The product-rule mismatch loses its h^2 term on some instances, so it
    // only needs to be at least second order.
    const bool lower_bound_only = std::string(name) == "rate.product_rule";
    Check c = cfg.deriv != DerivMode::analytic ? convergence_floor_check(name, v.first, v.second, a.scale, 1.6)
              : lower_bound_only               ? convergence_floor_check(name, v.first, v.second, a.scale, 3.2)
                                               : richardson_check(name, v.first, v.second, a.scale);
    if (const auto it = cfg.tolerances.find(name); it != cfg.tolerances.end()) {
      c.tolerance = it->second;
      c.pass = c.note == "exact" || c.max <= c.tolerance;
    }
    r.add(c);
  }
  ojson fields;
  fields["coarse"] = grid_fields(cfg.chart);
  fields["fine"] = grid_fields(cfg.chart.refined());
  return finish("converge", cfg, std::move(fields), r, out, err);
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bonnet pairs from isothermic surfaces in S^3: synthesis, verification and recovery", "bonnet"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  RunConfig base;
  RawOptions raw;
  bool list_json = false;

  CLI::App* list = app.add_subcommand("list", "List catalog surfaces and their parameter ranges");
  list->add_flag("--json", list_json, "Machine-readable registry");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--surface", base.surface, "Catalog surface name")->capture_default_str();
    sub->add_option("--param", raw.params, "Surface parameter KEY=VALUE (repeatable)");
    sub->add_option("--chart", raw.chart, "Chart rectangle u0,u1,v0,v1 (values may use pi)")->capture_default_str();
    sub->add_option("--grid", raw.grid, "Grid size NuxNv")->capture_default_str();
    sub->add_option("--c", raw.c, "Quadratic differential coefficient re,im")->capture_default_str();
    sub->add_option("--deriv", raw.deriv, "Derivatives: analytic or fd")
        ->check(CLI::IsMember({"analytic", "fd"}))
        ->capture_default_str();
    sub->add_option("--out", base.out_dir, "Output directory");
    sub->add_option("--tol", raw.tolerances, "Tolerance override CHECK=VALUE (repeatable)");
    sub->add_flag("--json", base.json, "Print the JSON report to stdout");
  };
  CLI::App* synth = app.add_subcommand("synth", "Synthesize the Bonnet pair; write pair.json and OBJ meshes");
  CLI::App* verify = app.add_subcommand("verify", "Verify the Bonnet pair identities");
  CLI::App* roundtrip = app.add_subcommand("roundtrip", "Recover the isothermic surface from its Bonnet pair");
  CLI::App* converge = app.add_subcommand("converge", "Verify on h and h/2 and report convergence rates");
  for (CLI::App* sub : {synth, verify, roundtrip, converge}) add_common(sub);
  roundtrip->add_option("--pair", base.pair_path, "Recover from a pair.json instead of a catalog surface");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (list->parsed()) return cmd_list(list_json, out);
    const RunConfig cfg = build_config(base, raw);
    if (synth->parsed()) return cmd_synth(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out, err);
    if (roundtrip->parsed()) return cmd_roundtrip(cfg, out, err);
    return cmd_converge(cfg, out, err);
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalRefusal& e) {
    err << "refused: " << e.what() << '\n';
    return kRefusal;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace bonnet::cli
