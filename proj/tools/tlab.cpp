// Command-line entry point: experiments and utility subcommands.

#include "tlab/cone_cgo.hpp"
#include "tlab/config.hpp"
#include "tlab/experiments.hpp"
#include "tlab/output.hpp"
#include "tlab/parallel.hpp"
#include "tlab/scattering.hpp"
#include "tlab/specfun.hpp"
#include "tlab/transmission.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace tlab;

namespace {

struct Common {
  std::string config_path;
  std::string out = "out";
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
  auto* opt = app->add_option("--config", c.config_path, "JSON configuration file");
  if (config_required) opt->required();
  app->add_option("--out", c.out, "output directory");
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--threads", c.threads, "worker threads (0 = hardware)");
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + p.string());
  out << text;
}

Json complex_array(const Eigen::VectorXcd& v) {
  Json a = Json::array();
  for (const Complex& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

Json eigenpair_to_json(const TransmissionEigenpair& e) {
  Json charges = Json::array();
  for (const Point& p : e.charges) charges.push_back({p.x(), p.y()});
  return {{"k", e.k},
          {"method", e.method},
          {"coefficients", {{"charges", charges}, {"v", complex_array(e.coeff_v)}, {"w", complex_array(e.coeff_w)}}},
          {"residuals", {{"value", e.residual_value}, {"normal", e.residual_normal}, {"sigma", e.sigma}}},
          {"normalization", {{"v_l2_norm", e.v_norm}}}};
}

Json load_config(const Common& c) { return c.config_path.empty() ? Json::object() : load_json_file(c.config_path); }

Complex complex_of(const JsonReader& r, const std::string& key, Complex fallback) { return r.complex(key, fallback); }

IncidentField parse_incident(const JsonReader& r, double k) {
  const std::string kind = r.string("kind", "plane_wave");
  if (kind == "plane_wave") {
    const Point d = r.point("direction", Point(1.0, 0.0));
    if (!(d.norm() > 0.0)) throw ConfigError(r.key_path("direction") + ": must be nonzero");
    return IncidentField::plane_wave(d.normalized(), k);
  }
  if (kind == "herglotz") return IncidentField::herglotz(parse_kernel(r.child("kernel")), k);
  throw ConfigError(r.key_path("kind") + ": unknown incident kind '" + kind + "'");
}

/// Target field for `fit`: a plane wave or a Bessel mode about a center.
FieldSampler parse_target(const JsonReader& r, double k) {
  const std::string kind = r.string("kind", "plane_wave");
  if (kind == "plane_wave") {
    const Point d = r.point("direction", Point(1.0, 0.0)).normalized();
    return [=](const Point& x) { return std::exp(kI * k * d.dot(x)); };
  }
  if (kind == "bessel") {
    const int m = r.integer("order", 0);
    const Point c = r.point("center", Point::Zero());
    return [=](const Point& x) {
      const Point y = x - c;
      return specfun::bessel_j_signed(m, k * y.norm()) * std::exp(kI * (m * std::atan2(y.y(), y.x())));
    };
  }
  throw ConfigError(r.key_path("kind") + ": unknown target kind '" + kind + "'");
}

int cmd_run(const std::string& id, const Common& c, Json& echo) {
  echo = load_config(c);
  const Report rep = run_experiment(id, echo, c.seed);
  write_report(c.out, rep);
  for (const auto& v : rep.verdicts) std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", v.name.c_str(), v.detail.c_str());
  std::printf("%s %s\n", rep.experiment.c_str(), rep.pass() ? "PASS" : "FAIL");
  return rep.pass() ? 0 : 2;
}

struct DiskArgs {
  double V = 1.0;
  double a = 1.0;
  double kmin = 0.5;
  double kmax = 8.0;
  int mmax = 10;
  double step = 2e-3;
};

int cmd_teig_disk(const DiskArgs& d, const Common& c, Json& echo) {
  echo = {{"V", d.V}, {"a", d.a}, {"kmin", d.kmin}, {"kmax", d.kmax}, {"mmax", d.mmax}, {"step", d.step}};
  if (!(d.V > -1.0) || d.V == 0.0) throw ConfigError("--V: must be nonzero and > -1");
  const auto res = disk_eigenvalues(d.mmax, d.kmin, d.kmax, d.a, std::sqrt(1.0 + d.V), d.step);
  Table t{"disk_eigenvalues", {"m", "k"}, {}};
  for (const auto& e : res.roots) t.add({static_cast<long long>(e.m), e.k});
  write_csv(c.out, t);
  for (const auto& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::printf("%zu eigenvalues written\n", res.roots.size());
  return 0;
}

int cmd_teig_scan(const Common& c, Json& echo) {
  echo = load_config(c);
  const JsonReader r(echo);
  const Domain domain = parse_domain(r.child("domain"));
  const double V = r.number("contrast", 1.0);
  const auto kr = r.numbers("k_range");
  if (kr.size() != 2) throw ConfigError(r.key_path("k_range") + ": expected [lo, hi]");
  MfsParameters mp;
  mp.n_charge = r.integer("n_charge", mp.n_charge);
  mp.charge_offset = r.number("charge_offset", mp.charge_offset);
  const auto scan = scan_eigenvalues(domain, V, kr[0], kr[1], r.number("scan_step", 0.02), mp);
  Table s{"scan", {"k", "sigma_min"}, {}};
  for (std::size_t i = 0; i < scan.k_grid.size(); ++i) s.add({scan.k_grid[i], scan.sigma_min[i]});
  Table m{"eigenvalues", {"k", "sigma", "multiplicity"}, {}};
  for (const auto& x : scan.minima) m.add({x.k, x.sigma, static_cast<long long>(x.multiplicity)});
  write_csv(c.out, s);
  write_csv(c.out, m);
  if (r.boolean("eigenpairs", true)) {
    Json pairs = Json::array();
    for (const auto& x : scan.minima) {
      for (int w = 0; w < x.multiplicity; ++w) pairs.push_back(eigenpair_to_json(reconstruct_eigenfunction(domain, V, x.k, mp, w)));
    }
    write_text(std::filesystem::path(c.out) / "eigenpairs.json", pairs.dump(2) + "\n");
  }
  std::printf("%zu minima below threshold %.3e\n", scan.minima.size(), scan.threshold);
  return 0;
}

int cmd_scatter(const Common& c, Json& echo) {
  echo = load_config(c);
  const JsonReader r(echo);
  const double k = r.number("k");
  if (!(k > 0.0)) throw ConfigError(r.key_path("k") + ": must be positive");
  const PotentialSpec spec{parse_domain(r.child("domain")), parse_contrast(r.child("contrast"))};
  const IncidentField ui = r.has("incident") ? parse_incident(r.child("incident"), k)
                                             : IncidentField::plane_wave(Point(1.0, 0.0), k);
  const QuadratureGrid grid = build_grid(spec.domain, r.number("grid_h", 0.025));
  const auto res = solve_total_field(spec, ui, k, grid);
  const auto ff = far_field(spec, res, r.integer("far_field_directions", 128));
  Table t{"far_field", {"theta", "re", "im"}, {}};
  for (Eigen::Index i = 0; i < ff.values.size(); ++i) t.add({ff.directions[i], ff.values[i].real(), ff.values[i].imag()});
  write_csv(c.out, t);
  const Json summary = {{"far_field_l2_norm", ff.l2_norm},
                        {"method", res.diagnostics.method},
                        {"iterations", res.diagnostics.iterations},
                        {"residual", res.diagnostics.residual},
                        {"grid_nodes", grid.size()}};
  write_text(std::filesystem::path(c.out) / "scatter.json", summary.dump(2) + "\n");
  if (r.boolean("export_field", false)) {
    Json nodes = Json::array();
    for (const Point& p : grid.nodes) nodes.push_back({p.x(), p.y()});
    const Json field = {{"grid", {{"h", grid.h}, {"nodes", nodes}, {"weights", std::vector<double>(grid.weights.data(), grid.weights.data() + grid.weights.size())}}},
                        {"total", complex_array(res.total)},
                        {"incident", complex_array(res.incident)}};
    write_text(std::filesystem::path(c.out) / "field.json", field.dump() + "\n");
  }
  std::printf("||u_inf|| = %.6e (%s)\n", ff.l2_norm, res.diagnostics.method.c_str());
  return 0;
}

int cmd_fit(const Common& c, Json& echo) {
  echo = load_config(c);
  const JsonReader r(echo);
  const double k = r.number("k");
  if (!(k > 0.0)) throw ConfigError(r.key_path("k") + ": must be positive");
  const Domain domain = parse_domain(r.child("domain"));
  const QuadratureGrid grid = build_grid(domain, r.number("grid_h", 0.02));
  const FieldSampler f = parse_target(r.child("target"), k);
  Eigen::VectorXcd target(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) target[i] = f(grid.nodes[i]);
  const auto fit = fit_kernel(grid, target, k, r.integer("truncation"), r.number("lambda", -1.0));
  const int M = fit.kernel.truncation();
  Table t{"kernel", {"m", "re", "im"}, {}};
  for (int m = -M; m <= M; ++m) t.add({static_cast<long long>(m), fit.kernel.coeff(m).real(), fit.kernel.coeff(m).imag()});
  write_csv(c.out, t);
  const Json summary = {{"kernel_norm", fit.kernel.l2_norm()},
                        {"residual", fit.residual},
                        {"relative_residual", fit.residual / l2_norm(grid, target)},
                        {"lambda", fit.lambda},
                        {"condition_estimate", fit.condition_estimate},
                        {"ill_conditioned", fit.ill_conditioned}};
  write_text(std::filesystem::path(c.out) / "fit.json", summary.dump(2) + "\n");
  write_text(std::filesystem::path(c.out) / "kernel.json", kernel_to_json(fit.kernel).dump(2) + "\n");
  std::printf("||g|| = %.6e, residual %.3e\n", fit.kernel.l2_norm(), fit.residual);
  return 0;
}

int cmd_cone_lt(const Common& c, Json& echo) {
  echo = load_config(c);
  const JsonReader r(echo);
  const JsonReader pr = r.child("polynomial");
  const HomHarmonicPoly P(pr.integer("degree"), complex_of(pr, "a", 1.0), complex_of(pr, "b", 0.0));
  const JsonReader rr = r.child("rho");
  const CPoint rho(rr.complex("x", 0.0), rr.complex("y", 0.0));
  const std::string kind = r.string("cone", "orthant");
  Table t{"laplace_transform", {"method", "re", "im"}, {}};
  if (kind == "orthant") {
    const Complex prod = laplace_transform_orthant(P, rho);
    const Complex quad = laplace_transform(P, sector_cone(0.0, kPi / 2), rho);
    t.add({std::string("product_formula"), prod.real(), prod.imag()});
    t.add({std::string("sector_quadrature"), quad.real(), quad.imag()});
    std::printf("product %.15e%+.15ei, quadrature %.15e%+.15ei\n", prod.real(), prod.imag(), quad.real(), quad.imag());
  } else if (kind == "sector") {
    const auto th = r.numbers("cone_angles");
    if (th.size() != 2) throw ConfigError(r.key_path("cone_angles") + ": expected [lo, hi]");
    const Complex quad = laplace_transform(P, sector_cone(th[0], th[1]), rho);
    t.add({std::string("sector_quadrature"), quad.real(), quad.imag()});
    std::printf("%.15e%+.15ei\n", quad.real(), quad.imag());
  } else {
    throw ConfigError(r.key_path("cone") + ": expected 'orthant' or 'sector'");
  }
  write_csv(c.out, t);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmission eigenfunction and corner scattering laboratory"};
  app.require_subcommand(1);
  Common common;

  std::string exp_id;
  auto* run = app.add_subcommand("run", "run an experiment (E1, E2, E3, E4)");
  run->add_option("experiment", exp_id, "experiment id")->required()->check(CLI::IsMember({"E1", "E2", "E3", "E4"}));
  add_common(run, common, false);

  auto* teig = app.add_subcommand("teig", "transmission eigenvalues");
  teig->require_subcommand(1);
  DiskArgs disk;
  auto* tdisk = teig->add_subcommand("disk", "disk eigenvalues from the mode determinants");
  tdisk->add_option("--V", disk.V, "constant contrast");
  tdisk->add_option("--a", disk.a, "disk radius");
  tdisk->add_option("--kmin", disk.kmin, "lower end of the k range");
  tdisk->add_option("--kmax", disk.kmax, "upper end of the k range");
  tdisk->add_option("--mmax", disk.mmax, "largest mode order");
  tdisk->add_option("--step", disk.step, "bracketing step");
  add_common(tdisk, common, false);
  auto* tscan = teig->add_subcommand("scan", "polygon eigenvalue scan");
  add_common(tscan, common, true);

  auto* scatter = app.add_subcommand("scatter", "forward scattering and far field");
  add_common(scatter, common, true);
  auto* fit = app.add_subcommand("fit", "Herglotz kernel fit");
  add_common(fit, common, true);
  auto* cone = app.add_subcommand("cone", "cone Laplace transforms");
  cone->require_subcommand(1);
  auto* lt = cone->add_subcommand("lt", "Laplace transform of a harmonic polynomial");
  add_common(lt, common, true);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = std::chrono::steady_clock::now();
  RunInfo info;
  for (int i = 0; i < argc; ++i) info.command += (i ? " " : "") + std::string(argv[i]);
  info.seed = common.seed;
  int code = 1;
  try {
    if (common.threads > 0) set_thread_count(common.threads);
    info.threads = thread_count();
    if (*run) code = cmd_run(exp_id, common, info.config);
    else if (*tdisk) code = cmd_teig_disk(disk, common, info.config);
    else if (*tscan) code = cmd_teig_scan(common, info.config);
    else if (*scatter) code = cmd_scatter(common, info.config);
    else if (*fit) code = cmd_fit(common, info.config);
    else if (*lt) code = cmd_cone_lt(common, info.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    code = 1;
  }
  info.exit_code = code;
  info.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    write_manifest(common.out, info);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}
