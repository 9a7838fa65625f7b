// Acceptance suite: one PASS/FAIL line per criterion.

#include "tlab/config.hpp"
#include "tlab/experiments.hpp"
#include "tlab/scattering.hpp"
#include "tlab/specfun.hpp"
#include "tlab/transmission.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>

using namespace tlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool g_all = true;

void criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double t = seconds_since(t0);
  const bool pass = o.pass && t < budget_s;
  g_all = g_all && pass;
  std::printf("%s criterion %d: %s (%s; %.1f s of %.0f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              o.detail.c_str(), t, budget_s);
  std::fflush(stdout);
}

Outcome special_functions() {
  using namespace tlab::specfun;
  double wr = 0.0, rec = 0.0;
  for (int m = 0; m <= 20; ++m) {
    for (double x = 0.5; x <= 50.0; x += 0.25) {
      const double jm = bessel_j(m, x), jp = bessel_j(m + 1, x), ym = bessel_y(m, x), yp = bessel_y(m + 1, x);
      wr = std::max(wr, std::abs((jp * ym - jm * yp) * kPi * x / 2.0 - 1.0));
      if (m >= 1) {
        const double jl = bessel_j(m - 1, x), yl = bessel_y(m - 1, x);
        rec = std::max(rec, std::abs(jl + jp - 2.0 * m / x * jm));
        rec = std::max(rec, std::abs(yl + yp - 2.0 * m / x * ym) / std::max(1.0, std::abs(ym)));
      }
    }
  }
  double ja = 0.0;
  for (double kr = 0.0; kr <= 20.0; kr += 0.5) {
    const int n = static_cast<int>(kr) + 30;
    for (double t = 0.0; t < 2 * kPi; t += 0.1) {
      Complex s = 0.0;
      for (int m = -n; m <= n; ++m) s += std::pow(kI, m) * bessel_j_signed(m, kr) * std::exp(kI * (m * t));
      ja = std::max(ja, std::abs(s - std::exp(kI * kr * std::cos(t))));
    }
  }
  return {wr <= 1e-9 && rec <= 1e-9 && ja < 1e-8,
          "Wronskian " + sci(wr) + ", recurrence " + sci(rec) + ", Jacobi-Anger " + sci(ja)};
}

Outcome forward_solver() {
  const double k = 2.0;
  const Point d(1.0, 0.0);
  const auto grid = build_grid(unit_square(), 0.025);
  const auto ui = IncidentField::plane_wave(d, k);

  // Zero contrast through the general path.
  const PotentialSpec zero{unit_square(), Contrast::function("zero", [](const Point&) { return Complex(0.0); })};
  const double zero_norm = solve_total_field(zero, ui, k, grid).scattered().norm();

  // Born deviation against the closed-form Born far field of the square.
  const Complex cst = std::exp(kI * kPi / 4.0) / std::sqrt(8.0 * kPi * k) * k * k;
  auto sinc = [](double s) { return std::abs(s) < 1e-12 ? 1.0 : 2.0 * std::sin(s / 2.0) / s; };
  auto deviation = [&](double eps) {
    const PotentialSpec spec{unit_square(), Contrast::constant_value(eps)};
    const auto ff = far_field(spec, solve_total_field(spec, ui, k, grid), 128);
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < ff.values.size(); ++i) {
      const Point q = k * (d - polar_point(1.0, ff.directions[i]));
      const Complex born = cst * eps * sinc(q.x()) * sinc(q.y());
      num += std::norm(ff.values[i] - born);
      den += std::norm(born);
    }
    return std::sqrt(num / den);
  };
  const double born_ratio = deviation(0.1) / deviation(0.05);

  // Near field against far field at two radii.
  const double k3 = 3.0;
  const PotentialSpec spec{unit_square(), Contrast::constant_value(1.0)};
  const auto grid3 = build_grid(unit_square(), 0.05);
  const auto res = solve_total_field(spec, IncidentField::plane_wave(d, k3), k3, grid3);
  double nf = 0.0;
  for (double R : {200.0 / k3, 400.0 / k3}) {
    Points pts;
    Eigen::VectorXcd ff(32);
    for (int i = 0; i < 32; ++i) {
      const double t = 2 * kPi * i / 32;
      pts.push_back(polar_point(R, t));
      ff[i] = far_field_at(res, t) * std::exp(kI * k3 * R) / std::sqrt(R);
    }
    nf = std::max(nf, (scattered_field_at(spec, res, pts).values - ff).norm() / ff.norm());
  }

  // Reciprocity u_inf(xhat; d) = u_inf(-d; -xhat).
  double rec = 0.0;
  for (auto [a, b] : {std::pair{0.3, 2.0}, std::pair{1.0, 4.5}}) {
    const auto r1 = solve_total_field(spec, IncidentField::plane_wave(polar_point(1.0, a), k3), k3, grid3);
    const auto r2 = solve_total_field(spec, IncidentField::plane_wave(polar_point(1.0, b + kPi), k3), k3, grid3);
    const Complex u12 = far_field_at(r1, b), u21 = far_field_at(r2, a + kPi);
    rec = std::max(rec, std::abs(u12 - u21) / std::abs(u12));
  }
  const bool pass = zero_norm == 0.0 && std::abs(born_ratio - 2.0) <= 0.4 && nf <= 0.02 && rec <= 1e-4;
  return {pass, "zero field " + sci(zero_norm) + ", Born ratio " + sci(born_ratio) + ", near/far " + sci(nf) +
                    ", reciprocity " + sci(rec)};
}

Outcome disk_eigenvalues_agree() {
  const double n_ref = std::sqrt(2.0);
  const auto det = disk_eigenvalues(12, 0.5, 8.6, 1.0, n_ref);
  if (det.roots.size() < 5) return {false, "fewer than five determinant roots"};
  MfsParameters p;
  p.n_charge = 40;
  const auto scan = scan_eigenvalues(DiskDomain{Point::Zero(), 1.0}, 1.0, 0.5, 8.6, 0.004, p);
  const auto dips = scan.detected_minima();
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    double best = INFINITY;
    for (double k : dips) best = std::min(best, std::abs(k - det.roots[i].k) / det.roots[i].k);
    worst = std::max(worst, best);
  }
  return {worst <= 1e-3, "5 roots, worst relative mismatch " + sci(worst) + ", " + std::to_string(dips.size()) + " dips"};
}

std::map<std::string, Report> g_reports;

Outcome experiment(const std::string& id) {
  const Report r = run_experiment(id, Json::object(), 0);
  std::string failed;
  for (const auto& v : r.verdicts) {
    if (!v.pass) failed += (failed.empty() ? "" : "; ") + v.name + ": " + v.detail;
  }
  write_report("acceptance_out/" + id, r);
  g_reports[id] = r;
  return {r.pass(), std::to_string(r.verdicts.size()) + " checks" + (failed.empty() ? "" : ", failed " + failed)};
}

Outcome determinism() {
  std::string detail;
  bool pass = true;
  for (const auto& [id, first] : g_reports) {
    const Report again = run_experiment(id, Json::object(), 0);
    bool same = again.tables.size() == first.tables.size();
    for (std::size_t i = 0; same && i < first.tables.size(); ++i) same = to_csv(first.tables[i]) == to_csv(again.tables[i]);
    pass = pass && same;
    detail += (detail.empty() ? "" : ", ") + id + (same ? " identical" : " differs");
  }
  return {pass && g_reports.size() == 4, detail};
}

}  // namespace

int main() {
  criterion(1, "special functions", 10, special_functions);
  criterion(2, "forward solver", 120, forward_solver);
  criterion(3, "disk transmission eigenvalues", 180, disk_eigenvalues_agree);
  criterion(4, "E1 non-scattering", 300, [] { return experiment("E1"); });
  criterion(5, "E2 corner vanishing", 600, [] { return experiment("E2"); });
  criterion(6, "E3 far-field floor", 900, [] { return experiment("E3"); });
  criterion(7, "E4 cone bound", 300, [] { return experiment("E4"); });
  criterion(8, "determinism", 1800, determinism);
  std::printf("%s\n", g_all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return g_all ? 0 : 1;
}
