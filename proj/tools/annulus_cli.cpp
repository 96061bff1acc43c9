// Command-line front end: reproducible CSV/JSON tables for every module.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <annulus/bol.hpp>
#include <annulus/critical.hpp>
#include <annulus/diskkernels.hpp>
#include <annulus/greens.hpp>
#include <annulus/modular.hpp>
#include <annulus/potential.hpp>
#include <annulus/prepotential.hpp>
#include <annulus/sampling.hpp>
#include <annulus/spectral.hpp>

#include "acceptance_suite.hpp"

namespace {

using namespace annulus;
using json = nlohmann::json;

constexpr const char* kVersion = "1.0.0";

struct Options {
  double R = 2.0;
  std::string a;  // complex literal "re" or "re,im"; empty = subcommand default
  std::string z;
  int radii = 8;
  int angles = 8;
  double tol = 1e-8;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  std::string domain = "annulus";
  std::string example = "cos";
};

cplx parse_complex(const std::string& s, const char* flag) {
  std::size_t pos = 0;
  double re = 0.0, im = 0.0;
  try {
    re = std::stod(s, &pos);
    if (pos < s.size()) {
      if (s[pos] != ',') throw std::invalid_argument("separator");
      std::size_t pos2 = 0;
      im = std::stod(s.substr(pos + 1), &pos2);
      if (pos + 1 + pos2 != s.size()) throw std::invalid_argument("trailing");
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError(std::string(flag) + ": expected 're' or 're,im', got '" + s + "'");
  }
  return {re, im};
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  void row(std::initializer_list<json> cells) { rows.emplace_back(cells); }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    out += (c ? "," : "") + t.columns[c];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out += ",";
      const json& v = r[c];
      if (v.is_number_float())
        out += fmt17(v.get<double>());
      else if (v.is_number_integer())
        out += std::to_string(v.get<long long>());
      else if (v.is_boolean())
        out += v.get<bool>() ? "true" : "false";
      else
        out += v.get<std::string>();
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& t, json meta) {
  meta["columns"] = t.columns;
  json top;
  top["meta"] = std::move(meta);
  top["data"] = t.rows;
  return top.dump(2) + "\n";
}

void emit(const Table& t, const json& meta, const Options& o) {
  std::string body = o.format == "json" ? render_json(t, meta) : render_csv(t);
  if (o.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw domain_error_ex("cannot open output file: " + o.out);
    f << body;
  }
}

json base_meta(const std::string& sub, const Options& o) {
  json m;
  m["subcommand"] = sub;
  m["version"] = kVersion;
  m["seed"] = o.seed;
  m["format"] = o.format;
  m["tol"] = o.tol;
  return m;
}

cplx opt_complex(const std::string& s, cplx fallback, const char* flag) {
  return s.empty() ? fallback : parse_complex(s, flag);
}

json jc(cplx v) { return json::array({v.real(), v.imag()}); }

// ---- subcommand bodies ------------------------------------------------------

int run_greens(const Options& o) {
  AnnulusDomain dom = make_annulus(o.R);
  cplx a = opt_complex(o.a, cplx(1.4, 0.0), "--a");
  Table t;
  t.columns = {"z_re", "z_im", "G_sigma", "G_product", "G_theta", "G_primeform",
               "dG_re", "dG_im"};
  for (int i = 0; i < o.radii; ++i) {
    double r = 1.0 + (o.R - 1.0) * (i + 0.5) / o.radii;
    for (int j = 0; j < o.angles; ++j) {
      cplx z = r * std::exp(I * (2.0 * PI * j / o.angles));
      if (std::abs(z - a) < 0.05) continue;
      cplx dg = greens_dz(z, a, dom);
      t.row({z.real(), z.imag(), greens(z, a, dom, GreensFormula::sigma).value,
             greens(z, a, dom, GreensFormula::product).value,
             greens(z, a, dom, GreensFormula::theta).value,
             greens(z, a, dom, GreensFormula::primeform).value, dg.real(), dg.imag()});
    }
  }
  json meta = base_meta("greens", o);
  meta["R"] = o.R;
  meta["a"] = jc(a);
  meta["radii"] = o.radii;
  meta["angles"] = o.angles;
  emit(t, meta, o);
  return 0;
}

int run_kernels(const Options& o) {
  Table t;
  t.columns = {"kind", "z_re", "z_im", "v_re", "v_im"};
  json meta = base_meta("kernels", o);
  meta["domain"] = o.domain;
  meta["radii"] = o.radii;
  meta["angles"] = o.angles;
  if (o.domain == "disk") {
    cplx zeta = opt_complex(o.a, cplx(0.3, 0.2), "--a");
    for (int i = 0; i < o.radii; ++i) {
      double r = (i + 0.5) / o.radii;
      for (int j = 0; j < o.angles; ++j) {
        cplx z = r * std::exp(I * (2.0 * PI * j / o.angles));
        if (std::abs(z - zeta) < 0.05) continue;
        for (auto [name, kind] :
             {std::pair{"neumann", DiskKernelKind::neumann},
              std::pair{"hydro_greens", DiskKernelKind::hydro_greens},
              std::pair{"k_harmonic", DiskKernelKind::k_harmonic},
              std::pair{"K_dirichlet", DiskKernelKind::K_dirichlet},
              std::pair{"L_adjoint", DiskKernelKind::L_adjoint}}) {
          cplx v = eval_disk_kernel(kind, z, zeta);
          t.row({name, z.real(), z.imag(), v.real(), v.imag()});
        }
        cplx b = disk_bergman_K(z, zeta);
        t.row({"bergman_K", z.real(), z.imag(), b.real(), b.imag()});
      }
    }
    meta["a"] = jc(zeta);
  } else {
    AnnulusDomain dom = make_annulus(o.R);
    cplx a = opt_complex(o.a, cplx(1.4, 0.0), "--a");
    for (int i = 0; i < o.radii; ++i) {
      double r = 1.0 + (o.R - 1.0) * (i + 0.5) / o.radii;
      for (int j = 0; j < o.angles; ++j) {
        cplx z = r * std::exp(I * (2.0 * PI * j / o.angles));
        if (std::abs(z - a) < 0.05) continue;
        cplx K = bergman_K(z, a, dom), L = schiffer_L(z, a, dom);
        t.row({"bergman_K", z.real(), z.imag(), K.real(), K.imag()});
        t.row({"schiffer_L", z.real(), z.imag(), L.real(), L.imag()});
      }
    }
    for (int j = 0; j < o.angles; ++j) {
      double th = 2.0 * PI * j / o.angles;
      for (double r : {1.0, o.R}) {
        cplx z = r * std::exp(I * th);
        t.row({r == 1.0 ? "poisson_inner" : "poisson_outer", z.real(), z.imag(),
               poisson(z, a, dom), 0.0});
      }
    }
    meta["R"] = o.R;
    meta["a"] = jc(a);
  }
  emit(t, meta, o);
  return 0;
}

int run_critical(const Options& o) {
  AnnulusDomain dom = make_annulus(o.R);
  RhoResult rr = solve_rho(dom);
  Table t;
  t.columns = {"a_re", "a_im", "zG_re", "zG_im", "residual_G", "has_zK", "zK_re", "zK_im"};
  for (int i = 0; i < o.radii; ++i) {
    double r = 1.0 + (o.R - 1.0) * (i + 0.5) / o.radii;
    for (int j = 0; j < o.angles; ++j) {
      cplx a = r * std::exp(I * (2.0 * PI * j / o.angles));
      cplx zg = critical_point(a, dom);
      auto zk = bergman_zero(a, dom, rr);
      t.row({a.real(), a.imag(), zg.real(), zg.imag(), std::abs(greens_dz(zg, a, dom)),
             zk.has_value(), zk ? zk->real() : 0.0, zk ? zk->imag() : 0.0});
    }
  }
  json meta = base_meta("critical", o);
  meta["R"] = o.R;
  meta["radii"] = o.radii;
  meta["angles"] = o.angles;
  meta["rho"] = rr.rho;
  emit(t, meta, o);
  return 0;
}

int run_dichotomy(const Options& o) {
  AnnulusDomain dom = make_annulus(o.R);
  DichotomyReport rep = dichotomy_scan(dom, o.radii, o.angles);
  Table t;
  t.columns = {"a_re", "a_im", "zG_re", "zG_im", "residual_G",
               "has_zK", "zK_re", "zK_im", "residual_K", "ok"};
  for (const auto& row : rep.grid) {
    t.row({row.a.real(), row.a.imag(), row.z_G.real(), row.z_G.imag(), row.residual_G,
           row.has_zK, row.has_zK ? row.z_K.real() : 0.0, row.has_zK ? row.z_K.imag() : 0.0,
           row.residual_K, row.ok});
  }
  json meta = base_meta("dichotomy", o);
  meta["R"] = o.R;
  meta["radii"] = o.radii;
  meta["angles"] = o.angles;
  meta["rho"] = rep.rho;
  meta["violations"] = rep.violations;
  meta["limit_gaps"] = rep.limit_gaps;
  emit(t, meta, o);
  return 0;
}

int run_rho(const Options& o) {
  AnnulusDomain dom = make_annulus(o.R);
  Table t;
  t.columns = {"R", "rho", "residual", "method"};
  RhoResult a = solve_rho(dom);
  RhoResult b = rho_integral(dom);
  t.row({o.R, a.rho, a.residual, "wp_root"});
  t.row({o.R, b.rho, b.residual, "integral"});
  json meta = base_meta("rho", o);
  meta["R"] = o.R;
  emit(t, meta, o);
  return 0;
}

int run_modular_check(const Options& o) {
  std::vector<cplx> taus{cplx(0.0, PI / std::log(o.R)), cplx(0.21, 0.35), cplx(-0.4, 0.8),
                         cplx(0.0, 0.3)};
  Table t;
  t.columns = {"tau_re", "tau_im", "ramanujan_max", "chazy", "discriminant_rel",
               "eta24_rel", "phi_symmetry"};
  for (cplx tau : taus) {
    ModularPoint p = make_modular(tau);
    double ram = 0.0;
    for (cplx r : ramanujan_residuals(p)) ram = std::max(ram, std::abs(r));
    cplx d1 = discriminant(p), d2 = discriminant_eisenstein(p);
    cplx eta = dedekind_eta(p);
    cplx e24 = std::pow(eta, 24);
    t.row({tau.real(), tau.imag(), ram, std::abs(chazy_residual(p)),
           std::abs(d1 - d2) / std::abs(d2), std::abs(e24 - d1) / std::abs(e24),
           std::abs(phi_rs(p, 2, 3) - phi_rs(p, 3, 2))});
  }
  json meta = base_meta("modular-check", o);
  meta["R"] = o.R;
  emit(t, meta, o);
  return 0;
}

int run_trace(const Options& o) {
  Region reg = o.domain == "disk" ? disk_region() : annulus_region(make_annulus(o.R));
  cplx a = opt_complex(o.a, o.domain == "disk" ? cplx(0.0, 0.0) : cplx(1.4, 0.0), "--a");
  UField f = greens_field(a);
  cplx z0 = o.z.empty() ? find_level_point(f, reg, 0.3, 0.0) : parse_complex(o.z, "--z");
  TraceRecord tr = level_line_trace(f, reg, z0, 5.0, o.tol);
  Table t;
  t.columns = {"t", "z_re", "z_im", "u"};
  for (const auto& [time, z] : tr.samples)
    t.row({time, z.real(), z.imag(), u_value(f, z, reg)});
  json meta = base_meta("trace", o);
  meta["domain"] = o.domain;
  if (o.domain != "disk") meta["R"] = o.R;
  meta["a"] = jc(a);
  meta["z0"] = jc(z0);
  meta["closed"] = tr.closed;
  meta["truncated"] = tr.truncated;
  meta["closure_gap"] = tr.closure_gap;
  meta["u_drift"] = tr.u_drift;
  meta["newton_residual"] = tr.newton_residual;
  meta["period"] = tr.period;
  emit(t, meta, o);
  return 0;
}

int run_coeffs(const Options& o) {
  Region reg = o.domain == "disk" ? disk_region() : annulus_region(make_annulus(o.R));
  cplx zeta = opt_complex(o.a, o.domain == "disk" ? cplx(0.3, 0.2) : cplx(1.4, 0.0), "--a");
  int N = 8;
  TaylorCoeffs tc = taylor_coeffs(zeta, reg, N);
  double d = boundary_distance(zeta, reg);
  Table t;
  t.columns = {"n", "c_re", "c_im", "bound"};
  for (int n = 0; n <= N; ++n)
    t.row({n, tc.c[n].real(), tc.c[n].imag(), n ? 1.0 / (n * std::pow(d, n)) : 0.0});
  json meta = base_meta("coeffs", o);
  meta["domain"] = o.domain;
  if (o.domain != "disk") meta["R"] = o.R;
  meta["a"] = jc(zeta);
  meta["boundary_distance"] = d;
  emit(t, meta, o);
  return 0;
}

int run_bol_check(const Options& o) {
  Table t;
  t.columns = {"check", "m", "residual"};
  for (int m = 1; m <= 3; ++m) {
    auto [lhs, rhs] = stokes_check(m, PolySeries::monomial(m + 1), PolySeries::monomial(1));
    t.row({"stokes", m, std::abs(lhs - rhs)});
  }
  PolySeries F(std::vector<cplx>{0.1, cplx(0.0, 0.4), 0.7, 1.0, cplx(0.2, -0.1)});
  PolySeries G(std::vector<cplx>{0.0, 1.0, cplx(0.3, 0.3), 0.0, 0.5});
  for (int m = 0; m <= 3; ++m) {
    auto [n, p] = isometry_check(m, F, G);
    t.row({"isometry", m, std::abs(n - p)});
  }
  const std::vector<cplx> pts{cplx(0.2, 0.1), cplx(-0.4, 0.3), cplx(0.55, -0.2)};
  cplx p(0.3, 0.1);
  cplx e = std::exp(I * 0.7);
  cplx s = std::sqrt(e * (1.0 - std::norm(p)));
  MobiusMap map(e / s, -e * p / s, -std::conj(p) / s, 1.0 / s);
  for (int m = 2; m <= 3; ++m)
    t.row({"covariance", m, bol_covariance(m, map, PolySeries::monomial(5), pts)});
  PolySeries gp(std::vector<cplx>{0.0, 1.0, 1.0});
  t.row({"covariance_negative_control", 2,
         bol_covariance_poly(2, gp, PolySeries::monomial(5), {cplx(0.5, 0.0)})});
  for (int m = 2; m <= 8; ++m)
    t.row({"metric_annihilation", m, metric_annihilation_residual(m)});
  t.row({"resolvent", 2,
         std::abs(resolvent_reconstruct(PolySeries::monomial(3), cplx(0.2, 0.3)) -
                  cplx(0.2, 0.3) * cplx(0.2, 0.3) * cplx(0.2, 0.3))});
  emit(t, base_meta("bol-check", o), o);
  return 0;
}

int run_prepotential(const Options& o) {
  ODEContext ctx = make_cos_context();
  Table t;
  t.columns = {"u", "F_re", "F_im", "u2_re", "u2_im", "third_order_residual"};
  for (int k = 1; k <= 18; ++k) {
    double u = 0.05 * k;
    cplx Fv = prepotential_F(ctx, u);
    cplx u2 = second_solution(ctx, u1_inverse(ctx, u));
    t.row({u, Fv.real(), Fv.imag(), u2.real(), u2.imag(),
           std::abs(third_order_residual(ctx, u))});
  }
  json meta = base_meta("prepotential", o);
  meta["example"] = o.example;
  emit(t, meta, o);
  return 0;
}

int run_spectral(const Options& o) {
  AnnulusDomain dom = make_annulus(o.R);
  cplx z = opt_complex(o.z, 1.7 * std::exp(I * (0.3 + PI)), "--z");
  cplx a = opt_complex(o.a, 1.25 * std::exp(I * 0.3), "--a");
  double s = 1.1;
  double gtheta = theta_greens(z, a, dom);
  Table t;
  t.columns = {"M", "N", "s", "partial_sum", "theta_greens", "gap"};
  for (int M : {25, 50, 100, 200, 400}) {
    double ps = eigen_partial_sum(z, a, dom, s, M, M);
    t.row({M, M, s, ps, gtheta, std::abs(ps - gtheta)});
  }
  json meta = base_meta("spectral", o);
  meta["R"] = o.R;
  meta["a"] = jc(a);
  meta["z"] = jc(z);
  emit(t, meta, o);
  return 0;
}

int run_selftest(const Options& o) {
  std::vector<acceptance::CriterionResult> rs = acceptance::run_all(o.seed);
  Table t;
  t.columns = {"criterion", "name", "pass", "worst"};
  bool all = true;
  for (const auto& r : rs) {
    t.row({r.id, r.name, r.pass, r.worst});
    all = all && r.pass;
  }
  emit(t, base_meta("selftest", o), o);
  return all ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical function theory of the annulus and the unit disk"};
  app.require_subcommand(1);
  Options o;
  int rc = 0;

  auto add_common = [&](CLI::App* sub, bool with_R, bool with_a, bool with_z, bool with_grid,
                        bool with_domain, bool with_example) {
    if (with_R)
      sub->add_option("--R", o.R, "outer radius of the annulus A(1,R)")
          ->check(CLI::Range(1.0 + 1e-9, 1e6));
    if (with_a) sub->add_option("--a", o.a, "pole/source position, 're' or 're,im'");
    if (with_z) sub->add_option("--z", o.z, "evaluation/start point, 're' or 're,im'");
    if (with_grid) {
      sub->add_option("--radii", o.radii, "radial grid count")->check(CLI::Range(1, 100000));
      sub->add_option("--angles", o.angles, "angular grid count")->check(CLI::Range(1, 100000));
    }
    sub->add_option("--tol", o.tol, "tolerance override")
        ->check(CLI::Range(1e-15, 1.0));
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", o.out, "output path (default: stdout)");
    sub->add_option("--seed", o.seed, "seed for quasirandom sampling");
    if (with_domain)
      sub->add_option("--domain", o.domain, "domain")->check(CLI::IsMember({"annulus", "disk"}));
    if (with_example)
      sub->add_option("--example", o.example, "named example problem")
          ->check(CLI::IsMember({"cos"}));
  };

  struct Sub {
    const char* name;
    const char* desc;
    bool R, a, z, grid, domain, example;
    int (*fn)(const Options&);
  };
  const Sub subs[] = {
      {"greens", "Green's function of the annulus, all four closed forms", true, true, false,
       true, false, false, run_greens},
      {"kernels", "Bergman/adjoint/Poisson kernels (annulus) or disk kernel table", true, true,
       false, true, true, false, run_kernels},
      {"critical", "critical points and Bergman zeros over a source grid", true, false, false,
       true, false, false, run_critical},
      {"dichotomy", "critical-point / Bergman-zero partition scan", true, false, false, true,
       false, false, run_dichotomy},
      {"rho", "dichotomy radius rho(R) by both solvers", true, false, false, false, false,
       false, run_rho},
      {"modular-check", "Eisenstein/discriminant/modulus identities", true, false, false, false,
       false, false, run_modular_check},
      {"trace", "level-line trace of a Green potential", true, true, true, false, true, false,
       run_trace},
      {"coeffs", "Taylor coefficients of the regular part of the Green's function", true, true,
       false, false, true, false, run_coeffs},
      {"bol-check", "covariant derivative operator identities", false, false, false, false,
       false, false, run_bol_check},
      {"prepotential", "prepotential of the second-order equation", false, false, false, false,
       false, true, run_prepotential},
      {"spectral", "eigenfunction partial sums vs the closed form", true, true, true, false,
       false, false, run_spectral},
      {"selftest", "run the full acceptance suite", false, false, false, false, false, false,
       run_selftest},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.desc);
    add_common(sub, s.R, s.a, s.z, s.grid, s.domain, s.example);
    sub->callback([&o, &rc, fn = s.fn]() { rc = fn(o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}
