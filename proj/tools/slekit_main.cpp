// slekit: simulate SLE traces and the discrete models they describe, evaluate
// the exact formulas, and run the Monte Carlo verification suite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sle/discrete_models.hpp"
#include "sle/exact_formulas.hpp"
#include "sle/loewner.hpp"
#include "sle/montecarlo.hpp"
#include "sle/serialize.hpp"

namespace fs = std::filesystem;
using namespace sle;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitValidation = 2;

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string());
  os << content;
}

template <typename Fn>
void write_stream(const fs::path& p, Fn&& fn) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + p.string());
  fn(os);
}

void print_value(double v) { std::printf("%.12g\n", v); }

struct CommonOut {
  std::string out_dir = ".";
  std::string format = "csv";  // csv | svg | json (svg/json imply csv)
};

void add_common(CLI::App* cmd, CommonOut& out) {
  cmd->add_option("--out-dir", out.out_dir, "output directory");
  cmd->add_option("--format", out.format, "csv|svg|json")
      ->check(CLI::IsMember({"csv", "svg", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SLE simulation and verification toolkit"};
  app.require_subcommand(1);

  // ---- trace ----------------------------------------------------------
  auto* trace_cmd = app.add_subcommand("trace", "chordal SLE trace");
  double tr_kappa = 6.0, tr_horizon = 1.0;
  int tr_steps = 1000;
  std::uint64_t tr_seed = 0;
  CommonOut tr_out;
  trace_cmd->add_option("--kappa", tr_kappa, "diffusivity kappa")->required();
  trace_cmd->add_option("--steps", tr_steps, "number of time steps");
  trace_cmd->add_option("--horizon", tr_horizon, "time horizon");
  trace_cmd->add_option("--seed", tr_seed, "RNG seed")->required();
  add_common(trace_cmd, tr_out);

  // ---- radial ---------------------------------------------------------
  auto* radial_cmd = app.add_subcommand("radial", "radial SLE trace");
  double ra_kappa = 2.0, ra_horizon = 1.0;
  int ra_steps = 400;
  std::uint64_t ra_seed = 0;
  CommonOut ra_out;
  radial_cmd->add_option("--kappa", ra_kappa)->required();
  radial_cmd->add_option("--steps", ra_steps);
  radial_cmd->add_option("--horizon", ra_horizon);
  radial_cmd->add_option("--seed", ra_seed)->required();
  add_common(radial_cmd, ra_out);

  // ---- explore --------------------------------------------------------
  auto* explore_cmd =
      app.add_subcommand("explore", "percolation exploration interface");
  int ex_w = 24, ex_h = 18, ex_start = -1;
  std::uint64_t ex_seed = 0;
  CommonOut ex_out;
  explore_cmd->add_option("--width", ex_w);
  explore_cmd->add_option("--height", ex_h);
  explore_cmd->add_option("--start", ex_start, "bottom-row split index");
  explore_cmd->add_option("--seed", ex_seed)->required();
  add_common(explore_cmd, ex_out);

  // ---- harmonic -------------------------------------------------------
  auto* harmonic_cmd = app.add_subcommand("harmonic", "harmonic explorer");
  int ha_w = 16, ha_h = 12, ha_start = -1;
  double ha_tol = 1e-10;
  std::uint64_t ha_seed = 0;
  CommonOut ha_out;
  harmonic_cmd->add_option("--width", ha_w);
  harmonic_cmd->add_option("--height", ha_h);
  harmonic_cmd->add_option("--start", ha_start);
  harmonic_cmd->add_option("--tol", ha_tol);
  harmonic_cmd->add_option("--seed", ha_seed)->required();
  add_common(harmonic_cmd, ha_out);

  // ---- lerw -----------------------------------------------------------
  auto* lerw_cmd =
      app.add_subcommand("lerw", "loop-erased random walk on a grid");
  int le_w = 40, le_h = 40;
  std::uint64_t le_seed = 0;
  CommonOut le_out;
  lerw_cmd->add_option("--width", le_w);
  lerw_cmd->add_option("--height", le_h);
  lerw_cmd->add_option("--seed", le_seed)->required();
  add_common(lerw_cmd, le_out);

  // ---- ust ------------------------------------------------------------
  auto* ust_cmd = app.add_subcommand("ust", "uniform spanning tree (Wilson)");
  int us_w = 16, us_h = 16;
  std::uint64_t us_seed = 0;
  CommonOut us_out;
  ust_cmd->add_option("--width", us_w);
  ust_cmd->add_option("--height", us_h);
  ust_cmd->add_option("--seed", us_seed)->required();
  add_common(ust_cmd, us_out);

  // ---- peano ----------------------------------------------------------
  auto* peano_cmd = app.add_subcommand("peano", "UST Peano curve");
  int pe_w = 10, pe_h = 8;
  std::uint64_t pe_seed = 0;
  CommonOut pe_out;
  peano_cmd->add_option("--width", pe_w, "grid vertices per row");
  peano_cmd->add_option("--height", pe_h, "grid rows");
  peano_cmd->add_option("--seed", pe_seed)->required();
  add_common(peano_cmd, pe_out);

  // ---- formula --------------------------------------------------------
  auto* formula_cmd = app.add_subcommand("formula", "evaluate exact formulas");
  formula_cmd->require_subcommand(1);
  double f_kappa = 6.0, f_xi = 0.5, f_x0 = 1.0, f_y0 = 1.0, f_theta = M_PI;
  double f_lambda = 0.0, f_psi = 1.0, f_q = 1.0, f_n = 1.0;
  int f_k = 1;
  std::string f_geometry = "half-plane";
  std::vector<double> f_lambdas;

  auto* f_cardy = formula_cmd->add_subcommand("cardy", "crossing probability");
  f_cardy->add_option("--xi", f_xi)->required();
  f_cardy->add_option("--kappa", f_kappa);

  auto* f_left = formula_cmd->add_subcommand("left-passage", "left passage law");
  f_left->add_option("--kappa", f_kappa)->required();
  f_left->add_option("--x0", f_x0)->required();
  f_left->add_option("--y0", f_y0)->required();

  auto* f_schramm =
      formula_cmd->add_subcommand("schramm", "percolation left passage");
  f_schramm->add_option("--theta", f_theta)->required();

  auto* f_onesided =
      formula_cmd->add_subcommand("one-sided", "one-sided crossing exponent");
  f_onesided->add_option("--kappa", f_kappa)->required();
  f_onesided->add_option("--lambda", f_lambda)->required();

  auto* f_annulus =
      formula_cmd->add_subcommand("annulus", "annulus crossing exponent");
  f_annulus->add_option("--kappa", f_kappa)->required();
  f_annulus->add_option("--lambda", f_lambda)->required();

  auto* f_bmh = formula_cmd->add_subcommand(
      "bm-halfplane", "half-plane Brownian intersection exponent");
  f_bmh->add_option("--lambdas", f_lambdas)->required()->expected(1, 16);

  auto* f_bmp = formula_cmd->add_subcommand(
      "bm-plane", "plane Brownian intersection exponent");
  f_bmp->add_option("--lambdas", f_lambdas)->required()->expected(2, 16);

  auto* f_bmm =
      formula_cmd->add_subcommand("bm-mixed", "xi(k, lambda) exponent");
  f_bmm->add_option("--k", f_k)->required();
  f_bmm->add_option("--lambda", f_lambda)->required();

  auto* f_arm = formula_cmd->add_subcommand("arm", "percolation arm exponent");
  f_arm->add_option("--k", f_k)->required();
  f_arm->add_option("--geometry", f_geometry)
      ->check(CLI::IsMember({"half-plane", "plane"}));

  auto* f_haus =
      formula_cmd->add_subcommand("hausdorff", "trace/hull dimensions");
  f_haus->add_option("--kappa", f_kappa)->required();

  auto* f_restr =
      formula_cmd->add_subcommand("restriction", "restriction probability");
  f_restr->add_option("--psi", f_psi, "Psi'(0)")->required();

  auto* f_potts = formula_cmd->add_subcommand("potts", "q(kappa) map");
  f_potts->add_option("--kappa", f_kappa)->required();

  auto* f_on = formula_cmd->add_subcommand("on", "n(kappa) map");
  f_on->add_option("--kappa", f_kappa)->required();

  auto* f_crit =
      formula_cmd->add_subcommand("critical", "critical points of Potts/O(n)");
  f_crit->add_option("--q", f_q)->required();
  f_crit->add_option("--n", f_n)->required();

  // ---- verify ---------------------------------------------------------
  auto* verify_cmd =
      app.add_subcommand("verify", "Monte Carlo verification experiments");
  verify_cmd->require_subcommand(1);
  std::uint64_t v_seed = 1;
  CommonOut v_out;
  double v_kappa = 4.0, v_x0 = 1.0, v_y0 = 1.0, v_r = 1.0, v_xi = 0.5;
  std::size_t v_samples = 10000;
  int v_steps = 4000;
  bool v_quick = false;
  std::vector<int> v_sizes{64, 128, 256};
  std::vector<int> v_radii{16, 32, 64, 128};

  auto* v_left = verify_cmd->add_subcommand("left-passage", "");
  v_left->add_option("--kappa", v_kappa);
  v_left->add_option("--x0", v_x0);
  v_left->add_option("--y0", v_y0);
  v_left->add_option("--samples", v_samples);
  v_left->add_option("--steps", v_steps);
  v_left->add_option("--seed", v_seed)->required();
  add_common(v_left, v_out);

  auto* v_cardy = verify_cmd->add_subcommand("cardy", "");
  v_cardy->add_option("--xi", v_xi);
  v_cardy->add_option("--sizes", v_sizes);
  v_cardy->add_option("--samples", v_samples);
  v_cardy->add_option("--seed", v_seed)->required();
  add_common(v_cardy, v_out);

  auto* v_restr = verify_cmd->add_subcommand("restriction", "");
  v_restr->add_option("--x0", v_x0);
  v_restr->add_option("--r", v_r);
  v_restr->add_option("--samples", v_samples);
  v_restr->add_option("--steps", v_steps);
  v_restr->add_option("--seed", v_seed)->required();
  add_common(v_restr, v_out);

  auto* v_arm = verify_cmd->add_subcommand("arm", "");
  v_arm->add_option("--radii", v_radii);
  v_arm->add_option("--samples", v_samples);
  v_arm->add_option("--seed", v_seed)->required();
  add_common(v_arm, v_out);

  auto* v_box = verify_cmd->add_subcommand("box-dim", "");
  v_box->add_option("--steps", v_steps);
  v_box->add_option("--seed", v_seed)->required();
  add_common(v_box, v_out);

  auto* v_round = verify_cmd->add_subcommand("roundtrip", "");
  v_round->add_option("--kappa", v_kappa);
  v_round->add_option("--samples", v_samples);
  v_round->add_option("--steps", v_steps);
  v_round->add_option("--seed", v_seed)->required();
  add_common(v_round, v_out);

  auto* v_lerw = verify_cmd->add_subcommand("lerw", "");
  v_lerw->add_option("--seed", v_seed)->required();
  add_common(v_lerw, v_out);

  auto* v_suite = verify_cmd->add_subcommand("suite", "default suite");
  v_suite->add_flag("--quick", v_quick, "reduced sample sizes");
  v_suite->add_option("--seed", v_seed)->required();
  add_common(v_suite, v_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    // ---- simulations --------------------------------------------------
    if (*trace_cmd) {
      const auto d = loewner::sample_driver(tr_kappa, tr_horizon, tr_steps, tr_seed);
      const auto tr = loewner::chordal_trace(d);
      const fs::path dir(tr_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "trace.csv",
                   [&](std::ostream& os) { io::write_trace_csv(os, tr); });
      write_stream(dir / "driver.csv",
                   [&](std::ostream& os) { io::write_driver_csv(os, d); });
      if (tr_out.format == "svg")
        write_file(dir / "trace.svg", io::svg_polyline(tr.points));
      return kExitOk;
    }
    if (*radial_cmd) {
      const auto tr = loewner::radial_trace(ra_kappa, ra_horizon, ra_steps, ra_seed);
      const fs::path dir(ra_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "radial.csv",
                   [&](std::ostream& os) { io::write_trace_csv(os, tr); });
      if (ra_out.format == "svg")
        write_file(dir / "radial.svg", io::svg_polyline(tr.points));
      return kExitOk;
    }
    if (*explore_cmd) {
      const discrete::HexBoundary bc{ex_start > 0 ? ex_start : ex_w / 2};
      const auto [path, col] =
          discrete::percolation_explore(ex_w, ex_h, bc, ex_seed);
      const fs::path dir(ex_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "explore_path.csv", [&](std::ostream& os) {
        io::write_path_csv(os, path.vertices);
      });
      write_stream(dir / "explore_colors.csv", [&](std::ostream& os) {
        io::write_coloring_csv(os, col);
      });
      if (ex_out.format == "svg")
        write_file(dir / "explore.svg", io::svg_hex_tiling(col, &path));
      return kExitOk;
    }
    if (*harmonic_cmd) {
      const discrete::HexBoundary bc{ha_start > 0 ? ha_start : ha_w / 2};
      discrete::HexColoring col(ha_w, ha_h, bc);
      const auto path =
          discrete::harmonic_explorer(ha_w, ha_h, bc, ha_tol, ha_seed, &col);
      const fs::path dir(ha_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "harmonic_path.csv", [&](std::ostream& os) {
        io::write_path_csv(os, path.vertices);
      });
      if (ha_out.format == "svg")
        write_file(dir / "harmonic.svg", io::svg_hex_tiling(col, &path));
      return kExitOk;
    }
    if (*lerw_cmd) {
      const auto g = discrete::make_grid_graph(le_w, le_h);
      std::unordered_set<int> boundary;
      for (int j = 0; j < le_h; ++j)
        for (int i = 0; i < le_w; ++i)
          if (i == 0 || j == 0 || i == le_w - 1 || j == le_h - 1)
            boundary.insert(j * le_w + i);
      const int center = (le_h / 2) * le_w + le_w / 2;
      const auto walk = discrete::lerw(g, center, boundary, le_seed);
      std::vector<std::array<double, 2>> pts;
      for (int v : walk) pts.push_back(g.coords[v]);
      const fs::path dir(le_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "lerw.csv",
                   [&](std::ostream& os) { io::write_path_csv(os, pts); });
      if (le_out.format == "svg")
        write_file(dir / "lerw.svg", io::svg_path_2d(pts, 20.0));
      return kExitOk;
    }
    if (*ust_cmd) {
      const auto g = discrete::make_grid_graph(us_w, us_h);
      const auto tree = discrete::wilson_ust(g, us_seed);
      const fs::path dir(us_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "ust.csv",
                   [&](std::ostream& os) { io::write_tree_csv(os, tree); });
      if (us_out.format == "svg")
        write_file(dir / "ust.svg", io::svg_graph(g, &tree));
      return kExitOk;
    }
    if (*peano_cmd) {
      const auto dom = discrete::make_peano_domain(pe_w, pe_h);
      const auto tree = discrete::wilson_ust(dom.graph, pe_seed);
      const auto curve = discrete::peano_curve(dom, tree);
      const fs::path dir(pe_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "peano.csv", [&](std::ostream& os) {
        io::write_path_csv(os, curve.points);
      });
      if (pe_out.format == "svg")
        write_file(dir / "peano.svg", io::svg_path_2d(curve.points, 40.0));
      return kExitOk;
    }

    // ---- formulas -----------------------------------------------------
    if (*formula_cmd) {
      if (*f_cardy)
        print_value(formulas::cardy_crossing(f_xi, f_kappa));
      else if (*f_left)
        print_value(formulas::left_passage(f_x0, f_y0, f_kappa));
      else if (*f_schramm)
        print_value(formulas::schramm_theta(f_theta));
      else if (*f_onesided)
        print_value(formulas::one_sided_exponent(f_kappa, f_lambda));
      else if (*f_annulus)
        print_value(formulas::annulus_exponent(f_kappa, f_lambda));
      else if (*f_bmh)
        print_value(formulas::bm_halfplane_exponent(f_lambdas));
      else if (*f_bmp)
        print_value(formulas::bm_plane_exponent(f_lambdas));
      else if (*f_bmm)
        print_value(formulas::bm_mixed_exponent(f_k, f_lambda));
      else if (*f_arm) {
        const auto v = formulas::arm_exponent(
            f_k, f_geometry == "plane" ? formulas::ArmGeometry::Plane
                                       : formulas::ArmGeometry::HalfPlane);
        std::printf("%lld/%lld\n", static_cast<long long>(v.num),
                    static_cast<long long>(v.den));
      } else if (*f_haus) {
        const auto d = formulas::hausdorff_dims(f_kappa);
        std::printf("trace %.12g\n", d.trace_dim);
        if (d.boundary)
          std::printf("boundary %.12g (%s)\n", d.boundary->dim,
                      d.boundary->proven ? "proven" : "conjectured");
      } else if (*f_restr)
        print_value(formulas::restriction_prob(f_psi));
      else if (*f_potts) {
        const auto p = formulas::model_parameter_maps(f_kappa);
        if (!p.q) throw std::domain_error("q(kappa) needs kappa in [4,8]");
        print_value(*p.q);
      } else if (*f_on) {
        const auto p = formulas::model_parameter_maps(f_kappa);
        print_value(*p.n);
      } else if (*f_crit) {
        const auto c = formulas::critical_points(f_q, f_n);
        std::printf("beta_c %.12g\nx_c %.12g\n", c.beta_c, c.x_c);
      }
      return kExitOk;
    }

    // ---- verification -------------------------------------------------
    if (*verify_cmd) {
      std::vector<mc::VerificationReport> reports;
      if (*v_left)
        reports.push_back(mc::verify_left_passage(
            v_kappa, {v_x0, v_y0}, v_samples, v_steps, v_seed));
      else if (*v_cardy)
        reports.push_back(mc::verify_cardy(v_xi, v_sizes, v_samples, v_seed));
      else if (*v_restr)
        reports.push_back(
            mc::verify_restriction(v_x0, v_r, v_samples, v_steps, v_seed));
      else if (*v_arm)
        reports.push_back(mc::verify_arm_exponent(
            v_radii, v_samples, mc::ArmGeometrySim::HalfPlane, 1, v_seed));
      else if (*v_box)
        reports.push_back(mc::verify_box_dim_kappa6(v_steps, v_seed));
      else if (*v_round)
        reports.push_back(mc::verify_driver_roundtrip_diffusivity(
            v_kappa, v_samples, v_steps, v_seed));
      else if (*v_lerw)
        reports.push_back(mc::verify_lerw_diffusivity(200, 200, v_seed));
      else if (*v_suite)
        reports = mc::default_suite(v_quick, v_seed);

      const fs::path dir(v_out.out_dir);
      fs::create_directories(dir);
      write_stream(dir / "report.json", [&](std::ostream& os) {
        io::write_reports_json(os, reports);
      });
      write_stream(dir / "report.csv", [&](std::ostream& os) {
        io::write_reports_csv(os, reports);
      });
      bool all_pass = true;
      for (const auto& r : reports) {
        std::printf("%-32s exact=%.6g mean=%.6g std_err=%.3g z=%+.2f %s\n",
                    r.name.c_str(), r.exact, r.estimate.mean,
                    r.estimate.std_err, r.z_score, r.pass ? "PASS" : "FAIL");
        if (!r.pass && r.name != "lerw_diffusivity") all_pass = false;
      }
      return all_pass ? kExitOk : kExitNumeric;
    }
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
