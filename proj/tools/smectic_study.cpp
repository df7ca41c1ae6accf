#include "study.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace study = smectic::study;

int main(int argc, char** argv) {
  CLI::App app{"Convergence studies for the smectic density equation"};

  study::StudyConfig config;
  std::string method = "argyris";
  std::string levels = "8,16,32,64";
  std::string boundary = config.boundary.to_string();
  std::string sweep;
  std::string out;
  bool plot = false;
  bool paper_scale = false;
  int degree = -1;

  app.add_option("--method", method, "argyris, c0ip or mixed")->capture_default_str();
  app.add_option("--degree", degree, "polynomial degree (argyris 5, c0ip 2..4, mixed 1..3)");
  app.add_option("--q", config.q, "wavenumber")->capture_default_str();
  app.add_option("--B", config.B, "bending coefficient, a number or qinv4")->capture_default_str();
  app.add_option("--m", config.m, "mass coefficient")->capture_default_str();
  app.add_option("--nu", config.nu, "director as two rationals, e.g. 3/5,4/5")
      ->capture_default_str();
  app.add_option("--solution", config.solution, "planewave or bump")->capture_default_str();
  app.add_option("--levels", levels, "comma-separated mesh sizes")->capture_default_str();
  app.add_option("--boundary", boundary, "side labels, e.g. S=02,N=01,E=32,W=31")
      ->capture_default_str();
  app.add_option("--quad-degree", config.quad_degree, "assembly quadrature degree (0: default)");
  app.add_option("--error-quad-degree", config.error_quad_degree,
                 "error quadrature degree (0: default)");
  app.add_option("--out", out, "write PREFIX.csv and PREFIX.json");
  app.add_flag("--plot", plot, "also write PREFIX.svg");
  app.add_flag("--paper-scale", paper_scale, "q=40 and levels up to n=512");
  app.add_option("--dump-matrix", config.dump_matrix, "write matrix triplets and rhs per level");
  app.add_option("--dump-mesh", config.dump_mesh, "write a mesh listing per level");
  app.add_flag("--count-only", config.count_only, "report system dimensions without solving");
  app.add_option("--sweep-q", sweep, "comma-separated q values at the last level");

  CLI11_PARSE(app, argc, argv);

  try {
    config.method = smectic::parse_method(method);
    config.degree = degree >= 0 ? degree : (config.method == smectic::Method::Argyris ? 5 : 1);
    config.boundary = smectic::BoundarySpec::parse(boundary);
    config.levels = study::parse_int_list(levels);
    if (!sweep.empty()) config.sweep_q = study::parse_double_list(sweep);
    if (paper_scale) {
      config.q = 40.0;
      config.levels = {8, 16, 32, 64, 128, 256, 512};
      if (!config.count_only) {
        std::cerr << "warning: these systems reach millions of unknowns; the direct solver "
                     "may need tens of gigabytes at n=512\n";
      }
    }
    if (plot && out.empty()) {
      std::cerr << "error: --plot needs --out\n";
      return 1;
    }

    const study::StudyReport report = config.sweep_q.empty()
                                          ? study::run_study(config, &std::cerr)
                                          : study::sweep_q(config, &std::cerr);

    write_csv(std::cout, report);
    for (const auto& s : report.slopes) {
      std::cerr << "slope " << s.name << ": " << s.order << '\n';
    }
    if (!report.slope_error.empty()) std::cerr << "slopes: " << report.slope_error << '\n';

    if (!out.empty()) {
      std::ofstream csv(out + ".csv");
      write_csv(csv, report);
      std::ofstream json(out + ".json");
      json << study::to_json(report).dump(2) << '\n';
      if (plot) {
        std::ofstream svg(out + ".svg");
        write_svg(svg, report);
      }
    }
    return report.all_ok() ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
