#include "study.hpp"

#include <smectic/dof_map.hpp>
#include <smectic/mesh.hpp>
#include <smectic/solver.hpp>
#include <smectic/sparse.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace smectic::study {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw std::invalid_argument("empty item in '" + text + "'");
    out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

double parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return parse_number(s);
  const double den = parse_number(s.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("zero denominator in '" + s + "'");
  return parse_number(s.substr(0, slash)) / den;
}

// Entity counts taken from the built mesh rather than the closed form.
long long mesh_dimension(Method method, int k, const Mesh& mesh) {
  const long long v = mesh.num_vertices(), e = mesh.num_edges(), c = mesh.num_cells();
  switch (method) {
    case Method::Argyris: return FunctionSpace::count(Family::Argyris, 5, v, e, c);
    case Method::C0IP: return FunctionSpace::count(Family::CG, k, v, e, c);
    case Method::Mixed:
      return FunctionSpace::count(Family::DG, k, v, e, c) +
             2 * FunctionSpace::count(Family::CG, k + 2, v, e, c) +
             FunctionSpace::count(Family::RT, k, v, e, c);
  }
  return 0;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string format_double(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

Eigen::Vector2d parse_director(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("director must have two components");
  const Eigen::Vector2d nu(parse_rational(parts[0]), parse_rational(parts[1]));
  if (std::abs(nu.norm() - 1.0) > 1e-14) {
    throw std::invalid_argument("director '" + text + "' is not a unit vector");
  }
  return nu;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) {
    const double v = parse_number(p);
    if (v != std::floor(v)) throw std::invalid_argument("not an integer: '" + p + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(parse_number(p));
  return out;
}

double StudyConfig::resolved_B(double for_q) const {
  if (B == "qinv4") return 1.0 / std::pow(for_q, 4);
  return parse_number(B);
}

Eigen::Vector2d StudyConfig::director() const { return parse_director(nu); }

void StudyConfig::validate() const {
  switch (method) {
    case Method::Argyris:
      if (degree != 5) throw std::invalid_argument("argyris is quintic; degree must be 5");
      break;
    case Method::C0IP:
      if (degree < 2 || degree > 4) throw std::invalid_argument("c0ip degree must be in 2..4");
      break;
    case Method::Mixed:
      if (degree < 1 || degree > 3) throw std::invalid_argument("mixed degree must be in 1..3");
      if (boundary.all_sides(BoundaryLabel::G31)) {
        throw std::invalid_argument("mixed method needs some boundary outside the 31 label");
      }
      break;
  }
  if (levels.empty()) throw std::invalid_argument("at least one level is required");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!is_power_of_two(levels[i])) {
      throw std::invalid_argument("levels must be powers of two");
    }
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw std::invalid_argument("levels must be strictly increasing");
    }
  }
  if (solution != "planewave" && solution != "bump") {
    throw std::invalid_argument("solution must be planewave or bump");
  }
  (void)director();
  const std::vector<double> qs = sweep_q.empty() ? std::vector<double>{q} : sweep_q;
  for (double qq : qs) {
    if (!(qq >= 1.0)) throw std::invalid_argument("q must be >= 1");
    const double b = resolved_B(qq);
    if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("B must lie in (0, 1]");
  }
  if (!sweep_q.empty()) {
    if (sweep_q.size() < 2) throw std::invalid_argument("a q sweep needs at least two values");
    for (std::size_t i = 1; i < sweep_q.size(); ++i) {
      if (sweep_q[i] <= sweep_q[i - 1]) {
        throw std::invalid_argument("sweep q values must be strictly increasing");
      }
    }
  }
  if (!(m > 0.0)) throw std::invalid_argument("m must be positive");
}

ManufacturedSolution make_solution(const StudyConfig& config, double q) {
  const Coefficients c{config.resolved_B(q), q, config.m};
  if (config.solution == "bump") return bump_polynomial(c, config.director());
  return plane_wave(c, config.director());
}

bool StudyReport::all_ok() const {
  return std::all_of(levels.begin(), levels.end(), [](const ErrorReport& r) { return r.ok; });
}

std::optional<Slope> StudyReport::slope(const std::string& name) const {
  for (const auto& s : slopes) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

ErrorReport run_level(const StudyConfig& config, int n, double q, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  ErrorReport report;
  report.method = config.method;
  report.degree = config.degree;
  report.n = n;
  report.h = 1.0 / n;
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  if (config.count_only) {
    const Mesh mesh = build_structured_mesh(n);
    report.dofs = mesh_dimension(config.method, config.degree, mesh);
    report.seconds = elapsed();
    return report;
  }

  try {
    const Mesh mesh = build_structured_mesh(n);
    if (!config.dump_mesh.empty()) {
      std::ofstream os(config.dump_mesh + "_n" + std::to_string(n) + ".mesh");
      write_mesh_listing(os, mesh);
    }
    const BoundaryPartition partition = assign_boundary(mesh, config.boundary);
    const ManufacturedSolution ms = make_solution(config, q);
    ProblemParams params{ms.coeffs, config.degree, config.quad_degree};
    const AssembledSystem sys = assemble(config.method, mesh, partition, params, ms);
    report.dofs = sys.dimension();
    if (!config.dump_matrix.empty()) {
      const std::string base = config.dump_matrix + "_n" + std::to_string(n);
      std::ofstream mat(base + ".mtx");
      write_triplets(mat, sys.matrix);
      std::ofstream rhs(base + ".rhs");
      write_vector(rhs, sys.rhs);
    }
    const SolveResult sol =
        solve_direct(sys.matrix, sys.rhs, kResidualTolerance, elimination_stages(sys));
    report.residual = sol.residual;
    const ErrorReport errs = compute_errors(sys, sol.x, ms, partition, config.error_quad_degree);
    report.errors = errs.errors;
  } catch (const SolverError& e) {
    report.ok = false;
    report.message = e.what();
    report.residual = e.residual();
  }
  report.seconds = elapsed();
  if (log) {
    *log << to_string(config.method) << " k=" << config.degree << " q=" << q << " n=" << n
         << " dofs=" << report.dofs;
    for (const auto& [name, v] : report.errors) *log << ' ' << name << '=' << v;
    if (!report.ok) *log << " FAILED: " << report.message;
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << report.seconds;
    *log << " (" << t.str() << " s)\n";
  }
  return report;
}

namespace {

void fill_slopes(StudyReport& report, bool against_q) {
  std::vector<ErrorReport> done;
  std::vector<double> qs;
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    if (report.levels[i].ok && !report.levels[i].errors.empty()) {
      done.push_back(report.levels[i]);
      if (against_q) qs.push_back(report.q_values[i]);
    }
  }
  if (done.size() < 2) {
    if (!report.config.count_only) report.slope_error = "fewer than two completed levels";
    return;
  }
  try {
    if (!against_q) {
      report.slopes = estimate_rates(done);
      return;
    }
    for (const auto& [name, v] : done.back().errors) {
      (void)v;
      std::vector<double> e;
      for (const auto& r : done) e.push_back(r.get(name));
      const double s = estimate_q_slope(qs, e);
      report.slopes.push_back({name, s, s});
    }
  } catch (const std::exception& e) {
    report.slopes.clear();
    report.slope_error = e.what();
  }
}

}  // namespace

StudyReport run_study(const StudyConfig& config, std::ostream* log) {
  config.validate();
  StudyReport report;
  report.config = config;
  for (int n : config.levels) report.levels.push_back(run_level(config, n, config.q, log));
  fill_slopes(report, false);
  return report;
}

StudyReport sweep_q(const StudyConfig& config, std::ostream* log) {
  config.validate();
  if (config.sweep_q.size() < 2) throw std::invalid_argument("sweep_q: need at least two q values");
  StudyReport report;
  report.config = config;
  const int n = config.levels.back();
  for (double q : config.sweep_q) {
    report.levels.push_back(run_level(config, n, q, log));
    report.q_values.push_back(q);
  }
  fill_slopes(report, true);
  return report;
}

void write_csv(std::ostream& os, const StudyReport& report) {
  const auto names = norm_names(report.config.method);
  const bool sweep = !report.q_values.empty();
  os << "method,k" << (sweep ? ",q" : "") << ",n,h,dofs";
  for (const auto& name : names) os << ',' << name;
  os << ",residual,seconds\n";
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ErrorReport& r = report.levels[i];
    os << to_string(r.method) << ',' << r.degree;
    if (sweep) os << ',' << format_double(report.q_values[i]);
    os << ',' << r.n << ',' << format_double(r.h) << ',' << r.dofs;
    for (const auto& name : names) {
      os << ',' << (r.has(name) ? format_double(r.get(name)) : std::string("nan"));
    }
    os << ',' << (report.config.count_only ? std::string("nan") : format_double(r.residual))
       << ',' << format_double(r.seconds) << '\n';
  }
}

nlohmann::json to_json(const StudyReport& report) {
  const StudyConfig& c = report.config;
  nlohmann::json j;
  j["config"] = {{"method", std::string(to_string(c.method))},
                 {"degree", c.degree},
                 {"q", c.q},
                 {"B", c.B},
                 {"B_value", c.resolved_B(c.q)},
                 {"m", c.m},
                 {"nu", c.nu},
                 {"solution", c.solution},
                 {"levels", c.levels},
                 {"boundary", c.boundary.to_string()},
                 {"quad_degree", c.quad_degree},
                 {"error_quad_degree", c.error_quad_degree},
                 {"count_only", c.count_only},
                 {"sweep_q", c.sweep_q}};
  j["levels"] = nlohmann::json::array();
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ErrorReport& r = report.levels[i];
    nlohmann::json lv = {{"n", r.n}, {"h", r.h}, {"dofs", r.dofs}, {"ok", r.ok},
                         {"seconds", r.seconds}};
    if (!report.q_values.empty()) lv["q"] = report.q_values[i];
    if (!c.count_only) lv["residual"] = r.residual;
    nlohmann::json errs = nlohmann::json::object();
    for (const auto& [name, v] : r.errors) errs[name] = v;
    lv["errors"] = errs;
    if (!r.ok) lv["message"] = r.message;
    j["levels"].push_back(lv);
  }
  nlohmann::json slopes = nlohmann::json::object();
  for (const auto& s : report.slopes) slopes[s.name] = {{"raw", s.raw}, {"order", s.order}};
  j["slopes"] = slopes;
  j["slope_axis"] = report.q_values.empty() ? "log(1/h)" : "log(q)";
  if (!report.slope_error.empty()) j["slope_error"] = report.slope_error;
  j["all_ok"] = report.all_ok();
  return j;
}

void write_svg(std::ostream& os, const StudyReport& report) {
  constexpr double width = 640, height = 480, margin = 60;
  const auto names = norm_names(report.config.method);
  const bool sweep = !report.q_values.empty();
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto abscissa = [&](std::size_t i) {
    return std::log2(sweep ? report.q_values[i] : static_cast<double>(report.levels[i].n));
  };
  for (std::size_t i = 0; i < report.levels.size(); ++i) {
    const ErrorReport& r = report.levels[i];
    if (!r.ok) continue;
    for (const auto& [name, v] : r.errors) {
      if (!(v > 0.0)) continue;
      xmin = std::min(xmin, abscissa(i));
      xmax = std::max(xmax, abscissa(i));
      ymin = std::min(ymin, std::log2(v));
      ymax = std::max(ymax, std::log2(v));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto py = [&](double y) {
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
     << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
     << (sweep ? "log2(q)" : "log2(n)") << "</text>\n";
  os << "<text x=\"15\" y=\"" << height / 2 << "\" transform=\"rotate(-90 15 " << height / 2
     << ")\" text-anchor=\"middle\">log2(error)</text>\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < report.levels.size(); ++i) {
      const ErrorReport& r = report.levels[i];
      if (!r.ok || !r.has(names[k]) || !(r.get(names[k]) > 0.0)) continue;
      pts << px(abscissa(i)) << ',' << py(std::log2(r.get(names[k]))) << ' ';
    }
    const char* color = colors[k % 5];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
       << pts.str() << "\"/>\n";
    std::string label = names[k];
    for (const auto& s : report.slopes) {
      if (s.name == names[k]) {
        std::ostringstream l;
        l << label << " (s=" << std::fixed << std::setprecision(2) << s.raw << ")";
        label = l.str();
      }
    }
    os << "<text x=\"" << width - margin - 150 << "\" y=\"" << margin + 18 * k << "\" fill=\""
       << color << "\">" << label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace smectic::study
