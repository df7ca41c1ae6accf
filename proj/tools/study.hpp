#pragma once

#include <smectic/assembly.hpp>
#include <smectic/boundary.hpp>
#include <smectic/norms.hpp>

#include <json.hpp>

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace smectic::study {

struct StudyConfig {
  Method method = Method::Argyris;
  int degree = 5;
  double q = 10.0;
  /// "qinv4" or a number.
  std::string B = "qinv4";
  double m = 10.0;
  std::string nu = "3/5,4/5";
  std::string solution = "planewave";
  std::vector<int> levels{8, 16, 32, 64};
  BoundarySpec boundary = BoundarySpec::defaults();
  int quad_degree = 0;
  int error_quad_degree = 0;
  bool count_only = false;
  /// Non-empty: write "<prefix>_n<N>.mtx" and "<prefix>_n<N>.rhs" per level.
  std::string dump_matrix;
  /// Non-empty: write "<prefix>_n<N>.mesh" per level.
  std::string dump_mesh;
  /// Non-empty: run a q sweep at the last level instead of a refinement study.
  std::vector<double> sweep_q;

  [[nodiscard]] double resolved_B(double for_q) const;
  [[nodiscard]] Eigen::Vector2d director() const;
  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// "a/b,c/d" (plain decimals also accepted) as a vector; rejects non-unit results.
[[nodiscard]] Eigen::Vector2d parse_director(const std::string& text);
/// Comma-separated list parsers.
[[nodiscard]] std::vector<int> parse_int_list(const std::string& text);
[[nodiscard]] std::vector<double> parse_double_list(const std::string& text);

[[nodiscard]] ManufacturedSolution make_solution(const StudyConfig& config, double q);

struct StudyReport {
  StudyConfig config;
  std::vector<ErrorReport> levels;
  /// q value per level for sweeps, empty otherwise.
  std::vector<double> q_values;
  std::vector<Slope> slopes;
  std::string slope_error;

  [[nodiscard]] bool all_ok() const;
  [[nodiscard]] std::optional<Slope> slope(const std::string& name) const;
};

/// One level: assemble, solve, measure. Solver failures mark the report
/// instead of throwing.
[[nodiscard]] ErrorReport run_level(const StudyConfig& config, int n, double q,
                                    std::ostream* log = nullptr);

/// Refinement study over config.levels; slopes from the last two completed levels.
[[nodiscard]] StudyReport run_study(const StudyConfig& config, std::ostream* log = nullptr);

/// Errors against q at the last configured level; slopes are against log q.
[[nodiscard]] StudyReport sweep_q(const StudyConfig& config, std::ostream* log = nullptr);

void write_csv(std::ostream& os, const StudyReport& report);
[[nodiscard]] nlohmann::json to_json(const StudyReport& report);
/// log2(error) against log2(n), one polyline per norm.
void write_svg(std::ostream& os, const StudyReport& report);

}  // namespace smectic::study
