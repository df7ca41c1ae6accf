#include "oracles.hpp"

#include "smectic/assembly.hpp"
#include "smectic/norms.hpp"
#include "smectic/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace smectic;

namespace {

const Eigen::Vector2d kNu(0.6, 0.8);

ErrorReport report(int n, std::vector<std::pair<std::string, double>> errors) {
  ErrorReport r;
  r.n = n;
  r.h = 1.0 / n;
  r.errors = std::move(errors);
  return r;
}

struct Solved {
  Mesh mesh;
  BoundaryPartition part;
  ManufacturedSolution ms;
  AssembledSystem sys;
  Eigen::VectorXd x;
};

Solved solve(Method method, int k, int n, const Coefficients& c) {
  Solved s{build_structured_mesh(n), {}, plane_wave(c, kNu), {}, {}};
  s.part = assign_boundary(s.mesh, BoundarySpec::defaults());
  s.sys = assemble(method, s.mesh, s.part, {c, k, 0}, s.ms);
  s.x = solve_direct(s.sys.matrix, s.sys.rhs, kResidualTolerance, elimination_stages(s.sys)).x;
  return s;
}

}  // namespace

TEST(Norms, NamesPerMethod) {
  EXPECT_EQ(norm_names(Method::Argyris), (std::vector<std::string>{"l2", "h2q", "triple"}));
  EXPECT_EQ(norm_names(Method::C0IP), (std::vector<std::string>{"l2", "h2q", "triple"}));
  EXPECT_EQ(norm_names(Method::Mixed),
            (std::vector<std::string>{"l2", "v_h1q", "product", "alpha_l2q", "alpha_divq"}));
}

TEST(Norms, ErrorQuadratureDegree) {
  EXPECT_EQ(error_quadrature_degree(Method::Argyris, 5), 14);
  EXPECT_EQ(error_quadrature_degree(Method::C0IP, 2), 14);
  EXPECT_EQ(error_quadrature_degree(Method::Mixed, 3), 14);
}

TEST(Norms, ZeroDiscreteSolutionGivesSolutionNorm) {
  const Coefficients c{1.0, 40.0, 10.0};
  const Mesh mesh = build_structured_mesh(8);
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const auto ms = plane_wave(c, kNu);
  const auto sys = assemble_conforming(mesh, part, {c, 5, 0}, ms);
  const ErrorReport r = compute_errors(sys, Eigen::VectorXd::Zero(sys.dimension()), ms, part, 20);
  EXPECT_NEAR(r.get("l2"), 0.7071, 0.001);
}

TEST(Norms, ArgyrisInterpolantOfBumpBelowOneNanoAtSixteen) {
  const Coefficients c{1.0, 10.0, 10.0};
  const Mesh mesh = build_structured_mesh(16);
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const auto ms = bump_polynomial(c, kNu);
  const auto sys = assemble_conforming(mesh, part, {c, 5, 0}, ms, {true, true, true, false});
  const ErrorReport r = compute_errors(sys, interpolate_exact(sys, ms), ms, part);
  EXPECT_LT(r.get("l2"), 1e-9);
}

TEST(Norms, ArgyrisInterpolantConvergesAtSixthOrder) {
  const Coefficients c{1.0, 10.0, 10.0};
  std::vector<ErrorReport> reports;
  for (int n : {16, 32}) {
    const Mesh mesh = build_structured_mesh(n);
    const auto part = assign_boundary(mesh, BoundarySpec::defaults());
    const auto ms = bump_polynomial(c, kNu);
    const auto sys = assemble_conforming(mesh, part, {c, 5, 0}, ms, {true, true, true, false});
    reports.push_back(compute_errors(sys, interpolate_exact(sys, ms), ms, part, 20));
  }
  for (const auto& s : estimate_rates(reports)) {
    if (s.name == "l2") EXPECT_NEAR(s.order, 6.0, 0.25);
    if (s.name == "h2q") EXPECT_NEAR(s.order, 4.0, 0.25);
  }
}

TEST(Norms, PolynomialReproducedGivesZeroErrors) {
  const Coefficients c{1.0, 2.0, 1.0};
  const Mesh mesh = build_structured_mesh(4);
  const auto part = assign_boundary(mesh, BoundarySpec::defaults());
  const auto ms = polynomial_solution(c, {{2, 0, 1.0}, {1, 1, -0.5}, {0, 2, 2.0}, {0, 0, 1.0}},
                                      kNu * kNu.transpose());
  for (const auto& [method, k] :
       std::vector<std::pair<Method, int>>{{Method::Argyris, 5}, {Method::C0IP, 2}}) {
    const auto sys = assemble(method, mesh, part, {c, k, 0}, ms);
    const ErrorReport r = compute_errors(sys, interpolate_exact(sys, ms), ms, part);
    for (const auto& [name, e] : r.errors) EXPECT_LT(e, 1e-10) << to_string(method) << " " << name;
  }
}

TEST(Norms, RatesFromHalvingLaw) {
  const auto s = estimate_rates({report(8, {{"l2", 1e-2}}), report(16, {{"l2", 2.5e-3}})});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].order, 2.0, 1e-14);
  EXPECT_NEAR(s[0].raw, -2.0, 1e-14);
}

TEST(Norms, RatesFromReferenceArgyrisSeries) {
  const auto s = estimate_rates(
      {report(256, {{"h2q", 2.247062536071873e-08}}), report(512, {{"h2q", 1.3988975204332626e-09}})});
  // log2(2.247e-8 / 1.399e-9) = 4.0057.
  EXPECT_NEAR(s[0].order, std::log2(2.247062536071873e-08 / 1.3988975204332626e-09), 1e-12);
  EXPECT_NEAR(s[0].order, 4.00, 0.01);
}

TEST(Norms, RatesUseLastTwoLevels) {
  const auto s = estimate_rates({report(8, {{"l2", 1.0}}), report(16, {{"l2", 0.5}}),
                                 report(32, {{"l2", 0.0625}})});
  EXPECT_NEAR(s[0].order, 3.0, 1e-14);
}

TEST(Norms, RateValidation) {
  EXPECT_THROW((void)estimate_rates({report(8, {{"l2", 1.0}})}), std::invalid_argument);
  EXPECT_THROW((void)estimate_rates({report(16, {{"l2", 1.0}}), report(8, {{"l2", 0.5}})}),
               std::invalid_argument);
  EXPECT_THROW((void)estimate_rates({report(8, {{"l2", 1.0}}), report(16, {{"l2", 0.0}})}),
               std::invalid_argument);
}

TEST(Norms, QSlope) {
  EXPECT_NEAR(estimate_q_slope({8, 16, 32}, {1.0, 1.0, 16.0}), 4.0, 1e-14);
  EXPECT_NEAR(estimate_q_slope({8, 16}, {3.0, 3.0}), 0.0, 1e-14);
  EXPECT_THROW((void)estimate_q_slope({8}, {1.0}), std::invalid_argument);
}

TEST(Norms, TripleNormDominatesVolumePart) {
  const Coefficients c{1e-4, 10.0, 10.0};
  std::mt19937 rng(41);
  for (const auto& [method, k] :
       std::vector<std::pair<Method, int>>{{Method::Argyris, 5}, {Method::C0IP, 2}, {Method::C0IP, 4}}) {
    const Solved s = solve(method, k, 8, c);
    const ErrorReport r = compute_errors(s.sys, s.x, s.ms, s.part);
    EXPECT_GE(r.get("triple"), r.get("h2q"));
    const ErrorReport noisy = compute_errors(
        s.sys, s.x + 1e-3 * oracle::random_vector(s.sys.dimension(), rng), s.ms, s.part);
    EXPECT_GE(noisy.get("triple"), noisy.get("h2q"));
  }
}

TEST(Norms, ProductNormIdentity) {
  const Coefficients c{1e-4, 10.0, 10.0};
  for (int k = 1; k <= 2; ++k) {
    const Solved s = solve(Method::Mixed, k, 8, c);
    const ErrorReport r = compute_errors(s.sys, s.x, s.ms, s.part);
    const double two_way = std::hypot(r.get("l2"), r.get("v_h1q"));
    const double direct = mixed_product_norm_direct(s.sys, s.x, s.ms);
    EXPECT_NEAR(r.get("product"), two_way, 1e-12 * two_way);
    EXPECT_NEAR(direct, two_way, 1e-12 * two_way);
  }
}

TEST(Norms, ErrorsDecreaseUnderRefinement) {
  const Coefficients c{1e-4, 10.0, 10.0};
  for (const auto& [method, k] : std::vector<std::pair<Method, int>>{
           {Method::Argyris, 5}, {Method::C0IP, 2}, {Method::Mixed, 1}}) {
    const Solved coarse = solve(method, k, 32, c);
    const Solved fine = solve(method, k, 64, c);
    const ErrorReport a = compute_errors(coarse.sys, coarse.x, coarse.ms, coarse.part);
    const ErrorReport b = compute_errors(fine.sys, fine.x, fine.ms, fine.part);
    for (const auto& [name, e] : a.errors) {
      EXPECT_LT(b.get(name), e) << to_string(method) << " " << name;
      EXPECT_TRUE(std::isfinite(e));
      EXPECT_GE(e, 0.0);
    }
  }
}

TEST(Norms, RejectsMismatchedSolution) {
  const Coefficients c{1e-4, 10.0, 10.0};
  const Solved s = solve(Method::C0IP, 2, 4, c);
  EXPECT_THROW((void)compute_errors(s.sys, Eigen::VectorXd::Zero(3), s.ms, s.part),
               std::invalid_argument);
  EXPECT_THROW((void)mixed_product_norm_direct(s.sys, s.x, s.ms), std::invalid_argument);
}
