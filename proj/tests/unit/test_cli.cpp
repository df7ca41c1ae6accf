#include "study.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace smectic;
using study::StudyConfig;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

StudyConfig small_config() {
  StudyConfig c;
  c.levels = {4, 8};
  return c;
}

int run(const std::string& args) {
  const int status = std::system((std::string(SMECTIC_STUDY_EXE) + " " + args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, DirectorParsing) {
  const auto nu = study::parse_director("3/5,4/5");
  EXPECT_EQ(nu.x(), 0.6);
  EXPECT_EQ(nu.y(), 0.8);
  EXPECT_EQ(study::parse_director("1,0"), Eigen::Vector2d(1.0, 0.0));
  EXPECT_THROW((void)study::parse_director("1/2,1/2"), std::invalid_argument);
  EXPECT_THROW((void)study::parse_director("3/5"), std::invalid_argument);
  EXPECT_THROW((void)study::parse_director("3/0,4/5"), std::invalid_argument);
}

TEST(Cli, ListParsing) {
  EXPECT_EQ(study::parse_int_list("8,16,32"), (std::vector<int>{8, 16, 32}));
  EXPECT_EQ(study::parse_double_list("8,16.5"), (std::vector<double>{8.0, 16.5}));
  EXPECT_THROW((void)study::parse_int_list("8,x"), std::invalid_argument);
  EXPECT_THROW((void)study::parse_int_list("8,,16"), std::invalid_argument);
}

TEST(Cli, ResolvesScaledB) {
  StudyConfig c;
  c.q = 10.0;
  EXPECT_DOUBLE_EQ(c.resolved_B(10.0), 1e-4);
  c.B = "0.5";
  EXPECT_EQ(c.resolved_B(10.0), 0.5);
}

TEST(Cli, ConfigValidation) {
  EXPECT_NO_THROW(small_config().validate());
  auto bad = [](auto edit) {
    StudyConfig c = small_config();
    edit(c);
    EXPECT_THROW(c.validate(), std::invalid_argument);
  };
  bad([](StudyConfig& c) { c.degree = 4; });
  bad([](StudyConfig& c) {
    c.method = Method::C0IP;
    c.degree = 1;
  });
  bad([](StudyConfig& c) {
    c.method = Method::C0IP;
    c.degree = 5;
  });
  bad([](StudyConfig& c) {
    c.method = Method::Mixed;
    c.degree = 4;
  });
  bad([](StudyConfig& c) {
    c.method = Method::Mixed;
    c.degree = 1;
    c.boundary = BoundarySpec::uniform(BoundaryLabel::G31);
  });
  bad([](StudyConfig& c) { c.levels = {8, 12}; });
  bad([](StudyConfig& c) { c.levels = {16, 8}; });
  bad([](StudyConfig& c) { c.levels = {8, 8}; });
  bad([](StudyConfig& c) { c.levels = {}; });
  bad([](StudyConfig& c) { c.B = "2"; });
  bad([](StudyConfig& c) { c.B = "zero"; });
  bad([](StudyConfig& c) { c.q = 0.5; });
  bad([](StudyConfig& c) { c.m = 0.0; });
  bad([](StudyConfig& c) { c.solution = "gauss"; });
}

TEST(Cli, SingleQSweepRejected) {
  StudyConfig c = small_config();
  c.sweep_q = {8.0};
  EXPECT_THROW((void)study::sweep_q(c), std::invalid_argument);
}

TEST(Cli, CsvAndJsonAgree) {
  StudyConfig c = small_config();
  c.method = Method::C0IP;
  c.degree = 2;
  const auto report = study::run_study(c);
  ASSERT_TRUE(report.all_ok());
  std::ostringstream csv;
  study::write_csv(csv, report);
  const auto json = study::to_json(report);

  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "method,k,n,h,dofs,l2,h2q,triple,residual,seconds");
  const auto header = split(line);
  for (std::size_t row = 0; std::getline(in, line); ++row) {
    const auto cells = split(line);
    ASSERT_EQ(cells.size(), header.size());
    const auto& lv = json["levels"][row];
    EXPECT_EQ(std::stoi(cells[2]), lv["n"].get<int>());
    EXPECT_EQ(std::stod(cells[3]), lv["h"].get<double>());
    EXPECT_EQ(std::stoll(cells[4]), lv["dofs"].get<long long>());
    for (std::size_t k = 5; k < 8; ++k) {
      EXPECT_EQ(std::stod(cells[k]), lv["errors"][header[k]].get<double>()) << header[k];
    }
    EXPECT_EQ(std::stod(cells[8]), lv["residual"].get<double>());
    EXPECT_EQ(std::stod(cells[9]), lv["seconds"].get<double>());
  }
  EXPECT_EQ(json["slope_axis"], "log(1/h)");
  for (const auto& s : report.slopes) {
    EXPECT_EQ(json["slopes"][s.name]["order"].get<double>(), s.order);
    EXPECT_EQ(json["slopes"][s.name]["raw"].get<double>(), -s.order);
  }
}

TEST(Cli, ConfigEchoReproducesRun) {
  StudyConfig c = small_config();
  c.method = Method::Mixed;
  c.degree = 1;
  c.solution = "bump";
  c.B = "0.25";
  const auto first = study::to_json(study::run_study(c));

  const auto& e = first["config"];
  StudyConfig again;
  again.method = parse_method(e["method"].get<std::string>());
  again.degree = e["degree"];
  again.q = e["q"];
  again.B = e["B"];
  again.m = e["m"];
  again.nu = e["nu"];
  again.solution = e["solution"];
  again.levels = e["levels"].get<std::vector<int>>();
  again.boundary = BoundarySpec::parse(e["boundary"].get<std::string>());
  again.quad_degree = e["quad_degree"];
  again.error_quad_degree = e["error_quad_degree"];
  const auto second = study::to_json(study::run_study(again));
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    EXPECT_EQ(first["levels"][i]["errors"], second["levels"][i]["errors"]);
    EXPECT_EQ(first["levels"][i]["residual"], second["levels"][i]["residual"]);
  }
}

TEST(Cli, CountOnlyReportsDimensions) {
  StudyConfig c = small_config();
  c.count_only = true;
  c.levels = {64, 128};
  const auto report = study::run_study(c);
  ASSERT_EQ(report.levels.size(), 2u);
  EXPECT_EQ(report.levels[0].dofs, 37766);
  EXPECT_EQ(report.levels[1].dofs, 149254);
}

TEST(Cli, SweepSlopesAgainstQ) {
  StudyConfig c = small_config();
  c.method = Method::C0IP;
  c.degree = 2;
  c.B = "1";
  c.sweep_q = {2.0, 4.0};
  const auto report = study::sweep_q(c);
  ASSERT_EQ(report.q_values, (std::vector<double>{2.0, 4.0}));
  std::ostringstream csv;
  study::write_csv(csv, report);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')),
            "method,k,q,n,h,dofs,l2,h2q,triple,residual,seconds");
  const auto json = study::to_json(report);
  EXPECT_EQ(json["slope_axis"], "log(q)");
  EXPECT_EQ(json["levels"][1]["q"].get<double>(), 4.0);
}

TEST(Cli, ExecutableOutputsAndExitCodes) {
  const auto dir = std::filesystem::temp_directory_path() / "smectic_cli_test";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "run").string();
  EXPECT_EQ(run("--levels 4,8 --out " + prefix + " --plot > /dev/null 2>&1"), 0);
  EXPECT_TRUE(std::filesystem::exists(prefix + ".csv"));
  EXPECT_TRUE(std::filesystem::exists(prefix + ".json"));
  EXPECT_TRUE(std::filesystem::exists(prefix + ".svg"));
  EXPECT_EQ(run("--levels 4,6 > /dev/null 2>&1"), 1);
  EXPECT_EQ(run("--method c0ip --degree 7 > /dev/null 2>&1"), 1);
  EXPECT_EQ(run("--plot > /dev/null 2>&1"), 1);
  EXPECT_EQ(run("--sweep-q 8 > /dev/null 2>&1"), 1);
  std::filesystem::remove_all(dir);
}
