#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "pslab/error.hpp"
#include "pslab/report.hpp"

using namespace pslab;

namespace {

ExperimentReport sample(const std::string& c) {
  ExperimentReport r;
  r.experiment = "squarefree";
  r.params["x"] = 1000;
  r.params["c"] = c;
  r.observed = 600;
  r.reference = 607.9271018540267;
  r.set_ratio();
  return r;
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(600) == "600");
  CHECK(format_double(1.0 / 3) == "0.3333333333333333");
  CHECK(std::stod(format_double(0.979754)) == 0.979754);
}

TEST_CASE("CSV output quotes param_json") {
  const std::vector<ExperimentReport> rows = {sample("3/2")};
  std::ostringstream os;
  write_csv(rows, os);
  const std::string text = os.str();
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find(R"(squarefree,"{""x"":1000,""c"":""3/2""}",600,)") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("JSON output") {
  ExperimentReport r = sample("3/2");
  CHECK(to_json(r).contains("warnings") == false);
  r.warnings.push_back("c lies outside (1, 149/87)");
  r.extra["deciles"] = {0.5, 0.6};
  const auto j = to_json(r);
  CHECK(j["experiment"] == "squarefree");
  CHECK(j["params"]["c"] == "3/2");
  CHECK(j["observed"] == 600.0);
  CHECK(j["warnings"].size() == 1);
  CHECK(j["extra"]["deciles"].size() == 2);
  std::ostringstream os;
  const std::vector<ExperimentReport> rows = {r, r};
  write_json(rows, os);
  const auto parsed = nlohmann::json::parse(os.str());
  CHECK(parsed.is_array());
  CHECK(parsed.size() == 2);
}

TEST_CASE("plot data") {
  std::ostringstream os;
  emit_plot_data({"deciles", {"c", "d10", "d50"}, {{1.1, 0.5, 0.75}, {1.2, 0.25, 1}}}, os);
  CHECK(os.str() == "# deciles\n# c\td10\td50\n1.1\t0.5\t0.75\n1.2\t0.25\t1\n");
  CHECK_THROWS_AS(emit_plot_data({"t", {"a", "b"}, {}}, os), ValidationError);
  CHECK_THROWS_AS(emit_plot_data({"t", {"a"}, {{1}}}, os), ValidationError);
  CHECK_THROWS_AS(emit_plot_data({"t", {"a", "b"}, {{1, 2}, {3}}}, os), ValidationError);
}

TEST_CASE("ratio series parses rational parameters") {
  const std::vector<ExperimentReport> rows = {sample("3/2"), sample("6/5")};
  const auto s = ratio_series(rows, "c");
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0][0] == doctest::Approx(1.5));
  CHECK(s.rows[1][0] == doctest::Approx(1.2));
  CHECK(s.rows[0][1] == rows[0].ratio);
  const auto sx = ratio_series(rows, "x");
  CHECK(sx.rows[0][0] == 1000);
}
