#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pslab/cli.hpp"

using namespace pslab;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("ps subcommands") {
  CHECK(run({"ps", "floor", "--n", "10", "--c", "3/2"}).out == "31\n");
  CHECK(run({"ps", "floor", "--n", "100000000000000000000", "--c", "3/2"}).out == "1000000000000000000000000000000\n");
  CHECK(run({"ps", "is-value", "--k", "31", "--c", "3/2"}).out == "yes 10\n");
  CHECK(run({"ps", "is-value", "--k", "30", "--c", "3/2"}).out == "no\n");
  const auto values = run({"ps", "values", "--lo", "1", "--hi", "12", "--c", "3/2"});
  CHECK(values.code == cli::kOk);
  CHECK(values.out == "1 1\n2 2\n5 3\n8 4\n11 5\n");
}

TEST_CASE("pairs subcommands") {
  CHECK(run({"pairs", "chain", "--ops", "BAAAA", "--kappa", "32/205", "--lambda", "269/410"}).out ==
        "3843/8480 4304/8480\n");
  const auto carm = run({"pairs", "carmichael", "--E", "1"});
  CHECK(carm.out == "57/56 (= 1.0178571429)\nexceeds 147/145: yes\n");
  CHECK(run({"pairs", "carmichael", "--E", "0.7039"}).out.rfind("516702/509663", 0) == 0);
  CHECK(run({"pairs", "chain", "--ops", "BXA", "--kappa", "0", "--lambda", "1"}).code == cli::kValidation);
}

TEST_CASE("experiment output formats") {
  const auto csv = run({"experiment", "squarefree", "--x", "10", "--c", "3/2"});
  CHECK(csv.code == cli::kOk);
  CHECK(csv.out ==
        "experiment,param_json,observed,reference,ratio,runtime_ms\n"
        "squarefree,\"{\"\"x\"\":10,\"\"c\"\":\"\"3/2\"\"}\",7,6.0792710185402665,1.1514538467937585,0\n");
  const auto json = run({"--format", "json", "experiment", "chebyshev", "--x", "100", "--x", "200", "--c", "6/5"});
  CHECK(json.code == cli::kOk);
  const auto parsed = nlohmann::json::parse(json.out);
  CHECK(parsed.size() == 2);
  CHECK(parsed[1]["params"]["x"] == 200);
  const auto tsv = run({"--format", "tsv-plot", "experiment", "large-pf", "--x", "1000", "--c", "6/5"});
  CHECK(tsv.out.rfind("# ", 0) == 0);
  CHECK(tsv.out.find("\n# c\td10") != std::string::npos);
}

TEST_CASE("reruns are byte-identical across thread counts") {
  const std::vector<std::string> a = {"--threads", "1", "experiment", "factor-suite", "--x", "20000", "--c", "11/10"};
  const std::vector<std::string> b = {"--threads", "4", "experiment", "factor-suite", "--x", "20000", "--c", "11/10"};
  const auto first = run(a);
  CHECK(first.code == cli::kOk);
  CHECK(first.out == run(a).out);
  CHECK(first.out == run(b).out);
}

TEST_CASE("primes and carmichael subcommands") {
  CHECK(run({"primes", "ap", "--x", "50", "--c", "3/2", "--list"}).out == "2 5 11 31 41\n");
  CHECK(run({"primes", "ap", "--x", "50", "--d", "4", "--a", "1", "--c", "3/2", "--list"}).out == "5 41\n");
  const auto search = run({"carmichael", "search", "--limit", "2000", "--c", "1001/1000"});
  CHECK(search.out ==
        "{\"N\":561,\"factors\":[3,11,17],\"ps\":[true,true,true],\"c\":\"1001/1000\"}\n"
        "{\"N\":1105,\"factors\":[5,13,17],\"ps\":[true,true,true],\"c\":\"1001/1000\"}\n"
        "{\"N\":1729,\"factors\":[7,13,19],\"ps\":[true,true,true],\"c\":\"1001/1000\"}\n");
  CHECK(run({"carmichael", "check", "--N", "561", "--c", "1001/1000"}).code == cli::kOk);
}

TEST_CASE("output file") {
  const std::string path = "pslab_cli_test_output.csv";
  const auto r = run({"--output", path, "experiment", "squarefree", "--x", "10", "--c", "3/2"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("squarefree,") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run({"ps", "floor", "--n", "10", "--c", "1.5"}).code == cli::kValidation);
  CHECK(run({"ps", "floor", "--n", "10"}).code == cli::kValidation);
  CHECK(run({"nosuch"}).code == cli::kValidation);
  CHECK(run({"experiment", "squarefree", "--x", "100000000", "--c", "3/2"}).code == cli::kGuard);
  CHECK(run({"primes", "ap", "--x", "100", "--d", "4", "--a", "2", "--c", "3/2"}).code == cli::kValidation);
  const auto help = run({"--help"});
  CHECK(help.code == cli::kOk);
  CHECK(help.out.find("experiment") != std::string::npos);
  CHECK(run({"experiment", "--help"}).code == cli::kOk);
}
