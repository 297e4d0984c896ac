// Sweeps the exponential-sum ratio studies and writes the envelope fixture
// consumed by the unit and acceptance tests.
//
//   pslab_fixtures <output.json>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "json.hpp"

#include "pslab/expsum.hpp"

using namespace pslab;

namespace {

constexpr double kEnvelope = 10.0;

double max_ratio(const std::vector<BoundReport>& rows) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.ratio);
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: pslab_fixtures <output.json>\n";
    return 2;
  }
  const std::vector<double> As = {1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
  const std::vector<double> Ns = {100, 300, 1000, 3000, 10000};
  constexpr std::uint64_t kKlSeed = 20240101, kTrilinearSeed = 20240102, kBalanceSeed = 20240103;
  constexpr std::size_t kKlCount = 200, kTrilinearCount = 60, kBalanceCount = 100;

  nlohmann::ordered_json j;
  j["envelope"] = kEnvelope;
  j["vdc2"] = {{"A", As}, {"N", Ns}, {"max_ratio", max_ratio(ratio_study_vdc2(As, Ns))}};
  j["vdc3"] = {{"A", As}, {"N", Ns}, {"max_ratio", max_ratio(ratio_study_vdc3(As, Ns))}};
  j["kusmin_landau"] = {{"seed", kKlSeed},
                        {"count", kKlCount},
                        {"max_ratio", max_ratio(ratio_study_kusmin_landau(kKlSeed, kKlCount))}};
  j["trilinear"] = {{"seed", kTrilinearSeed},
                    {"count", kTrilinearCount},
                    {"epsilon", kTrilinearEpsilon},
                    {"max_ratio", max_ratio(ratio_study_theorem3(kTrilinearSeed, kTrilinearCount))}};
  j["balance"] = {{"seed", kBalanceSeed}, {"count", kBalanceCount}};

  std::ofstream out(argv[1]);
  out << j.dump(2) << '\n';
  if (!out) {
    std::cerr << "cannot write " << argv[1] << '\n';
    return 1;
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}
