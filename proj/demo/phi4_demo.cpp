// The phi^4 one-loop point r^-4 in four dimensions, end to end.
#include <cmath>
#include <cstdio>

#include "difren/fourier.hpp"
#include "difren/numeric.hpp"
#include "difren/parser.hpp"
#include "difren/printer.hpp"
#include "difren/regulate.hpp"
#include "difren/surface.hpp"

int main() {
  using namespace difren;
  const auto target = parse_position("r^-4", 4);
  const auto rep = find_representation(target);
  std::printf("target     %s\n", to_string(target).c_str());
  std::printf("operator   %s\n", to_string(rep.op).c_str());
  std::printf("seed       %s\n", to_string(rep.seed).c_str());

  const auto F = fourier_formal(rep);
  std::printf("transform  %s\n", to_string(F).c_str());
  std::printf("M d/dM     %s\n", to_string(mass_derivative(F)).c_str());

  const auto se = surface_expansion(rep.op, rep.seed);
  std::printf("surface terms:\n");
  for (const auto& [key, value] : se.entries)
    std::printf("  eps^%s log(eps*M)^%d : %s\n", key.power.str().c_str(), key.logpow, to_string(value).c_str());

  std::printf("\n%6s %18s %18s %12s\n", "eps", "truncated", "formal+surface", "defect");
  const double p = 1.0, mass = 1.0;
  for (double eps : {0.2, 0.1, 0.05, 0.02}) {
    const double truncated = truncated_ft_numeric(target, p, mass, eps).value;
    const double predicted = eval_momentum(F, p, mass) + se.evaluate(eps, p, mass);
    std::printf("%6.3f %18.10f %18.10f %12.3e\n", eps, truncated, predicted, truncated - predicted);
  }
}
