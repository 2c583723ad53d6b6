#include "excursion/prediction.hpp"

#include <cmath>

#include "excursion/quad/constants.hpp"

namespace excursion {

double AsymptoticPrediction::evaluate(double u) const {
  double v = prefactor * std::pow(u, u_power);
  if (log_power != 0) v *= std::pow(std::log(u), log_power);
  if (uses_psi) v *= quad::normal_survival(u);
  return v;
}

}  // namespace excursion
