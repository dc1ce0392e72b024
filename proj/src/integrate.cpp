#include "uvstab/integrate.hpp"

namespace uvstab {

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("integrator tolerances must be positive");
  }
  if (!(max_step > 0.0)) throw std::invalid_argument("integrator max_step must be positive");
  if (max_steps == 0) throw std::invalid_argument("integrator max_steps must be positive");
}

}  // namespace uvstab
