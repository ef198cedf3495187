#include "ptx/random.hpp"

#include "ptx/error.hpp"

namespace ptx {

Eigen::VectorXd gaussian_draws(RandomStream& stream, Eigen::Index n) {
  if (n < 1) {
    throw DomainError("gaussian_draws: n must be at least 1");
  }
  Eigen::VectorXd draws(n);
  stream.fill_gaussian(draws);
  return draws;
}

}  // namespace ptx
