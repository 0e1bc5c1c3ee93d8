#pragma once

#include <Eigen/Dense>
#include <functional>

namespace lorentz {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value;
  long evals;
};

// Downhill simplex minimization of f from x0 (initial simplex edge = scale).
// Stops when the simplex value spread drops below tol or max_iter is reached.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, double scale,
                             int max_iter, double tol);

}  // namespace lorentz
