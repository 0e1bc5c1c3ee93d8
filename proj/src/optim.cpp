#include "lorentz/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lorentz {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x0, double scale,
                             int max_iter, double tol) {
  const int n = static_cast<int>(x0.size());
  long evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };

  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += scale;
  for (int i = 0; i <= n; ++i) val[i] = eval(pts[i]);

  std::vector<int> order(n + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return val[a] < val[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (val[worst] - val[best] <= tol * (std::abs(val[best]) + tol)) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= n;

    Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
    double fr = eval(xr);
    if (fr < val[best]) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        val[worst] = fe;
      } else {
        pts[worst] = xr;
        val[worst] = fr;
      }
    } else if (fr < val[second]) {
      pts[worst] = xr;
      val[worst] = fr;
    } else {
      Eigen::VectorXd xc = centroid + 0.5 * (pts[worst] - centroid);
      double fc = eval(xc);
      if (fc < val[worst]) {
        pts[worst] = xc;
        val[worst] = fc;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
          val[i] = eval(pts[i]);
        }
      }
    }
  }

  int best = static_cast<int>(std::min_element(val.begin(), val.end()) - val.begin());
  return {pts[best], val[best], evals};
}

}  // namespace lorentz
