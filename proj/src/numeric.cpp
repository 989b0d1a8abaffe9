#include "thermoshift/numeric.hpp"

#include <algorithm>
#include <vector>

#include "thermoshift/errors.hpp"

namespace thermoshift {

PowerIterationResult power_iteration(const Eigen::MatrixXd& M, double tol, int max_iter) {
  const Eigen::Index n = M.rows();
  PowerIterationResult r;
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd w = M * v;
    const double rayleigh = v.dot(w) / v.dot(v);
    const double res = (w - rayleigh * v).lpNorm<Eigen::Infinity>() /
                       v.lpNorm<Eigen::Infinity>();
    r.lambda = rayleigh;
    r.iterations = it;
    r.residual = res;
    const double norm = w.lpNorm<1>();
    if (norm == 0.0) break;  // nilpotent direction, cannot continue
    v = w / norm;
    if (res <= tol) {
      r.v = v;
      r.converged = true;
      return r;
    }
  }
  r.v = v;
  return r;
}

double charpoly_radius(const Eigen::MatrixXd& M) {
  const Eigen::Index n = M.rows();
  if (n == 0) throw ValidationError("charpoly_radius: empty matrix");
  // Faddeev-LeVerrier: p(x) = x^n + c[1] x^{n-1} + ... + c[n].
  std::vector<double> c(std::size_t(n) + 1, 0.0);
  c[0] = 1.0;
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    N = M * N + c[std::size_t(k - 1)] * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd MN = M * N;
    c[std::size_t(k)] = -MN.trace() / double(k);
  }
  // Beyond the largest real part of any root, p and its derivatives are
  // positive, so Newton from above converges monotonically to r(M).
  double x = M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  for (int it = 0; it < 500; ++it) {
    double p = c[0], dp = 0.0;
    for (std::size_t k = 1; k <= std::size_t(n); ++k) {
      dp = dp * x + p;
      p = p * x + c[k];
    }
    if (dp <= 0.0) break;
    const double step = p / dp;
    x -= step;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(x))) break;
  }
  return std::max(x, 0.0);
}

double nonnegative_radius(const Eigen::MatrixXd& M, double tol, int max_iter) {
  const Eigen::Index n = M.rows();
  const Eigen::MatrixXd shifted = 0.5 * (M + Eigen::MatrixXd::Identity(n, n));
  const PowerIterationResult pr = power_iteration(shifted, tol, max_iter);
  if (pr.converged) return 2.0 * pr.lambda - 1.0;
  if (n <= 12) return charpoly_radius(M);
  throw ConvergenceError("nonnegative_radius: power iteration did not converge");
}

Eigen::VectorXd stationary_vector(const Eigen::MatrixXd& P) {
  const Eigen::Index n = P.rows();
  Eigen::MatrixXd sys(n + 1, n);
  sys.topRows(n) = P.transpose() - Eigen::MatrixXd::Identity(n, n);
  sys.bottomRows(1) = Eigen::MatrixXd::Ones(1, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;
  Eigen::VectorXd p = sys.colPivHouseholderQr().solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i)
    if (p(i) < 0.0 && p(i) > -1e-13) p(i) = 0.0;
  return p;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v,
                                   const Eigen::Array<bool, Eigen::Dynamic, 1>& support,
                                   double floor) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < n; ++i)
    if (support(i)) idx.push_back(i);
  if (idx.empty()) throw ValidationError("project_to_simplex: empty support");
  const double mass = 1.0 - floor * double(idx.size());
  if (mass < 0.0) throw ValidationError("project_to_simplex: floor too large for support");

  // Project (v - floor) restricted to the support onto the simplex of the
  // remaining mass, then add the floor back.
  std::vector<double> u;
  u.reserve(idx.size());
  for (Eigen::Index i : idx) u.push_back(v(i) - floor);
  std::vector<double> sorted = u;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  int rho = 0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    css += sorted[j];
    const double t = (css - mass) / double(j + 1);
    if (sorted[j] - t > 0.0) {
      rho = int(j + 1);
      theta = t;
    }
  }
  if (rho == 0) theta = (css - mass) / double(sorted.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (std::size_t j = 0; j < idx.size(); ++j)
    out(idx[j]) = std::max(u[j] - theta, 0.0) + floor;
  return out;
}

}  // namespace thermoshift
