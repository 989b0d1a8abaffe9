#ifndef THERMOSHIFT_NUMERIC_HPP
#define THERMOSHIFT_NUMERIC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>

namespace thermoshift {

// Compensated (Kahan) summation. Exponentials of Birkhoff sums amplify
// rounding, so partition sums go through this.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Streaming log-sum-exp with the running maximum subtracted.
// For all-equal inputs (f = 0) the internal sum stays an exact integer.
class LogSumExp {
 public:
  void add(double x) {
    if (std::isinf(x) && x < 0) return;
    if (x <= m_) {
      sum_.add(std::exp(x - m_));
    } else {
      KahanSum rescaled;
      rescaled.add(sum_.value() * std::exp(m_ - x));
      rescaled.add(1.0);
      sum_ = rescaled;
      m_ = x;
    }
  }
  void merge(const LogSumExp& o) {
    if (o.empty()) return;
    if (o.m_ <= m_) {
      sum_.add(o.sum_.value() * std::exp(o.m_ - m_));
    } else {
      KahanSum rescaled;
      rescaled.add(sum_.value() * std::exp(m_ - o.m_));
      rescaled.add(o.sum_.value());
      sum_ = rescaled;
      m_ = o.m_;
    }
  }
  bool empty() const { return std::isinf(m_); }
  double log_sum() const {
    if (empty()) return -std::numeric_limits<double>::infinity();
    return m_ + std::log(sum_.value());
  }
  // exp(log_sum) computed so that the f = 0 case returns the exact count.
  double sum() const {
    if (empty()) return 0.0;
    return sum_.value() * std::exp(m_);
  }

 private:
  double m_ = -std::numeric_limits<double>::infinity();
  KahanSum sum_;
};

struct PowerIterationResult {
  double lambda = 0.0;
  Eigen::VectorXd v;
  double residual = 0.0;  // ||Mv - lambda v||_inf / ||v||_inf
  int iterations = 0;
  bool converged = false;
};

// Plain power iteration from the uniform positive vector. Convergence is
// measured on the eigenvector residual; lambda is the Rayleigh quotient.
PowerIterationResult power_iteration(const Eigen::MatrixXd& M, double tol, int max_iter);

// Largest real root of det(xI - M) for a nonnegative matrix, found by
// Newton descent from above max row sum. Coefficients via Faddeev-LeVerrier;
// usable as a fallback for small dimensions where power iteration stalls.
// Multiple roots are located to about sqrt(machine epsilon) only.
double charpoly_radius(const Eigen::MatrixXd& M);

// Spectral radius of a nonnegative matrix: power iteration on (M+I)/2 so
// that irreducible periodic patterns still converge, with the charpoly
// fallback for small defective cases.
double nonnegative_radius(const Eigen::MatrixXd& M, double tol = 1e-13, int max_iter = 20000);

// Stationary row vector of a row-stochastic matrix: solves p(P - I) = 0,
// sum(p) = 1 by least squares.
Eigen::VectorXd stationary_vector(const Eigen::MatrixXd& P);

// Euclidean projection of v onto {x : x >= floor on the support, x = 0 off
// support, sum(x) = 1}. support flags which coordinates may be positive.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v,
                                   const Eigen::Array<bool, Eigen::Dynamic, 1>& support,
                                   double floor = 0.0);

// SplitMix64, used to derive independent seeds for subtasks.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace thermoshift

#endif
