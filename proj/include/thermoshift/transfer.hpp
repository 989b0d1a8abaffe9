#ifndef THERMOSHIFT_TRANSFER_HPP
#define THERMOSHIFT_TRANSFER_HPP

#include <Eigen/Dense>
#include <array>
#include <map>
#include <utility>
#include <vector>

#include "thermoshift/measures.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/sft.hpp"

namespace thermoshift {

// Matrix form of the Ruelle operator L_f on functions of the first
// max(k-1,1) coordinates. M(s,t) = e^{f(w)} where w is the k-word obtained
// by prepending the first letter of state t to state s; applying M realizes
// (L_f g)(x) = sum over admissible prepended letters i of e^{f(ix)} g(ix).
struct TransferOperator {
  TransitionMatrix A;
  Potential f;
  std::vector<Word> states;  // admissible max(k-1,1)-words, lexicographic
  Eigen::MatrixXd M;

  int state_index(const Word& w) const;  // 0-based, -1 when absent
};

TransferOperator build_transfer(const TransitionMatrix& A, const Potential& f);

// Perron data of the transfer operator: L h = lambda h, L* mu = lambda mu,
// normalized mu(1) = 1 and then mu(h) = 1.
struct RpfData {
  double lambda = 0.0;
  double log_lambda = 0.0;
  Eigen::VectorXd h;
  Eigen::VectorXd mu;
  double mu_h = 0.0;  // mu(h) after the final normalization, ~1
  std::array<double, 2> residuals{0.0, 0.0};  // ||Lh-lh||_inf/||h||_inf, ||muL-lmu||_1
  int iterations = 0;
};

// Simultaneous power iteration on M and its transpose. Requires aperiodic A.
RpfData rpf_solve(const TransferOperator& L, double tol = 1e-12, int max_iter = 100000);

// e_n = ||L^n f0 / lambda^n - mu(f0) h||_inf for n = 1..n_max.
std::vector<double> convergence_profile(const TransferOperator& L, const RpfData& rpf,
                                        const Eigen::VectorXd& f0, int n_max);

// Stochastic matrix P(s,t) = M(t,s) h(t) / (lambda h(s)) with stationary
// vector mu .* h; the induced measure is the equilibrium measure.
MarkovMeasure equilibrium_markov(const TransferOperator& L, const RpfData& rpf);

// Eigenmeasure (mu) and equilibrium (nu = h mu) weights of all admissible
// m_out-cylinders; each family sums to 1.
std::map<Word, std::pair<double, double>> cylinder_weights(const TransferOperator& L,
                                                           const RpfData& rpf, int m_out);

}  // namespace thermoshift

#endif
