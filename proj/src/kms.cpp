#include "thermoshift/kms.hpp"

#include <cmath>
#include <random>

#include "thermoshift/errors.hpp"

namespace thermoshift {

KmsReport kms_analyze(const TransitionMatrix& A, const Potential& f, double tol) {
  if (!aperiodicity_index(A).has_value())
    throw ValidationError("kms_analyze: matrix is not aperiodic");
  const TransferOperator L = build_transfer(A, f);
  const RpfData rpf = rpf_solve(L, tol);
  const SpectralReport spec = spectral_radius(A);

  KmsReport rep;
  rep.beta = rpf.log_lambda;
  rep.log_rA = std::log(spec.radius);
  rep.lower_bound = f.min_value() + rep.log_rA;
  rep.upper_bound = f.max_value() + rep.log_rA;
  rep.var0 = var_n(f, 0);
  rep.holder_ok = true;  // locally constant, so the variation series is finite
  rep.unique_state = rep.var0 < rep.log_rA;
  if (std::abs(rep.var0 - rep.log_rA) <= 1e-12) {
    rep.unique_state = false;
    rep.warning = "var0 equals log r(A); the strict uniqueness condition fails";
  }
  const auto weights = cylinder_weights(L, rpf, std::max(f.range() - 1, 1));
  for (const auto& [w, pair] : weights) {
    rep.mu[w] = pair.first;
    rep.nu[w] = pair.second;
  }
  return rep;
}

double scaling_identity_check(const TransferOperator& L, const RpfData& rpf, int trials,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Eigen::Index n = L.M.rows();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i) g(i) = unif(rng);
    const double lhs = rpf.mu.dot(L.M * g);
    const double rhs = rpf.lambda * rpf.mu.dot(g);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

std::map<Word, double> equilibrium_restriction(const TransferOperator& L,
                                               const RpfData& rpf, int m_out) {
  std::map<Word, double> nu;
  for (const auto& [w, pair] : cylinder_weights(L, rpf, m_out)) nu[w] = pair.second;
  return nu;
}

}  // namespace thermoshift
