#ifndef THERMOSHIFT_KMS_HPP
#define THERMOSHIFT_KMS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "thermoshift/transfer.hpp"

namespace thermoshift {

// The admissible inverse temperature beta for the gauge-type flow twisted
// by the potential, with the eigenvalue bounds, the uniqueness condition
// var_0(f) < log r(A), and the restricted eigen/equilibrium data.
struct KmsReport {
  double beta = 0.0;
  double lower_bound = 0.0;  // min f + log r(A)
  double upper_bound = 0.0;  // max f + log r(A)
  double var0 = 0.0;
  double log_rA = 0.0;
  bool unique_state = false;
  bool holder_ok = true;  // finite-range potentials always qualify
  std::string warning;    // set on the boundary case var0 == log r(A)
  std::map<Word, double> mu;  // eigenmeasure weights on state cylinders
  std::map<Word, double> nu;  // equilibrium weights on state cylinders
};

KmsReport kms_analyze(const TransitionMatrix& A, const Potential& f, double tol = 1e-12);

// Max over random test functions g of |mu(L g) - lambda mu(g)|; the scaling
// identity satisfied by the restricted state. Test functions have entries
// uniform in [-1, 1].
double scaling_identity_check(const TransferOperator& L, const RpfData& rpf, int trials,
                              std::uint64_t seed);

// nu-weights of m_out-cylinders: strictly positive on admissible words and
// shift-invariant.
std::map<Word, double> equilibrium_restriction(const TransferOperator& L,
                                               const RpfData& rpf, int m_out);

}  // namespace thermoshift

#endif
