#ifndef THERMOSHIFT_PRESSURE_HPP
#define THERMOSHIFT_PRESSURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermoshift/potential.hpp"
#include "thermoshift/sft.hpp"

namespace thermoshift {

// Z_n = sum over admissible n-words of exp(sup over the cylinder of S_n f).
// The sup is an exact max over admissible (n+k-1)-extensions.
double partition_function(const TransitionMatrix& A, const Potential& f, int n,
                          int threads = 1);

// log of the generalized cylinder partition function: Birkhoff sums of
// length n_sum, grouped over cylinders of length n_cyl, sup or inf per
// cylinder. partition_function is the (n, n) sup case.
double log_partition_sup(const TransitionMatrix& A, const Potential& f, int n_sum,
                         int n_cyl, int threads = 1);
double log_partition_inf(const TransitionMatrix& A, const Potential& f, int n_sum,
                         int n_cyl, int threads = 1);

struct PressureEstimate {
  struct Row {
    int n = 0;
    double estimate = 0.0;  // (1/n) log Z_n
    double lower = 0.0;     // rigorous running lower bound after stage n
    double upper = 0.0;     // rigorous running upper bound after stage n
  };
  std::vector<Row> per_n;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> transfer_value;
  int n_max = 0;
};

// Pressure with a certified bracket. Upper bounds come from subadditivity
// of log Z_n (Fekete) and from Collatz-Wielandt ratios of exact cylinder
// sums; lower bounds from the aperiodicity-corrected superadditive inf
// sums, the Collatz-Wielandt minimum and min f + log r(A). The transfer
// eigenvalue is attached when A is aperiodic.
PressureEstimate pressure_estimate(const TransitionMatrix& A, const Potential& f,
                                   int n_max, int threads = 1);

struct LawCheck {
  std::string law;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Checks of the classical pressure laws on transfer values: monotonicity,
// scalar additivity, Lipschitz continuity, one-sided scaling, the entropy
// sandwich, |P(f)| <= P(|f|), coboundary invariance, and the power law
// P_{T^r} (S_r f) = r P(f) for r = 2, 3. Requires aperiodic A.
std::vector<LawCheck> pressure_law_suite(const TransitionMatrix& A, const Potential& f,
                                         const Potential& g, std::uint64_t seed);

// The system (Lambda_A, T^r) recoded on the alphabet of admissible r-words,
// carrying S_r f as a potential of range 2 (range 1 when k = 1).
std::pair<TransitionMatrix, Potential> power_system(const TransitionMatrix& A,
                                                    const Potential& f, int r);

}  // namespace thermoshift

#endif
