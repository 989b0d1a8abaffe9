#ifndef THERMOSHIFT_MEASURES_HPP
#define THERMOSHIFT_MEASURES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "thermoshift/potential.hpp"
#include "thermoshift/sft.hpp"

namespace thermoshift {

// Shift-invariant Markov measure: row-stochastic matrix over block states
// (admissible m-words) plus its stationary vector.
struct MarkovMeasure {
  std::vector<Word> state_words;  // lexicographic m-words
  Eigen::MatrixXd P;
  Eigen::VectorXd p;

  int state_index(const Word& w) const;  // 0-based, -1 when absent
  // Probability of the cylinder [w]; |w| >= m uses the sliding-window
  // product, shorter words sum over extensions.
  double cylinder_probability(const Word& w) const;
};

// Validates support against the block-transition structure of A, checks row
// sums, and computes the stationary vector.
MarkovMeasure make_markov(const TransitionMatrix& A, std::vector<Word> state_words,
                          const Eigen::MatrixXd& P);

// Same, but with a caller-supplied stationary vector (checked, not solved).
MarkovMeasure make_markov_with_stationary(const TransitionMatrix& A,
                                          std::vector<Word> state_words,
                                          const Eigen::MatrixXd& P,
                                          const Eigen::VectorXd& p);

// Kolmogorov-Sinai entropy -sum p_i P_ij log P_ij, with 0 log 0 = 0.
double ks_entropy(const MarkovMeasure& m);

// mu(f) as a finite sum of cylinder weights times table values.
double integrate(const MarkovMeasure& m, const Potential& f);

struct FreeEnergyReport {
  double entropy = 0.0;
  double integral = 0.0;
  double free_energy = 0.0;
  double pressure_gap = 0.0;  // pressure_ref - free_energy
};
FreeEnergyReport free_energy(const MarkovMeasure& m, const Potential& f,
                             double pressure_ref);

// Recode to states one letter longer; entropy and all cylinder weights are
// unchanged.
MarkovMeasure refine(const TransitionMatrix& A, const MarkovMeasure& m);

// Random Markov measure on the m-block support pattern (Dirichlet rows).
MarkovMeasure random_markov(const TransitionMatrix& A, int m, std::uint64_t seed);

struct VariationalResult {
  MarkovMeasure measure;
  FreeEnergyReport report;
  int best_restart = -1;
};

// Projected-gradient ascent of h + mu(f) over stochastic matrices on the
// block support, multi-restart; pressure reference comes from the transfer
// operator. Requires aperiodic A.
VariationalResult variational_search(const TransitionMatrix& A, const Potential& f,
                                     int restarts, int iters, std::uint64_t seed,
                                     int threads = 1);

// Free-energy value at an arbitrary stochastic matrix on the block states;
// the search hook, also usable for numerical gradient checks.
double markov_free_energy_value(const Potential& f, const std::vector<Word>& states,
                                const Eigen::MatrixXd& P);

}  // namespace thermoshift

#endif
