#ifndef THERMOSHIFT_TESTS_HELPERS_HPP
#define THERMOSHIFT_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "thermoshift/potential.hpp"
#include "thermoshift/sft.hpp"

namespace tsx {

using thermoshift::Potential;
using thermoshift::TransitionMatrix;
using thermoshift::Word;

inline const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
inline const double kLogPhi = std::log(kPhi);
inline const double kLog2 = std::log(2.0);
inline const double kLog3 = std::log(3.0);

inline TransitionMatrix golden() {
  return TransitionMatrix::validate({{1, 1}, {1, 0}});
}
inline TransitionMatrix full2() { return TransitionMatrix::full_shift(2); }
inline TransitionMatrix perm2() {
  return TransitionMatrix::validate({{0, 1}, {1, 0}});
}

// The five aperiodic reference matrices used across the suites (d <= 4).
inline std::vector<TransitionMatrix> aperiodic_five() {
  return {
      golden(),
      full2(),
      TransitionMatrix::validate({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}),
      TransitionMatrix::validate({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}),
      TransitionMatrix::validate(
          {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}}),
  };
}

// Brute-force word oracle: filter the full product alphabet. Kept free of
// the library's enumeration code on purpose.
inline std::vector<Word> oracle_words(const TransitionMatrix& A, int n) {
  std::vector<Word> out;
  Word w(std::size_t(n), 1);
  for (;;) {
    bool ok = true;
    for (int i = 0; i + 1 < n; ++i) ok = ok && A.allows(w[std::size_t(i)], w[std::size_t(i + 1)]);
    if (ok) out.push_back(w);
    int pos = n - 1;
    while (pos >= 0 && w[std::size_t(pos)] == A.dim()) {
      w[std::size_t(pos)] = 1;
      --pos;
    }
    if (pos < 0) break;
    ++w[std::size_t(pos)];
  }
  return out;
}

// Random range-k potential with values uniform in [lo, hi].
inline Potential random_potential(const TransitionMatrix& A, int k, std::uint64_t seed,
                                  double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(lo, hi);
  std::map<Word, double> table;
  for (const Word& w : thermoshift::admissible_words(A, k)) table[w] = unif(rng);
  return Potential(A, k, table);
}

// Random dyadic-valued potential; Birkhoff sums of a few terms stay exact
// in double arithmetic.
inline Potential random_dyadic_potential(const TransitionMatrix& A, int k,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> grid(-128, 128);
  std::map<Word, double> table;
  for (const Word& w : thermoshift::admissible_words(A, k))
    table[w] = double(grid(rng)) / 64.0;
  return Potential(A, k, table);
}

}  // namespace tsx

#endif
