#ifndef THERMOSHIFT_POTENTIAL_HPP
#define THERMOSHIFT_POTENTIAL_HPP

#include <map>
#include <vector>

#include "thermoshift/sft.hpp"

namespace thermoshift {

// Locally constant potential of range k: a real value on each admissible
// k-word, read as the value on the corresponding cylinder. The table must
// be total; construction fails fast on gaps.
class Potential {
 public:
  Potential(TransitionMatrix A, int range, const std::map<Word, double>& table);
  static Potential constant(const TransitionMatrix& A, double c);  // range 1

  const TransitionMatrix& matrix() const { return A_; }
  int range() const { return k_; }
  const std::vector<Word>& words() const { return words_; }
  const std::vector<double>& values() const { return values_; }

  // Value on an exactly-k-long admissible word.
  double value(const Word& kword) const;
  // Value on the cylinder [w] for |w| >= k (lookup of the k-prefix).
  double evaluate(const Word& w) const;
  // Birkhoff sum S_n f on a word of length >= n + k - 1.
  double birkhoff_value(const Word& w, int n) const;

  double min_value() const;
  double max_value() const;

 private:
  TransitionMatrix A_;
  int k_;
  std::vector<Word> words_;    // admissible k-words, lexicographic
  std::vector<double> values_;
};

// S_n f tabulated on all admissible (n+k-1)-words.
struct BirkhoffTable {
  int n = 0;
  std::vector<Word> words;
  std::vector<double> values;
  double value(const Word& w) const;
};
BirkhoffTable birkhoff(const Potential& f, int n);

// var_0 = max f - min f; var_n for n >= 1 is the largest oscillation of f
// over a cylinder of length n. Zero for n >= k.
double var_n(const Potential& f, int n);

// f + g(shifted) - g, of range max(k_f, k_g + 1).
Potential coboundary_perturb(const Potential& f, const Potential& g);

// Pointwise scale*f + shift.
Potential affine(const Potential& f, double scale, double shift);

// Pointwise maximum / absolute value on the common range promotion.
Potential pointwise_max(const Potential& f, const Potential& g);
Potential pointwise_abs(const Potential& f);

// max |f - g| over cylinders of the common range.
double sup_distance(const Potential& f, const Potential& g);

// Range-k potential on a sofic shift pulled back to the edge-shift cover:
// the value at an edge word is the value at its label word.
Potential pull_back(const SoficCover& cover, int sofic_alphabet,
                    const std::map<Word, double>& sofic_table, int range);

}  // namespace thermoshift

#endif
