#include "thermoshift/potential.hpp"

#include <algorithm>
#include <cmath>

#include "thermoshift/errors.hpp"

namespace thermoshift {

Potential::Potential(TransitionMatrix A, int range, const std::map<Word, double>& table)
    : A_(std::move(A)), k_(range) {
  if (k_ < 1) throw ValidationError("potential: range must be >= 1");
  words_ = admissible_words(A_, k_);
  values_.reserve(words_.size());
  for (const Word& w : words_) {
    const auto it = table.find(w);
    if (it == table.end())
      throw ValidationError("potential: missing value for admissible word '" +
                            word_string(w) + "'");
    if (!std::isfinite(it->second))
      throw ValidationError("potential: non-finite value at word '" + word_string(w) + "'");
    values_.push_back(it->second);
  }
  for (const auto& [w, v] : table) {
    (void)v;
    if (int(w.size()) != k_)
      throw ValidationError("potential: word '" + word_string(w) +
                            "' does not have length k");
    if (!admissible(A_, w))
      throw ValidationError("potential: word '" + word_string(w) + "' is not admissible");
  }
}

Potential Potential::constant(const TransitionMatrix& A, double c) {
  std::map<Word, double> table;
  for (int i = 1; i <= A.dim(); ++i) table[{i}] = c;
  return Potential(A, 1, table);
}

double Potential::value(const Word& kword) const {
  const auto it = std::lower_bound(words_.begin(), words_.end(), kword);
  if (it == words_.end() || *it != kword)
    throw ValidationError("potential: word '" + word_string(kword) +
                          "' is not an admissible k-word");
  return values_[std::size_t(it - words_.begin())];
}

double Potential::evaluate(const Word& w) const {
  if (int(w.size()) < k_)
    throw ValidationError("potential: word '" + word_string(w) +
                          "' shorter than the range");
  if (!admissible(A_, w))
    throw ValidationError("potential: word '" + word_string(w) + "' is not admissible");
  return value(Word(w.begin(), w.begin() + k_));
}

double Potential::birkhoff_value(const Word& w, int n) const {
  if (int(w.size()) < n + k_ - 1)
    throw ValidationError("potential: word too short for a length-" + std::to_string(n) +
                          " Birkhoff sum");
  double s = 0.0;
  for (int j = 0; j < n; ++j)
    s += value(Word(w.begin() + j, w.begin() + j + k_));
  return s;
}

double Potential::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double Potential::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

double BirkhoffTable::value(const Word& w) const {
  const auto it = std::lower_bound(words.begin(), words.end(), w);
  if (it == words.end() || *it != w)
    throw ValidationError("birkhoff table: word '" + word_string(w) + "' absent");
  return values[std::size_t(it - words.begin())];
}

BirkhoffTable birkhoff(const Potential& f, int n) {
  if (n < 1) throw ValidationError("birkhoff: n must be >= 1");
  BirkhoffTable t;
  t.n = n;
  t.words = admissible_words(f.matrix(), n + f.range() - 1);
  t.values.reserve(t.words.size());
  for (const Word& w : t.words) t.values.push_back(f.birkhoff_value(w, n));
  return t;
}

double var_n(const Potential& f, int n) {
  if (n < 0) throw ValidationError("var_n: n must be >= 0");
  if (n == 0) return f.max_value() - f.min_value();
  if (n >= f.range()) return 0.0;
  // Oscillation over each cylinder of length n; f is constant on each
  // admissible k-extension.
  double worst = 0.0;
  const auto& words = f.words();
  const auto& vals = f.values();
  std::size_t i = 0;
  while (i < words.size()) {
    const Word prefix(words[i].begin(), words[i].begin() + n);
    double lo = vals[i], hi = vals[i];
    std::size_t j = i + 1;
    while (j < words.size() &&
           std::equal(prefix.begin(), prefix.end(), words[j].begin())) {
      lo = std::min(lo, vals[j]);
      hi = std::max(hi, vals[j]);
      ++j;
    }
    worst = std::max(worst, hi - lo);
    i = j;
  }
  return worst;
}

Potential coboundary_perturb(const Potential& f, const Potential& g) {
  if (!(f.matrix() == g.matrix()))
    throw ValidationError("coboundary_perturb: potentials live on different shifts");
  const int r = std::max(f.range(), g.range() + 1);
  std::map<Word, double> table;
  for (const Word& w : admissible_words(f.matrix(), r)) {
    const Word shifted(w.begin() + 1, w.end());
    table[w] = f.evaluate(w) + g.evaluate(shifted) - g.evaluate(w);
  }
  return Potential(f.matrix(), r, table);
}

Potential affine(const Potential& f, double scale, double shift) {
  std::map<Word, double> table;
  for (std::size_t i = 0; i < f.words().size(); ++i)
    table[f.words()[i]] = scale * f.values()[i] + shift;
  return Potential(f.matrix(), f.range(), table);
}

Potential pointwise_max(const Potential& f, const Potential& g) {
  if (!(f.matrix() == g.matrix()))
    throw ValidationError("pointwise_max: potentials live on different shifts");
  const int r = std::max(f.range(), g.range());
  std::map<Word, double> table;
  for (const Word& w : admissible_words(f.matrix(), r))
    table[w] = std::max(f.evaluate(w), g.evaluate(w));
  return Potential(f.matrix(), r, table);
}

Potential pointwise_abs(const Potential& f) {
  std::map<Word, double> table;
  for (std::size_t i = 0; i < f.words().size(); ++i)
    table[f.words()[i]] = std::abs(f.values()[i]);
  return Potential(f.matrix(), f.range(), table);
}

double sup_distance(const Potential& f, const Potential& g) {
  if (!(f.matrix() == g.matrix()))
    throw ValidationError("sup_distance: potentials live on different shifts");
  const int r = std::max(f.range(), g.range());
  double worst = 0.0;
  for (const Word& w : admissible_words(f.matrix(), r))
    worst = std::max(worst, std::abs(f.evaluate(w) - g.evaluate(w)));
  return worst;
}

Potential pull_back(const SoficCover& cover, int sofic_alphabet,
                    const std::map<Word, double>& sofic_table, int range) {
  std::map<Word, double> table;
  for (const Word& w : admissible_words(cover.matrix, range)) {
    Word labels;
    labels.reserve(w.size());
    for (int e : w) {
      const int l = cover.edge_label[std::size_t(e - 1)];
      if (l > sofic_alphabet)
        throw ValidationError("pull_back: cover label exceeds the sofic alphabet");
      labels.push_back(l);
    }
    const auto it = sofic_table.find(labels);
    if (it == sofic_table.end())
      throw ValidationError("pull_back: sofic table misses word '" +
                            word_string(labels) + "'");
    table[w] = it->second;
  }
  return Potential(cover.matrix, range, table);
}

}  // namespace thermoshift
