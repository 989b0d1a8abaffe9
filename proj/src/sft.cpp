#include "thermoshift/sft.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "thermoshift/errors.hpp"
#include "thermoshift/numeric.hpp"

namespace thermoshift {

std::string word_string(const Word& w) {
  std::string s;
  s.reserve(w.size());
  for (int a : w) {
    if (a < 1 || a > 9)
      throw ValidationError("word_string: digit-string format needs letters 1..9");
    s.push_back(char('0' + a));
  }
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    if (c < '1' || c > '9')
      throw ParseError("word '" + s + "': expected digits 1..9");
    w.push_back(c - '0');
  }
  return w;
}

TransitionMatrix TransitionMatrix::validate(const std::vector<std::vector<int>>& raw) {
  const int d = int(raw.size());
  if (d < 1) throw ValidationError("transition matrix: d must be >= 1");
  std::vector<std::uint8_t> entries(std::size_t(d) * std::size_t(d), 0);
  for (int i = 0; i < d; ++i) {
    if (int(raw[std::size_t(i)].size()) != d)
      throw ValidationError("transition matrix: row " + std::to_string(i + 1) +
                            " does not have d entries");
    for (int j = 0; j < d; ++j) {
      const int v = raw[std::size_t(i)][std::size_t(j)];
      if (v != 0 && v != 1)
        throw ValidationError("transition matrix: entry (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ") is not 0 or 1");
      entries[std::size_t(i * d + j)] = std::uint8_t(v);
    }
  }
  for (int i = 0; i < d; ++i) {
    bool any = false;
    for (int j = 0; j < d; ++j) any = any || entries[std::size_t(i * d + j)];
    if (!any) throw ValidationError("transition matrix: row " + std::to_string(i + 1) +
                                    " is identically zero");
  }
  for (int j = 0; j < d; ++j) {
    bool any = false;
    for (int i = 0; i < d; ++i) any = any || entries[std::size_t(i * d + j)];
    if (!any) throw ValidationError("transition matrix: column " + std::to_string(j + 1) +
                                    " is identically zero");
  }
  return TransitionMatrix(d, std::move(entries));
}

TransitionMatrix TransitionMatrix::full_shift(int d) {
  std::vector<std::vector<int>> raw(std::size_t(d), std::vector<int>(std::size_t(d), 1));
  return validate(raw);
}

Eigen::MatrixXd TransitionMatrix::dense() const {
  Eigen::MatrixXd M(d_, d_);
  for (int i = 1; i <= d_; ++i)
    for (int j = 1; j <= d_; ++j) M(i - 1, j - 1) = allows(i, j) ? 1.0 : 0.0;
  return M;
}

bool admissible(const TransitionMatrix& A, const Word& w) {
  if (w.empty()) return false;
  for (int a : w)
    if (a < 1 || a > A.dim()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!A.allows(w[i], w[i + 1])) return false;
  return true;
}

namespace {

void enumerate_rec(const TransitionMatrix& A, int n, Word& w,
                   const std::function<void(const Word&)>& fn) {
  if (int(w.size()) == n) {
    fn(w);
    return;
  }
  const int last = w.back();
  for (int j = 1; j <= A.dim(); ++j) {
    if (!A.allows(last, j)) continue;
    w.push_back(j);
    enumerate_rec(A, n, w, fn);
    w.pop_back();
  }
}

}  // namespace

void for_each_admissible_word_from(const TransitionMatrix& A, int first_letter, int n,
                                   const std::function<void(const Word&)>& fn) {
  if (n < 1) throw ValidationError("word enumeration: length must be >= 1");
  Word w{first_letter};
  enumerate_rec(A, n, w, fn);
}

void for_each_admissible_word(const TransitionMatrix& A, int n,
                              const std::function<void(const Word&)>& fn) {
  if (n < 1) throw ValidationError("word enumeration: length must be >= 1");
  for (int i = 1; i <= A.dim(); ++i) for_each_admissible_word_from(A, i, n, fn);
}

std::vector<Word> admissible_words(const TransitionMatrix& A, int n) {
  std::vector<Word> out;
  for_each_admissible_word(A, n, [&](const Word& w) { out.push_back(w); });
  return out;
}

std::uint64_t word_count(const TransitionMatrix& A, int n) {
  if (n < 1) throw ValidationError("word_count: length must be >= 1");
  const int d = A.dim();
  const std::uint64_t cap = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::uint64_t> v(std::size_t(d), 1);  // counts by last letter
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> next(std::size_t(d), 0);
    for (int j = 1; j <= d; ++j) {
      std::uint64_t acc = 0;
      for (int i = 1; i <= d; ++i) {
        if (!A.allows(i, j)) continue;
        const std::uint64_t x = v[std::size_t(i - 1)];
        acc = (acc > cap - x) ? cap : acc + x;
      }
      next[std::size_t(j - 1)] = acc;
    }
    v = std::move(next);
  }
  std::uint64_t total = 0;
  for (std::uint64_t x : v) total = (total > cap - x) ? cap : total + x;
  return total;
}

std::optional<int> aperiodicity_index(const TransitionMatrix& A) {
  const int d = A.dim();
  const int bound = (d - 1) * (d - 1) + 1;
  // Boolean matrix powers; entries saturate so no overflow concerns.
  std::vector<std::uint8_t> pw(std::size_t(d) * std::size_t(d));
  for (int i = 1; i <= d; ++i)
    for (int j = 1; j <= d; ++j) pw[std::size_t((i - 1) * d + (j - 1))] = A.allows(i, j);
  for (int N = 1; N <= bound; ++N) {
    bool all = true;
    for (std::uint8_t e : pw) all = all && e;
    if (all) return N;
    std::vector<std::uint8_t> next(std::size_t(d) * std::size_t(d), 0);
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) {
        if (!pw[std::size_t(i * d + l)]) continue;
        for (int j = 0; j < d; ++j)
          if (A.allows(l + 1, j + 1)) next[std::size_t(i * d + j)] = 1;
      }
    pw = std::move(next);
  }
  return std::nullopt;
}

SpectralReport spectral_radius(const TransitionMatrix& A, double tol, int max_iter) {
  const Eigen::MatrixXd M = A.dense();
  SpectralReport rep;
  if (aperiodicity_index(A).has_value()) {
    const PowerIterationResult pr = power_iteration(M, tol, max_iter);
    if (!pr.converged)
      throw ConvergenceError("spectral_radius: no convergence after " +
                             std::to_string(max_iter) + " iterations");
    rep.radius = pr.lambda;
    rep.iterations = pr.iterations;
    rep.residual = pr.residual;
    rep.eigenvector = pr.v / pr.v.lpNorm<1>();
    return rep;
  }
  // Periodic or reducible: iterate on (A+I)/2, which has radius (r+1)/2.
  const Eigen::MatrixXd shifted =
      0.5 * (M + Eigen::MatrixXd::Identity(A.dim(), A.dim()));
  const PowerIterationResult pr = power_iteration(shifted, tol, max_iter);
  if (!pr.converged)
    throw ConvergenceError("spectral_radius: no convergence after " +
                           std::to_string(max_iter) +
                           " iterations (periodic or ill-conditioned input)");
  rep.radius = 2.0 * pr.lambda - 1.0;
  rep.iterations = pr.iterations;
  rep.residual = pr.residual;
  return rep;
}

int HigherBlock::index_of(const Word& w) const {
  const auto it = std::lower_bound(states.begin(), states.end(), w);
  if (it == states.end() || *it != w) return 0;
  return int(it - states.begin()) + 1;
}

HigherBlock higher_block(const TransitionMatrix& A, int k) {
  if (k < 1) throw ValidationError("higher_block: k must be >= 1");
  std::vector<Word> states = admissible_words(A, k);
  const int m = int(states.size());
  std::vector<std::vector<int>> raw(std::size_t(m), std::vector<int>(std::size_t(m), 0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const Word& u = states[std::size_t(a)];
      const Word& v = states[std::size_t(b)];
      bool ok = true;
      for (int i = 0; i + 1 < k; ++i) ok = ok && u[std::size_t(i + 1)] == v[std::size_t(i)];
      if (k == 1) ok = A.allows(u[0], v[0]);
      else ok = ok && A.allows(u[std::size_t(k - 1)], v[std::size_t(k - 1)]);
      raw[std::size_t(a)][std::size_t(b)] = ok ? 1 : 0;
    }
  return HigherBlock{TransitionMatrix::validate(raw), std::move(states)};
}

SoficCover sofic_cover(const LabeledGraph& g) {
  if (g.vertices < 1) throw ValidationError("sofic_cover: graph needs at least one vertex");
  if (g.edges.empty()) throw ValidationError("sofic_cover: graph has no edges");
  std::map<std::pair<int, std::string>, int> out_labels;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    if (ed.from < 1 || ed.from > g.vertices || ed.to < 1 || ed.to > g.vertices)
      throw ValidationError("sofic_cover: edge " + std::to_string(e + 1) +
                            " references an unknown vertex");
    const auto key = std::make_pair(ed.from, ed.label);
    if (out_labels.count(key))
      throw ValidationError("sofic_cover: not right-resolving at vertex " +
                            std::to_string(ed.from) + ", label '" + ed.label + "'");
    out_labels[key] = int(e) + 1;
  }

  std::vector<int> edge_label;
  std::vector<std::string> label_names;
  std::map<std::string, int> label_ids;
  for (const auto& ed : g.edges) {
    auto it = label_ids.find(ed.label);
    if (it == label_ids.end()) {
      label_names.push_back(ed.label);
      it = label_ids.emplace(ed.label, int(label_names.size())).first;
    }
    edge_label.push_back(it->second);
  }

  const int m = int(g.edges.size());
  std::vector<std::vector<int>> raw(std::size_t(m), std::vector<int>(std::size_t(m), 0));
  for (int e = 0; e < m; ++e)
    for (int f = 0; f < m; ++f)
      raw[std::size_t(e)][std::size_t(f)] =
          g.edges[std::size_t(e)].to == g.edges[std::size_t(f)].from ? 1 : 0;
  return SoficCover{TransitionMatrix::validate(raw), std::move(edge_label),
                    std::move(label_names)};
}

}  // namespace thermoshift
