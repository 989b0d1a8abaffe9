#include "thermoshift/measures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "thermoshift/errors.hpp"
#include "thermoshift/numeric.hpp"
#include "thermoshift/transfer.hpp"

namespace thermoshift {

namespace {

bool block_transition_allowed(const TransitionMatrix& A, const Word& u, const Word& v) {
  for (std::size_t i = 0; i + 1 < u.size(); ++i)
    if (u[i + 1] != v[i]) return false;
  return A.allows(u.back(), v.back());
}

}  // namespace

int MarkovMeasure::state_index(const Word& w) const {
  const auto it = std::lower_bound(state_words.begin(), state_words.end(), w);
  if (it == state_words.end() || *it != w) return -1;
  return int(it - state_words.begin());
}

double MarkovMeasure::cylinder_probability(const Word& w) const {
  const int m = int(state_words.front().size());
  const int r = int(w.size());
  if (r >= m) {
    int s = state_index(Word(w.begin(), w.begin() + m));
    if (s < 0) return 0.0;
    double prob = p(s);
    for (int t = 1; t + m <= r; ++t) {
      const int nxt = state_index(Word(w.begin() + t, w.begin() + t + m));
      if (nxt < 0) return 0.0;
      prob *= P(s, nxt);
      s = nxt;
    }
    return prob;
  }
  double prob = 0.0;
  for (std::size_t s = 0; s < state_words.size(); ++s)
    if (std::equal(w.begin(), w.end(), state_words[s].begin())) prob += p(Eigen::Index(s));
  return prob;
}

MarkovMeasure make_markov_with_stationary(const TransitionMatrix& A,
                                          std::vector<Word> state_words,
                                          const Eigen::MatrixXd& P,
                                          const Eigen::VectorXd& p) {
  const int n = int(state_words.size());
  if (n == 0) throw ValidationError("markov measure: no states");
  if (P.rows() != n || P.cols() != n || p.size() != n)
    throw ValidationError("markov measure: dimension mismatch");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (P(i, j) < 0.0)
        throw ValidationError("markov measure: negative transition probability");
      if (P(i, j) > 0.0 &&
          !block_transition_allowed(A, state_words[std::size_t(i)], state_words[std::size_t(j)]))
        throw ValidationError("markov measure: positive entry on an inadmissible transition");
    }
  for (int i = 0; i < n; ++i)
    if (std::abs(P.row(i).sum() - 1.0) > 1e-9)
      throw ValidationError("markov measure: row " + std::to_string(i + 1) +
                            " does not sum to 1");
  if (p.minCoeff() < -1e-9 || std::abs(p.sum() - 1.0) > 1e-9)
    throw ValidationError("markov measure: stationary vector is not a distribution");
  if (((p.transpose() * P).transpose() - p).lpNorm<Eigen::Infinity>() > 1e-9)
    throw ValidationError("markov measure: vector is not stationary");
  MarkovMeasure m{std::move(state_words), P, p};
  // Exact renormalization so downstream identities hold to near machine
  // precision.
  for (int i = 0; i < n; ++i) m.P.row(i) /= m.P.row(i).sum();
  m.p = m.p.cwiseMax(0.0);
  m.p /= m.p.sum();
  return m;
}

MarkovMeasure make_markov(const TransitionMatrix& A, std::vector<Word> state_words,
                          const Eigen::MatrixXd& P) {
  Eigen::VectorXd p = stationary_vector(P);
  if (p.minCoeff() < -1e-9)
    throw ValidationError("markov measure: stationary vector has negative entries "
                          "(reducible chain?)");
  return make_markov_with_stationary(A, std::move(state_words), P, p);
}

double ks_entropy(const MarkovMeasure& m) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < m.P.rows(); ++i)
    for (Eigen::Index j = 0; j < m.P.cols(); ++j) {
      const double q = m.P(i, j);
      if (q > 0.0) h -= m.p(i) * q * std::log(std::max(q, 1e-300));
    }
  return h;
}

double integrate(const MarkovMeasure& m, const Potential& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.words().size(); ++i)
    s += m.cylinder_probability(f.words()[i]) * f.values()[i];
  return s;
}

FreeEnergyReport free_energy(const MarkovMeasure& m, const Potential& f,
                             double pressure_ref) {
  FreeEnergyReport r;
  r.entropy = ks_entropy(m);
  r.integral = integrate(m, f);
  r.free_energy = r.entropy + r.integral;
  r.pressure_gap = pressure_ref - r.free_energy;
  return r;
}

MarkovMeasure refine(const TransitionMatrix& A, const MarkovMeasure& m) {
  const int mm = int(m.state_words.front().size());
  std::vector<Word> states = admissible_words(A, mm + 1);
  const int n = int(states.size());
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd p(n);
  for (int u = 0; u < n; ++u) {
    const Word& wu = states[std::size_t(u)];
    p(u) = m.cylinder_probability(wu);
    const int tail = m.state_index(Word(wu.begin() + 1, wu.end()));
    for (int v = 0; v < n; ++v) {
      const Word& wv = states[std::size_t(v)];
      if (!block_transition_allowed(A, wu, wv)) continue;
      const int vtail = m.state_index(Word(wv.begin() + 1, wv.end()));
      if (tail < 0 || vtail < 0) continue;
      P(u, v) = m.P(tail, vtail);
    }
  }
  // Rows over states of measure zero may be empty; give them a valid
  // uniform row so the matrix stays stochastic.
  for (int u = 0; u < n; ++u) {
    const double rs = P.row(u).sum();
    if (rs > 0.0) {
      P.row(u) /= rs;
    } else {
      int cnt = 0;
      for (int v = 0; v < n; ++v)
        if (block_transition_allowed(A, states[std::size_t(u)], states[std::size_t(v)])) ++cnt;
      for (int v = 0; v < n; ++v)
        if (block_transition_allowed(A, states[std::size_t(u)], states[std::size_t(v)]))
          P(u, v) = 1.0 / double(cnt);
    }
  }
  const double psum = p.sum();
  if (std::abs(psum - 1.0) > 1e-9)
    throw ValidationError("refine: refined weights do not sum to 1");
  p /= psum;
  return make_markov_with_stationary(A, std::move(states), P, p);
}

MarkovMeasure random_markov(const TransitionMatrix& A, int m, std::uint64_t seed) {
  std::vector<Word> states = admissible_words(A, m);
  const int n = int(states.size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (!block_transition_allowed(A, states[std::size_t(i)], states[std::size_t(j)]))
        continue;
      const double g = -std::log(1.0 - unif(rng));  // Exp(1) => Dirichlet row
      P(i, j) = g;
      rowsum += g;
    }
    P.row(i) /= rowsum;
  }
  return make_markov(A, std::move(states), P);
}

double markov_free_energy_value(const Potential& f, const std::vector<Word>& states,
                                const Eigen::MatrixXd& P) {
  Eigen::VectorXd p = stationary_vector(P);
  p = p.cwiseMax(0.0);
  p /= p.sum();
  MarkovMeasure m{states, P, p};
  return ks_entropy(m) + integrate(m, f);
}

namespace {

struct RestartOutcome {
  Eigen::MatrixXd P;
  double value = 0.0;
};

Eigen::VectorXd project_row(const Eigen::VectorXd& row, const std::vector<bool>& support,
                            double floor) {
  Eigen::Array<bool, Eigen::Dynamic, 1> s(row.size());
  for (Eigen::Index j = 0; j < row.size(); ++j) s(j) = support[std::size_t(j)];
  return project_to_simplex(row, s, floor);
}

Eigen::MatrixXd project_rows(const Eigen::MatrixXd& Q,
                             const std::vector<std::vector<bool>>& support,
                             double floor) {
  Eigen::MatrixXd out = Q;
  for (Eigen::Index i = 0; i < Q.rows(); ++i)
    out.row(i) = project_row(Q.row(i).transpose(), support[std::size_t(i)], floor).transpose();
  return out;
}

RestartOutcome ascend(const Potential& f, const std::vector<Word>& states,
                      const std::vector<std::vector<bool>>& support,
                      Eigen::MatrixXd P, int iters) {
  const double floor = 1e-9;
  const double fd_step = 1e-6;
  const int n = int(states.size());
  P = project_rows(P, support, floor);
  double value = markov_free_energy_value(f, states, P);
  for (int it = 0; it < iters; ++it) {
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (!support[std::size_t(i)][std::size_t(j)]) continue;
        Eigen::MatrixXd cand = P;
        Eigen::VectorXd row = P.row(i).transpose();
        row(j) += fd_step;
        cand.row(i) = project_row(row, support[std::size_t(i)], floor).transpose();
        const double fu = markov_free_energy_value(f, states, cand);
        row(j) -= 2.0 * fd_step;
        cand.row(i) = project_row(row, support[std::size_t(i)], floor).transpose();
        const double fd = markov_free_energy_value(f, states, cand);
        grad(i, j) = (fu - fd) / (2.0 * fd_step);
      }
    double step = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 40; ++bt) {
      const Eigen::MatrixXd cand = project_rows(P + step * grad, support, floor);
      const double cv = markov_free_energy_value(f, states, cand);
      if (cv > value + 1e-15) {
        P = cand;
        value = cv;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return RestartOutcome{P, value};
}

}  // namespace

VariationalResult variational_search(const TransitionMatrix& A, const Potential& f,
                                     int restarts, int iters, std::uint64_t seed,
                                     int threads) {
  if (!aperiodicity_index(A).has_value())
    throw ValidationError("variational_search: matrix is not aperiodic");
  const int m = std::max(f.range() - 1, 1);
  const std::vector<Word> states = admissible_words(A, m);
  const int n = int(states.size());
  std::vector<std::vector<bool>> support(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      support[std::size_t(i)][std::size_t(j)] =
          block_transition_allowed(A, states[std::size_t(i)], states[std::size_t(j)]);

  const double pressure_ref =
      rpf_solve(build_transfer(A, f)).log_lambda;

  const auto uniform_start = [&]() {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      int cnt = 0;
      for (int j = 0; j < n; ++j) cnt += support[std::size_t(i)][std::size_t(j)] ? 1 : 0;
      for (int j = 0; j < n; ++j)
        if (support[std::size_t(i)][std::size_t(j)]) P(i, j) = 1.0 / double(cnt);
    }
    return P;
  };

  if (restarts <= 0) {
    const Eigen::MatrixXd P = uniform_start();
    MarkovMeasure meas = make_markov(A, states, P);
    return VariationalResult{meas, free_energy(meas, f, pressure_ref), -1};
  }

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(restarts));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(restarts));
  const auto run_one = [&](int r) {
    try {
      std::uint64_t s = seed;
      for (int i = 0; i <= r; ++i) (void)splitmix64(s);
      std::mt19937_64 rng(splitmix64(s));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      Eigen::MatrixXd P0 = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (int j = 0; j < n; ++j) {
          if (!support[std::size_t(i)][std::size_t(j)]) continue;
          const double g = -std::log(1.0 - unif(rng));
          P0(i, j) = g;
          rowsum += g;
        }
        P0.row(i) /= rowsum;
      }
      outcomes[std::size_t(r)] = ascend(f, states, support, P0, iters);
    } catch (...) {
      errors[std::size_t(r)] = std::current_exception();
    }
  };

  const int workers = std::max(1, std::min(threads, restarts));
  if (workers == 1) {
    for (int r = 0; r < restarts; ++r) run_one(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          const int r = next.fetch_add(1);
          if (r >= restarts) return;
          run_one(r);
        }
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Deterministic reduction: strictly better value wins, ties keep the
  // lowest restart index.
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (outcomes[std::size_t(r)].value > outcomes[std::size_t(best)].value) best = r;

  MarkovMeasure meas = make_markov(A, states, outcomes[std::size_t(best)].P);
  return VariationalResult{meas, free_energy(meas, f, pressure_ref), best};
}

}  // namespace thermoshift
