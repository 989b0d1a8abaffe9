#include "thermoshift/transfer.hpp"

#include <algorithm>
#include <cmath>

#include "thermoshift/errors.hpp"
#include "thermoshift/numeric.hpp"

namespace thermoshift {

int TransferOperator::state_index(const Word& w) const {
  const auto it = std::lower_bound(states.begin(), states.end(), w);
  if (it == states.end() || *it != w) return -1;
  return int(it - states.begin());
}

TransferOperator build_transfer(const TransitionMatrix& A, const Potential& f) {
  if (!(f.matrix() == A))
    throw ValidationError("build_transfer: potential is defined over a different matrix");
  const int k = f.range();
  const int m = std::max(k - 1, 1);
  std::vector<Word> states = admissible_words(A, m);
  const int ns = int(states.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ns, ns);
  for (int si = 0; si < ns; ++si) {
    const Word& s = states[std::size_t(si)];
    for (int ti = 0; ti < ns; ++ti) {
      const Word& t = states[std::size_t(ti)];
      // t must be s shifted right with the letter t[0] prepended.
      bool overlap = true;
      for (int i = 0; i + 1 < m; ++i)
        overlap = overlap && t[std::size_t(i + 1)] == s[std::size_t(i)];
      if (!overlap) continue;
      if (!A.allows(t[0], s[0])) continue;
      if (k == 1) {
        // States are single letters; the prepended letter is t itself.
        M(si, ti) = std::exp(f.value(t));
      } else {
        Word w;
        w.reserve(std::size_t(k));
        w.push_back(t[0]);
        w.insert(w.end(), s.begin(), s.end());
        M(si, ti) = std::exp(f.value(w));
      }
    }
  }
  return TransferOperator{A, f, std::move(states), std::move(M)};
}

RpfData rpf_solve(const TransferOperator& L, double tol, int max_iter) {
  if (!aperiodicity_index(L.A).has_value())
    throw ValidationError("rpf_solve: matrix is not aperiodic");
  const Eigen::Index n = L.M.rows();
  Eigen::VectorXd h = Eigen::VectorXd::Constant(n, 1.0);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, 1.0 / double(n));
  RpfData out;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd Mh = L.M * h;
    Eigen::VectorXd Mtmu = L.M.transpose() * mu;
    const double lambda = mu.dot(Mh) / mu.dot(h);
    const double r1 = (Mh - lambda * h).lpNorm<Eigen::Infinity>() /
                      h.lpNorm<Eigen::Infinity>();
    const double r2 = (Mtmu - lambda * mu).lpNorm<1>() / mu.lpNorm<1>();
    out.lambda = lambda;
    out.iterations = it;
    out.residuals = {r1, r2};
    h = Mh / Mh.lpNorm<1>();
    mu = Mtmu / Mtmu.lpNorm<1>();
    if (r1 <= tol && r2 <= tol) {
      out.log_lambda = std::log(lambda);
      mu /= mu.sum();
      h /= mu.dot(h);
      out.h = h;
      out.mu = mu;
      out.mu_h = mu.dot(h);
      return out;
    }
  }
  throw ConvergenceError("rpf_solve: no convergence after " + std::to_string(max_iter) +
                         " iterations (residuals " + std::to_string(out.residuals[0]) +
                         ", " + std::to_string(out.residuals[1]) + ")");
}

std::vector<double> convergence_profile(const TransferOperator& L, const RpfData& rpf,
                                        const Eigen::VectorXd& f0, int n_max) {
  if (f0.size() != L.M.rows())
    throw ValidationError("convergence_profile: state-vector size mismatch");
  const double c = rpf.mu.dot(f0) / rpf.mu_h;
  std::vector<double> e;
  e.reserve(std::size_t(n_max));
  Eigen::VectorXd w = f0;
  for (int n = 1; n <= n_max; ++n) {
    w = (L.M * w) / rpf.lambda;
    e.push_back((w - c * rpf.h).lpNorm<Eigen::Infinity>());
  }
  return e;
}

MarkovMeasure equilibrium_markov(const TransferOperator& L, const RpfData& rpf) {
  // The forward weight of s -> s[1:]j is M(s[1:]j, s) = e^{f(s j)}; the
  // eigenmeasure vector is the right Perron vector of that forward matrix,
  // so it normalizes the rows. The stationary weights are mu .* h, the
  // state-level equilibrium measure.
  const Eigen::Index n = L.M.rows();
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index s = 0; s < n; ++s)
    for (Eigen::Index t = 0; t < n; ++t)
      P(s, t) = L.M(t, s) * rpf.mu(t) / (rpf.lambda * rpf.mu(s));
  Eigen::VectorXd p = rpf.mu.cwiseProduct(rpf.h) / rpf.mu.dot(rpf.h);
  MarkovMeasure m = make_markov_with_stationary(L.A, L.states, P, p);
  for (Eigen::Index s = 0; s < n; ++s) {
    if (std::abs(m.P.row(s).sum() - 1.0) > 1e-12)
      throw ConvergenceError("equilibrium_markov: row sums off by more than 1e-12");
  }
  if (((m.p.transpose() * m.P).transpose() - m.p).lpNorm<Eigen::Infinity>() > 1e-12)
    throw ConvergenceError("equilibrium_markov: stationarity off by more than 1e-12");
  return m;
}

std::map<Word, std::pair<double, double>> cylinder_weights(const TransferOperator& L,
                                                           const RpfData& rpf, int m_out) {
  if (m_out < 1) throw ValidationError("cylinder_weights: m_out must be >= 1");
  const int m = int(L.states.empty() ? 0 : L.states.front().size());
  const int k = L.f.range();

  // State-level eigenmeasure weights, then extend by prepending letters:
  // mu([i w]) = e^{f((iw) k-prefix)} mu([w]) / lambda.
  std::map<Word, double> mu_w;
  for (std::size_t s = 0; s < L.states.size(); ++s) mu_w[L.states[s]] = rpf.mu(Eigen::Index(s));

  int len = m;
  while (len < m_out) {
    std::map<Word, double> next;
    for (const auto& [w, wt] : mu_w) {
      for (int i = 1; i <= L.A.dim(); ++i) {
        if (!L.A.allows(i, w[0])) continue;
        Word iw;
        iw.reserve(w.size() + 1);
        iw.push_back(i);
        iw.insert(iw.end(), w.begin(), w.end());
        const Word prefix(iw.begin(), iw.begin() + k);
        next[iw] = std::exp(L.f.value(prefix)) * wt / rpf.lambda;
      }
    }
    mu_w = std::move(next);
    ++len;
  }

  std::map<Word, std::pair<double, double>> out;
  if (m_out >= m) {
    for (const auto& [w, wt] : mu_w) {
      const Word head(w.begin(), w.begin() + m);
      const int s = L.state_index(head);
      out[w] = {wt, wt * rpf.h(s) / rpf.mu_h};
    }
  } else {
    // Aggregate the state-level weights over shorter prefixes.
    for (std::size_t s = 0; s < L.states.size(); ++s) {
      const Word& w = L.states[s];
      const Word head(w.begin(), w.begin() + m_out);
      const double muv = rpf.mu(Eigen::Index(s));
      const double nuv = muv * rpf.h(Eigen::Index(s)) / rpf.mu_h;
      auto& slot = out[head];
      slot.first += muv;
      slot.second += nuv;
    }
  }
  return out;
}

}  // namespace thermoshift
