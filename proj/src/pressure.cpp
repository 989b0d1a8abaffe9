#include "thermoshift/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "thermoshift/errors.hpp"
#include "thermoshift/numeric.hpp"
#include "thermoshift/transfer.hpp"

namespace thermoshift {

namespace {

constexpr std::uint64_t kWordBudget = 100000000ULL;  // enumeration guard

void check_word_budget(const TransitionMatrix& A, int length) {
  if (word_count(A, length) > kWordBudget)
    throw ValidationError("partition sum would enumerate more than 1e8 words "
                          "(length " + std::to_string(length) + "); lower n_max");
}

struct GroupedSums {
  LogSumExp sup_lse;
  LogSumExp inf_lse;
};

// One lexicographic pass over (enum_len)-words, folding the exact Birkhoff
// value per n_cyl-prefix group. Prefix groups never straddle first letters,
// so per-letter partials merge deterministically in letter order.
GroupedSums grouped_partition(const TransitionMatrix& A, const Potential& f, int n_sum,
                              int n_cyl, int threads) {
  const int k = f.range();
  const int enum_len = std::max(n_cyl, n_sum + k - 1);
  check_word_budget(A, enum_len);

  const int d = A.dim();
  std::vector<GroupedSums> partial(static_cast<std::size_t>(d));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(d));

  const auto run_letter = [&](int letter) {
    try {
      GroupedSums& gs = partial[std::size_t(letter - 1)];
      bool in_group = false;
      Word group_prefix;
      double group_max = 0.0, group_min = 0.0;
      const auto flush = [&]() {
        if (!in_group) return;
        gs.sup_lse.add(group_max);
        gs.inf_lse.add(group_min);
      };
      for_each_admissible_word_from(A, letter, enum_len, [&](const Word& w) {
        const double s = f.birkhoff_value(w, n_sum);
        if (!in_group || !std::equal(group_prefix.begin(), group_prefix.end(), w.begin())) {
          flush();
          group_prefix.assign(w.begin(), w.begin() + n_cyl);
          group_max = s;
          group_min = s;
          in_group = true;
        } else {
          group_max = std::max(group_max, s);
          group_min = std::min(group_min, s);
        }
      });
      flush();
    } catch (...) {
      errors[std::size_t(letter - 1)] = std::current_exception();
    }
  };

  const int workers = std::max(1, std::min(threads, d));
  if (workers == 1) {
    for (int i = 1; i <= d; ++i) run_letter(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{1};
    for (int t = 0; t < workers; ++t)
      pool.emplace_back([&]() {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i > d) return;
          run_letter(i);
        }
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  GroupedSums total;
  for (const GroupedSums& gs : partial) {
    total.sup_lse.merge(gs.sup_lse);
    total.inf_lse.merge(gs.inf_lse);
  }
  return total;
}

}  // namespace

double log_partition_sup(const TransitionMatrix& A, const Potential& f, int n_sum,
                         int n_cyl, int threads) {
  if (n_sum < 1 || n_cyl < 1)
    throw ValidationError("partition function: lengths must be >= 1");
  return grouped_partition(A, f, n_sum, n_cyl, threads).sup_lse.log_sum();
}

double log_partition_inf(const TransitionMatrix& A, const Potential& f, int n_sum,
                         int n_cyl, int threads) {
  if (n_sum < 1 || n_cyl < 1)
    throw ValidationError("partition function: lengths must be >= 1");
  return grouped_partition(A, f, n_sum, n_cyl, threads).inf_lse.log_sum();
}

double partition_function(const TransitionMatrix& A, const Potential& f, int n,
                          int threads) {
  if (n < 1) throw ValidationError("partition function: n must be >= 1");
  return grouped_partition(A, f, n, n, threads).sup_lse.sum();
}

PressureEstimate pressure_estimate(const TransitionMatrix& A, const Potential& f,
                                   int n_max, int threads) {
  if (n_max < 2) throw ValidationError("pressure_estimate: n_max must be >= 2");
  const double inf = std::numeric_limits<double>::infinity();
  const std::optional<int> aper = aperiodicity_index(A);

  PressureEstimate est;
  est.n_max = n_max;
  double lower = -inf, upper = inf;

  // Static bounds min f + log r(A) <= p <= max f + log r(A).
  try {
    const double log_r = std::log(nonnegative_radius(A.dense()));
    lower = f.min_value() + log_r;
    upper = f.max_value() + log_r;
  } catch (const ConvergenceError&) {
    // keep infinite bounds; the Fekete terms below still apply
  }

  // Collatz-Wielandt ratios of the exact cylinder sums L^n 1: for a
  // primitive transfer matrix, min and max of (Mv)/v enclose lambda for
  // every positive v, and tighten geometrically along v = M^n 1.
  std::optional<TransferOperator> L;
  Eigen::VectorXd w;
  if (aper) {
    L = build_transfer(A, f);
    w = Eigen::VectorXd::Ones(L->M.rows());
  }

  std::vector<double> log_inf_sums;  // index n-1 -> log inf-partition sum
  const double pad = 1e-12;

  for (int n = 1; n <= n_max; ++n) {
    const GroupedSums gs = grouped_partition(A, f, n, n, threads);
    const double log_sup = gs.sup_lse.log_sum();
    const double log_inf = gs.inf_lse.log_sum();
    log_inf_sums.push_back(log_inf);

    // Subadditive sup sums: every (1/n) log Z_n is an upper bound.
    upper = std::min(upper, log_sup / double(n));

    if (aper) {
      // Superadditivity with an aperiodicity gap: any two words glue after
      // a connecting word of N-1 letters, so for n > c = N-1,
      // p >= (log Zinf_{n-c} + c min f) / n.
      const int c = *aper - 1;
      if (n > c) {
        const double cand =
            (log_inf_sums[std::size_t(n - c - 1)] + double(c) * f.min_value()) / double(n);
        lower = std::max(lower, cand);
      }
      const Eigen::VectorXd Mw = L->M * w;
      const Eigen::ArrayXd ratio = Mw.array() / w.array();
      if ((w.array() > 0.0).all()) {
        upper = std::min(upper, std::log(ratio.maxCoeff()));
        lower = std::max(lower, std::log(ratio.minCoeff()));
      }
      w = Mw / Mw.maxCoeff();
    }

    est.per_n.push_back(PressureEstimate::Row{
        n, log_sup / double(n), lower - pad, upper + pad});
  }

  est.lower = lower - pad;
  est.upper = upper + pad;
  if (aper) est.transfer_value = rpf_solve(*L).log_lambda;
  return est;
}

std::pair<TransitionMatrix, Potential> power_system(const TransitionMatrix& A,
                                                    const Potential& f, int r) {
  if (r < 1) throw ValidationError("power_system: r must be >= 1");
  const int k = f.range();
  if (k - 1 > r)
    throw ValidationError("power_system: potential range exceeds the block length");
  const std::vector<Word> blocks = admissible_words(A, r);
  const int m = int(blocks.size());
  std::vector<std::vector<int>> raw(std::size_t(m), std::vector<int>(std::size_t(m), 0));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      raw[std::size_t(a)][std::size_t(b)] =
          A.allows(blocks[std::size_t(a)].back(), blocks[std::size_t(b)].front()) ? 1 : 0;
  TransitionMatrix Ar = TransitionMatrix::validate(raw);

  std::map<Word, double> table;
  if (k == 1) {
    for (int a = 0; a < m; ++a)
      table[{a + 1}] = f.birkhoff_value(blocks[std::size_t(a)], r);
  } else {
    // S_r f looks r + k - 1 letters ahead: one block plus the head of the
    // next, a range-2 potential on the block alphabet.
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        if (!raw[std::size_t(a)][std::size_t(b)]) continue;
        Word joint = blocks[std::size_t(a)];
        joint.insert(joint.end(), blocks[std::size_t(b)].begin(),
                     blocks[std::size_t(b)].begin() + (k - 1));
        table[{a + 1, b + 1}] = f.birkhoff_value(joint, r);
      }
  }
  Potential fr(Ar, k == 1 ? 1 : 2, table);
  return {std::move(Ar), std::move(fr)};
}

namespace {

double transfer_pressure(const TransitionMatrix& A, const Potential& f) {
  return rpf_solve(build_transfer(A, f)).log_lambda;
}

}  // namespace

std::vector<LawCheck> pressure_law_suite(const TransitionMatrix& A, const Potential& f,
                                         const Potential& g, std::uint64_t seed) {
  if (!aperiodicity_index(A).has_value())
    throw ValidationError("pressure_law_suite: matrix is not aperiodic");
  const double tol = 1e-8;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.25, 2.0);
  const double shift = unif(rng);
  const double cup = 1.0 + unif(rng);    // >= 1
  const double cdown = 0.5 * unif(rng);  // <= 1

  const double pf = transfer_pressure(A, f);
  const double pg = transfer_pressure(A, g);
  std::vector<LawCheck> out;

  {  // monotonicity against the pointwise max
    const double pmax = transfer_pressure(A, pointwise_max(f, g));
    out.push_back({"monotonicity", pf, pmax, tol, pf <= pmax + tol});
    out.push_back({"monotonicity-g", pg, pmax, tol, pg <= pmax + tol});
  }
  {  // scalar additivity
    const double lhs = transfer_pressure(A, affine(f, 1.0, shift));
    out.push_back({"scalar-additivity", lhs, pf + shift, tol,
                   std::abs(lhs - (pf + shift)) <= tol});
  }
  {  // Lipschitz in the sup norm
    const double lhs = std::abs(pf - pg);
    const double rhs = sup_distance(f, g);
    out.push_back({"lipschitz", lhs, rhs, tol, lhs <= rhs + tol});
  }
  {  // one-sided scaling
    const double pcu = transfer_pressure(A, affine(f, cup, 0.0));
    out.push_back({"scaling-up", pcu, cup * pf, tol, pcu <= cup * pf + tol});
    const double pcd = transfer_pressure(A, affine(f, cdown, 0.0));
    out.push_back({"scaling-down", pcd, cdown * pf, tol, pcd >= cdown * pf - tol});
  }
  {  // |P(f)| <= P(|f|)
    const double pabs = transfer_pressure(A, pointwise_abs(f));
    out.push_back({"abs-bound", std::abs(pf), pabs, tol, std::abs(pf) <= pabs + tol});
  }
  {  // min f + log r(A) <= P(f) <= max f + log r(A)
    const double log_r = std::log(spectral_radius(A).radius);
    out.push_back({"sandwich-lower", f.min_value() + log_r, pf, tol,
                   f.min_value() + log_r <= pf + tol});
    out.push_back({"sandwich-upper", pf, f.max_value() + log_r, tol,
                   pf <= f.max_value() + log_r + tol});
  }
  {  // coboundary invariance
    const double lhs = transfer_pressure(A, coboundary_perturb(f, g));
    out.push_back({"coboundary", lhs, pf, tol, std::abs(lhs - pf) <= tol});
  }
  for (int r = 2; r <= 3; ++r) {  // power law
    const auto [Ar, fr] = power_system(A, f, r);
    const double lhs = transfer_pressure(Ar, fr);
    out.push_back({"power-law-r" + std::to_string(r), lhs, double(r) * pf, tol,
                   std::abs(lhs - double(r) * pf) <= tol});
  }
  return out;
}

}  // namespace thermoshift
