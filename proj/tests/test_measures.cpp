#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "thermoshift/errors.hpp"
#include "thermoshift/measures.hpp"
#include "thermoshift/transfer.hpp"

using namespace thermoshift;

namespace {

MarkovMeasure bernoulli(double p1) {
  Eigen::MatrixXd P(2, 2);
  P << p1, 1 - p1, p1, 1 - p1;
  return make_markov(tsx::full2(), {{1}, {2}}, P);
}

MarkovMeasure parry_golden() {
  const auto A = tsx::golden();
  const auto L = build_transfer(A, Potential::constant(A, 0.0));
  return equilibrium_markov(L, rpf_solve(L));
}

}  // namespace

TEST_CASE("markov measure validation") {
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.5, 0.1, 0.9;
  CHECK_THROWS_WITH_AS(make_markov(tsx::golden(), {{1}, {2}}, P),
                       doctest::Contains("inadmissible transition"), ValidationError);

  Eigen::MatrixXd bad(2, 2);
  bad << 0.5, 0.4, 1.0, 0.0;
  CHECK_THROWS_WITH_AS(make_markov(tsx::golden(), {{1}, {2}}, bad),
                       doctest::Contains("sum to 1"), ValidationError);

  Eigen::MatrixXd ok(2, 2);
  ok << 0.5, 0.5, 1.0, 0.0;
  const auto m = make_markov(tsx::golden(), {{1}, {2}}, ok);
  CHECK(m.p(0) == doctest::Approx(2.0 / 3.0));
  CHECK(m.p(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("ks entropy") {
  CHECK(ks_entropy(bernoulli(0.5)) == doctest::Approx(tsx::kLog2).epsilon(1e-12));
  CHECK(ks_entropy(parry_golden()) == doctest::Approx(tsx::kLogPhi).epsilon(1e-9));

  // Deterministic cycle: permutation transition matrix, zero entropy.
  Eigen::MatrixXd P(2, 2);
  P << 0.0, 1.0, 1.0, 0.0;
  const auto cyc = make_markov(tsx::perm2(), {{1}, {2}}, P);
  CHECK(ks_entropy(cyc) == 0.0);
}

TEST_CASE("integration") {
  const auto c = Potential::constant(tsx::full2(), 2.5);
  CHECK(integrate(bernoulli(0.5), c) == doctest::Approx(2.5).epsilon(1e-12));

  const auto f = Potential(tsx::full2(), 1, {{{1}, 0.0}, {{2}, tsx::kLog2}});
  CHECK(integrate(bernoulli(1.0 / 3.0), f) ==
        doctest::Approx((2.0 / 3.0) * tsx::kLog2).epsilon(1e-12));

  // Indicator of the cylinder [2] under the Parry measure.
  const auto ind = Potential(tsx::golden(), 1, {{{1}, 0.0}, {{2}, 1.0}});
  const double phi = tsx::kPhi;
  CHECK(integrate(parry_golden(), ind) ==
        doctest::Approx(1.0 / (1 + phi * phi)).epsilon(1e-9));

  // Range-k integral through sliding windows equals the cylinder sums.
  const auto g = tsx::random_potential(tsx::golden(), 3, 17);
  const auto m = parry_golden();
  double direct = 0.0;
  for (std::size_t i = 0; i < g.words().size(); ++i)
    direct += m.cylinder_probability(g.words()[i]) * g.values()[i];
  CHECK(integrate(m, g) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("free energy of the equilibrium measure attains the pressure") {
  const auto A = tsx::full2();
  const auto f = Potential(A, 1, {{{1}, 0.0}, {{2}, tsx::kLog2}});
  const auto L = build_transfer(A, f);
  const auto rpf = rpf_solve(L);
  const auto rep = free_energy(equilibrium_markov(L, rpf), f, rpf.log_lambda);
  CHECK(rep.free_energy == doctest::Approx(tsx::kLog3).epsilon(1e-10));
  CHECK(std::abs(rep.pressure_gap) <= 1e-8);
}

TEST_CASE("variational inequality over random measures") {
  const auto A = tsx::golden();
  const auto f = tsx::random_potential(A, 1, 31);
  const double p = rpf_solve(build_transfer(A, f)).log_lambda;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto m = random_markov(A, 1, seed);
    const auto rep = free_energy(m, f, p);
    CHECK(rep.pressure_gap >= -1e-10);
  }
}

TEST_CASE("refinement to longer block states preserves entropy and weights") {
  const auto m = parry_golden();
  const auto m2 = refine(tsx::golden(), m);
  CHECK(m2.state_words.size() == 3);
  CHECK(ks_entropy(m2) == doctest::Approx(ks_entropy(m)).epsilon(1e-10));
  for (const Word& w : admissible_words(tsx::golden(), 4))
    CHECK(m2.cylinder_probability(w) ==
          doctest::Approx(m.cylinder_probability(w)).epsilon(1e-12));

  const auto m3 = refine(tsx::golden(), m2);
  CHECK(ks_entropy(m3) == doctest::Approx(ks_entropy(m)).epsilon(1e-10));
}

TEST_CASE("variational search reaches the pressure") {
  const auto A = tsx::golden();
  const auto zero = Potential::constant(A, 0.0);
  const auto res = variational_search(A, zero, 6, 300, 42);
  CHECK(std::abs(res.report.pressure_gap) <= 1e-6);
  CHECK(res.report.free_energy == doctest::Approx(tsx::kLogPhi).epsilon(1e-6));
  // The maximizer is the Parry chain.
  CHECK(res.measure.P(0, 0) == doctest::Approx(1.0 / tsx::kPhi).epsilon(1e-3));

  const auto B = tsx::full2();
  const auto f = Potential(B, 1, {{{1}, 0.0}, {{2}, tsx::kLog2}});
  const auto res2 = variational_search(B, f, 6, 300, 43);
  CHECK(std::abs(res2.report.pressure_gap) <= 1e-6);
  CHECK(res2.measure.P(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("variational search corner cases") {
  const auto A = tsx::golden();
  const auto zero = Potential::constant(A, 0.0);
  const auto res = variational_search(A, zero, 0, 100, 1);
  CHECK(res.best_restart == -1);
  CHECK(res.report.pressure_gap >= -1e-10);

  CHECK_THROWS_AS(variational_search(tsx::perm2(),
                                     Potential::constant(tsx::perm2(), 0.0), 2, 10, 1),
                  ValidationError);
}

TEST_CASE("variational search is deterministic and thread-stable") {
  const auto A = tsx::golden();
  const auto f = tsx::random_potential(A, 1, 8);
  const auto a = variational_search(A, f, 4, 120, 7, 1);
  const auto b = variational_search(A, f, 4, 120, 7, 4);
  CHECK(a.report.free_energy == b.report.free_energy);
  CHECK(a.best_restart == b.best_restart);
}
