#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "thermoshift/errors.hpp"
#include "thermoshift/kms.hpp"

using namespace thermoshift;

TEST_CASE("kms report on the golden mean at zero potential") {
  const auto A = tsx::golden();
  const auto rep = kms_analyze(A, Potential::constant(A, 0.0));
  CHECK(rep.beta == doctest::Approx(tsx::kLogPhi).epsilon(1e-10));
  CHECK(rep.lower_bound == doctest::Approx(tsx::kLogPhi).epsilon(1e-10));
  CHECK(rep.upper_bound == doctest::Approx(tsx::kLogPhi).epsilon(1e-10));
  CHECK(rep.var0 == 0.0);
  CHECK(rep.unique_state);
  CHECK(rep.holder_ok);
  CHECK(rep.warning.empty());
}

TEST_CASE("kms boundary case: var0 equals log r") {
  const auto A = tsx::full2();
  const auto f = Potential(A, 1, {{{1}, 0.0}, {{2}, tsx::kLog2}});
  const auto rep = kms_analyze(A, f);
  CHECK(rep.beta == doctest::Approx(tsx::kLog3).epsilon(1e-10));
  CHECK(rep.lower_bound == doctest::Approx(tsx::kLog2).epsilon(1e-12));
  CHECK(rep.upper_bound == doctest::Approx(2.0 * tsx::kLog2).epsilon(1e-12));
  CHECK(rep.var0 == doctest::Approx(tsx::kLog2));
  CHECK_FALSE(rep.unique_state);  // strict inequality fails
  CHECK_FALSE(rep.warning.empty());
}

TEST_CASE("kms with small variation is unique") {
  const auto A = tsx::full2();
  const auto f = Potential(A, 1, {{{1}, 0.0}, {{2}, 0.1}});
  const auto rep = kms_analyze(A, f);
  CHECK(rep.beta == doctest::Approx(std::log(1.0 + std::exp(0.1))).epsilon(1e-10));
  CHECK(rep.unique_state);
  CHECK(rep.warning.empty());
}

TEST_CASE("uniqueness is monotone under shrinking the potential") {
  const auto A = tsx::golden();
  const auto f = tsx::random_potential(A, 1, 5, -0.2, 0.2);
  const auto base = kms_analyze(A, f);
  if (base.unique_state) {
    for (double c : {0.75, 0.5, 0.25}) {
      const auto rep = kms_analyze(A, affine(f, c, 0.0));
      CHECK(rep.unique_state);
    }
  }
}

TEST_CASE("beta sits inside the eigenvalue bounds for random potentials") {
  std::uint64_t seed = 100;
  for (const auto& A : tsx::aperiodic_five()) {
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
      const auto f = tsx::random_potential(A, 2, seed++);
      const auto rep = kms_analyze(A, f);
      CHECK(rep.beta >= rep.lower_bound - 1e-9);
      CHECK(rep.beta <= rep.upper_bound + 1e-9);
      CHECK(rep.holder_ok);
    }
  }
}

TEST_CASE("kms requires aperiodicity") {
  const auto perm = tsx::perm2();
  CHECK_THROWS_AS(kms_analyze(perm, Potential::constant(perm, 0.0)), ValidationError);
}

TEST_CASE("scaling identity") {
  const auto A = tsx::golden();
  const auto L = build_transfer(A, Potential::constant(A, 0.0));
  const auto rpf = rpf_solve(L);
  CHECK(scaling_identity_check(L, rpf, 100, 2024) <= 1e-10);

  // Constants hit the eigen-relation exactly.
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(L.M.rows());
  CHECK(rpf.mu.dot(L.M * ones) == doctest::Approx(rpf.lambda).epsilon(1e-12));
  CHECK(rpf.mu.dot(L.M * rpf.h) ==
        doctest::Approx(rpf.lambda * rpf.mu.dot(rpf.h)).epsilon(1e-12));
}

TEST_CASE("equilibrium restriction") {
  const auto A = tsx::golden();
  const auto L = build_transfer(A, Potential::constant(A, 0.0));
  const auto rpf = rpf_solve(L);

  const auto nu1 = equilibrium_restriction(L, rpf, 1);
  const double phi = tsx::kPhi;
  CHECK(nu1.at(Word{1}) == doctest::Approx(phi * phi / (1 + phi * phi)).epsilon(1e-10));
  CHECK(nu1.at(Word{2}) == doctest::Approx(1.0 / (1 + phi * phi)).epsilon(1e-10));

  // Strict positivity on admissible cylinders, absence of inadmissible ones.
  for (int m = 1; m <= 8; ++m) {
    const auto nu = equilibrium_restriction(L, rpf, m);
    CHECK(nu.size() == word_count(A, m));
    for (const auto& [w, x] : nu) {
      CHECK(admissible(A, w));
      CHECK(x > 0.0);
    }
  }

  // Shift invariance: prepend-sums reproduce the shorter cylinder weights.
  for (int m = 1; m <= 8; ++m) {
    const auto nu = equilibrium_restriction(L, rpf, m);
    const auto nu1p = equilibrium_restriction(L, rpf, m + 1);
    for (const auto& [w, x] : nu) {
      double prepend_sum = 0.0;
      for (int i = 1; i <= A.dim(); ++i) {
        Word iw;
        iw.push_back(i);
        iw.insert(iw.end(), w.begin(), w.end());
        const auto it = nu1p.find(iw);
        if (it != nu1p.end()) prepend_sum += it->second;
      }
      CHECK(prepend_sum == doctest::Approx(x).epsilon(1e-12));
    }
  }
}
