#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "thermoshift/errors.hpp"
#include "thermoshift/io.hpp"

using namespace thermoshift;
using nlohmann::json;

TEST_CASE("matrix text format") {
  std::istringstream ok("2\n1 1\n1 0\n");
  const auto A = read_matrix(ok);
  CHECK(A == tsx::golden());

  std::istringstream trailing("2\n1 1 \t\n1 0\n");
  CHECK(read_matrix(trailing) == tsx::golden());

  std::istringstream bad_entry("2\n1 x\n1 0\n");
  CHECK_THROWS_AS(read_matrix(bad_entry), ParseError);

  std::istringstream short_row("2\n1\n1 0\n");
  CHECK_THROWS_WITH_AS(read_matrix(short_row), doctest::Contains("expected 2"), ParseError);

  std::istringstream zero_row("2\n1 1\n0 0\n");
  CHECK_THROWS_AS(read_matrix(zero_row), ValidationError);
}

TEST_CASE("graph text format") {
  std::istringstream ok("vertices 2\n1 1 b\n1 2 a\n2 1 a\n");
  const auto g = read_graph(ok);
  CHECK(g.vertices == 2);
  CHECK(g.edges.size() == 3);
  CHECK(g.edges[0].label == "b");

  std::istringstream bad("2\n1 1 b\n");
  CHECK_THROWS_AS(read_graph(bad), ParseError);
}

TEST_CASE("potential json round trip") {
  const auto A = tsx::golden();
  const auto f = tsx::random_potential(A, 2, 5);
  const auto j = potential_to_json(f);
  const auto back = potential_from_json(A, j);
  CHECK(back.range() == f.range());
  CHECK(back.values() == f.values());

  json missing = {{"d", 2}, {"k", 1}, {"values", {{"1", 0.0}}}};
  CHECK_THROWS_WITH_AS(potential_from_json(A, missing),
                       doctest::Contains("missing value for admissible word '2'"),
                       ValidationError);

  json inadmissible = {{"d", 2},
                       {"k", 2},
                       {"values", {{"11", 0.0}, {"12", 0.0}, {"21", 0.0}, {"22", 0.0}}}};
  CHECK_THROWS_WITH_AS(potential_from_json(A, inadmissible),
                       doctest::Contains("'22'"), ValidationError);

  json wrong_d = {{"d", 3}, {"k", 1}, {"values", {{"1", 0.0}}}};
  CHECK_THROWS_AS(potential_from_json(A, wrong_d), ParseError);
}

TEST_CASE("report json round trips") {
  const auto A = tsx::golden();
  const auto f = tsx::random_potential(A, 1, 6);
  const auto L = build_transfer(A, f);
  const auto rpf = rpf_solve(L);

  const auto jr = to_json(rpf);
  const auto rpf2 = rpf_from_json(jr);
  CHECK(rpf2.lambda == rpf.lambda);
  CHECK(rpf2.log_lambda == rpf.log_lambda);
  CHECK(rpf2.h == rpf.h);
  CHECK(rpf2.mu == rpf.mu);
  CHECK(rpf2.iterations == rpf.iterations);
  CHECK(to_json(rpf2).dump() == jr.dump());

  const auto est = pressure_estimate(A, f, 8);
  const auto je = to_json(est);
  const auto est2 = pressure_estimate_from_json(je);
  CHECK(to_json(est2).dump() == je.dump());
  CHECK(est2.per_n.size() == est.per_n.size());
  CHECK(est2.lower == est.lower);
  CHECK(est2.transfer_value == est.transfer_value);

  const auto m = equilibrium_markov(L, rpf);
  const auto jm = to_json(m);
  const auto m2 = markov_from_json(A, jm);
  CHECK(to_json(m2).dump() == jm.dump());

  const auto kms = kms_analyze(A, f);
  const auto jk = to_json(kms);
  const auto kms2 = kms_from_json(jk);
  CHECK(to_json(kms2).dump() == jk.dump());
  CHECK(kms2.unique_state == kms.unique_state);

  const auto fe = free_energy(m, f, rpf.log_lambda);
  CHECK(to_json(free_energy_from_json(to_json(fe))).dump() == to_json(fe).dump());

  const auto spec = spectral_radius(A);
  CHECK(to_json(spectral_report_from_json(to_json(spec))).dump() == to_json(spec).dump());
  const auto perm_spec = spectral_radius(tsx::perm2());
  CHECK(to_json(spectral_report_from_json(to_json(perm_spec))).dump() ==
        to_json(perm_spec).dump());

  const auto laws = pressure_law_suite(A, f, affine(f, 1.0, 0.25), 9);
  CHECK(to_json(law_checks_from_json(to_json(laws))).dump() == to_json(laws).dump());
}

TEST_CASE("determinism of serialized reports") {
  const auto A = tsx::golden();
  const auto f = tsx::random_potential(A, 1, 7);
  const auto est1 = pressure_estimate(A, f, 10, 1);
  const auto est2 = pressure_estimate(A, f, 10, 4);
  CHECK(to_json(est1).dump() == to_json(est2).dump());
}

TEST_CASE("bimodule json round trips") {
  const auto sys = make_bimodule_system(MultiMatrixAlgebra{{2, 1}},
                                        {{{1, 0}, {0, 1}}, {{0, 2}, {0, 1}}});
  const auto js = system_to_json(sys);
  const auto sys2 = system_from_json(js);
  CHECK(system_to_json(sys2).dump() == js.dump());

  const auto id = DPotential::identity(sys);
  const auto promoted = promote(sys, id);
  const auto jd = dpotential_to_json(promoted);
  const auto back = dpotential_from_json(sys2, jd);
  CHECK(back.range == promoted.range);
  CHECK(dpotential_to_json(back).dump() == jd.dump());

  json bad = {{"range", 0},
              {"components",
               {{"", {{"blocks", json::array({json::array({json::array(
                          {json::array({1.0, 0.0}), json::array({0.5, 0.0})})})})}}}}}};
  CHECK_THROWS_AS(dpotential_from_json(sys, bad), ValidationError);
}

TEST_CASE("csv emission") {
  const auto A = tsx::golden();
  const auto est = pressure_estimate(A, Potential::constant(A, 0.0), 4);
  const auto csv = pressure_csv(est);
  CHECK(csv.substr(0, 24) == "n,estimate,lower,upper\n1");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  PressureEstimate empty;
  CHECK(pressure_csv(empty) == "n,estimate,lower,upper\n");

  CHECK(profile_csv({0.5, 0.25}) == "n,e_n\n1,0.5\n2,0.25\n");
  CHECK(format_17g(1.0 / 3.0) == "0.33333333333333331");
}
