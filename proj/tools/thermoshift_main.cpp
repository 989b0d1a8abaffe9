// Batch front end: one subcommand per run, reports to stdout or --out.
// Exit codes: 0 success, 1 invalid input, 2 convergence failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "thermoshift/errors.hpp"
#include "thermoshift/io.hpp"
#include "thermoshift/kms.hpp"
#include "thermoshift/measures.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/transfer.hpp"

namespace ts = thermoshift;
using nlohmann::json;

namespace {

int log_level() {
  const char* env = std::getenv("THERMOSHIFT_LOG");
  if (!env) return 0;
  const std::string v = env;
  if (v == "debug") return 2;
  if (v == "info") return 1;
  return 0;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[thermoshift] " << msg << "\n";
}

struct CommonOpts {
  std::string matrix_path;
  std::string potential_path;
  std::string system_path;
  std::string out_path;
  std::string format = "json";
  int n_max = 20;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = all cores
};

int effective_threads(const CommonOpts& o) {
  if (o.threads > 0) return o.threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(o.out_path);
  if (!out) throw ts::ParseError("cannot open output file '" + o.out_path + "'");
  out << text;
}

ts::Potential load_potential(const CommonOpts& o, const ts::TransitionMatrix& A) {
  if (o.potential_path.empty()) return ts::Potential::constant(A, 0.0);
  return ts::read_potential_file(A, o.potential_path);
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_matrix) {
  if (needs_matrix)
    cmd->add_option("--matrix", o.matrix_path, "transition matrix file")->required();
  cmd->add_option("--potential", o.potential_path, "potential JSON file");
  cmd->add_option("--n-max", o.n_max, "partition sum depth")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "solver tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  cmd->add_option("--format", o.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", o.out_path, "output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermodynamic formalism for Markov subshifts"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string potential2_path;
  int profile_n = 0;
  int restarts = 16;
  int iters = 400;
  int m_out = 0;

  auto* c_entropy = app.add_subcommand("entropy", "log r(A) and the Perron data");
  add_common(c_entropy, o, true);

  auto* c_pressure = app.add_subcommand("pressure", "pressure bracket from partition sums");
  add_common(c_pressure, o, true);

  auto* c_rpf = app.add_subcommand("rpf", "transfer-operator eigendata");
  add_common(c_rpf, o, true);
  c_rpf->add_option("--profile", profile_n, "also emit the n-step convergence profile");

  auto* c_equilibrium = app.add_subcommand("equilibrium", "equilibrium Markov measure");
  add_common(c_equilibrium, o, true);

  auto* c_variational =
      app.add_subcommand("variational", "variational search over Markov measures");
  add_common(c_variational, o, true);
  c_variational->add_option("--restarts", restarts, "random restarts");
  c_variational->add_option("--iters", iters, "ascent iterations per restart");

  auto* c_kms = app.add_subcommand("kms", "inverse temperature and uniqueness report");
  add_common(c_kms, o, true);

  auto* c_bimodule =
      app.add_subcommand("bimodule-pressure", "pressure formula over a coefficient algebra");
  add_common(c_bimodule, o, false);
  c_bimodule->add_option("--system", o.system_path, "bimodule system JSON file")->required();
  c_bimodule->add_option("--d-potential", o.potential_path, "diagonal potential JSON file")
      ->required();

  auto* c_laws = app.add_subcommand("laws", "pressure law suite on transfer values");
  add_common(c_laws, o, true);
  c_laws->add_option("--potential2", potential2_path, "second potential JSON file");

  auto* c_weights = app.add_subcommand("weights", "eigen/equilibrium cylinder weights");
  add_common(c_weights, o, true);
  c_weights->add_option("--m-out", m_out, "cylinder length (default: state length)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_entropy->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto rep = ts::spectral_radius(A, o.tol);
      info("radius " + std::to_string(rep.radius) + " after " +
           std::to_string(rep.iterations) + " iterations");
      emit(o, ts::to_json(rep).dump(2));
    } else if (c_pressure->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto est = ts::pressure_estimate(A, f, o.n_max, effective_threads(o));
      if (o.format == "csv")
        emit(o, ts::pressure_csv(est));
      else
        emit(o, ts::to_json(est).dump(2));
    } else if (c_rpf->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto L = ts::build_transfer(A, f);
      const auto rpf = ts::rpf_solve(L, o.tol);
      info("lambda " + std::to_string(rpf.lambda) + " after " +
           std::to_string(rpf.iterations) + " iterations");
      if (profile_n > 0) {
        Eigen::VectorXd e1 = Eigen::VectorXd::Zero(L.M.rows());
        e1(0) = 1.0;
        const auto prof = ts::convergence_profile(L, rpf, e1, profile_n);
        if (o.format == "csv") {
          emit(o, ts::profile_csv(prof));
        } else {
          json j = ts::to_json(rpf);
          j["profile"] = prof;
          emit(o, j.dump(2));
        }
      } else {
        emit(o, ts::to_json(rpf).dump(2));
      }
    } else if (c_equilibrium->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto L = ts::build_transfer(A, f);
      const auto rpf = ts::rpf_solve(L, o.tol);
      const auto m = ts::equilibrium_markov(L, rpf);
      json j = ts::to_json(m);
      j["free_energy"] = ts::to_json(ts::free_energy(m, f, rpf.log_lambda));
      emit(o, j.dump(2));
    } else if (c_variational->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto res =
          ts::variational_search(A, f, restarts, iters, o.seed, effective_threads(o));
      json j = ts::to_json(res.measure);
      j["report"] = ts::to_json(res.report);
      j["best_restart"] = res.best_restart;
      emit(o, j.dump(2));
    } else if (c_kms->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto rep = ts::kms_analyze(A, f, o.tol);
      std::cerr << "beta = " << rep.beta << " in [" << rep.lower_bound << ", "
                << rep.upper_bound << "], var0 = " << rep.var0
                << ", unique = " << (rep.unique_state ? "true" : "false") << "\n";
      if (!rep.warning.empty()) std::cerr << "warning: " << rep.warning << "\n";
      emit(o, ts::to_json(rep).dump(2));
    } else if (c_bimodule->parsed()) {
      const auto sys = ts::read_system_file(o.system_path);
      const auto a = ts::read_dpotential_file(sys, o.potential_path);
      const auto est = ts::theorem62_pressure(sys, a, o.n_max);
      if (o.format == "csv")
        emit(o, ts::pressure_csv(est));
      else
        emit(o, ts::to_json(est).dump(2));
    } else if (c_laws->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto g = potential2_path.empty()
                         ? ts::affine(f, 1.0, 0.5)
                         : ts::read_potential_file(A, potential2_path);
      const auto checks = ts::pressure_law_suite(A, f, g, o.seed);
      bool all = true;
      for (const auto& c : checks) all = all && c.pass;
      emit(o, ts::to_json(checks).dump(2));
      if (!all) {
        std::cerr << "law suite: at least one check failed\n";
        return 2;
      }
    } else if (c_weights->parsed()) {
      const auto A = ts::read_matrix_file(o.matrix_path);
      const auto f = load_potential(o, A);
      const auto L = ts::build_transfer(A, f);
      const auto rpf = ts::rpf_solve(L, o.tol);
      const int m = m_out > 0 ? m_out : std::max(f.range() - 1, 1);
      json mu = json::object(), nu = json::object();
      for (const auto& [w, pr] : ts::cylinder_weights(L, rpf, m)) {
        mu[ts::word_string(w)] = pr.first;
        nu[ts::word_string(w)] = pr.second;
      }
      emit(o, json{{"m", m}, {"mu", mu}, {"nu", nu}}.dump(2));
    }
  } catch (const ts::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ts::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
