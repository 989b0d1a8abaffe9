#include "thermoshift/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thermoshift/errors.hpp"

namespace thermoshift {

using nlohmann::json;

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  return in;
}

json parse_json(std::istream& in, const std::string& what) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

double require_number(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError("missing numeric field '" + key + "'");
  return j[key].get<double>();
}

}  // namespace

TransitionMatrix read_matrix(std::istream& in) {
  std::string line;
  int lineno = 0;
  const auto next_line = [&]() {
    if (!std::getline(in, line)) throw ParseError("matrix: unexpected end of input");
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.pop_back();
  };
  next_line();
  int d = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> d) || (ls >> extra))
      throw ParseError("matrix line 1: expected a single dimension");
  }
  if (d < 1) throw ParseError("matrix: dimension must be >= 1");
  std::vector<std::vector<int>> raw;
  for (int i = 0; i < d; ++i) {
    next_line();
    std::istringstream ls(line);
    std::vector<int> row;
    int v;
    while (ls >> v) row.push_back(v);
    if (!ls.eof())
      throw ParseError("matrix line " + std::to_string(lineno) + ": non-numeric entry");
    if (int(row.size()) != d)
      throw ParseError("matrix line " + std::to_string(lineno) + ": expected " +
                       std::to_string(d) + " entries");
    raw.push_back(std::move(row));
  }
  return TransitionMatrix::validate(raw);
}

TransitionMatrix read_matrix_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_matrix(in);
}

LabeledGraph read_graph(std::istream& in) {
  LabeledGraph g;
  std::string token;
  if (!(in >> token) || token != "vertices")
    throw ParseError("graph: expected leading 'vertices V' line");
  if (!(in >> g.vertices) || g.vertices < 1)
    throw ParseError("graph: vertex count must be >= 1");
  LabeledGraph::Edge e;
  while (in >> e.from >> e.to >> e.label) g.edges.push_back(e);
  if (!in.eof()) throw ParseError("graph: malformed edge line");
  return g;
}

LabeledGraph read_graph_file(const std::string& path) {
  auto in = open_or_throw(path);
  return read_graph(in);
}

Potential potential_from_json(const TransitionMatrix& A, const json& j) {
  if (!j.contains("d") || !j.contains("k") || !j.contains("values"))
    throw ParseError("potential: expected fields d, k, values");
  const int d = j["d"].get<int>();
  const int k = j["k"].get<int>();
  if (d != A.dim())
    throw ParseError("potential: alphabet size " + std::to_string(d) +
                     " does not match the matrix dimension " + std::to_string(A.dim()));
  std::map<Word, double> table;
  for (const auto& [key, val] : j["values"].items()) {
    if (!val.is_number()) throw ParseError("potential: value at '" + key + "' not numeric");
    table[word_from_string(key)] = val.get<double>();
  }
  return Potential(A, k, table);
}

Potential read_potential_file(const TransitionMatrix& A, const std::string& path) {
  auto in = open_or_throw(path);
  return potential_from_json(A, parse_json(in, "potential file '" + path + "'"));
}

json potential_to_json(const Potential& f) {
  json values = json::object();
  for (std::size_t i = 0; i < f.words().size(); ++i)
    values[word_string(f.words()[i])] = f.values()[i];
  return json{{"d", f.matrix().dim()}, {"k", f.range()}, {"values", values}};
}

json to_json(const SpectralReport& rep) {
  json j{{"radius", rep.radius},
         {"log_rA", std::log(rep.radius)},
         {"iterations", rep.iterations},
         {"residual", rep.residual}};
  if (rep.eigenvector) {
    json v = json::array();
    for (Eigen::Index i = 0; i < rep.eigenvector->size(); ++i)
      v.push_back((*rep.eigenvector)(i));
    j["eigenvector"] = v;
  } else {
    j["eigenvector"] = nullptr;
  }
  return j;
}

SpectralReport spectral_report_from_json(const json& j) {
  SpectralReport rep;
  rep.radius = require_number(j, "radius");
  rep.iterations = j.at("iterations").get<int>();
  rep.residual = require_number(j, "residual");
  if (!j.at("eigenvector").is_null()) {
    const auto& v = j.at("eigenvector");
    Eigen::VectorXd ev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) ev(Eigen::Index(i)) = v[i].get<double>();
    rep.eigenvector = ev;
  }
  return rep;
}

json to_json(const RpfData& rpf) {
  json h = json::array(), mu = json::array();
  for (Eigen::Index i = 0; i < rpf.h.size(); ++i) h.push_back(rpf.h(i));
  for (Eigen::Index i = 0; i < rpf.mu.size(); ++i) mu.push_back(rpf.mu(i));
  return json{{"lambda", rpf.lambda},
              {"log_lambda", rpf.log_lambda},
              {"h", h},
              {"mu", mu},
              {"residuals", json::array({rpf.residuals[0], rpf.residuals[1]})},
              {"iterations", rpf.iterations}};
}

RpfData rpf_from_json(const json& j) {
  RpfData r;
  r.lambda = require_number(j, "lambda");
  r.log_lambda = require_number(j, "log_lambda");
  const auto& h = j.at("h");
  const auto& mu = j.at("mu");
  r.h = Eigen::VectorXd(h.size());
  r.mu = Eigen::VectorXd(mu.size());
  for (std::size_t i = 0; i < h.size(); ++i) r.h(Eigen::Index(i)) = h[i].get<double>();
  for (std::size_t i = 0; i < mu.size(); ++i) r.mu(Eigen::Index(i)) = mu[i].get<double>();
  r.residuals = {j.at("residuals")[0].get<double>(), j.at("residuals")[1].get<double>()};
  r.iterations = j.at("iterations").get<int>();
  r.mu_h = r.mu.dot(r.h);
  return r;
}

json to_json(const PressureEstimate& est) {
  json per_n = json::array();
  for (const auto& row : est.per_n)
    per_n.push_back(json{{"n", row.n},
                         {"estimate", row.estimate},
                         {"lower", row.lower},
                         {"upper", row.upper}});
  json j{{"per_n", per_n},
         {"bracket", json::array({est.lower, est.upper})},
         {"n_max", est.n_max}};
  if (est.transfer_value)
    j["transfer_value"] = *est.transfer_value;
  else
    j["transfer_value"] = nullptr;
  return j;
}

PressureEstimate pressure_estimate_from_json(const json& j) {
  PressureEstimate est;
  for (const auto& row : j.at("per_n"))
    est.per_n.push_back(PressureEstimate::Row{row.at("n").get<int>(),
                                              row.at("estimate").get<double>(),
                                              row.at("lower").get<double>(),
                                              row.at("upper").get<double>()});
  est.lower = j.at("bracket")[0].get<double>();
  est.upper = j.at("bracket")[1].get<double>();
  est.n_max = j.at("n_max").get<int>();
  if (!j.at("transfer_value").is_null())
    est.transfer_value = j.at("transfer_value").get<double>();
  return est;
}

json to_json(const MarkovMeasure& m) {
  json states = json::array();
  for (const Word& w : m.state_words) states.push_back(word_string(w));
  json P = json::array();
  for (Eigen::Index i = 0; i < m.P.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index jcol = 0; jcol < m.P.cols(); ++jcol) row.push_back(m.P(i, jcol));
    P.push_back(row);
  }
  json p = json::array();
  for (Eigen::Index i = 0; i < m.p.size(); ++i) p.push_back(m.p(i));
  return json{{"states", states}, {"P", P}, {"p", p}};
}

MarkovMeasure markov_from_json(const TransitionMatrix& A, const json& j) {
  std::vector<Word> states;
  for (const auto& s : j.at("states")) states.push_back(word_from_string(s.get<std::string>()));
  const int n = int(states.size());
  Eigen::MatrixXd P(n, n);
  const auto& jp = j.at("P");
  if (int(jp.size()) != n) throw ParseError("markov measure: P row count mismatch");
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) P(i, c) = jp[std::size_t(i)][std::size_t(c)].get<double>();
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p(i) = j.at("p")[std::size_t(i)].get<double>();
  return make_markov_with_stationary(A, std::move(states), P, p);
}

json to_json(const FreeEnergyReport& r) {
  return json{{"entropy", r.entropy},
              {"integral", r.integral},
              {"free_energy", r.free_energy},
              {"pressure_gap", r.pressure_gap}};
}

FreeEnergyReport free_energy_from_json(const json& j) {
  FreeEnergyReport r;
  r.entropy = require_number(j, "entropy");
  r.integral = require_number(j, "integral");
  r.free_energy = require_number(j, "free_energy");
  r.pressure_gap = require_number(j, "pressure_gap");
  return r;
}

json to_json(const KmsReport& r) {
  json mu = json::object(), nu = json::object();
  for (const auto& [w, x] : r.mu) mu[word_string(w)] = x;
  for (const auto& [w, x] : r.nu) nu[word_string(w)] = x;
  return json{{"beta", r.beta},
              {"lower_bound", r.lower_bound},
              {"upper_bound", r.upper_bound},
              {"var0", r.var0},
              {"log_rA", r.log_rA},
              {"unique", r.unique_state},
              {"holder_ok", r.holder_ok},
              {"warning", r.warning},
              {"mu", mu},
              {"nu", nu}};
}

KmsReport kms_from_json(const json& j) {
  KmsReport r;
  r.beta = require_number(j, "beta");
  r.lower_bound = require_number(j, "lower_bound");
  r.upper_bound = require_number(j, "upper_bound");
  r.var0 = require_number(j, "var0");
  r.log_rA = require_number(j, "log_rA");
  r.unique_state = j.at("unique").get<bool>();
  r.holder_ok = j.at("holder_ok").get<bool>();
  r.warning = j.at("warning").get<std::string>();
  for (const auto& [k, v] : j.at("mu").items()) r.mu[word_from_string(k)] = v.get<double>();
  for (const auto& [k, v] : j.at("nu").items()) r.nu[word_from_string(k)] = v.get<double>();
  return r;
}

json to_json(const std::vector<LawCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back(json{{"law", c.law},
                       {"lhs", c.lhs},
                       {"rhs", c.rhs},
                       {"tol", c.tol},
                       {"pass", c.pass}});
  return arr;
}

std::vector<LawCheck> law_checks_from_json(const json& j) {
  std::vector<LawCheck> out;
  for (const auto& c : j)
    out.push_back(LawCheck{c.at("law").get<std::string>(), c.at("lhs").get<double>(),
                           c.at("rhs").get<double>(), c.at("tol").get<double>(),
                           c.at("pass").get<bool>()});
  return out;
}

BimoduleSystem system_from_json(const json& j) {
  if (!j.contains("blocks") || !j.contains("endos"))
    throw ParseError("bimodule system: expected fields blocks, endos");
  MultiMatrixAlgebra alg;
  for (const auto& b : j["blocks"]) alg.block_sizes.push_back(b.get<int>());
  std::vector<std::vector<std::vector<int>>> mults;
  for (const auto& e : j["endos"]) {
    if (!e.contains("multiplicities"))
      throw ParseError("bimodule system: endomorphism without multiplicities");
    std::vector<std::vector<int>> m;
    for (const auto& row : e["multiplicities"]) {
      std::vector<int> r;
      for (const auto& x : row) r.push_back(x.get<int>());
      m.push_back(std::move(r));
    }
    mults.push_back(std::move(m));
  }
  return make_bimodule_system(std::move(alg), std::move(mults));
}

BimoduleSystem read_system_file(const std::string& path) {
  auto in = open_or_throw(path);
  return system_from_json(parse_json(in, "system file '" + path + "'"));
}

json system_to_json(const BimoduleSystem& sys) {
  json endos = json::array();
  for (const auto& e : sys.endos) {
    json m = json::array();
    for (const auto& row : e.multiplicities) {
      json r = json::array();
      for (int x : row) r.push_back(x);
      m.push_back(r);
    }
    endos.push_back(json{{"multiplicities", m}});
  }
  json blocks = json::array();
  for (int b : sys.algebra.block_sizes) blocks.push_back(b);
  return json{{"blocks", blocks}, {"endos", endos}};
}

namespace {

Eigen::MatrixXcd block_from_json(const json& rows) {
  const int n = int(rows.size());
  Eigen::MatrixXcd b(n, n);
  for (int i = 0; i < n; ++i) {
    if (int(rows[std::size_t(i)].size()) != n)
      throw ParseError("algebra element: non-square block");
    for (int c = 0; c < n; ++c) {
      const auto& entry = rows[std::size_t(i)][std::size_t(c)];
      if (!entry.is_array() || entry.size() != 2)
        throw ParseError("algebra element: entries must be [re, im] pairs");
      b(i, c) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
    }
  }
  return b;
}

json block_to_json(const Eigen::MatrixXcd& b) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      row.push_back(json::array({b(i, c).real(), b(i, c).imag()}));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

DPotential dpotential_from_json(const BimoduleSystem& sys, const json& j) {
  if (!j.contains("range") || !j.contains("components"))
    throw ParseError("d-potential: expected fields range, components");
  DPotential a;
  a.range = j["range"].get<int>();
  for (const auto& [key, comp] : j["components"].items()) {
    const Word w = word_from_string(key);
    if (!comp.contains("blocks")) throw ParseError("d-potential: component without blocks");
    AlgebraElement el;
    for (const auto& b : comp["blocks"]) el.blocks.push_back(block_from_json(b));
    a.components[w] = std::move(el);
  }
  validate_dpotential(sys, a);
  return a;
}

DPotential read_dpotential_file(const BimoduleSystem& sys, const std::string& path) {
  auto in = open_or_throw(path);
  return dpotential_from_json(sys, parse_json(in, "d-potential file '" + path + "'"));
}

json dpotential_to_json(const DPotential& a) {
  json comps = json::object();
  for (const auto& [w, el] : a.components) {
    json blocks = json::array();
    for (const auto& b : el.blocks) blocks.push_back(block_to_json(b));
    comps[word_string(w)] = json{{"blocks", blocks}};
  }
  return json{{"range", a.range}, {"components", comps}};
}

std::string format_17g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string pressure_csv(const PressureEstimate& est) {
  std::string out = "n,estimate,lower,upper\n";
  for (const auto& row : est.per_n)
    out += std::to_string(row.n) + "," + format_17g(row.estimate) + "," +
           format_17g(row.lower) + "," + format_17g(row.upper) + "\n";
  return out;
}

std::string profile_csv(const std::vector<double>& profile) {
  std::string out = "n,e_n\n";
  for (std::size_t i = 0; i < profile.size(); ++i)
    out += std::to_string(i + 1) + "," + format_17g(profile[i]) + "\n";
  return out;
}

}  // namespace thermoshift
