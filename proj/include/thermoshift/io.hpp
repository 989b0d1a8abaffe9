#ifndef THERMOSHIFT_IO_HPP
#define THERMOSHIFT_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "thermoshift/bimodule.hpp"
#include "thermoshift/kms.hpp"
#include "thermoshift/measures.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/sft.hpp"
#include "thermoshift/transfer.hpp"

namespace thermoshift {

// Matrix text format: first line d, then d lines of d space-separated 0/1
// digits. Trailing whitespace is ignored, anything else is rejected.
TransitionMatrix read_matrix(std::istream& in);
TransitionMatrix read_matrix_file(const std::string& path);

// Labeled-graph text format: "vertices V", then one "from to label" line
// per edge.
LabeledGraph read_graph(std::istream& in);
LabeledGraph read_graph_file(const std::string& path);

// Potential JSON: { "d", "k", "values": { "word": x } }.
Potential potential_from_json(const TransitionMatrix& A, const nlohmann::json& j);
Potential read_potential_file(const TransitionMatrix& A, const std::string& path);
nlohmann::json potential_to_json(const Potential& f);

nlohmann::json to_json(const SpectralReport& rep);
SpectralReport spectral_report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RpfData& rpf);
RpfData rpf_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PressureEstimate& est);
PressureEstimate pressure_estimate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MarkovMeasure& m);
MarkovMeasure markov_from_json(const TransitionMatrix& A, const nlohmann::json& j);
nlohmann::json to_json(const FreeEnergyReport& r);
FreeEnergyReport free_energy_from_json(const nlohmann::json& j);
nlohmann::json to_json(const KmsReport& r);
KmsReport kms_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<LawCheck>& checks);
std::vector<LawCheck> law_checks_from_json(const nlohmann::json& j);

// Bimodule system JSON: { "blocks": [...], "endos": [ { "multiplicities":
// [[...]] } ] }. D-potential JSON: { "range", "components": { "word":
// { "blocks": [[[ [re, im], ... ]]] } } }.
BimoduleSystem system_from_json(const nlohmann::json& j);
BimoduleSystem read_system_file(const std::string& path);
nlohmann::json system_to_json(const BimoduleSystem& sys);
DPotential dpotential_from_json(const BimoduleSystem& sys, const nlohmann::json& j);
DPotential read_dpotential_file(const BimoduleSystem& sys, const std::string& path);
nlohmann::json dpotential_to_json(const DPotential& a);

// CSV series with 17 significant digits per number.
std::string pressure_csv(const PressureEstimate& est);
std::string profile_csv(const std::vector<double>& profile);
std::string format_17g(double x);

}  // namespace thermoshift

#endif
