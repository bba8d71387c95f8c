#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qca/debruijn.hpp"
#include "qca/locality.hpp"
#include "qca/rule.hpp"
#include "qca/state.hpp"

namespace qca {

inline constexpr const char* kToolVersion = "0.1.0";

// Deterministic serialization: keys sorted (nlohmann objects already are),
// floating point rendered with 12 significant digits, two-space indent.
std::string dump_deterministic(const nlohmann::json& j);

nlohmann::json state_to_json(const Superposition& s, const Alphabet& alphabet);
Superposition state_from_json(const std::string& text, const Alphabet& alphabet);
nlohmann::json reduced_to_json(const ReducedMatrix& m, const Alphabet& alphabet);

nlohmann::json analyze_report(const Rule& rule, const PropertyReport& rep,
                              std::optional<bool> oracle_agreement);
nlohmann::json graph_report(const Rule& rule, const PairGraph& graph, const std::string& dot_path);
nlohmann::json locality_report_json(const Rule& rule, const LocalityReport& rep);
nlohmann::json falsify_report_json(const Rule& rule, const Region& neighborhood,
                                   const FalsifyReport& rep);
nlohmann::json signal_report_json(const Rule& rule, const SignallingReport& rep);

}  // namespace qca
