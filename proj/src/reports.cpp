#include "qca/reports.hpp"

#include <cstdio>

namespace qca {

namespace {

void format_double(std::string& out, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  out += buf;
}

void dump(std::string& out, const nlohmann::json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in + nlohmann::json(key).dump() + ": ";
        dump(out, value, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump(out, value, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      format_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

nlohmann::json region_json(const Region& r) { return nlohmann::json(r.cells); }

}  // namespace

std::string dump_deterministic(const nlohmann::json& j) {
  std::string out;
  dump(out, j, 0);
  out += "\n";
  return out;
}

nlohmann::json state_to_json(const Superposition& s, const Alphabet& alphabet) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [c, a] : s.amplitudes()) {
    nlohmann::json term;
    term["config"] = config_literal(c, alphabet);
    term["re"] = a.real();
    term["im"] = a.imag();
    arr.push_back(term);
  }
  return arr;
}

Superposition state_from_json(const std::string& text, const Alphabet& alphabet) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("invalid state JSON: ") + e.what());
  }
  if (!j.is_array()) fail(Errc::parse_error, "state file must be a JSON array");
  Superposition s;
  try {
    for (const auto& term : j) {
      Config c = parse_config_literal(term.at("config").get<std::string>(), alphabet);
      s.add(c, Amplitude(term.at("re").get<double>(), term.value("im", 0.0)));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("malformed state entry: ") + e.what());
  }
  return s;
}

nlohmann::json reduced_to_json(const ReducedMatrix& m, const Alphabet& alphabet) {
  nlohmann::json j;
  j["region"] = region_json(m.region);
  nlohmann::json order = nlohmann::json::array();
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  const int k = alphabet.size();
  for (std::int64_t i = 0; i < m.mat.rows(); ++i) {
    order.push_back(region_word_string(word_of_index(i, k, m.region.size()), alphabet));
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (std::int64_t c = 0; c < m.mat.cols(); ++c) {
      re_row.push_back(m.mat(i, c).real());
      im_row.push_back(m.mat(i, c).imag());
    }
    re.push_back(re_row);
    im.push_back(im_row);
  }
  j["order"] = order;
  j["re"] = re;
  j["im"] = im;
  return j;
}

nlohmann::json analyze_report(const Rule& rule, const PropertyReport& rep,
                              std::optional<bool> oracle_agreement) {
  nlohmann::json j;
  j["command"] = "analyze";
  j["rule"] = rule.name;
  j["tool_version"] = kToolVersion;
  j["injective_finite"] = rep.injective_finite;
  j["reversible"] = rep.reversible;
  j["left_closing"] = rep.left_closing;
  j["right_closing"] = rep.right_closing;
  j["open"] = rep.open;
  j["vertex_count"] = rep.vertex_count;
  j["offdiagonal_scc_count"] = rep.offdiagonal_scc_count;
  j["quantization_uniformly_local"] = rep.reversible;
  j["quantization_everywhere_local"] = rep.open;
  if (oracle_agreement) j["oracle_agreement"] = *oracle_agreement;
  return j;
}

nlohmann::json graph_report(const Rule& rule, const PairGraph& graph, const std::string& dot_path) {
  nlohmann::json j;
  j["command"] = "graph";
  j["rule"] = rule.name;
  j["tool_version"] = kToolVersion;
  j["vertices"] = graph.vertex_count;
  j["edges"] = graph.edge_count();
  j["sccs"] = graph.scc_count;
  j["dot_path"] = dot_path;
  return j;
}

nlohmann::json locality_report_json(const Rule& rule, const LocalityReport& rep) {
  nlohmann::json j;
  j["command"] = "locality";
  j["rule"] = rule.name;
  j["tool_version"] = kToolVersion;
  j["region"] = region_json(rep.region);
  j["neighborhood"] = region_json(rep.neighborhood);
  j["window"] = region_json(rep.window);
  switch (rep.verdict) {
    case Verdict::verified: j["verdict"] = "verified"; break;
    case Verdict::violated: j["verdict"] = "violated"; break;
    case Verdict::inconclusive: j["verdict"] = "inconclusive"; break;
  }
  if (rep.verdict == Verdict::violated) {
    const int k = rule.alphabet.size();
    const Symbol q = rule.alphabet.quiescent;
    auto literal = [&](std::int64_t idx) {
      RegionWord w = word_of_index(idx, k, rep.window.size());
      return config_literal(config_from_region_word(rep.window, w, q), rule.alphabet);
    };
    nlohmann::json v;
    v["basis_op_row"] = rep.op_row;
    v["basis_op_col"] = rep.op_col;
    v["window_word_row"] = rep.witness_row;
    v["window_word_col"] = rep.witness_col;
    v["config_row"] = literal(rep.witness_row);
    v["config_col"] = literal(rep.witness_col);
    j["violation"] = v;
  }
  return j;
}

nlohmann::json falsify_report_json(const Rule& rule, const Region& neighborhood,
                                   const FalsifyReport& rep) {
  nlohmann::json j;
  j["command"] = "falsify";
  j["rule"] = rule.name;
  j["tool_version"] = kToolVersion;
  j["neighborhood"] = region_json(neighborhood);
  j["x"] = config_literal(rep.x, rule.alphabet);
  j["y"] = config_literal(rep.y, rule.alphabet);
  j["a"] = region_json(rep.a);
  j["a_plus_n"] = region_json(rep.a_plus_n);
  j["bob_cell"] = rep.bob_cell;
  j["pump_count"] = rep.pump_count;
  j["reduction_residual"] = rep.reduction_residual;
  j["evolved_trace_distance"] = rep.evolved_trace_distance;
  return j;
}

nlohmann::json signal_report_json(const Rule& rule, const SignallingReport& rep) {
  nlohmann::json j;
  j["command"] = "signal";
  j["rule"] = rule.name;
  j["tool_version"] = kToolVersion;
  j["x"] = config_literal(rep.x, rule.alphabet);
  j["y"] = config_literal(rep.y, rule.alphabet);
  j["bob_cell"] = rep.bob_cell;
  j["alice_region"] = region_json(rep.alice_region);
  j["distance"] = rep.distance;
  j["success_probability"] = rep.success_probability;
  j["sigma_plus"] = reduced_to_json(rep.sigma_plus, rule.alphabet);
  j["sigma_minus"] = reduced_to_json(rep.sigma_minus, rule.alphabet);
  return j;
}

}  // namespace qca
