#include "qca/rule.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qca {

Symbol Alphabet::index_of(char c) const {
  auto pos = symbols.find(c);
  if (pos == std::string::npos)
    fail(Errc::parse_error, std::string("unknown symbol '") + c + "'");
  return static_cast<Symbol>(pos);
}

std::size_t table_index(const Rule& rule, std::span<const Symbol> window) {
  const std::size_t k = static_cast<std::size_t>(rule.alphabet.size());
  std::size_t idx = 0;
  for (Symbol s : window) idx = idx * k + s;
  return idx;
}

Symbol Rule::apply(std::span<const Symbol> window) const {
  return table[table_index(*this, window)];
}

Rule Rule::reflected() const {
  Rule out;
  out.name = name + "~reflected";
  out.alphabet = alphabet;
  for (int o : neighborhood) out.neighborhood.push_back(-o);
  std::sort(out.neighborhood.begin(), out.neighborhood.end());
  const int m = width();
  const std::size_t k = static_cast<std::size_t>(alphabet.size());
  out.table.resize(table.size());
  std::vector<Symbol> w(static_cast<std::size_t>(m));
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    std::size_t rest = idx;
    for (int j = m - 1; j >= 0; --j) {
      w[static_cast<std::size_t>(j)] = static_cast<Symbol>(rest % k);
      rest /= k;
    }
    // out's neighborhood is -N sorted, so position j of out's window reads
    // the symbol the original rule reads at position m-1-j.
    std::vector<Symbol> rev(w.rbegin(), w.rend());
    out.table[idx] = table[table_index(*this, rev)];
  }
  return out;
}

namespace {

std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (v > limit / base) fail(Errc::parse_error, "rule table too large");
    v *= base;
  }
  return v;
}

char single_char(const nlohmann::json& j, const char* what) {
  if (!j.is_string() || j.get<std::string>().size() != 1)
    fail(Errc::parse_error, std::string(what) + " must be a single character");
  return j.get<std::string>()[0];
}

}  // namespace

Rule parse_rule(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }

  Rule rule;
  try {
    rule.name = j.value("name", std::string("unnamed"));

    if (!j.contains("alphabet") || !j["alphabet"].is_array() || j["alphabet"].empty())
      fail(Errc::parse_error, "alphabet must be a nonempty array of characters");
    std::set<char> seen;
    for (const auto& tok : j["alphabet"]) {
      char c = single_char(tok, "alphabet entry");
      if (c == '|') fail(Errc::parse_error, "'|' is reserved by the config literal syntax");
      if (!seen.insert(c).second)
        fail(Errc::duplicate_symbol, std::string("duplicate symbol '") + c + "'");
      rule.alphabet.symbols.push_back(c);
    }
    if (rule.alphabet.size() > 64) fail(Errc::parse_error, "alphabet too large");

    char q = single_char(j.at("quiescent"), "quiescent");
    auto pos = rule.alphabet.symbols.find(q);
    if (pos == std::string::npos)
      fail(Errc::parse_error, "quiescent symbol is not in the alphabet");
    rule.alphabet.quiescent = static_cast<Symbol>(pos);

    if (!j.contains("neighborhood") || !j["neighborhood"].is_array())
      fail(Errc::parse_error, "neighborhood must be an array of integers");
    for (const auto& o : j["neighborhood"]) rule.neighborhood.push_back(o.get<int>());
    if (rule.neighborhood.empty()) fail(Errc::empty_neighborhood, "neighborhood is empty");
    std::sort(rule.neighborhood.begin(), rule.neighborhood.end());
    if (std::adjacent_find(rule.neighborhood.begin(), rule.neighborhood.end()) !=
        rule.neighborhood.end())
      fail(Errc::parse_error, "neighborhood offsets must be distinct");

    const std::size_t k = static_cast<std::size_t>(rule.alphabet.size());
    const std::size_t m = static_cast<std::size_t>(rule.width());
    const std::size_t entries = checked_pow(k, m, std::size_t(1) << 26);
    rule.table.assign(entries, 0);
    std::vector<char> present(entries, 0);

    if (!j.contains("table") || !j["table"].is_object())
      fail(Errc::parse_error, "table must be an object mapping words to symbols");
    for (const auto& [key, val] : j["table"].items()) {
      if (key.size() != m)
        fail(Errc::parse_error, "table key '" + key + "' has wrong length");
      std::vector<Symbol> w;
      for (char c : key) w.push_back(rule.alphabet.index_of(c));
      std::size_t idx = table_index(rule, w);
      if (present[idx]) fail(Errc::parse_error, "table key '" + key + "' repeated");
      present[idx] = 1;
      rule.table[idx] = rule.alphabet.index_of(single_char(val, "table value"));
    }
    for (std::size_t i = 0; i < entries; ++i)
      if (!present[i]) fail(Errc::missing_table_entry, "table is incomplete");

    std::vector<Symbol> allq(m, rule.alphabet.quiescent);
    if (rule.apply(allq) != rule.alphabet.quiescent)
      fail(Errc::quiescence_violation, "table must map the all-quiescent word to the quiescent symbol");
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("malformed rule file: ") + e.what());
  }
  return rule;
}

Rule parse_rule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open rule file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_rule(ss.str());
}

std::string rule_to_json(const Rule& rule) {
  nlohmann::json j;
  j["name"] = rule.name;
  for (char c : rule.alphabet.symbols) j["alphabet"].push_back(std::string(1, c));
  j["quiescent"] = std::string(1, rule.alphabet.chr(rule.alphabet.quiescent));
  j["neighborhood"] = rule.neighborhood;
  nlohmann::json table = nlohmann::json::object();
  const std::size_t k = static_cast<std::size_t>(rule.alphabet.size());
  const int m = rule.width();
  for (std::size_t idx = 0; idx < rule.table.size(); ++idx) {
    std::string key(static_cast<std::size_t>(m), '?');
    std::size_t rest = idx;
    for (int pos = m - 1; pos >= 0; --pos) {
      key[static_cast<std::size_t>(pos)] = rule.alphabet.chr(static_cast<Symbol>(rest % k));
      rest /= k;
    }
    table[key] = std::string(1, rule.alphabet.chr(rule.table[idx]));
  }
  j["table"] = table;
  return j.dump(2);
}

}  // namespace qca
