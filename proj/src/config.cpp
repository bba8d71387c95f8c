#include "qca/config.hpp"

#include <algorithm>
#include <charconv>

namespace qca {

bool config_less(const Config& a, const Config& b) {
  if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
  if (a.offset != b.offset) return a.offset < b.offset;
  return std::lexicographical_compare(a.word.begin(), a.word.end(), b.word.begin(),
                                      b.word.end());
}

Config canonicalize(int offset, std::vector<Symbol> word, Symbol quiescent) {
  std::size_t first = 0;
  while (first < word.size() && word[first] == quiescent) ++first;
  if (first == word.size()) return Config{};  // all-quiescent
  std::size_t last = word.size();
  while (word[last - 1] == quiescent) --last;
  Config c;
  c.offset = offset + static_cast<int>(first);
  c.word.assign(word.begin() + static_cast<std::ptrdiff_t>(first),
                word.begin() + static_cast<std::ptrdiff_t>(last));
  return c;
}

Config shift_config(const Config& c, int k) {
  if (c.vacuum()) return c;
  Config d = c;
  d.offset = c.offset - k;
  return d;
}

Config reflect_config(const Config& c) {
  if (c.vacuum()) return c;
  Config d;
  d.word.assign(c.word.rbegin(), c.word.rend());
  d.offset = -(c.offset + c.length() - 1);
  return d;
}

Config step(const Rule& rule, const Config& c) {
  if (c.vacuum()) return c;  // quiescence preservation
  const Symbol q = rule.alphabet.quiescent;
  const int lo = rule.min_offset(), hi = rule.max_offset();
  const int out_lo = c.support_min() - hi;
  const int out_hi = c.support_max() - lo;
  std::vector<Symbol> out;
  out.reserve(static_cast<std::size_t>(out_hi - out_lo + 1));
  std::vector<Symbol> window(static_cast<std::size_t>(rule.width()));
  for (int i = out_lo; i <= out_hi; ++i) {
    for (int j = 0; j < rule.width(); ++j)
      window[static_cast<std::size_t>(j)] = c.at(i + rule.neighborhood[static_cast<std::size_t>(j)], q);
    out.push_back(rule.apply(window));
  }
  return canonicalize(out_lo, std::move(out), q);
}

Config parse_config_literal(const std::string& text, const Alphabet& alphabet) {
  auto bar = text.find('|');
  if (bar == std::string::npos)
    fail(Errc::parse_error, "config literal must look like \"<offset>|<word>\"");
  int offset = 0;
  const char* begin = text.data();
  const char* end = text.data() + bar;
  auto [ptr, ec] = std::from_chars(begin, end, offset);
  if (ec != std::errc() || ptr != end)
    fail(Errc::parse_error, "bad offset in config literal: " + text);
  std::vector<Symbol> word;
  for (std::size_t i = bar + 1; i < text.size(); ++i)
    word.push_back(alphabet.index_of(text[i]));
  return canonicalize(offset, std::move(word), alphabet.quiescent);
}

std::string config_literal(const Config& c, const Alphabet& alphabet) {
  std::string out = std::to_string(c.offset);
  out.push_back('|');
  for (Symbol s : c.word) out.push_back(alphabet.chr(s));
  return out;
}

}  // namespace qca
