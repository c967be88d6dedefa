#include <fstream>
#include <sstream>
#include <string>

#include "psec/errors.hpp"
#include "psec/poset.hpp"

namespace psec {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

bool parse_id(const std::string& token, ElementId& out) {
  if (token.empty() || token.size() > 9) return false;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
  }
  out = static_cast<ElementId>(std::stoul(token));
  return true;
}

}  // namespace

Poset parse_poset(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<Comparison> pairs;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (!have_header) {
      ElementId count = 0;
      if (tokens.size() != 2 || tokens[0] != "poset" || !parse_id(tokens[1], count)) {
        fail(line_no, "expected header `poset <n>`");
      }
      n = count;
      have_header = true;
      continue;
    }
    ElementId u = 0;
    ElementId v = 0;
    if (tokens.size() != 3 || tokens[1] != "<" || !parse_id(tokens[0], u) || !parse_id(tokens[2], v)) {
      fail(line_no, "expected relation `<u> < <v>`");
    }
    if (u >= n || v >= n) fail(line_no, "element id out of range");
    pairs.push_back({u, v});
  }
  if (!have_header) throw ParseError("missing `poset <n>` header");
  return Poset::from_relations(n, pairs);
}

Poset parse_poset_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_poset(in);
}

Poset read_poset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open poset file " + path);
  return parse_poset(in);
}

void write_poset(std::ostream& out, const Poset& poset, std::string_view comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "poset " << poset.size() << '\n';
  for (const auto& [u, v] : poset.cover_relations()) out << u << " < " << v << '\n';
}

std::string format_poset(const Poset& poset, std::string_view comment) {
  std::ostringstream out;
  write_poset(out, poset, comment);
  return out.str();
}

}  // namespace psec
