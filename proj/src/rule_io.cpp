#include "cadyn/rule_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cadyn {

namespace {

constexpr std::uint32_t kMaxCharAlphabet = 36;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_uint(std::string_view s, std::uint64_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> content_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++number;
    std::string_view line = text.substr(pos, nl - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) lines.push_back({number, line});
    pos = nl + 1;
  }
  return lines;
}

std::string_view expect_key(const Line& l, std::string_view key) {
  if (l.text.substr(0, key.size()) != key)
    throw ParseError(l.number, "expected '" + std::string(key) + "'");
  return trim(l.text.substr(key.size()));
}

}  // namespace

std::string format_symbol(State s, std::uint32_t alphabet_size) {
  if (alphabet_size <= kMaxCharAlphabet) {
    return std::string(1, s < 10 ? char('0' + s) : char('a' + (s - 10)));
  }
  return std::to_string(s);
}

std::string format_word(std::span<const State> w, std::uint32_t alphabet_size) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (alphabet_size > kMaxCharAlphabet && i > 0) out += '.';
    out += format_symbol(w[i], alphabet_size);
  }
  return out;
}

Word parse_word(std::string_view text, std::uint32_t alphabet_size) {
  Word w;
  text = trim(text);
  if (alphabet_size <= kMaxCharAlphabet) {
    for (char c : text) {
      State s;
      if (c >= '0' && c <= '9') {
        s = State(c - '0');
      } else if (c >= 'a' && c <= 'z') {
        s = State(c - 'a' + 10);
      } else {
        throw std::invalid_argument(std::string("bad symbol '") + c + "'");
      }
      if (s >= alphabet_size)
        throw std::invalid_argument(std::string("symbol '") + c + "' outside alphabet");
      w.push_back(s);
    }
    return w;
  }
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    auto dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    std::uint64_t v;
    if (!parse_uint(text.substr(pos, dot - pos), v) || v >= alphabet_size)
      throw std::invalid_argument("bad symbol in '" + std::string(text) + "'");
    w.push_back(static_cast<State>(v));
    pos = dot + 1;
  }
  return w;
}

std::string format_map(const BlockMap& m) {
  std::ostringstream os;
  const bool same = m.source() == m.target();
  os << (same ? "ca v1\n" : "map v1\n");
  os << "sides: " << to_string(m.sides()) << '\n';
  if (same) {
    os << "states: " << m.source().size() << '\n';
  } else {
    os << "states: " << m.source().size() << " -> " << m.target().size() << '\n';
  }
  if (m.source().is_product()) {
    os << "factors:";
    for (auto f : m.source().factors()) os << ' ' << f;
    os << '\n';
  }
  os << "neighborhood: " << m.neighborhood().lo << ' ' << m.neighborhood().hi << '\n';
  os << "table:\n";
  const auto n = m.source().size();
  const auto w = static_cast<unsigned>(m.width());
  for (std::uint64_t i = 0; i < m.table().size(); ++i) {
    os << format_word(index_word(i, n, w), n) << " -> "
       << format_symbol(m.at(i), m.target().size()) << '\n';
  }
  return os.str();
}

std::string format_rule(const LocalRule& r) { return format_map(r.map()); }

BlockMap parse_map(std::string_view text) {
  const auto lines = content_lines(text);
  std::size_t i = 0;
  auto next = [&](const char* what) -> const Line& {
    if (i >= lines.size())
      throw ParseError(lines.empty() ? 1 : lines.back().number,
                       std::string("unexpected end of input, expected ") + what);
    return lines[i++];
  };

  const Line& header = next("header");
  bool is_map = false;
  if (header.text == "map v1") {
    is_map = true;
  } else if (header.text != "ca v1") {
    throw ParseError(header.number, "expected header 'ca v1' or 'map v1'");
  }

  const Line& sides_line = next("sides");
  const auto sides_v = expect_key(sides_line, "sides:");
  Sidedness sides;
  if (sides_v == "one") {
    sides = Sidedness::OneSided;
  } else if (sides_v == "two") {
    sides = Sidedness::TwoSided;
  } else {
    throw ParseError(sides_line.number, "sides must be 'one' or 'two'");
  }

  const Line& states_line = next("states");
  const auto states_v = expect_key(states_line, "states:");
  std::uint64_t nsrc = 0, ntgt = 0;
  if (auto arrow = states_v.find("->"); arrow != std::string_view::npos) {
    if (!is_map) throw ParseError(states_line.number, "'ca v1' takes a single state count");
    if (!parse_uint(states_v.substr(0, arrow), nsrc) ||
        !parse_uint(states_v.substr(arrow + 2), ntgt))
      throw ParseError(states_line.number, "bad state counts");
  } else {
    if (!parse_uint(states_v, nsrc)) throw ParseError(states_line.number, "bad state count");
    ntgt = nsrc;
  }
  if (nsrc == 0 || ntgt == 0 || nsrc > 0xffffffffull || ntgt > 0xffffffffull)
    throw ParseError(states_line.number, "state count out of range");

  Alphabet source(static_cast<std::uint32_t>(nsrc));
  Alphabet target(static_cast<std::uint32_t>(ntgt));

  const Line* nb_line = &next("neighborhood");
  if (nb_line->text.rfind("factors:", 0) == 0) {
    std::vector<std::uint32_t> f;
    for (auto tok : split_ws(expect_key(*nb_line, "factors:"))) {
      std::uint64_t v;
      if (!parse_uint(tok, v) || v == 0 || v > 0xffffffffull)
        throw ParseError(nb_line->number, "bad factor size");
      f.push_back(static_cast<std::uint32_t>(v));
    }
    try {
      source = Alphabet::product_of(f);
    } catch (const std::invalid_argument& e) {
      throw ParseError(nb_line->number, e.what());
    }
    if (source.size() != nsrc)
      throw ParseError(nb_line->number, "factor sizes do not multiply to the state count");
    if (ntgt == nsrc) target = source;
    nb_line = &next("neighborhood");
  }
  const auto nb_tok = split_ws(expect_key(*nb_line, "neighborhood:"));
  Neighborhood nb;
  if (nb_tok.size() != 2 || !parse_int(nb_tok[0], nb.lo) || !parse_int(nb_tok[1], nb.hi) ||
      nb.hi < nb.lo)
    throw ParseError(nb_line->number, "neighborhood needs two integers i <= j");
  if (sides == Sidedness::OneSided && nb.lo < 0)
    throw ParseError(nb_line->number, "one-sided neighborhood must satisfy i >= 0");

  const Line& table_line = next("table");
  if (table_line.text != "table:") throw ParseError(table_line.number, "expected 'table:'");

  std::uint64_t entries;
  try {
    entries = BlockMap::table_entries(source, nb, kDefaultTableBudget);
  } catch (const BudgetError& e) {
    throw ParseError(nb_line->number, e.what());
  }
  std::vector<State> table(entries);
  std::vector<bool> seen(entries, false);
  const auto w = static_cast<std::size_t>(nb.width());
  for (; i < lines.size(); ++i) {
    const Line& l = lines[i];
    const auto arrow = l.text.find("->");
    if (arrow == std::string_view::npos) throw ParseError(l.number, "expected '<word> -> <state>'");
    Word lhs, rhs;
    try {
      lhs = parse_word(l.text.substr(0, arrow), source.size());
      rhs = parse_word(l.text.substr(arrow + 2), target.size());
    } catch (const std::invalid_argument& e) {
      throw ParseError(l.number, e.what());
    }
    if (lhs.size() != w)
      throw ParseError(l.number, "neighborhood word must have length " + std::to_string(w));
    if (rhs.size() != 1) throw ParseError(l.number, "output must be a single state");
    const auto idx = word_index(lhs, source.size());
    if (seen[idx]) throw ParseError(l.number, "duplicate neighborhood word");
    seen[idx] = true;
    table[idx] = rhs[0];
  }
  for (std::uint64_t k = 0; k < entries; ++k) {
    if (!seen[k]) {
      throw ParseError(lines.back().number,
                       "missing neighborhood word " +
                           format_word(index_word(k, source.size(), unsigned(w)), source.size()));
    }
  }
  return BlockMap(source, target, sides, nb, std::move(table));
}

LocalRule parse_rule(std::string_view text) {
  BlockMap m = parse_map(text);
  if (m.source().size() != m.target().size())
    throw ParseError(0, "expected a rule (same source and target alphabet)");
  return LocalRule(std::move(m));
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}
}  // namespace

LocalRule load_rule(const std::string& path) { return parse_rule(read_file(path)); }
BlockMap load_map(const std::string& path) { return parse_map(read_file(path)); }

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace cadyn
