#include "ib/sysparse.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "ib/error.hpp"
#include "ib/raw_expr.hpp"

namespace ib {

namespace {

constexpr int kKindShift = 44;
constexpr int kIndexShift = 16;

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::vector<std::pair<std::string, int>> split_words(std::string_view line) {
  std::vector<std::pair<std::string, int>> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.emplace_back(std::string(line.substr(start, i - start)), static_cast<int>(start) + 1);
  }
  return out;
}

}  // namespace

int64_t symbol_rank(SymbolKind kind, size_t index, int sub) {
  return (static_cast<int64_t>(kind) << kKindShift) | (static_cast<int64_t>(index) << kIndexShift) |
         static_cast<int64_t>(sub);
}

SymbolKind kind_of(const Symbol& s) { return static_cast<SymbolKind>(s.rank() >> kKindShift); }

size_t index_of_rank(const Symbol& s) {
  return static_cast<size_t>((s.rank() >> kIndexShift) & ((int64_t(1) << (kKindShift - kIndexShift)) - 1));
}

std::string initial_name(const std::string& name) {
  if (!name.empty() && std::isdigit(static_cast<unsigned char>(name.back()))) return name + "_0";
  return name + "0";
}

SystemSpec::SystemSpec(std::string name_, std::vector<Param> params_,
                       std::vector<std::pair<std::string, Parity>> coords)
    : name(std::move(name_)), params(std::move(params_)) {
  std::set<std::string> taken = {"t", "im", "exp", "L"};
  auto claim = [&](const std::string& n) {
    if (!taken.insert(n).second) throw Error(ErrorKind::DuplicateCoord, "name '" + n + "' is declared or derived twice");
  };
  for (size_t i = 0; i < params.size(); ++i) {
    claim(params[i].symbol.name());
    params[i].symbol = Symbol(params[i].symbol.name(), Parity::Even, symbol_rank(SymbolKind::Param, i));
  }
  for (size_t i = 0; i < coords.size(); ++i) {
    const auto& [n, p] = coords[i];
    claim(n);
    coords_.emplace_back(n, p, symbol_rank(SymbolKind::Coord, i));
    velocities_.emplace_back("d" + n, p, symbol_rank(SymbolKind::Velocity, i));
    accels_.emplace_back("dd" + n, p, symbol_rank(SymbolKind::Accel, i));
    momenta_.emplace_back("p_" + n, p, symbol_rank(SymbolKind::Momentum, i));
    initial_coords_.emplace_back(initial_name(n), p, symbol_rank(SymbolKind::InitialCoord, i));
    initial_momenta_.emplace_back(initial_name("p" + n), p, symbol_rank(SymbolKind::InitialMomentum, i));
  }
  for (size_t i = 0; i < coords.size(); ++i) {
    claim(velocities_[i].name());
    claim(accels_[i].name());
    claim(momenta_[i].name());
    claim(initial_coords_[i].name());
    claim(initial_momenta_[i].name());
  }
}

Symbol SystemSpec::unknown(size_t i, int n) const {
  return Symbol("$" + coords_.at(i).name() + "_" + std::to_string(n), coords_[i].parity(),
                symbol_rank(SymbolKind::Unknown, i, n));
}

std::vector<Symbol> SystemSpec::phase_variables() const {
  std::vector<Symbol> v = coords_;
  v.insert(v.end(), momenta_.begin(), momenta_.end());
  return v;
}

std::vector<Symbol> SystemSpec::initial_symbols() const {
  std::vector<Symbol> v = initial_coords_;
  v.insert(v.end(), initial_momenta_.begin(), initial_momenta_.end());
  return v;
}

Bindings SystemSpec::ic_to_phase() const {
  Bindings b;
  for (size_t i = 0; i < size(); ++i) {
    b.emplace(initial_coords_[i], Expr(coords_[i]));
    b.emplace(initial_momenta_[i], Expr(momenta_[i]));
  }
  return b;
}

Bindings SystemSpec::phase_to_ic() const {
  Bindings b;
  for (size_t i = 0; i < size(); ++i) {
    b.emplace(coords_[i], Expr(initial_coords_[i]));
    b.emplace(momenta_[i], Expr(initial_momenta_[i]));
  }
  return b;
}

std::vector<Symbol> SystemSpec::param_symbols() const {
  std::vector<Symbol> v;
  for (const auto& p : params) v.push_back(p.symbol);
  return v;
}

bool SystemSpec::has_odd() const {
  for (const auto& c : coords_)
    if (c.odd()) return true;
  return false;
}

std::map<std::string, Symbol> SystemSpec::lagrangian_names() const {
  std::map<std::string, Symbol> t;
  for (const auto& p : params) t.emplace(p.symbol.name(), p.symbol);
  for (size_t i = 0; i < size(); ++i) {
    t.emplace(coords_[i].name(), coords_[i]);
    t.emplace(velocities_[i].name(), velocities_[i]);
  }
  return t;
}

std::map<std::string, Symbol> SystemSpec::output_names() const {
  std::map<std::string, Symbol> t;
  for (const auto& p : params) t.emplace(p.symbol.name(), p.symbol);
  for (size_t i = 0; i < size(); ++i) {
    t.emplace(coords_[i].name(), coords_[i]);
    t.emplace(momenta_[i].name(), momenta_[i]);
    t.emplace(initial_coords_[i].name(), initial_coords_[i]);
    t.emplace(initial_momenta_[i].name(), initial_momenta_[i]);
  }
  return t;
}

bool operator==(const SystemSpec& a, const SystemSpec& b) {
  if (a.name != b.name || a.params.size() != b.params.size() || a.coords_.size() != b.coords_.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i)
    if (a.params[i].symbol.name() != b.params[i].symbol.name() || a.params[i].positive != b.params[i].positive)
      return false;
  for (size_t i = 0; i < a.coords_.size(); ++i)
    if (a.coords_[i].name() != b.coords_[i].name() || a.coords_[i].parity() != b.coords_[i].parity()) return false;
  return a.lagrangian == b.lagrangian && a.metadata == b.metadata;
}

SystemSpec parse_system(std::string_view text) {
  enum class Stage { Start, Header, Params, Coords, Done };
  Stage stage = Stage::Start;
  std::string name;
  std::vector<Param> params;
  std::vector<std::pair<std::string, Parity>> coords;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string lagrangian_text;
  int lagrangian_line = 0, lagrangian_col = 0;

  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);

    size_t hash = raw.find('#');
    if (hash != std::string_view::npos) {
      std::string_view comment = raw.substr(hash + 1);
      if (comment.substr(0, 5) == " meta") {
        std::string_view kv = comment.substr(5);
        size_t eq = kv.find('=');
        auto trim = [](std::string_view s) {
          while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
          while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
          return std::string(s);
        };
        if (eq != std::string_view::npos) metadata.emplace_back(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
      }
      raw = raw.substr(0, hash);
    }
    auto words = split_words(raw);
    if (words.empty()) continue;
    const std::string& head = words[0].first;
    auto fail = [&](const std::string& msg, int col) -> Error {
      return Error(ErrorKind::SyntaxError, msg, line_no, col);
    };

    if (stage == Stage::Done) throw fail("nothing may follow the Lagrangian line", words[0].second);
    if (stage == Stage::Start) {
      if (head != "system") throw fail("expected 'system <name>'", words[0].second);
      if (words.size() != 2 || !is_identifier(words[1].first))
        throw fail("expected 'system <name>'", words.size() > 1 ? words[1].second : words[0].second);
      name = words[1].first;
      stage = Stage::Header;
      continue;
    }
    if (head == "param") {
      if (stage == Stage::Coords) throw fail("param declarations must precede coord declarations", words[0].second);
      if (words.size() < 2 || words.size() > 3 || !is_identifier(words[1].first))
        throw fail("expected 'param <name> [positive]'", words[0].second);
      if (words.size() == 3 && words[2].first != "positive")
        throw fail("expected 'positive' or end of line", words[2].second);
      if (words[1].first[0] == 'd') throw fail("parameter names may not begin with 'd'", words[1].second);
      params.push_back(Param{Symbol(words[1].first), words.size() == 3});
      stage = Stage::Params;
      continue;
    }
    if (head == "coord") {
      if (words.size() != 3 || !is_identifier(words[1].first))
        throw fail("expected 'coord <name> <even|odd>'", words[0].second);
      if (words[1].first[0] == 'd') throw fail("coordinate names may not begin with 'd'", words[1].second);
      Parity p;
      if (words[2].first == "even")
        p = Parity::Even;
      else if (words[2].first == "odd")
        p = Parity::Odd;
      else
        throw fail("parity must be 'even' or 'odd'", words[2].second);
      for (const auto& [n, q] : coords)
        if (n == words[1].first)
          throw Error(ErrorKind::DuplicateCoord, "coordinate '" + n + "' declared twice", line_no, words[1].second);
      coords.emplace_back(words[1].first, p);
      stage = Stage::Coords;
      continue;
    }
    if (head == "L" || head.rfind("L=", 0) == 0) {
      if (stage != Stage::Coords) throw fail("the Lagrangian must follow at least one coord declaration", words[0].second);
      size_t eq = raw.find('=');
      std::string_view lhs = raw.substr(0, eq == std::string_view::npos ? raw.size() : eq);
      if (eq == std::string_view::npos || split_words(lhs).size() != 1) throw fail("expected 'L = <expression>'", words[0].second);
      lagrangian_text = std::string(raw.substr(eq + 1));
      lagrangian_line = line_no;
      lagrangian_col = static_cast<int>(eq) + 2;
      stage = Stage::Done;
      continue;
    }
    throw fail("unknown declaration '" + head + "'", words[0].second);
  }
  if (stage == Stage::Start) throw Error(ErrorKind::SyntaxError, "empty document: expected 'system <name>'", 1, 1);
  if (stage != Stage::Done) throw Error(ErrorKind::SyntaxError, "missing 'L = <expression>' line", line_no, 1);

  SystemSpec spec;
  try {
    spec = SystemSpec(name, params, coords);
  } catch (const Error& e) {
    throw Error(e.kind(), e.what(), lagrangian_line, 1);
  }
  spec.metadata = std::move(metadata);

  auto names = spec.lagrangian_names();
  RawExpr tree = parse_raw_expression(lagrangian_text, lagrangian_line, lagrangian_col);
  spec.lagrangian = normalize(tree, [&](const RawExpr& n) -> Expr {
    auto it = names.find(n.name);
    if (it != names.end()) return Expr(it->second);
    if (n.name == "t")
      throw Error(ErrorKind::NonAutonomous, "explicit time 't' in the Lagrangian", n.line, n.column);
    for (const auto& s : spec.coords())
      if (n.name == "dd" + s.name())
        throw Error(ErrorKind::UnknownSymbol, "second derivative '" + n.name + "' is not allowed", n.line, n.column);
    throw Error(ErrorKind::UnknownSymbol, "unknown symbol '" + n.name + "'", n.line, n.column);
  });
  if (spec.lagrangian.parity() != Parity::Even)
    throw Error(ErrorKind::ParityViolation, "the Lagrangian must be even", lagrangian_line, lagrangian_col);
  return spec;
}

std::string emit_system(const SystemSpec& spec) {
  std::ostringstream os;
  os << "system " << spec.name << "\n";
  for (const auto& [k, v] : spec.metadata) os << "# meta " << k << " = " << v << "\n";
  for (const auto& p : spec.params) os << "param " << p.symbol.name() << (p.positive ? " positive" : "") << "\n";
  for (const auto& c : spec.coords()) os << "coord " << c.name() << " " << to_string(c.parity()) << "\n";
  os << "L = " << spec.lagrangian.str() << "\n";
  return os.str();
}

SystemSpec load_system(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

}  // namespace ib
