#include "crnc/model.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "crnc/lpsolve.hpp"

namespace crnc {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions)
    : reactions_(std::move(reactions)) {
  for (std::size_t i = 0; i < species.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k)
      if (species[k] == species[i]) throw std::invalid_argument("duplicate species " + species[i]);
    species_.push_back({species[i], i});
  }
  const std::size_t n = species_.size(), nu = reactions_.size();
  alpha_.assign(n * nu, 0);
  beta_.assign(n * nu, 0);
  gamma_ = RationalMatrix(n, nu);
  for (std::size_t j = 0; j < nu; ++j) {
    const Reaction& r = reactions_[j];
    if (r.reactants.empty() && r.products.empty()) throw std::invalid_argument("reaction with two empty sides");
    auto fill = [&](const std::vector<StoichTerm>& side, std::vector<int>& m) {
      for (const auto& t : side) {
        if (t.species >= n) throw std::invalid_argument("species index out of range");
        if (t.coefficient <= 0) throw std::invalid_argument("coefficient must be positive");
        if (m[t.species * nu + j] != 0) throw std::invalid_argument("species repeated on one side");
        m[t.species * nu + j] = t.coefficient;
      }
    };
    fill(r.reactants, alpha_);
    fill(r.products, beta_);
    if (reactions_[j].label.empty()) reactions_[j].label = "R" + std::to_string(j + 1);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < nu; ++j) gamma_(i, j) = beta(i, j) - alpha(i, j);
  // species-major: all pairs of species 0 first, by reaction index
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < nu; ++j)
      if (alpha(i, j) > 0) pairs_.push_back({i, j});
}

std::optional<std::size_t> ReactionNetwork::species_index(std::string_view name) const {
  for (const auto& s : species_)
    if (s.name == name) return s.index;
  return std::nullopt;
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;

  std::size_t column() const { return pos - line_start + 1; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line, column(), msg); }
  bool at_end() const { return pos >= text.size(); }
  char peek() const { return at_end() ? '\0' : text[pos]; }
  void skip_blanks() {
    while (!at_end() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
  }
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

struct RawTerm {
  std::string name;
  int coefficient;
  std::size_t line, column;
};

struct RawReaction {
  std::vector<RawTerm> lhs, rhs;
  bool reversible = false;
  std::string label;
};

class Parser {
public:
  explicit Parser(std::string_view text) { c_.text = text; }

  void run() {
    while (!c_.at_end()) {
      parse_line();
      if (c_.peek() == '\n') {
        ++c_.pos;
        ++c_.line;
        c_.line_start = c_.pos;
      }
    }
  }

  std::vector<std::string> header;
  std::vector<RawReaction> reactions;

private:
  Cursor c_;

  std::string read_ident() {
    std::size_t b = c_.pos;
    while (!c_.at_end() && ident_char(c_.peek())) ++c_.pos;
    return std::string(c_.text.substr(b, c_.pos - b));
  }

  std::string rest_of_line() {
    std::size_t b = c_.pos;
    while (!c_.at_end() && c_.peek() != '\n') ++c_.pos;
    std::string s(c_.text.substr(b, c_.pos - b));
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t f = 0;
    while (f < s.size() && std::isspace(static_cast<unsigned char>(s[f]))) ++f;
    return s.substr(f);
  }

  bool looking_at_header() {
    std::size_t save = c_.pos;
    std::string id = read_ident();
    c_.skip_blanks();
    bool yes = id == "species" && c_.peek() == ':';
    c_.pos = save;
    return yes;
  }

  void parse_header() {
    read_ident();
    c_.skip_blanks();
    ++c_.pos;  // ':'
    if (!header.empty()) c_.fail("species header given twice");
    for (;;) {
      c_.skip_blanks();
      if (!ident_start(c_.peek())) c_.fail("expected species name");
      std::size_t col = c_.column();
      std::string id = read_ident();
      for (const auto& h : header)
        if (h == id) throw ParseError(c_.line, col, "species '" + id + "' declared twice");
      header.push_back(id);
      c_.skip_blanks();
      if (c_.peek() == ',') {
        ++c_.pos;
        continue;
      }
      break;
    }
    c_.skip_blanks();
    if (c_.peek() == '#') rest_of_line();
    if (!c_.at_end() && c_.peek() != '\n') c_.fail("unexpected character in species header");
  }

  std::vector<RawTerm> parse_side() {
    std::vector<RawTerm> side;
    c_.skip_blanks();
    if (c_.peek() == '0') {
      std::size_t save = c_.pos;
      ++c_.pos;
      if (!ident_char(c_.peek()) && !std::isdigit(static_cast<unsigned char>(c_.peek()))) {
        std::size_t after = c_.pos;
        c_.skip_blanks();
        if (!ident_start(c_.peek())) return side;
        c_.pos = after;
      }
      c_.pos = save;
    }
    for (;;) {
      c_.skip_blanks();
      std::size_t col = c_.column();
      int coef = 1;
      if (c_.peek() == '-' && c_.pos + 1 < c_.text.size() && std::isdigit(static_cast<unsigned char>(c_.text[c_.pos + 1])))
        c_.fail("negative coefficient");
      if (std::isdigit(static_cast<unsigned char>(c_.peek()))) {
        std::size_t b = c_.pos;
        while (std::isdigit(static_cast<unsigned char>(c_.peek()))) ++c_.pos;
        std::string digits(c_.text.substr(b, c_.pos - b));
        if (digits.size() > 6) c_.fail("coefficient too large");
        coef = std::stoi(digits);
        if (coef == 0) throw ParseError(c_.line, col, "zero coefficient");
        c_.skip_blanks();
        if (c_.peek() == '*') {
          ++c_.pos;
          c_.skip_blanks();
        }
      }
      if (!ident_start(c_.peek())) c_.fail("expected species name");
      std::size_t idcol = c_.column();
      std::string id = read_ident();
      for (const auto& t : side)
        if (t.name == id) throw ParseError(c_.line, idcol, "species '" + id + "' repeated on one side");
      side.push_back({id, coef, c_.line, idcol});
      c_.skip_blanks();
      if (c_.peek() == '+') {
        ++c_.pos;
        continue;
      }
      return side;
    }
  }

  void parse_line() {
    c_.skip_blanks();
    if (c_.at_end() || c_.peek() == '\n') return;
    if (c_.peek() == '#') {
      rest_of_line();
      return;
    }
    if (looking_at_header()) {
      parse_header();
      return;
    }
    for (;;) {
      RawReaction r;
      r.lhs = parse_side();
      c_.skip_blanks();
      if (c_.text.substr(c_.pos, 3) == "<->") {
        r.reversible = true;
        c_.pos += 3;
      } else if (c_.text.substr(c_.pos, 2) == "->") {
        c_.pos += 2;
      } else {
        c_.fail("expected '->' or '<->'");
      }
      r.rhs = parse_side();
      c_.skip_blanks();
      reactions.push_back(std::move(r));
      if (c_.peek() == ';') {
        ++c_.pos;
        c_.skip_blanks();
        if (c_.at_end() || c_.peek() == '\n') return;
        if (c_.peek() == '#') {
          rest_of_line();
          return;
        }
        continue;
      }
      if (c_.peek() == '#') {
        ++c_.pos;
        reactions.back().label = rest_of_line();
        return;
      }
      if (!c_.at_end() && c_.peek() != '\n') c_.fail("unexpected character");
      return;
    }
  }
};

}  // namespace

ReactionNetwork parse_network(std::string_view text) {
  Parser p(text);
  p.run();
  std::vector<std::string> names = p.header;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  auto lookup = [&](const RawTerm& t) {
    auto it = index.find(t.name);
    if (it != index.end()) return it->second;
    index[t.name] = names.size();
    names.push_back(t.name);
    return names.size() - 1;
  };
  auto convert = [&](const std::vector<RawTerm>& side) {
    std::vector<StoichTerm> out;
    for (const auto& t : side) out.push_back({lookup(t), t.coefficient});
    return out;
  };
  std::vector<Reaction> reactions;
  for (const auto& r : p.reactions) {
    auto lhs = convert(r.lhs);
    auto rhs = convert(r.rhs);
    if (lhs.empty() && rhs.empty()) throw ParseError(1, 1, "reaction with two empty sides");
    reactions.push_back({lhs, rhs, r.label});
    if (r.reversible) reactions.push_back({rhs, lhs, r.label.empty() ? "" : r.label + ".rev"});
  }
  if (reactions.empty()) throw ParseError(1, 1, "no reactions");
  return ReactionNetwork(names, reactions);
}

ReactionNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str());
}

namespace {

std::string side_string(const ReactionNetwork& net, const std::vector<StoichTerm>& side) {
  if (side.empty()) return "0";
  std::string s;
  for (std::size_t k = 0; k < side.size(); ++k) {
    if (k) s += " + ";
    if (side[k].coefficient != 1) s += std::to_string(side[k].coefficient) + " ";
    s += net.species()[side[k].species].name;
  }
  return s;
}

}  // namespace

std::string reaction_string(const ReactionNetwork& net, std::size_t j) {
  const Reaction& r = net.reactions().at(j);
  return side_string(net, r.reactants) + " -> " + side_string(net, r.products);
}

std::string pair_string(const ReactionNetwork& net, const ReactantPair& p) {
  return "(" + net.species()[p.species].name + ", " + net.reactions()[p.reaction].label + ")";
}

std::string to_dsl(const ReactionNetwork& net) {
  std::string s = "species: ";
  for (std::size_t i = 0; i < net.n(); ++i) {
    if (i) s += ", ";
    s += net.species()[i].name;
  }
  s += '\n';
  for (std::size_t j = 0; j < net.nu(); ++j) {
    s += reaction_string(net, j);
    if (net.reactions()[j].label != "R" + std::to_string(j + 1)) s += "  # " + net.reactions()[j].label;
    s += '\n';
  }
  return s;
}

std::string network_hash(const ReactionNetwork& net) {
  std::string text = to_dsl(net);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

ConservationAnalysis conservation_analysis(const ReactionNetwork& net) {
  ConservationAnalysis c;
  c.left_kernel_basis = left_kernel(net.gamma());
  if (c.left_kernel_basis.rows() == 0) c.left_kernel_basis = RationalMatrix(0, net.n());
  c.positive_law = positive_point_in_kernel(net.gamma(), KernelSide::Left);
  c.positive_flux = positive_point_in_kernel(net.gamma(), KernelSide::Right);
  return c;
}

}  // namespace crnc
