#include "crnc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crnc/contraction.hpp"
#include "crnc/siphons.hpp"

namespace crnc {

namespace {

// a lone "0" row stands for a zero row of full width
RationalMatrix fixture_matrix(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream all(text);
  std::string line;
  std::size_t width = 0;
  while (std::getline(all, line, ';')) {
    std::stringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    width = std::max(width, toks.size());
    rows.push_back(std::move(toks));
  }
  std::string out;
  for (auto& r : rows) {
    if (r.size() == 1 && r[0] == "0") r.assign(width, "0");
    for (const auto& t : r) out += t + " ";
    out += ";";
  }
  return RationalMatrix::parse(out);
}

std::vector<CorpusEntry> build() {
  std::vector<CorpusEntry> c;
  {
    CorpusEntry e;
    e.name = "ptm_simplified";
    e.title = "post-translational modification, irreversible binding";
    e.dsl = "species: S, E, C1, P, D, C2\nS + E -> C1\nC1 -> P + E\nP + D -> C2\nC2 -> S + D\n";
    e.gamma = "-1 0 0 1; -1 1 0 0; 1 -1 0 0; 0 1 -1 0; 0 0 -1 1; 0 0 1 -1";
    e.C = "-1 0 0 1; -1 1 0 0; 1 0 -1 0; 0 1 -1 0; 0 1 0 -1; 0 0 1 -1";
    e.B = "1 0 0 0 0 0; 0 1 0 0 0 0; 0 0 1 1 0 0; 0 0 0 1 0 0; 0 0 0 1 -1 0; 0 0 0 0 0 1";
    e.lambdas = {
        "-1 0 0 0 0 0; 0 -1 0 0 1 0; 0 0 -1 0 0 -1; 0; 0; 0",
        "-1 0 0 0 -1 0; 0 -1 0 0 0 0; 0 0 -1 1 0 0; 0; 0; 0",
        "0; 0 -1 0 0 0 0; 0; 0 0 1 -1 0 0; -1 0 0 0 -1 0; 0",
        "0; 0; 0 -1 -1 0 0 0; 0 0 0 -1 0 0; 0; 0 0 0 0 1 -1",
        "0; 0; -1 0 -1 0 0 0; 0 0 0 -1 1 0; 0; 0 0 0 0 0 -1",
        "-1 0 -1 0 0 0; 0; 0; 0; 0 0 0 1 -1 0; 0 0 0 0 0 -1",
    };
    e.exponents = {1, 1, 0, 1, 0, 1};
    e.defaults.anchor = std::vector<double>(6, 0.5);
    c.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "ptm_full";
    e.title = "post-translational modification with reversible binding";
    e.dsl = "species: S, E, C1, P, D, C2\nS + E <-> C1\nC1 -> P + E\nP + D <-> C2\nC2 -> S + D\n";
    e.gamma = "-1 1 0 0 0 1; -1 1 1 0 0 0; 1 -1 -1 0 0 0; 0 0 1 -1 1 0; 0 0 0 -1 1 1; 0 0 0 1 -1 -1";
    e.C = "0 0 1 0 0 -1; -1 1 1 0 0 0; 0 0 1 -1 1 0; -1 1 0 0 0 1; 0 0 0 -1 1 1; 1 -1 0 -1 1 0";
    e.lambdas = {
        "0; 1 -1 0 0 0 0; 0; 0 0 0 -1 0 0; 0; 0 0 0 0 1 -1",
        "0; 0 -1 0 0 0 0; 0; -1 0 0 -1 0 0; 0; 0 0 1 0 0 -1",
        "0; 0 -1 0 0 0 0; 0; -1 0 0 -1 0 0; 0; 0 0 1 0 0 -1",
        "-1 0 0 -1 0 0; 0 -1 0 0 0 0; 0 0 -1 0 0 1; 0; 0; 0",
        "0; 0; 0 0 -1 0 0 0; 0; -1 0 0 0 -1 0; 0 -1 0 0 0 -1",
        "0; 0; 1 0 -1 0 0 0; 0; 0 0 0 0 -1 0; 0 0 0 -1 0 -1",
        "0; 0; 1 0 -1 0 0 0; 0; 0 0 0 0 -1 0; 0 0 0 -1 0 -1",
        "-1 0 1 0 0 0; 0; 0; 0 0 0 -1 0 -1; 0 0 0 0 -1 0; 0",
    };
    e.ptheta_b_const = "-1/2 1/4 -1/4 1/2 -1/4 1/4; 0 1/2 -1/2 0 0 0; 0 0 0 1 0 0; 1 0 0 0 0 0; "
                       "0 0 0 0 1/2 -1/2; -1/2 -1/4 1/4 1/2 1/4 -1/4";
    e.ptheta_b_theta = "0 0 0 0 0 0; 0 1/2 -1/2 0 0 0; 0 0 0 1 0 0; 1 0 0 0 0 0; 0 0 0 0 1/2 -1/2; 0 0 0 0 0 0";
    e.S_minus = {2, 3, 4, 5};
    e.depth_classes = {{1, 6}};
    e.exponents = {0, 1, 1, 1, 1, 0};
    e.defaults.box_lo = 0.2;
    e.defaults.anchor = std::vector<double>(6, 0.5);
    c.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "three_body";
    e.title = "ternary complex formation";
    e.dsl = "species: A, B, C, AB, BC, ABC\n"
            "A + B -> AB\nC + B -> BC\nA + BC -> ABC\nABC -> C + AB\n"
            "AB -> A + B\nBC -> C + B\nABC -> A + BC\nC + AB -> ABC\n";
    e.candidate = CandidateKind::Identity;
    e.B = "1 0 0 0 0 0; 0 1 0 0 0 0; 0 0 1 0 0 0; 0 0 0 1 0 0; 0 0 0 0 1 0; 0 0 0 0 0 1";
    e.lambdas = {
        "-1 0 0 0 0 0; 0 -1 0 0 -1 0; 0; 0 0 0 -1 0 -1; 0; 0",
        "-1 0 0 0 0 0; 0; 0; 0; 0 -1 0 0 -1 0; 0 0 0 -1 0 -1",
        "-1 0 0 0 1 0; 0 -1 0 0 0 0; 0; 0 0 1 -1 0 0; 0; 0",
        "0; 0 -1 0 0 0 0; 0 0 -1 1 0 0; 0; 1 0 0 0 -1 0; 0",
        "0; 0 -1 0 -1 0 0; 0 0 -1 0 0 0; 0; 0 0 0 0 -1 -1; 0",
        "0; 0; 0 0 -1 0 0 0; 0 -1 0 -1 0 0; 0; 0 0 0 0 -1 -1",
        "-1 0 0 0 0 -1; 0 -1 1 0 0 0; 0; 0 0 0 -1 0 0; 0; 0",
        "0; 0; 0 1 -1 0 0 0; 0 0 0 -1 0 0; 0; -1 0 0 0 0 -1",
        "-1 1 0 0 0 0; 0; 0; 0; 0 0 0 0 -1 0; 0 0 -1 0 0 -1",
        "0; 1 -1 0 0 0 0; 0 0 -1 0 0 -1; 0; 0 0 0 0 -1 0; 0",
        "0; 0; 0 0 -1 0 -1 0; -1 0 0 -1 0 0; 0; 0 0 0 0 0 -1",
        "-1 0 0 -1 0 0; 0; 0; 0; 0 0 -1 0 -1 0; 0 0 0 0 0 -1",
    };
    e.S_minus = {1, 2, 3, 4, 5, 6};
    e.exponents = {0, 0, 0, 0, 0, 0};
    e.diagonal_strict = true;
    e.defaults.anchor = std::vector<double>(6, 0.5);
    c.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "proofreading_n2";
    e.title = "kinetic proofreading, two steps";
    e.dsl = "species: M, L, C0, C1, C2\n"
            "M + L -> C0\nC0 -> M + L\nC0 -> C1\nC1 -> C2\nC1 -> M + L\nC2 -> M + L\n";
    e.candidate = CandidateKind::User;
    e.gamma = "-1 1 0 0 1 1; -1 1 0 0 1 1; 1 -1 -1 0 0 0; 0 0 1 -1 -1 0; 0 0 0 1 0 -1";
    e.C = "0 0 0 1 0 -1; 0 0 1 -1 -1 0; 0 0 1 0 -1 -1; 1 -1 -1 0 0 0; 1 -1 -1 1 0 -1; 1 -1 0 -1 -1 0; "
          "1 -1 0 0 -1 -1";
    e.lambda_bar = "-r5-r7 & 0 & r5 & 0 & 0 & 0 & 0;"
                   "0 & -r4-r5-r6 & 0 & 0 & 0 & r4 & 0;"
                   "r6 & r7 & -r4-r6-r7 & 0 & 0 & 0 & r4;"
                   "0 & 0 & -r1-r2 & -r1-r2-r3-r4 & 0 & 0 & 0;"
                   "r3+r4 & -r1-r2 & 0 & r7 & -r1-r2-r3-r4-r5-r7 & 0 & r5;"
                   "-r1-r2 & r3 & 0 & r5+r6 & 0 & -r1-r2-r3-r5-r6 & 0;"
                   "0 & 0 & r3 & 0 & r6 & r7 & -r1-r2-r3-r6-r7";
    e.S_minus = {1, 2, 4, 7};
    e.depth_classes = {{3, 5, 6}};
    e.exponents = {1, 1, 0, 1, 0, 0, 1};
    e.theta_bar_box_lo = 1;
    e.theta_bar_box_hi = 2;
    e.theta_bar_expected = "1/3";
    e.defaults.anchor = std::vector<double>(5, 0.5);
    c.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "phosphorelay_n2";
    e.title = "two-stage phosphorelay";
    e.dsl = "species: X1, X1p, X2, X2p, X3, X3p, C1, C2\n"
            "X1 -> X1p\nX2 + X1p <-> C1\nC1 <-> X2p + X1\nX2p + X3 <-> C2\nC2 <-> X3p + X2\nX3p -> X3\n";
    e.candidate = CandidateKind::User;
    e.gamma = "-1 0 0 1 -1 0 0 0 0 0; 1 -1 1 0 0 0 0 0 0 0; 0 -1 1 0 0 0 0 1 -1 0; 0 0 0 1 -1 -1 1 0 0 0;"
              "0 0 0 0 0 -1 1 0 0 1; 0 0 0 0 0 0 0 1 -1 -1; 0 1 -1 -1 1 0 0 0 0 0; 0 0 0 0 0 1 -1 -1 1 0";
    e.C = "-1 0 0 1 -1 0 0 0 0 0; 1 -1 1 0 0 0 0 0 0 0; 0 -1 1 0 0 0 0 1 -1 0; 0 0 0 1 -1 -1 1 0 0 0;"
          "0 0 0 0 0 -1 1 0 0 1; 0 0 0 0 0 0 0 1 -1 -1; 0 1 -1 -1 1 0 0 0 0 0; 0 0 0 0 0 1 -1 -1 1 0;"
          "-1 0 0 0 0 1 -1 0 0 0; 1 0 0 0 0 0 0 -1 1 0; 0 0 0 -1 1 0 0 1 -1 0; 0 -1 1 0 0 1 -1 0 0 0;"
          "0 -1 1 0 0 0 0 0 0 1; 0 0 0 1 -1 0 0 0 0 -1; -1 0 0 0 0 0 0 0 0 1";
    e.lambda_bar =
        "-r1-r2-r6-r12 & -r12 & 0 & 0 & 0 & 0 & 0 & 0 & r6 & 0 & 0 & 0 & 0 & 0 & 0;"
        "-r11 & -r1-r3-r4-r11 & 0 & 0 & 0 & 0 & -r1 & 0 & 0 & r4 & 0 & 0 & 0 & 0 & 0;"
        "0 & 0 & -r3-r4-r5-r9-r11-r14 & 0 & 0 & 0 & 0 & 0 & 0 & -r3 & r11 & r14 & r9 & 0 & 0;"
        "0 & 0 & 0 & -r2-r6-r7-r8-r12-r13 & 0 & 0 & 0 & 0 & -r2 & 0 & -r13 & -r12 & 0 & r8 & 0;"
        "0 & 0 & 0 & 0 & -r7-r8-r10-r13 & -r13 & 0 & -r10 & 0 & 0 & 0 & 0 & 0 & -r7 & 0;"
        "0 & 0 & 0 & 0 & -r14 & -r5-r9-r10-r14 & 0 & 0 & 0 & 0 & 0 & 0 & -r5 & 0 & 0;"
        "-r3 & -r2 & 0 & 0 & 0 & 0 & -r2-r3-r4-r6-r11-r12 & 0 & 0 & 0 & r4 & -r6 & 0 & 0 & 0;"
        "0 & 0 & 0 & 0 & -r9 & -r8 & 0 & -r5-r7-r8-r9-r13-r14 & 0 & 0 & -r7 & r5 & 0 & 0 & 0;"
        "r7 & 0 & 0 & -r1 & 0 & 0 & 0 & 0 & -r1-r7-r8-r13 & -r13 & 0 & 0 & 0 & 0 & r8;"
        "0 & r5 & 0 & 0 & 0 & 0 & 0 & 0 & -r14 & -r1-r5-r9-r14 & -r1 & 0 & 0 & 0 & -r9;"
        "0 & 0 & r12 & -r14 & 0 & 0 & r5 & -r6 & 0 & -r2 & -r2-r5-r6-r9-r12-r14 & 0 & 0 & -r9 & 0;"
        "0 & 0 & r13 & -r11 & 0 & 0 & -r7 & r4 & r3 & 0 & 0 & -r3-r4-r7-r8-r11-r13 & r8 & 0 & 0;"
        "0 & 0 & r10 & 0 & 0 & -r4 & 0 & 0 & 0 & 0 & 0 & 0 & -r3-r4-r10-r11 & -r11 & r3;"
        "0 & 0 & 0 & 0 & -r6 & 0 & 0 & 0 & 0 & 0 & -r10 & 0 & -r12 & -r2-r6-r10-r12 & -r2;"
        "0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & 0 & -r10 & 0 & 0 & 0 & -r1 & -r1-r10";
    e.S_minus = {1, 2, 3, 4, 5, 6, 7, 8};
    e.depth_classes = {{9, 10, 11, 12, 13, 14}, {15}};
    e.exponents = {2, 2, 2, 2, 2, 2, 2, 2, 1, 1, 1, 1, 1, 1, 0};
    e.defaults.anchor = std::vector<double>(8, 0.5);
    c.push_back(e);
  }
  {
    CorpusEntry e;
    e.name = "unstable_abc";
    e.title = "nonexpansive network with unbounded trajectories";
    e.dsl = "species: A, B, C\nC -> A\n0 -> B\nA + B -> C\n";
    e.gamma = "1 0 -1; 0 1 -1; -1 0 1";
    e.B = "1 0 0; 0 1 0; 1 -1 0";
    e.defaults.box_lo = 0.05;
    e.defaults.box_hi = 0.5;
    e.defaults.anchor = std::vector<double>(3, 0.25);
    c.push_back(e);
  }
  return c;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string t; std::getline(ss, t, sep);) out.push_back(t);
  return out;
}

std::string set_string(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s + "}";
}

std::vector<std::size_t> one_based(const std::vector<std::size_t>& v) {
  std::vector<std::size_t> out;
  for (auto i : v) out.push_back(i + 1);
  return out;
}

// rows equal as a set up to sign
bool same_rows_up_to_sign(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  auto canon = [](const RationalMatrix& m) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      RationalVector r = m.row(i);
      auto first = std::find_if(r.begin(), r.end(), [](const Rational& q) { return sgn(q) != 0; });
      if (first != r.end() && sgn(*first) < 0)
        for (auto& q : r) q = -q;
      std::vector<std::string> s;
      for (const auto& q : r) s.push_back(q.get_str());
      rows.push_back(s);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  return canon(a) == canon(b);
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build();
  return entries;
}

const CorpusEntry* find_corpus(const std::string& name) {
  for (const auto& e : corpus())
    if (e.name == name) return &e;
  return nullptr;
}

const CorpusEntry* match_corpus(const ReactionNetwork& net) {
  static const std::vector<std::string> hashes = [] {
    std::vector<std::string> h;
    for (const auto& e : corpus()) h.push_back(network_hash(corpus_network(e)));
    return h;
  }();
  const std::string h = network_hash(net);
  for (std::size_t k = 0; k < hashes.size(); ++k)
    if (hashes[k] == h) return &corpus()[k];
  return nullptr;
}

ReactionNetwork corpus_network(const CorpusEntry& e) { return parse_network(e.dsl); }

std::vector<RationalMatrix> coefficient_matrices(const std::string& symbolic, std::size_t s) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : split(symbolic, ';')) {
    if (trim(row).empty()) continue;
    cells.push_back(split(row, '&'));
  }
  const std::size_t m = cells.size();
  std::vector<RationalMatrix> out(s, RationalMatrix(m, m));
  for (std::size_t i = 0; i < m; ++i) {
    if (cells[i].size() != m) throw std::invalid_argument("symbolic matrix is not square");
    for (std::size_t j = 0; j < m; ++j) {
      std::string t;
      for (char ch : cells[i][j])
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
      if (t == "0") continue;
      std::size_t pos = 0;
      while (pos < t.size()) {
        int sign = 1;
        if (t[pos] == '+' || t[pos] == '-') sign = t[pos++] == '-' ? -1 : 1;
        long coef = 1;
        if (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) {
          std::size_t used = 0;
          coef = std::stol(t.substr(pos), &used);
          pos += used;
          if (pos >= t.size() || t[pos] != '*') throw std::invalid_argument("bad term in '" + t + "'");
          ++pos;
        }
        if (pos >= t.size() || t[pos] != 'r') throw std::invalid_argument("bad term in '" + t + "'");
        ++pos;
        std::size_t used = 0;
        std::size_t l = std::stoul(t.substr(pos), &used);
        pos += used;
        if (l == 0 || l > s) throw std::invalid_argument("rho index out of range in '" + t + "'");
        out[l - 1](i, j) += sign * coef;
      }
    }
  }
  return out;
}

std::vector<RationalMatrix> corpus_lambdas(const CorpusEntry& e, const ReactionNetwork& net) {
  std::vector<RationalMatrix> out;
  if (!e.lambdas.empty())
    for (const auto& t : e.lambdas) out.push_back(fixture_matrix(t));
  else if (!e.lambda_bar.empty())
    out = coefficient_matrices(e.lambda_bar, net.s());
  return out;
}

GlfCandidate corpus_candidate(const CorpusEntry& e, const ReactionNetwork& net) {
  if (e.candidate == CandidateKind::User) {
    RationalMatrix c = fixture_matrix(e.C);
    return candidate_C(net, CandidateKind::User, &c);
  }
  return align_to_printed(e, candidate_C(net, e.candidate));
}

GlfCandidate align_to_printed(const CorpusEntry& e, GlfCandidate cand) {
  if (e.C.empty() || cand.kind != CandidateKind::MaxMin) return cand;
  RationalMatrix printed = fixture_matrix(e.C);
  if (same_rows_up_to_sign(cand.C, printed)) cand.C = printed;
  return cand;
}

std::vector<FixtureCheck> verify_fixtures(unsigned jobs) {
  std::vector<FixtureCheck> out;
  for (const auto& e : corpus()) {
    auto add = [&](const std::string& name, bool ok, std::string detail = "") {
      out.push_back({e.name, name, ok, std::move(detail)});
    };
    ReactionNetwork net = corpus_network(e);
    add("dsl round trip", network_hash(parse_network(to_dsl(net))) == network_hash(net));
    if (!e.gamma.empty()) add("gamma matches printed", fixture_matrix(e.gamma) == net.gamma());

    // fixtures act in the row basis of the printed C
    const RationalMatrix C = e.C.empty() ? corpus_candidate(e, net).C : fixture_matrix(e.C);
    if (!e.C.empty() && e.candidate != CandidateKind::User)
      add("candidate C equals printed C up to row order and sign",
          same_rows_up_to_sign(candidate_C(net, e.candidate).C, fixture_matrix(e.C)));
    add("ker C = ker Gamma", same_right_kernel(C, net.gamma()));

    RationalMatrix B;
    if (!e.B.empty()) {
      B = fixture_matrix(e.B);
      RationalMatrix bg = B * net.gamma();
      bool ok = e.candidate == CandidateKind::MaxMin && e.C.empty() ? same_rows_up_to_sign(bg, C) : bg == C;
      add("B Gamma = C", ok);
    }

    auto lambdas = corpus_lambdas(e, net);
    if (!lambdas.empty()) {
      bool shape = lambdas.size() == net.s();
      add("one Lambda per reactant pair", shape,
          std::to_string(lambdas.size()) + " printed, s = " + std::to_string(net.s()));
      if (!shape) continue;
      auto fam = rank_one_factors(net);
      std::size_t bad_eq = 0, bad_mu = 0;
      for (std::size_t l = 0; l < lambdas.size(); ++l) {
        if (C * fam.Q[l] != lambdas[l] * C) ++bad_eq;
        if (sgn(mu_inf(lambdas[l])) > 0) ++bad_mu;
      }
      add("C Q_l = Lambda_l C for every printed Lambda_l", bad_eq == 0, std::to_string(bad_eq) + " mismatches");
      add("mu_inf(Lambda_l) <= 0 for every printed Lambda_l", bad_mu == 0, std::to_string(bad_mu) + " violations");

      WeakContractivityReport rep = classify(lambda_bar(lambdas, RationalVector(lambdas.size(), Rational(1))));
      ContractorMatrix p = contractor(rep);
      if (!e.S_minus.empty())
        add("S_minus at rho = 1", one_based(rep.S_minus) == e.S_minus, set_string(one_based(rep.S_minus)));
      if (!e.S_minus.empty()) {
        std::vector<std::vector<std::size_t>> dc;
        for (const auto& d : rep.depth_classes) dc.push_back(one_based(d));
        std::string got;
        for (const auto& d : dc) got += set_string(d);
        add("depth classes", rep.weakly_contractive && dc == e.depth_classes, got.empty() ? "none" : got);
      }
      if (!e.exponents.empty()) {
        std::vector<std::size_t> ex(p.exponents.begin(), p.exponents.end());
        add("contractor exponents match printed P_theta",
            std::equal(p.exponents.begin(), p.exponents.end(), e.exponents.begin(), e.exponents.end()),
            set_string(ex));
      }
      if (!e.ptheta_b_const.empty()) {
        RationalMatrix k0 = fixture_matrix(e.ptheta_b_const), k1 = fixture_matrix(e.ptheta_b_theta);
        bool ok = k0 * net.gamma() == C;  // P_0 B = B
        for (const char* th : {"0", "1/3", "2"}) {
          Rational t = parse_rational(th);
          ok = ok && p.at(t) * k0 == k0 + k1.scaled(t);
        }
        add("printed P_theta B = contractor times B, B Gamma = C", ok);
      }
      if (e.diagonal_strict) {
        GlfCertificate cert;
        cert.kind = e.candidate;
        cert.C = C;
        cert.B = e.B.empty() ? solve_right_factor(net.gamma(), C).value_or(RationalMatrix()) : B;
        cert.lambdas = lambdas;
        StrictCheck sc = diagonal_strict_check(net, cert);
        add("diagonal strict contraction check", (sc == StrictCheck::Holds) == *e.diagonal_strict, to_string(sc));
      }
      if (e.theta_bar_box_lo) {
        RhoBox box{std::vector<double>(net.s(), *e.theta_bar_box_lo), std::vector<double>(net.s(), *e.theta_bar_box_hi)};
        ThetaBarOptions to;
        to.jobs = jobs;
        auto tb = theta_bar_and_rate(lambdas, p, box, to);
        Rational expected = parse_rational(e.theta_bar_expected);
        Rational step(1, 1 << to.resolution_bits);
        bool ok = !tb.unbounded && tb.theta_bar <= expected && expected - tb.theta_bar <= step;
        add("sampled theta_bar matches printed min-formula", ok,
            tb.theta_bar.get_str() + " vs " + e.theta_bar_expected);
      }
    }

    auto fast = enumerate_minimal_siphons(net);
    add("minimal siphons equal brute force", fast == brute_force_minimal_siphons(net));
    auto rep = classify_siphons(net, fast, jobs);
    add("every minimal siphon discharged", rep.all_structurally_persistent);
  }
  return out;
}

RationalMatrix load_matrix_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::string text, line;
  while (std::getline(f, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (!trim(line).empty()) text += line + ";";
  }
  RationalMatrix m = RationalMatrix::parse(text);
  if (m.empty()) throw std::runtime_error(path + " holds no matrix");
  return m;
}

void export_corpus(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& e : corpus()) {
    std::ofstream f(std::filesystem::path(dir) / (e.name + ".crn"));
    if (!f) throw std::runtime_error("cannot write into " + dir);
    f << "# " << e.title << "\n" << e.dsl;
    if (!e.C.empty()) {
      std::ofstream g(std::filesystem::path(dir) / (e.name + ".C.txt"));
      g << "# printed C, one row per line\n";
      for (const auto& row : split(e.C, ';')) g << trim(row) << "\n";
    }
  }
}

}  // namespace crnc
