#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crnc/certificates.hpp"
#include "crnc/model.hpp"

namespace crnc {

// defaults the cli uses when a network matches a bundled entry
struct CorpusDefaults {
  double box_lo = 0.1;
  double box_hi = 2.0;
  std::vector<double> anchor;  // class anchor for steady state, extent and entrainment
};

struct CorpusEntry {
  std::string name;
  std::string title;
  std::string dsl;
  CandidateKind candidate = CandidateKind::MaxMin;
  std::string gamma;    // printed stoichiometry, "" if none
  std::string C;        // printed C, "" if none
  std::string B;        // printed B, "" if none
  std::vector<std::string> lambdas;  // printed Lambda_l as numeric matrices
  std::string lambda_bar;  // printed symbolic sum_l rho_l Lambda_l, rows ';', entries '&'
  std::string ptheta_b_const, ptheta_b_theta;  // printed P_theta B = const + theta * coeff
  std::vector<std::size_t> S_minus;  // 1-based, expected at rho = 1
  std::vector<std::vector<std::size_t>> depth_classes;
  std::vector<unsigned> exponents;
  std::optional<bool> diagonal_strict;
  std::optional<double> theta_bar_box_lo, theta_bar_box_hi;  // rho box for the theta_bar fixture
  std::string theta_bar_expected;  // rational, from the printed min-formula at the box vertices
  CorpusDefaults defaults;
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry* find_corpus(const std::string& name);
const CorpusEntry* match_corpus(const ReactionNetwork& net);  // by network hash

ReactionNetwork corpus_network(const CorpusEntry& e);
// Lambda_l from the printed family: printed list, else the rho_l coefficient of lambda_bar
std::vector<RationalMatrix> corpus_lambdas(const CorpusEntry& e, const ReactionNetwork& net);
// the C a certify run starts from
GlfCandidate corpus_candidate(const CorpusEntry& e, const ReactionNetwork& net);
// maxmin rows reordered and re-signed to the printed C when they agree as a set
GlfCandidate align_to_printed(const CorpusEntry& e, GlfCandidate cand);

// coefficient matrices of a linear form in r1..rs, entries like "-r1-2*r3+r4" or "0"
std::vector<RationalMatrix> coefficient_matrices(const std::string& symbolic, std::size_t s);

struct FixtureCheck {
  std::string network;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<FixtureCheck> verify_fixtures(unsigned jobs = 1);

// one row per line, '#' comments
RationalMatrix load_matrix_file(const std::string& path);

// writes <dir>/<name>.crn and <name>.C.txt (when a C is printed)
void export_corpus(const std::string& dir);

}  // namespace crnc
