#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crnc/linalg.hpp"

namespace crnc {

struct Species {
  std::string name;
  std::size_t index = 0;
};

struct StoichTerm {
  std::size_t species = 0;
  int coefficient = 1;
};

struct Reaction {
  std::vector<StoichTerm> reactants;
  std::vector<StoichTerm> products;
  std::string label;
};

// reactant-reaction pair: species i is consumed by reaction j
struct ReactantPair {
  std::size_t species = 0;
  std::size_t reaction = 0;
  bool operator==(const ReactantPair&) const = default;
};

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& msg);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_, column_;
};

class ReactionNetwork {
public:
  ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions);

  std::size_t n() const { return species_.size(); }
  std::size_t nu() const { return reactions_.size(); }
  std::size_t s() const { return pairs_.size(); }

  const std::vector<Species>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const std::vector<ReactantPair>& reactant_pairs() const { return pairs_; }
  std::optional<std::size_t> species_index(std::string_view name) const;

  int alpha(std::size_t i, std::size_t j) const { return alpha_[i * nu() + j]; }
  int beta(std::size_t i, std::size_t j) const { return beta_[i * nu() + j]; }
  const RationalMatrix& gamma() const { return gamma_; }

private:
  std::vector<Species> species_;
  std::vector<Reaction> reactions_;
  std::vector<int> alpha_, beta_;
  RationalMatrix gamma_;
  std::vector<ReactantPair> pairs_;
};

ReactionNetwork parse_network(std::string_view text);
ReactionNetwork load_network(const std::string& path);
std::string to_dsl(const ReactionNetwork& net);
std::string network_hash(const ReactionNetwork& net);
std::string reaction_string(const ReactionNetwork& net, std::size_t j);
std::string pair_string(const ReactionNetwork& net, const ReactantPair& p);

struct ConservationAnalysis {
  RationalMatrix left_kernel_basis;  // D, d x n
  std::optional<RationalVector> positive_law;
  std::optional<RationalVector> positive_flux;
  bool conservative() const { return positive_law.has_value(); }
};

ConservationAnalysis conservation_analysis(const ReactionNetwork& net);

}  // namespace crnc
