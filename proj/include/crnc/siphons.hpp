#pragma once

#include <string>
#include <vector>

#include "crnc/model.hpp"

namespace crnc {

using SpeciesSet = std::vector<std::size_t>;  // sorted indices

bool is_siphon(const ReactionNetwork& net, const SpeciesSet& p);
std::vector<SpeciesSet> enumerate_minimal_siphons(const ReactionNetwork& net);
std::vector<SpeciesSet> brute_force_minimal_siphons(const ReactionNetwork& net);  // n <= 20

struct SiphonReport {
  std::vector<SpeciesSet> minimal_siphons;
  std::vector<bool> discharged;  // contains the support of a nonnegative conservation law
  bool all_structurally_persistent = false;
  std::string definition_note;
};

// true when some w >= 0, w != 0, w^T Gamma = 0 has support inside p
bool contains_conservation_support(const ReactionNetwork& net, const SpeciesSet& p);
SiphonReport classify_siphons(const ReactionNetwork& net, const std::vector<SpeciesSet>& siphons, unsigned jobs = 1);
SiphonReport siphon_report(const ReactionNetwork& net, unsigned jobs = 1);

}  // namespace crnc
