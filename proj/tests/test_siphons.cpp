#include <doctest.h>

#include <random>

#include "crnc/corpus.hpp"
#include "crnc/siphons.hpp"
#include "oracles.hpp"

using namespace crnc;

namespace {

ReactionNetwork random_network(std::mt19937_64& rng, std::size_t n, std::size_t nu) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("X" + std::to_string(i + 1));
  std::uniform_int_distribution<std::size_t> sp(0, n - 1);
  std::uniform_int_distribution<int> arity(0, 2);
  std::vector<Reaction> rx;
  while (rx.size() < nu) {
    auto side = [&] {
      std::vector<StoichTerm> s;
      int k = arity(rng);
      for (int t = 0; t < k; ++t) {
        std::size_t i = sp(rng);
        if (std::none_of(s.begin(), s.end(), [&](const StoichTerm& q) { return q.species == i; })) s.push_back({i, 1});
      }
      return s;
    };
    Reaction r{side(), side(), ""};
    if (r.reactants.empty() && r.products.empty()) continue;
    rx.push_back(r);
  }
  return ReactionNetwork(names, rx);
}

}  // namespace

TEST_CASE("siphon predicate") {
  ReactionNetwork net = parse_network("species: A, B, C\nC -> A\n0 -> B\nA + B -> C\n");
  CHECK(is_siphon(net, {0, 2}));
  CHECK_FALSE(is_siphon(net, {1}));
  CHECK_FALSE(is_siphon(net, {0}));
}

TEST_CASE("branch and bound equals brute force and subset enumeration") {
  for (const auto& e : corpus()) {
    ReactionNetwork net = corpus_network(e);
    auto bb = enumerate_minimal_siphons(net);
    CHECK_MESSAGE(bb == brute_force_minimal_siphons(net), e.name);
    CHECK_MESSAGE(bb == oracle::siphons_by_subsets(net), e.name);
  }
  std::mt19937_64 rng(8);
  for (int t = 0; t < 150; ++t) {
    ReactionNetwork net = random_network(rng, 3 + t % 6, 2 + t % 7);
    auto bb = enumerate_minimal_siphons(net);
    CHECK(bb == oracle::siphons_by_subsets(net));
    for (const auto& s : bb) CHECK(is_siphon(net, s));
  }
}

TEST_CASE("bundled networks are structurally persistent") {
  for (const auto& e : corpus()) {
    SiphonReport r = siphon_report(corpus_network(e), 2);
    CHECK_MESSAGE(r.all_structurally_persistent, e.name);
    CHECK(r.discharged.size() == r.minimal_siphons.size());
  }
}

TEST_CASE("an undischarged siphon") {
  // A is drained and never made
  ReactionNetwork net = parse_network("A -> B\nB -> 0\n0 -> B\n");
  SiphonReport r = siphon_report(net);
  REQUIRE(r.minimal_siphons.size() == 1);
  CHECK(r.minimal_siphons[0] == SpeciesSet{0});
  CHECK_FALSE(r.discharged[0]);
  CHECK_FALSE(r.all_structurally_persistent);
  CHECK_FALSE(contains_conservation_support(net, {0}));
  CHECK(contains_conservation_support(parse_network("A <-> B\n"), {0, 1}));
}
