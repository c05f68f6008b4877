#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "crnc/contraction.hpp"
#include "crnc/corpus.hpp"

using namespace crnc;

TEST_CASE("every bundled fixture passes") {
  auto checks = verify_fixtures(2);
  CHECK(checks.size() > 40);
  for (const auto& c : checks) CHECK_MESSAGE(c.passed, c.network << ": " << c.name << " " << c.detail);
}

TEST_CASE("lookups") {
  CHECK(corpus().size() == 6);
  CHECK(find_corpus("ptm_full"));
  CHECK_FALSE(find_corpus("nope"));
  ReactionNetwork net = corpus_network(*find_corpus("three_body"));
  const CorpusEntry* m = match_corpus(parse_network(to_dsl(net)));
  REQUIRE(m);
  CHECK(m->name == "three_body");
  CHECK_FALSE(match_corpus(parse_network("A -> B\n")));
}

TEST_CASE("maxmin rows follow the printed order") {
  const CorpusEntry* e = find_corpus("ptm_full");
  ReactionNetwork net = corpus_network(*e);
  GlfCandidate c = corpus_candidate(*e, net);
  CHECK(c.kind == CandidateKind::MaxMin);
  CHECK(c.C == RationalMatrix::parse(e->C));
  GlfVerification v = verify_glf(net, c);
  REQUIRE(v.certificate);
  WeakContractivityReport r = classify_at_one(*v.certificate);
  CHECK(r.S_zero == std::vector<std::size_t>{0, 5});
  CHECK(r.max_depth == 1);
  CHECK(contractor(r).exponents == std::vector<unsigned>{0, 1, 1, 1, 1, 0});
}

TEST_CASE("synthesized classifications match the printed ones") {
  for (const char* name : {"ptm_simplified", "proofreading_n2", "phosphorelay_n2"}) {
    const CorpusEntry* e = find_corpus(name);
    ReactionNetwork net = corpus_network(*e);
    GlfVerification v = verify_glf(net, corpus_candidate(*e, net));
    REQUIRE(v.certificate);
    WeakContractivityReport r = classify_at_one(*v.certificate);
    CHECK_MESSAGE(contractor(r).exponents == e->exponents, name);
  }
}

TEST_CASE("symbolic coefficient parsing") {
  auto ms = coefficient_matrices("-r1-2*r3 & r2; 0 & -r2+r1", 3);
  REQUIRE(ms.size() == 3);
  CHECK(ms[0] == RationalMatrix{{-1, 0}, {0, 1}});
  CHECK(ms[1] == RationalMatrix{{0, 1}, {0, -1}});
  CHECK(ms[2] == RationalMatrix{{-2, 0}, {0, 0}});
  CHECK_THROWS(coefficient_matrices("r9", 3));
}

TEST_CASE("matrix files and export") {
  auto dir = std::filesystem::temp_directory_path() / "crnc_corpus_test";
  std::filesystem::remove_all(dir);
  export_corpus(dir.string());
  CHECK(std::filesystem::exists(dir / "ptm_full.crn"));
  RationalMatrix c = load_matrix_file((dir / "ptm_full.C.txt").string());
  CHECK(c == RationalMatrix::parse(find_corpus("ptm_full")->C));
  CHECK(network_hash(load_network((dir / "ptm_full.crn").string())) ==
        network_hash(corpus_network(*find_corpus("ptm_full"))));
  std::ofstream(dir / "bad.txt") << "1 2\n3\n";
  CHECK_THROWS(load_matrix_file((dir / "bad.txt").string()));
  std::filesystem::remove_all(dir);
}
