#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "crnc/cli.hpp"
#include "crnc/contraction.hpp"
#include "crnc/corpus.hpp"
#include "crnc/report.hpp"

namespace py = pybind11;
using namespace crnc;

namespace {

ReactionNetwork network_from(const std::string& text_or_name) {
  if (const CorpusEntry* e = find_corpus(text_or_name)) return corpus_network(*e);
  return parse_network(text_or_name);
}

RationalMatrix matrix_from(const std::vector<std::vector<std::string>>& rows) {
  std::vector<RationalVector> rs;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("ragged matrix");
    RationalVector v;
    for (const auto& s : r) v.push_back(parse_rational(s));
    rs.push_back(v);
  }
  return RationalMatrix::from_rows(rs, cols);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "crnc core bindings; structured results come back as JSON text";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release nogil;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "run the command line tool in-process; returns (exit_code, stdout, stderr)");

  m.def("network_json", [](const std::string& src) { return dump(network_json(network_from(src))); }, py::arg("src"));

  m.def(
      "certify_json",
      [](const std::string& src, const std::string& candidate) {
        ReactionNetwork net = network_from(src);
        GlfCandidate cand;
        const CorpusEntry* e = match_corpus(net);
        if (candidate.empty())
          cand = e ? corpus_candidate(*e, net) : candidate_C(net, CandidateKind::MaxMin);
        else {
          auto k = parse_candidate_kind(candidate);
          if (!k || *k == CandidateKind::User) throw std::invalid_argument("candidate must be maxmin or identity");
          cand = candidate_C(net, *k);
          if (e) cand = align_to_printed(*e, cand);
        }
        GlfVerification v;
        {
          py::gil_scoped_release nogil;
          v = verify_glf(net, cand);
        }
        Json j;
        if (!v.certificate) {
          j["certificate"] = verification_failure_json(v);
          return dump(j);
        }
        j["certificate"] = certificate_json(net, *v.certificate);
        WeakContractivityReport r = classify_at_one(*v.certificate);
        if (r.weakly_contractive) {
          ContractorMatrix p = contractor(r);
          j["weak_contractivity"] = contraction_json(r, &p, nullptr);
        } else {
          j["weak_contractivity"] = contraction_json(r, nullptr, nullptr);
        }
        return dump(j);
      },
      py::arg("src"), py::arg("candidate") = "");

  m.def(
      "mu_inf", [](const std::vector<std::vector<std::string>>& rows) { return mu_inf(matrix_from(rows)).get_str(); },
      py::arg("rows"), "exact infinity log-norm of a rational matrix given as strings");

  m.def("corpus_names", [] {
    std::vector<std::string> names;
    for (const auto& e : corpus()) names.push_back(e.name);
    return names;
  });

  m.def("verify_fixtures", [] {
    std::vector<std::tuple<std::string, std::string, bool, std::string>> out;
    for (const auto& c : verify_fixtures(1)) out.emplace_back(c.network, c.name, c.passed, c.detail);
    return out;
  });
}
