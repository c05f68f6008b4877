#include "crnc/report.hpp"

#include <cmath>

namespace crnc {

Json to_json(const Rational& q) { return q.get_str(); }

Json to_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(q.get_str());
  return a;
}

Json to_json(const RationalMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json index_set(const std::vector<std::size_t>& v) {
  Json a = Json::array();
  for (auto i : v) a.push_back(i + 1);
  return a;
}

Json network_json(const ReactionNetwork& net) {
  Json j;
  j["hash"] = network_hash(net);
  Json sp = Json::array();
  for (const auto& s : net.species()) sp.push_back(s.name);
  j["species"] = sp;
  Json rx = Json::array();
  for (std::size_t k = 0; k < net.nu(); ++k)
    rx.push_back({{"label", net.reactions()[k].label}, {"reaction", reaction_string(net, k)}});
  j["reactions"] = rx;
  j["n"] = net.n();
  j["nu"] = net.nu();
  j["s"] = net.s();
  j["gamma"] = to_json(net.gamma());
  Json pairs = Json::array();
  for (const auto& p : net.reactant_pairs()) pairs.push_back(pair_string(net, p));
  j["reactant_pairs"] = pairs;
  return j;
}

Json conservation_json(const ConservationAnalysis& ca) {
  Json j;
  j["left_kernel_basis"] = to_json(ca.left_kernel_basis);
  j["positive_law"] = ca.positive_law ? to_json(*ca.positive_law) : Json(nullptr);
  j["positive_flux"] = ca.positive_flux ? to_json(*ca.positive_flux) : Json(nullptr);
  j["conservative"] = ca.conservative();
  j["positive_flux_exists"] = ca.positive_flux.has_value();
  return j;
}

Json siphon_json(const ReactionNetwork& net, const SiphonReport& rep) {
  Json j;
  Json sets = Json::array(), names = Json::array();
  for (const auto& s : rep.minimal_siphons) {
    sets.push_back(index_set(s));
    Json nm = Json::array();
    for (auto i : s) nm.push_back(net.species()[i].name);
    names.push_back(nm);
  }
  j["siphons"] = sets;
  j["species"] = names;
  Json d = Json::array();
  for (bool b : rep.discharged) d.push_back(b);
  j["discharged"] = d;
  j["persistent"] = rep.all_structurally_persistent;
  j["definition_note"] = rep.definition_note;
  return j;
}

Json certificate_json(const ReactionNetwork& net, const GlfCertificate& cert) {
  Json j;
  j["network_hash"] = network_hash(net);
  j["kind"] = to_string(cert.kind);
  j["C"] = to_json(cert.C);
  j["B"] = to_json(cert.B);
  Json ls = Json::array();
  for (const auto& l : cert.lambdas) ls.push_back(to_json(l));
  j["Lambda"] = ls;
  j["verified"] = check_certificate(net, cert).empty();
  j["solver_stats"] = {{"lps", cert.stats.lps},
                       {"pivots", cert.stats.pivots},
                       {"trivial_rows", cert.stats.trivial_rows},
                       {"rows", cert.C.rows()},
                       {"pairs", cert.lambdas.size()}};
  return j;
}

Json verification_failure_json(const GlfVerification& v) {
  Json j;
  j["verified"] = false;
  j["reason"] = v.failure;
  j["failed_pair"] = v.failed_pair ? Json(*v.failed_pair + 1) : Json(nullptr);
  j["failed_row"] = v.failed_row ? Json(*v.failed_row + 1) : Json(nullptr);
  j["solver_stats"] = {{"lps", v.stats.lps}, {"pivots", v.stats.pivots}};
  return j;
}

Json contraction_json(const WeakContractivityReport& rep, const ContractorMatrix* p, const ThetaBarResult* tb) {
  Json j;
  j["sigma"] = to_json(rep.sigma);
  j["S_minus"] = index_set(rep.S_minus);
  j["S_zero"] = index_set(rep.S_zero);
  Json dc = Json::array();
  for (const auto& d : rep.depth_classes) dc.push_back(index_set(d));
  j["depth_classes"] = dc;
  j["max_depth"] = rep.max_depth;
  j["weakly_contractive"] = rep.weakly_contractive;
  if (p) j["contractor_exponents"] = p->exponents;
  if (tb) {
    j["theta_bar"] = tb->unbounded ? Json("unbounded") : to_json(tb->theta_bar);
    j["theta_bar_value"] = tb->unbounded ? Json(nullptr) : Json(tb->theta_bar.get_d());
    j["theta_used"] = tb->theta_used;
    j["rate_c"] = tb->rate_c;
    j["rate_c_kind"] = "sampled worst case over the rho box";
    j["contractive_on_samples"] = tb->contractive;
    j["samples"] = tb->samples;
  }
  return j;
}

Json experiment_json(const ExperimentResult& res, bool series) {
  Json j;
  j["experiment"] = res.kind;
  j["ok"] = res.ok;
  j["items"] = res.series.size();
  j["passed"] = res.passed;
  Json m;
  for (const auto& [k, v] : res.metrics) m[k] = std::isfinite(v) ? Json(v) : Json(nullptr);
  j["metrics"] = m;
  j["warnings"] = res.warnings;
  Json items = Json::array();
  for (const auto& s : res.series) {
    Json it;
    it["initial"] = s.summary.initial;
    it["final"] = s.summary.final;
    it["max_derivative"] = s.summary.max_derivative;
    it["tolerance"] = s.summary.tolerance;
    it["fitted_rate"] = std::isnan(s.summary.fitted_rate) ? Json("not_applicable") : Json(s.summary.fitted_rate);
    it["max_growth"] = s.summary.max_growth;
    it["passed"] = s.summary.passed;
    if (series) it["values"] = s.values;
    items.push_back(it);
  }
  j["summaries"] = items;
  if (series) j["times"] = res.times;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace crnc
