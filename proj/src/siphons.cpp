#include "crnc/siphons.hpp"

#include <algorithm>
#include <stdexcept>

#include "crnc/lpsolve.hpp"
#include "crnc/parallel.hpp"

namespace crnc {

namespace {

// producers[i]: reactions with species i as product; reactants[j]: reactant species of j
struct Incidence {
  std::vector<std::vector<std::size_t>> producers;
  std::vector<std::vector<std::size_t>> reactants;
};

Incidence incidence(const ReactionNetwork& net) {
  Incidence inc;
  inc.producers.resize(net.n());
  inc.reactants.resize(net.nu());
  for (std::size_t j = 0; j < net.nu(); ++j)
    for (std::size_t i = 0; i < net.n(); ++i) {
      if (net.beta(i, j) > 0) inc.producers[i].push_back(j);
      if (net.alpha(i, j) > 0) inc.reactants[j].push_back(i);
    }
  return inc;
}

bool subset(const SpeciesSet& a, const SpeciesSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

std::vector<SpeciesSet> keep_minimal(std::vector<SpeciesSet> sets) {
  std::sort(sets.begin(), sets.end(), [](const SpeciesSet& a, const SpeciesSet& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<SpeciesSet> out;
  for (const auto& s : sets)
    if (std::none_of(out.begin(), out.end(), [&](const SpeciesSet& m) { return subset(m, s); })) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

class Search {
public:
  Search(const ReactionNetwork& net) : net_(net), inc_(incidence(net)) {}

  std::vector<SpeciesSet> run() {
    for (std::size_t s = 0; s < net_.n(); ++s) {
      std::vector<char> in(net_.n(), 0), out(net_.n(), 0);
      for (std::size_t t = 0; t < s; ++t) out[t] = 1;  // siphons with a smaller member are found from that member
      in[s] = 1;
      branch(in, out);
    }
    return keep_minimal(found_);
  }

private:
  const ReactionNetwork& net_;
  Incidence inc_;
  std::vector<SpeciesSet> found_;

  SpeciesSet members(const std::vector<char>& in) const {
    SpeciesSet p;
    for (std::size_t i = 0; i < in.size(); ++i)
      if (in[i]) p.push_back(i);
    return p;
  }

  void branch(std::vector<char>& in, std::vector<char>& out) {
    SpeciesSet cur = members(in);
    for (const auto& f : found_)
      if (subset(f, cur)) return;  // bound: supersets are never minimal
    // first reaction producing a member with no member among its reactants
    for (std::size_t i : cur)
      for (std::size_t j : inc_.producers[i]) {
        const auto& rs = inc_.reactants[j];
        if (std::any_of(rs.begin(), rs.end(), [&](std::size_t r) { return in[r]; })) continue;
        std::vector<std::size_t> opts;
        for (std::size_t r : rs)
          if (!out[r]) opts.push_back(r);
        std::vector<std::size_t> excluded;
        for (std::size_t r : opts) {
          in[r] = 1;
          branch(in, out);
          in[r] = 0;
          out[r] = 1;  // later branches skip r
          excluded.push_back(r);
        }
        for (std::size_t r : excluded) out[r] = 0;
        return;
      }
    found_.push_back(cur);
  }
};

}  // namespace

bool is_siphon(const ReactionNetwork& net, const SpeciesSet& p) {
  if (p.empty()) return false;
  std::vector<char> in(net.n(), 0);
  for (auto i : p) in.at(i) = 1;
  for (std::size_t j = 0; j < net.nu(); ++j) {
    bool produces = false, consumes = false;
    for (std::size_t i = 0; i < net.n(); ++i) {
      if (!in[i]) continue;
      produces |= net.beta(i, j) > 0;
      consumes |= net.alpha(i, j) > 0;
    }
    if (produces && !consumes) return false;
  }
  return true;
}

std::vector<SpeciesSet> enumerate_minimal_siphons(const ReactionNetwork& net) { return Search(net).run(); }

std::vector<SpeciesSet> brute_force_minimal_siphons(const ReactionNetwork& net) {
  if (net.n() > 20) throw std::invalid_argument("brute force limited to 20 species");
  std::vector<SpeciesSet> all;
  for (std::size_t mask = 1; mask < (std::size_t(1) << net.n()); ++mask) {
    SpeciesSet p;
    for (std::size_t i = 0; i < net.n(); ++i)
      if (mask >> i & 1) p.push_back(i);
    if (is_siphon(net, p)) all.push_back(p);
  }
  return keep_minimal(all);
}

bool contains_conservation_support(const ReactionNetwork& net, const SpeciesSet& p) {
  if (p.empty()) return false;
  // maximize sum w s.t. w^T Gamma_P = 0, w >= 0, sum w <= 1
  const auto& g = net.gamma();
  LinearProgram lp(p.size());
  lp.sense = Sense::Maximize;
  for (auto& c : lp.objective) c = 1;
  for (std::size_t j = 0; j < net.nu(); ++j) {
    RationalVector row(p.size());
    bool any = false;
    for (std::size_t k = 0; k < p.size(); ++k) {
      row[k] = g(p[k], j);
      any |= sgn(row[k]) != 0;
    }
    if (any) lp.add(row, Relation::Equal, 0);
  }
  lp.add(RationalVector(p.size(), Rational(1)), Relation::LessEqual, 1);
  LpResult r = solve(lp);
  return r.status == LpStatus::Optimal && sgn(r.objective) > 0;
}

SiphonReport classify_siphons(const ReactionNetwork& net, const std::vector<SpeciesSet>& siphons, unsigned jobs) {
  SiphonReport rep;
  rep.minimal_siphons = siphons;
  std::vector<char> flags(siphons.size(), 0);
  parallel_for(siphons.size(), jobs, [&](std::size_t k) { flags[k] = contains_conservation_support(net, siphons[k]); });
  rep.discharged.assign(flags.begin(), flags.end());
  rep.all_structurally_persistent = std::all_of(flags.begin(), flags.end(), [](char f) { return f != 0; });
  rep.definition_note =
      "discharged means the siphon contains the support of a nonnegative conservation law; this is the "
      "operative meaning of a trivial siphon in the worked examples, while the literal definition text "
      "reads the other way round";
  return rep;
}

SiphonReport siphon_report(const ReactionNetwork& net, unsigned jobs) {
  return classify_siphons(net, enumerate_minimal_siphons(net), jobs);
}

}  // namespace crnc
