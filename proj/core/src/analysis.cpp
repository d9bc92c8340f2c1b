/*
 * analysis.cpp — cyclicity and fine-graining audits.
 */

#include "qcnet/analysis.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "qcnet/signalling.hpp"

namespace qcnet {

namespace {

/** Unique embedded regions of the given system names, validated by name. */
std::vector<Region> image_regions(const Embedding& emb,
                                  const std::vector<SystemLabel>& systems) {
  std::map<std::string, Region> by_name;
  for (const auto& s : systems) {
    const auto it = emb.assign.find(s.name);
    if (it == emb.assign.end()) {
      throw Error("system '" + s.name + "' has no embedding");
    }
    const auto [slot, fresh] = by_name.insert({it->second.name, it->second});
    if (!fresh && slot->second.points != it->second.points) {
      throw Error("embedding assigns region '" + it->second.name +
                  "' two different extents");
    }
  }
  std::vector<Region> out;
  for (auto& [_, region] : by_name) out.push_back(region);
  return out;
}

}  // namespace

CyclicityVerdict cyclicity_audit(const Realisation& r, const ProcessMatrix& process,
                                 double tol) {
  CyclicityVerdict v;
  v.no_fixed_order = !is_fixed_order(process, tol);
  v.causality = relativistic_causality(r, tol);
  v.causal = v.causality.ok;

  const SigGraph sig = network_signalling_structure(r.network, tol);
  v.image = region_causal_structure(r.spacetime, image_regions(r.embedding, sig.systems),
                                    true);
  v.image_acyclic = is_acyclic(v.image);
  v.cycle = certify_cycle(sig, r.embedding);

  v.consistent = !(v.no_fixed_order && v.causal && v.image_acyclic);
  return v;
}

CycleSearch exhaustive_acyclic_search(const SigGraph& sig, const Embedding& emb) {
  const std::vector<Region> regions = image_regions(emb, sig.systems);
  const std::size_t n = regions.size();
  if (n > 5) throw Error("exhaustive search supports at most five distinct regions");

  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) pairs.push_back({regions[a].name, regions[b].name});
    }
  }

  CycleSearch tally;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
    RegionCausalStructure g;
    g.regions = regions;
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (mask & (std::size_t{1} << b)) g.edges.insert(pairs[b]);
    }
    if (!is_acyclic(g)) continue;
    ++tally.structures;
    if (compatible(sig, emb, g).ok) ++tally.compatible;
  }
  return tally;
}

FineGrainingVerdict fine_graining_audit(const SwitchFineGraining& bundle, double tol) {
  FineGrainingVerdict v;
  v.coarse_parties = bundle.coarse.parties.size();
  v.fine_parties = bundle.fine.parties.size();

  v.witnesses = verify_network_finegraining(bundle.coarse_network, bundle.fine_network,
                                            bundle.fine_map, bundle.witnesses, tol);
  v.witnesses_ok = v.witnesses.ok;
  v.witnesses_complete = v.witnesses.complete;
  if (!v.witnesses_ok) {
    v.findings.push_back({"witnesses", std::to_string(v.witnesses.failed.size()) +
                                           " sub-network(s) failed verification"});
  }
  if (!v.witnesses_complete) {
    v.findings.push_back({"witness-gap", std::to_string(v.witnesses.missing.size()) +
                                             " sub-network(s) had no witness"});
  }

  v.coarse_fixed_order = is_fixed_order(bundle.coarse, tol);
  v.fine_order = fixed_party_order(bundle.fine, tol);
  v.fine_fixed_order = v.fine_order.has_value();
  if (!v.fine_fixed_order) {
    v.findings.push_back({"no-fine-order", "the finer process admits no fixed order"});
  }

  const auto party_pairs = [](const ProcessMatrix& p) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& party : p.parties) out.push_back({party.in.name, party.out.name});
    return out;
  };
  const Realisation& r = bundle.realisation;
  const IoReport coarse_io = io_correspondence(r.embedding, r.partitions, r.spacetime,
                                               party_pairs(bundle.coarse));
  v.coarse_io_ok = coarse_io.ok;
  if (!coarse_io.ok) {
    v.findings.push_back(
        {"io-coarse", "some coarse party's inputs do not precede its outputs"});
  }
  const IoReport fine_io = io_correspondence(r.embedding, r.partitions, r.spacetime,
                                             party_pairs(bundle.fine));
  v.fine_io_ok = fine_io.ok;
  if (!fine_io.ok) {
    v.findings.push_back(
        {"io-fine", "some fine party's inputs do not precede its outputs"});
  }

  v.causal = relativistic_causality(r, tol).ok;
  if (!v.causal) {
    v.findings.push_back({"causality", "the realisation violates relativistic causality"});
  }

  v.ok = v.witnesses_ok && v.witnesses_complete && v.fine_fixed_order &&
         v.coarse_io_ok && v.fine_io_ok && v.causal &&
         v.fine_parties > v.coarse_parties;
  return v;
}

namespace {

QuantumNetwork canonical_switch_network() {
  const SwitchParams sp = canonical_switch_params(2);
  return process_network(
      quantum_switch(2),
      {switch_prep(sys("C^I", 1), sys("C^O", 4), sp.alpha, sp.beta, sp.psi),
       CPM::from_unitary({sys("A^I", 2)}, {sys("A^O", 2)}, sp.u),
       CPM::from_unitary({sys("B^I", 2)}, {sys("B^O", 2)}, sp.v),
       CPM::replace({sys("D^I", 4)}, {sys("D^O", 1)}, Matrix::Identity(1, 1))});
}

}  // namespace

Realisation pointlike_switch_realisation() {
  Realisation r;
  r.network = canonical_switch_network();
  r.spacetime.points = {"p_C", "p_A", "p_B", "p_D"};
  r.spacetime.order = {{"p_C", "p_A"}, {"p_C", "p_B"}, {"p_C", "p_D"},
                       {"p_A", "p_D"}, {"p_B", "p_D"}};
  const auto at = [](const std::string& p) { return Region{p, {p}}; };
  r.embedding.assign = {{"C^I", at("p_C")}, {"C^O", at("p_C")}, {"A^I", at("p_A")},
                        {"A^O", at("p_A")}, {"B^I", at("p_B")}, {"B^O", at("p_B")},
                        {"D^I", at("p_D")}, {"D^O", at("p_D")}};
  return r;
}

Realisation straddling_switch_realisation() {
  Realisation r;
  r.network = canonical_switch_network();

  // A 1+1 lattice fragment ordered by the light cone: (x1,t1) precedes
  // (x2,t2) when t2 > t1 and the separation is causal, |x2-x1| <= t2-t1.
  const std::vector<std::pair<int, int>> sites = {{1, -2}, {0, 0}, {2, 2},
                                                  {0, 4},  {2, 4}, {1, 7}};
  const auto name = [](std::pair<int, int> s) {
    return std::to_string(s.first) + "," + std::to_string(s.second);
  };
  for (const auto& s : sites) r.spacetime.points.push_back(name(s));
  for (const auto& a : sites) {
    for (const auto& b : sites) {
      if (b.second > a.second && std::abs(b.first - a.first) <= b.second - a.second) {
        r.spacetime.order.insert({name(a), name(b)});
      }
    }
  }

  const Region rc{"R_C", {"1,-2"}};
  const Region ra{"R_A", {"0,0", "0,4"}};
  const Region rb{"R_B", {"2,2", "2,4"}};
  const Region rd{"R_D", {"1,7"}};
  r.embedding.assign = {{"C^I", rc}, {"C^O", rc}, {"A^I", ra}, {"A^O", ra},
                        {"B^I", rb}, {"B^O", rb}, {"D^I", rd}, {"D^O", rd}};
  return r;
}

Realisation chain_realisation(const QuantumNetwork& net,
                              const std::vector<std::string>& nodes) {
  std::set<std::string> expected;
  for (const auto& n : network_nodes(net)) expected.insert(n.label.name);
  if (std::set<std::string>(nodes.begin(), nodes.end()) != expected ||
      nodes.size() != expected.size()) {
    throw Error("chain realisation must list every network node exactly once");
  }

  Realisation r;
  r.network = net;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string point = "t" + std::to_string(k);
    r.spacetime.points.push_back(point);
    for (std::size_t j = 0; j < k; ++j)
      r.spacetime.order.insert({r.spacetime.points[j], point});
    r.embedding.assign.insert({nodes[k], Region{nodes[k], {point}}});
  }
  return r;
}

}  // namespace qcnet
