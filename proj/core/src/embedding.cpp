/*
 * embedding.cpp — compatibility of signalling with region causal structures,
 * cycle certificates, and realisation-level causality and input/output checks.
 *
 * The matching rule for a signalling edge is purely existential: some region
 * of the structure overlapping the embedded source must reach, by a directed
 * path of at least one edge, some region overlapping the embedded target.
 * Zero-length paths never match, so same-region signalling needs a self-loop.
 */

#include "qcnet/embedding.hpp"

#include <algorithm>
#include <functional>

namespace qcnet {

namespace {

std::string set_str(const std::set<std::string>& names) {
  std::string out = "{";
  for (const auto& n : names) {
    if (out.size() > 1) out += ",";
    out += n;
  }
  return out + "}";
}

const Region& assigned_region(const Embedding& emb, const std::string& sys) {
  const auto it = emb.assign.find(sys);
  if (it == emb.assign.end()) {
    throw Error("system '" + sys + "' has no embedding");
  }
  return it->second;
}

/** Region names reachable from `start` by one or more edges. */
std::set<std::string> reach_from(
    const std::map<std::string, std::vector<std::string>>& succ,
    const std::string& start) {
  std::set<std::string> seen;
  std::vector<std::string> frontier{start};
  while (!frontier.empty()) {
    const std::string u = frontier.back();
    frontier.pop_back();
    const auto it = succ.find(u);
    if (it == succ.end()) continue;
    for (const auto& v : it->second) {
      if (seen.insert(v).second) frontier.push_back(v);
    }
  }
  return seen;
}

}  // namespace

CompatReport compatible(const SigGraph& sig, const Embedding& emb,
                        const RegionCausalStructure& g) {
  for (const auto& s : sig.systems) assigned_region(emb, s.name);

  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : g.edges) succ[a].push_back(b);

  const auto overlapping = [&](const std::set<std::string>& systems) {
    Region merged;
    for (const auto& s : systems) {
      const auto& r = assigned_region(emb, s);
      merged.points.insert(r.points.begin(), r.points.end());
    }
    std::set<std::string> names;
    for (const auto& r : g.regions) {
      if (overlaps(r, merged)) names.insert(r.name);
    }
    return names;
  };

  CompatReport report;
  for (const auto& e : sig.edges) {
    const auto sources = overlapping(e.from);
    const auto targets = overlapping(e.to);
    bool matched = false;
    for (const auto& a : sources) {
      const auto reach = reach_from(succ, a);
      if (std::any_of(targets.begin(), targets.end(),
                      [&](const std::string& b) { return reach.count(b) > 0; })) {
        matched = true;
        break;
      }
    }
    if (!matched) {
      report.violations.push_back(
          {"unmatched-edge", set_str(e.from) + " -> " + set_str(e.to) +
                                 ": no directed path supports the signalling"});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::optional<std::vector<std::string>> certify_cycle(const SigGraph& sig,
                                                      const Embedding& emb) {
  std::map<std::string, std::set<std::string>> succ;
  std::set<std::string> nodes;
  for (const auto& e : sig.edges) {
    if (e.from.size() != 1 || e.to.size() != 1) continue;
    const auto& ra = assigned_region(emb, *e.from.begin());
    const auto& rb = assigned_region(emb, *e.to.begin());
    if (ra.name == rb.name) continue;
    succ[ra.name].insert(rb.name);
    nodes.insert(ra.name);
    nodes.insert(rb.name);
  }

  std::map<std::string, int> colour;  // 0 unvisited, 1 on the path, 2 done
  std::vector<std::string> path;
  std::function<std::optional<std::vector<std::string>>(const std::string&)> dfs =
      [&](const std::string& u) -> std::optional<std::vector<std::string>> {
    colour[u] = 1;
    path.push_back(u);
    const auto it = succ.find(u);
    if (it != succ.end()) {
      for (const auto& v : it->second) {
        if (colour[v] == 1) {
          const auto first = std::find(path.begin(), path.end(), v);
          std::vector<std::string> cycle(first, path.end());
          std::rotate(cycle.begin(),
                      std::min_element(cycle.begin(), cycle.end()), cycle.end());
          return cycle;
        }
        if (colour[v] == 0) {
          if (auto cycle = dfs(v)) return cycle;
        }
      }
    }
    path.pop_back();
    colour[u] = 2;
    return std::nullopt;
  };

  for (const auto& n : nodes) {
    if (colour[n] == 0) {
      if (auto cycle = dfs(n)) return cycle;
    }
  }
  return std::nullopt;
}

CausalityReport relativistic_causality(const Realisation& r, double tol) {
  const auto nodes = network_nodes(r.network);

  std::vector<Region> regions;
  std::map<std::string, const Region*> by_name;
  for (const auto& n : nodes) {
    const auto& reg = assigned_region(r.embedding, n.label.name);
    const auto [it, inserted] = by_name.insert({reg.name, &reg});
    if (inserted) {
      regions.push_back(reg);
    } else if (it->second->points != reg.points) {
      throw Error("embedding assigns region '" + reg.name +
                  "' two different extents");
    }
  }
  std::sort(regions.begin(), regions.end(),
            [](const Region& a, const Region& b) { return a.name < b.name; });

  CausalityReport report;
  report.refined = refine(regions, r.partitions, r.spacetime);
  report.refined_acyclic = is_acyclic(report.refined);
  if (!report.refined_acyclic) {
    report.findings.push_back({"refined-cyclic",
                               "the partitions do not refine the embedded "
                               "regions into an acyclic structure"});
    return report;
  }

  const QuantumNetwork& fine =
      r.fine_network.maps.empty() ? r.network : r.fine_network;
  CompatReport compat =
      compatible(network_signalling_structure(fine, tol), r.embedding, report.refined);
  report.ok = compat.ok;
  for (auto& v : compat.violations) report.findings.push_back(std::move(v));
  return report;
}

IoReport io_correspondence(
    const Embedding& emb, const std::map<std::string, Partition>& partitions,
    const Spacetime& st,
    const std::vector<std::pair<std::string, std::string>>& parties) {
  const Spacetime closed = transitive_closure(st);

  IoReport report;
  report.ok = true;
  for (const auto& [in_sys, out_sys] : parties) {
    const Region& rin = assigned_region(emb, in_sys);
    const Region& rout = assigned_region(emb, out_sys);
    const auto parts_of = [&](const Region& r) -> std::vector<Region> {
      const auto it = partitions.find(r.name);
      return it == partitions.end() ? std::vector<Region>{r} : it->second.parts;
    };
    const std::vector<Region> in_parts = parts_of(rin);
    const std::vector<Region> out_parts = parts_of(rout);
    if (in_parts.size() != out_parts.size()) {
      throw Error("party (" + in_sys + ", " + out_sys + "): " +
                  std::to_string(in_parts.size()) + " input parts cannot match " +
                  std::to_string(out_parts.size()) + " output parts");
    }

    const auto linked = [&](const Region& a, const Region& b) {
      for (const auto& p : a.points) {
        for (const auto& q : b.points) {
          if (closed.order.count({p, q})) return true;
        }
      }
      return false;
    };

    // Kuhn's augmenting-path algorithm for a perfect matching.
    const std::size_t n = in_parts.size();
    std::vector<int> matched_in(n, -1);  // output part index -> input part index
    std::function<bool(std::size_t, std::vector<bool>&)> augment =
        [&](std::size_t i, std::vector<bool>& seen) -> bool {
      for (std::size_t j = 0; j < n; ++j) {
        if (seen[j] || !linked(in_parts[i], out_parts[j])) continue;
        seen[j] = true;
        if (matched_in[j] < 0 ||
            augment(static_cast<std::size_t>(matched_in[j]), seen)) {
          matched_in[j] = static_cast<int>(i);
          return true;
        }
      }
      return false;
    };
    std::size_t matched = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<bool> seen(n, false);
      if (augment(i, seen)) ++matched;
    }

    if (matched == n) {
      std::vector<std::pair<std::string, std::string>> pairs(n);
      for (std::size_t j = 0; j < n; ++j) {
        const auto i = static_cast<std::size_t>(matched_in[j]);
        pairs[i] = {in_parts[i].name, out_parts[j].name};
      }
      report.matchings[in_sys] = std::move(pairs);
    } else {
      report.ok = false;
      report.findings.push_back(
          {"io-mismatch", "party (" + in_sys + ", " + out_sys +
                              "): no matching sends every input part strictly "
                              "before an output part"});
    }
  }
  return report;
}

}  // namespace qcnet
