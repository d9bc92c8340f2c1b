#include "qcnet/spacetime.hpp"

#include <algorithm>
#include <queue>

namespace qcnet {

namespace {

std::map<std::string, std::vector<std::string>> successor_lists(const Spacetime& st) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : st.order) succ[a].push_back(b);
  return succ;
}

/** All points reachable from `start` by one or more precedence steps. */
std::set<std::string> reachable(
    const std::map<std::string, std::vector<std::string>>& succ,
    const std::string& start) {
  std::set<std::string> seen;
  std::queue<std::string> frontier;
  frontier.push(start);
  while (!frontier.empty()) {
    const std::string p = frontier.front();
    frontier.pop();
    const auto it = succ.find(p);
    if (it == succ.end()) continue;
    for (const auto& q : it->second) {
      if (seen.insert(q).second) frontier.push(q);
    }
  }
  return seen;
}

}  // namespace

std::vector<Diagnostic> validate_spacetime(const Spacetime& st) {
  std::vector<Diagnostic> out;
  std::set<std::string> known;
  for (const auto& p : st.points) {
    if (!known.insert(p).second) {
      out.push_back({"duplicate-point", "point '" + p + "' is listed more than once"});
    }
  }
  for (const auto& [a, b] : st.order) {
    for (const auto& p : {a, b}) {
      if (!known.count(p)) {
        out.push_back({"unknown-point", "order references missing point '" + p + "'"});
      }
    }
    if (a == b) {
      out.push_back({"self-precedence", "point '" + a + "' precedes itself"});
    }
  }
  for (const auto& [a, b] : st.order) {
    for (const auto& [c, d] : st.order) {
      if (b == c && a != d && !st.order.count({a, d})) {
        out.push_back({"missing-transitivity", "'" + a + "' precedes '" + b +
                                                   "' precedes '" + d +
                                                   "' but the pair ('" + a + "', '" + d +
                                                   "') is absent"});
      }
    }
  }
  return out;
}

Spacetime transitive_closure(const Spacetime& st) {
  Spacetime out;
  out.points = st.points;
  const auto succ = successor_lists(st);
  for (const auto& p : st.points) {
    for (const auto& q : reachable(succ, p)) {
      if (p != q) out.order.insert({p, q});
    }
  }
  return out;
}

bool precedes(const Spacetime& st, const std::string& a, const std::string& b) {
  return reachable(successor_lists(st), a).count(b) > 0;
}

bool overlaps(const Region& a, const Region& b) {
  return std::any_of(a.points.begin(), a.points.end(),
                     [&](const std::string& p) { return b.points.count(p) > 0; });
}

std::vector<Diagnostic> validate_regions(const Spacetime& st,
                                         const std::vector<Region>& regions) {
  std::vector<Diagnostic> out;
  const std::set<std::string> known(st.points.begin(), st.points.end());
  std::set<std::string> names;
  for (const auto& r : regions) {
    if (!names.insert(r.name).second) {
      out.push_back({"duplicate-region", "region '" + r.name + "' is listed more than once"});
    }
    if (r.points.empty()) {
      out.push_back({"empty-region", "region '" + r.name + "' has no points"});
    }
    for (const auto& p : r.points) {
      if (!known.count(p)) {
        out.push_back({"unknown-point",
                       "region '" + r.name + "' references missing point '" + p + "'"});
      }
    }
  }
  return out;
}

RegionCausalStructure region_causal_structure(const Spacetime& st,
                                              const std::vector<Region>& regions,
                                              bool include_self_loops) {
  const auto findings = validate_regions(st, regions);
  if (!findings.empty()) {
    throw Error("regions are not well-formed: " + findings.front().kind + ": " +
                findings.front().detail);
  }
  const auto succ = successor_lists(st);
  RegionCausalStructure g;
  g.regions = regions;
  for (const auto& from : regions) {
    std::set<std::string> cone;
    for (const auto& p : from.points) {
      const auto r = reachable(succ, p);
      cone.insert(r.begin(), r.end());
    }
    for (const auto& to : regions) {
      if (!include_self_loops && from.name == to.name) continue;
      const bool hit = std::any_of(to.points.begin(), to.points.end(),
                                   [&](const std::string& q) { return cone.count(q); });
      if (hit) g.edges.insert({from.name, to.name});
    }
  }
  return g;
}

bool is_acyclic(const std::vector<std::string>& nodes,
                const std::set<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : edges) succ[a].push_back(b);
  // Colours: 0 unvisited, 1 on the current path, 2 done.
  std::map<std::string, int> colour;
  std::vector<std::pair<std::string, std::size_t>> stack;
  for (const auto& root : nodes) {
    if (colour[root] != 0) continue;
    stack.push_back({root, 0});
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& kids = succ[node];
      if (next == kids.size()) {
        colour[node] = 2;
        stack.pop_back();
        continue;
      }
      const std::string kid = kids[next++];
      if (colour[kid] == 1) return false;
      if (colour[kid] == 0) {
        colour[kid] = 1;
        stack.push_back({kid, 0});
      }
    }
  }
  return true;
}

bool is_acyclic(const RegionCausalStructure& g) {
  std::vector<std::string> nodes;
  nodes.reserve(g.regions.size());
  for (const auto& r : g.regions) nodes.push_back(r.name);
  return is_acyclic(nodes, g.edges);
}

std::vector<Region> refine_regions(const std::vector<Region>& coarse,
                                   const std::map<std::string, Partition>& partitions) {
  std::map<std::string, const Region*> by_name;
  for (const auto& r : coarse) by_name[r.name] = &r;
  for (const auto& [name, partition] : partitions) {
    if (partition.parent.name != name) {
      throw Error("partition keyed '" + name + "' declares parent '" +
                  partition.parent.name + "'");
    }
    const auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw Error("partition names unknown region '" + name + "'");
    }
    if (it->second->points != partition.parent.points) {
      throw Error("partition parent '" + name + "' disagrees with the listed region's points");
    }
  }
  std::vector<Region> fine;
  std::set<std::string> fine_names;
  for (const auto& r : coarse) {
    const auto it = partitions.find(r.name);
    if (it == partitions.end()) {
      fine.push_back(r);
      if (!fine_names.insert(r.name).second) {
        throw Error("refinement duplicates region name '" + r.name + "'");
      }
      continue;
    }
    std::set<std::string> covered;
    for (const auto& part : it->second.parts) {
      if (part.points.empty()) {
        throw Error("part '" + part.name + "' of region '" + r.name + "' is empty");
      }
      for (const auto& p : part.points) {
        if (!r.points.count(p)) {
          throw Error("part '" + part.name + "' uses point '" + p +
                      "' outside region '" + r.name + "'");
        }
        if (!covered.insert(p).second) {
          throw Error("parts of region '" + r.name + "' overlap at point '" + p + "'");
        }
      }
      if (!fine_names.insert(part.name).second) {
        throw Error("refinement duplicates region name '" + part.name + "'");
      }
      fine.push_back(part);
    }
    if (covered != r.points) {
      throw Error("parts of region '" + r.name + "' do not cover it");
    }
  }
  return fine;
}

RegionCausalStructure refine(const std::vector<Region>& regions,
                             const std::map<std::string, Partition>& partitions,
                             const Spacetime& st, bool include_self_loops) {
  return region_causal_structure(st, refine_regions(regions, partitions),
                                 include_self_loops);
}

}  // namespace qcnet
