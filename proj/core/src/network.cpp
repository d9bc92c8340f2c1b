#include "qcnet/network.hpp"

#include <algorithm>
#include <sstream>

namespace qcnet {

namespace {

std::string comp_str(const Composition& c) {
  return c.from_map + "." + c.from_sys + "->" + c.to_map + "." + c.to_sys;
}

}  // namespace

std::string SubNetwork::key() const {
  std::ostringstream os;
  os << "maps{";
  bool first = true;
  for (const auto& id : map_ids) {
    if (!first) os << ",";
    os << id;
    first = false;
  }
  os << "}wires{";
  std::vector<std::string> ws;
  for (const auto& c : comps) ws.push_back(comp_str(c));
  std::sort(ws.begin(), ws.end());
  first = true;
  for (const auto& w : ws) {
    if (!first) os << ",";
    os << w;
    first = false;
  }
  os << "}";
  return os.str();
}

std::vector<Diagnostic> validate(const QuantumNetwork& net) {
  std::vector<Diagnostic> out;
  std::map<std::pair<std::string, std::string>, int> from_uses, to_uses;
  for (const auto& c : net.comps) {
    const auto from_it = net.maps.find(c.from_map);
    const auto to_it = net.maps.find(c.to_map);
    if (from_it == net.maps.end()) {
      out.push_back({"dangling-map-id", "composition " + comp_str(c) +
                                            " references unknown map '" + c.from_map + "'"});
    }
    if (to_it == net.maps.end()) {
      out.push_back({"dangling-map-id", "composition " + comp_str(c) +
                                            " references unknown map '" + c.to_map + "'"});
    }
    if (from_it == net.maps.end() || to_it == net.maps.end()) continue;

    const auto& outs = from_it->second.outputs();
    const auto& ins = to_it->second.inputs();
    const bool from_ok = has_system(outs, c.from_sys);
    const bool to_ok = has_system(ins, c.to_sys);
    if (!from_ok) {
      out.push_back({"unknown-port", "'" + c.from_sys + "' is not an output of map '" +
                                         c.from_map + "'"});
    }
    if (!to_ok) {
      out.push_back({"unknown-port", "'" + c.to_sys + "' is not an input of map '" +
                                         c.to_map + "'"});
    }
    if (from_ok && to_ok) {
      const auto& fs = outs[find_system(outs, c.from_sys)];
      const auto& ts = ins[find_system(ins, c.to_sys)];
      if (fs.dim != ts.dim) {
        out.push_back({"dimension-mismatch",
                       comp_str(c) + " connects dimensions " + std::to_string(fs.dim) +
                           " and " + std::to_string(ts.dim)});
      }
    }
    if (from_ok && ++from_uses[{c.from_map, c.from_sys}] == 2) {
      out.push_back({"endpoint-reused", "output port " + c.from_map + "." + c.from_sys +
                                            " feeds more than one composition"});
    }
    if (to_ok && ++to_uses[{c.to_map, c.to_sys}] == 2) {
      out.push_back({"endpoint-reused", "input port " + c.to_map + "." + c.to_sys +
                                            " is fed by more than one composition"});
    }
  }
  return out;
}

std::string qualified_port_name(const QuantumNetwork& net,
                                const std::set<std::string>& chosen,
                                const std::string& map_id, const std::string& sys_name) {
  int occurrences = 0;
  for (const auto& id : chosen) {
    const auto it = net.maps.find(id);
    if (it == net.maps.end()) throw Error("unknown map id '" + id + "'");
    if (has_system(it->second.choi().systems(), sys_name)) ++occurrences;
  }
  if (occurrences == 0) {
    throw Error("port '" + sys_name + "' does not occur among the chosen maps");
  }
  return occurrences == 1 ? sys_name : sys_name + "@" + map_id;
}

FreeSystems free_systems(const QuantumNetwork& net) {
  std::set<std::pair<std::string, std::string>> used_out, used_in;
  for (const auto& c : net.comps) {
    used_out.insert({c.from_map, c.from_sys});
    used_in.insert({c.to_map, c.to_sys});
  }
  std::set<std::string> all_ids;
  for (const auto& [id, _] : net.maps) all_ids.insert(id);
  FreeSystems fs;
  for (const auto& [id, cpm] : net.maps) {
    for (const auto& s : cpm.inputs()) {
      if (!used_in.count({id, s.name})) {
        fs.inputs.push_back({id, s, qualified_port_name(net, all_ids, id, s.name)});
      }
    }
    for (const auto& s : cpm.outputs()) {
      if (!used_out.count({id, s.name})) {
        fs.outputs.push_back({id, s, qualified_port_name(net, all_ids, id, s.name)});
      }
    }
  }
  return fs;
}

SubNetwork full_subnetwork(const QuantumNetwork& net) {
  SubNetwork sub;
  for (const auto& [id, _] : net.maps) sub.map_ids.insert(id);
  sub.comps = net.comps;
  return sub;
}

CPM induced_map(const QuantumNetwork& net, const SubNetwork& sub) {
  if (sub.map_ids.empty()) throw Error("induced map of an empty sub-network");
  const auto diags = validate(net);
  if (!diags.empty()) {
    throw Error("network is not well-formed: " + diags.front().kind + ": " +
                diags.front().detail);
  }
  for (const auto& c : sub.comps) {
    if (!sub.map_ids.count(c.from_map) || !sub.map_ids.count(c.to_map)) {
      throw Error("sub-network wire " + comp_str(c) + " leaves the selected maps");
    }
    if (std::count(net.comps.begin(), net.comps.end(), c) == 0) {
      throw Error("sub-network wire " + comp_str(c) + " is not a composition of the network");
    }
  }

  // Rename every port to its qualified name once, so tensoring never collides.
  auto renamed = [&](const std::string& id) {
    const CPM& m = net.maps.at(id);
    auto rn = [&](std::vector<SystemLabel> labels) {
      for (auto& s : labels) s.name = qualified_port_name(net, sub.map_ids, id, s.name);
      return labels;
    };
    std::vector<SystemLabel> in = rn(m.inputs());
    std::vector<SystemLabel> out = rn(m.outputs());
    std::vector<SystemLabel> systems = in;
    systems.insert(systems.end(), out.begin(), out.end());
    LabeledOperator choi = m.choi().kind() == OperatorKind::Ensemble
                               ? LabeledOperator::ensemble(systems, m.choi().vectors())
                               : LabeledOperator::matrix(systems, m.choi().mat());
    return CPM(std::move(in), std::move(out), std::move(choi));
  };

  std::vector<std::string> pending(sub.map_ids.begin(), sub.map_ids.end());
  std::sort(pending.begin(), pending.end());

  std::set<std::string> merged;
  std::vector<bool> applied(sub.comps.size(), false);

  auto touches_cluster = [&](const std::string& id) {
    for (const auto& c : sub.comps) {
      if ((c.from_map == id && merged.count(c.to_map)) ||
          (c.to_map == id && merged.count(c.from_map))) {
        return true;
      }
    }
    return false;
  };

  CPM cluster = renamed(pending.front());
  merged.insert(pending.front());
  pending.erase(pending.begin());

  auto contract_internal = [&]() {
    for (std::size_t k = 0; k < sub.comps.size(); ++k) {
      if (applied[k]) continue;
      const auto& c = sub.comps[k];
      if (merged.count(c.from_map) && merged.count(c.to_map)) {
        const std::string out_name =
            qualified_port_name(net, sub.map_ids, c.from_map, c.from_sys);
        const std::string in_name =
            qualified_port_name(net, sub.map_ids, c.to_map, c.to_sys);
        cluster = loop_compose(cluster, out_name, in_name);
        applied[k] = true;
      }
    }
  };
  contract_internal();

  while (!pending.empty()) {
    auto pick = std::find_if(pending.begin(), pending.end(), touches_cluster);
    if (pick == pending.end()) pick = pending.begin();
    const std::string id = *pick;
    pending.erase(pick);
    cluster = tensor(cluster, renamed(id));
    merged.insert(id);
    contract_internal();
  }
  return cluster;
}

CPM induced_map(const QuantumNetwork& net) {
  return induced_map(net, full_subnetwork(net));
}

std::vector<NetworkNode> network_nodes(const QuantumNetwork& net) {
  const auto diags = validate(net);
  if (!diags.empty()) {
    throw Error("network is not well-formed: " + diags.front().kind + ": " +
                diags.front().detail);
  }

  struct Raw {
    std::string bare;
    std::string owner;
    NetworkNode node;
  };
  std::vector<Raw> raw;

  std::set<std::pair<std::string, std::string>> wired_out, wired_in;
  for (const auto& c : net.comps) {
    wired_out.insert({c.from_map, c.from_sys});
    wired_in.insert({c.to_map, c.to_sys});
    const auto& ins = net.maps.at(c.to_map).inputs();
    NetworkNode node{ins[find_system(ins, c.to_sys)],
                     std::pair{c.to_map, c.to_sys},
                     std::pair{c.from_map, c.from_sys}};
    raw.push_back({c.to_sys, c.to_map, std::move(node)});
  }
  for (const auto& [id, cpm] : net.maps) {
    for (const auto& s : cpm.inputs()) {
      if (!wired_in.count({id, s.name})) {
        raw.push_back({s.name, id, {s, std::pair{id, s.name}, std::nullopt}});
      }
    }
    for (const auto& s : cpm.outputs()) {
      if (!wired_out.count({id, s.name})) {
        raw.push_back({s.name, id, {s, std::nullopt, std::pair{id, s.name}}});
      }
    }
  }

  std::map<std::string, int> bare_counts;
  for (const auto& r : raw) ++bare_counts[r.bare];
  for (auto& r : raw) {
    r.node.label.name = bare_counts[r.bare] == 1 ? r.bare : r.bare + "@" + r.owner;
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) {
    return a.node.label.name < b.node.label.name;
  });

  std::vector<NetworkNode> nodes;
  nodes.reserve(raw.size());
  for (auto& r : raw) nodes.push_back(std::move(r.node));
  return nodes;
}

std::vector<SubNetwork> enumerate_subnetworks(const QuantumNetwork& net,
                                              std::size_t max_maps) {
  std::vector<std::string> ids;
  for (const auto& [id, _] : net.maps) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  if (ids.size() > 8 * sizeof(std::size_t) - 1) {
    throw Error("too many maps to enumerate sub-networks");
  }
  std::vector<SubNetwork> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << ids.size()); ++mask) {
    std::set<std::string> chosen;
    for (std::size_t b = 0; b < ids.size(); ++b) {
      if (mask & (std::size_t{1} << b)) chosen.insert(ids[b]);
    }
    if (chosen.size() > max_maps) continue;
    std::vector<Composition> internal;
    for (const auto& c : net.comps) {
      if (chosen.count(c.from_map) && chosen.count(c.to_map)) internal.push_back(c);
    }
    if (internal.size() > 20) throw Error("too many internal wires to enumerate");
    for (std::size_t wmask = 0; wmask < (std::size_t{1} << internal.size()); ++wmask) {
      SubNetwork sub;
      sub.map_ids = chosen;
      for (std::size_t b = 0; b < internal.size(); ++b) {
        if (wmask & (std::size_t{1} << b)) sub.comps.push_back(internal[b]);
      }
      out.push_back(std::move(sub));
    }
  }
  return out;
}

}  // namespace qcnet
