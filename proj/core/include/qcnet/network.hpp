/*
 * network.hpp — directed networks of Choi-form maps.
 *
 * A network is a set of named maps plus compositions, each wiring one map's
 * output port into another map's input port.  Sub-networks select a subset of
 * maps and a subset of the compositions internal to them; the induced map
 * tensors the members and contracts the selected wires.
 *
 * Port naming for induced maps: a port keeps its label name when that name
 * occurs in exactly one selected map; otherwise it is qualified as
 * "name@map_id".  This rule is deterministic and is shared by everything that
 * relates network ports across maps.
 */

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcnet/cpm.hpp"

namespace qcnet {

/** One wire: output port (from_map, from_sys) feeds input port (to_map, to_sys). */
struct Composition {
  std::string from_map;
  std::string from_sys;
  std::string to_map;
  std::string to_sys;

  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;
};

struct QuantumNetwork {
  std::map<std::string, CPM> maps;
  std::vector<Composition> comps;
};

/** A subset of maps together with a subset of their internal compositions. */
struct SubNetwork {
  std::set<std::string> map_ids;
  std::vector<Composition> comps;

  /** Canonical key (sorted ids and wires) for use in witness tables. */
  std::string key() const;
};

/**
 * Structural validation.  Total: returns every finding instead of throwing.
 * An empty result means the network is well-formed.  Kinds used here:
 * dangling-map-id | unknown-port | dimension-mismatch | endpoint-reused.
 */
std::vector<Diagnostic> validate(const QuantumNetwork& net);

/** A free port of the network: its map, its label, and its qualified name. */
struct PortRef {
  std::string map_id;
  SystemLabel sys;
  std::string qualified;
};

struct FreeSystems {
  std::vector<PortRef> inputs;
  std::vector<PortRef> outputs;
};

/** Input/output ports not consumed or produced by any composition. */
FreeSystems free_systems(const QuantumNetwork& net);

/**
 * Qualified name of the port `sys_name` of `map_id` among the maps `chosen`:
 * the bare name if unique across the chosen maps, otherwise "name@map_id".
 */
std::string qualified_port_name(const QuantumNetwork& net,
                                const std::set<std::string>& chosen,
                                const std::string& map_id, const std::string& sys_name);

/** Sub-network selecting every map and every composition. */
SubNetwork full_subnetwork(const QuantumNetwork& net);

/**
 * One system of the cut-open network: either a wire (named after its
 * downstream input port) or a free port.  `in_side` is the (map, port)
 * consuming the node, `out_side` the (map, port) producing it; a wire has
 * both, a free port exactly one.
 */
struct NetworkNode {
  SystemLabel label;  ///< bare port name, or "name@map" when the bare name repeats
  std::optional<std::pair<std::string, std::string>> in_side;
  std::optional<std::pair<std::string, std::string>> out_side;
};

/** Every node of the cut-open network, sorted by name.  Throws when the
 *  network is not well-formed. */
std::vector<NetworkNode> network_nodes(const QuantumNetwork& net);

/**
 * Tensor of the selected maps with the selected wires contracted.  Maps are
 * merged in sorted-id order, preferring maps already wired to the current
 * cluster so contractions happen early and ensemble sizes stay small.
 */
CPM induced_map(const QuantumNetwork& net, const SubNetwork& sub);

/** Induced map of the full network. */
CPM induced_map(const QuantumNetwork& net);

/**
 * Every sub-network with at most `max_maps` maps: nonempty map subsets in
 * increasing bitmask order over the sorted id list, crossed with every subset
 * of the compositions internal to the map subset (bitmask order over the
 * network's composition list).
 */
std::vector<SubNetwork> enumerate_subnetworks(const QuantumNetwork& net,
                                              std::size_t max_maps = 6);

}  // namespace qcnet
