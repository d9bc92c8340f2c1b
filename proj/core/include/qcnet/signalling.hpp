#pragma once
/**
 * Signalling analysis for trace-preserving CPMs and for quantum networks.
 *
 * A set of input systems S_I signals to a set of output systems S_O of a
 * trace-preserving CPM when the marginal of the induced output state on S_O
 * depends on the state fed into S_I.  In Choi form this is equivalent to a
 * linear condition: with A the Choi operator partially traced down to
 * [all inputs, S_O], no signalling holds iff
 *
 *     A  =  (I / d_{S_I})  tensor  Tr_{S_I}[A].
 *
 * `signalling_residual` returns the largest entry-wise deviation from that
 * identity, so `signals` is a tolerance comparison against it.  The functions
 * assume the CPM is trace-preserving; callers should validate with `is_cptp`
 * where that is in doubt.
 *
 * For networks, the signalling structure is computed on the cut-open network:
 * every composition is severed, the wire becomes a single node whose input
 * side is the downstream port and whose output side is the upstream port, and
 * free ports become nodes with only one side.  Because the cut-open network is
 * a tensor product of its maps, a node signals to another iff some single map
 * carries the signal between the corresponding ports, so the structure is the
 * union of the per-map structures and the joint tensor is never materialised.
 */
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "qcnet/cpm.hpp"
#include "qcnet/network.hpp"
#include "qcnet/random.hpp"

namespace qcnet {

/** Largest entry-wise deviation of the Choi marginal from the no-signalling
 *  identity for `from_inputs` -> `to_outputs`.  Exact (no sampling).  Works on
 *  dense and ensemble representations; very large ensembles are handled
 *  through their nonzero entries without materialising any marginal. */
double signalling_residual(const CPM& cpm, const std::set<std::string>& from_inputs,
                           const std::set<std::string>& to_outputs);

/** Whether `from_inputs` signals to `to_outputs` at the given tolerance. */
bool signals(const CPM& cpm, const std::set<std::string>& from_inputs,
             const std::set<std::string>& to_outputs, double tol = kDefaultTol);

/** Operational cross-check of `signalling_residual`: feeds pairs of random
 *  states into `from_inputs` (with a random state on the remaining inputs)
 *  and reports the largest entry-wise difference between the resulting output
 *  marginals on `to_outputs` over `trials` repetitions.  Zero for
 *  non-signalling maps; almost surely positive for signalling ones.  Requires
 *  a representation small enough to apply densely. */
double intervention_residual(const CPM& cpm, const std::set<std::string>& from_inputs,
                             const std::set<std::string>& to_outputs, Rng& rng,
                             int trials = 16);

/** One signalling relation: the set `from` signals to the set `to`. */
struct SigEdge {
  std::set<std::string> from;
  std::set<std::string> to;

  friend bool operator==(const SigEdge&, const SigEdge&) = default;
  friend auto operator<=>(const SigEdge&, const SigEdge&) = default;
};

/** Signalling relation over a collection of labelled systems.  `edges` is
 *  sorted and duplicate-free. */
struct SigGraph {
  std::vector<SystemLabel> systems;
  std::vector<SigEdge> edges;
};

/** Convenience lookup for a singleton edge {from} -> {to}. */
bool has_edge(const SigGraph& g, const std::string& from, const std::string& to);

/** Signalling structure of one trace-preserving CPM: every pair of a nonempty
 *  input subset and a nonempty output subset with at most `max_set_size`
 *  elements each is tested, and the signalling pairs are recorded as edges.
 *  `systems` lists the inputs followed by the outputs.  Throws when the subset
 *  enumeration would exceed 100000 pairs. */
SigGraph signalling_structure(const CPM& cpm, std::size_t max_set_size = 1,
                              double tol = kDefaultTol);

/** Signalling structure of the cut-open network over its wire and free-port
 *  nodes.  Node names are the plain port names where unambiguous and
 *  "name@map" otherwise; a wire is named after its downstream (input-side)
 *  port.  Edges are singleton-to-singleton. */
SigGraph network_signalling_structure(const QuantumNetwork& net,
                                      double tol = kDefaultTol);

}  // namespace qcnet
