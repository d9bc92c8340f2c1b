#pragma once
/**
 * Embeddings of network systems into spacetime regions, and the compatibility
 * question: can a given signalling structure be supported by a given region
 * causal structure?
 *
 * A signalling edge S₁ → S₂ is *matched* when some region of the structure
 * overlapping the embedded source can reach some region overlapping the
 * embedded target by a directed path of at least one edge.  Paths of length
 * zero never count: signalling within a single region requires an explicit
 * self-loop, which a region only carries when its own extent contains a
 * related pair of points.  In particular a pointlike region cannot support
 * signalling from itself to itself — processing takes time.
 *
 * `certify_cycle` inverts the question: from the singleton signalling edges
 * whose endpoints land in distinct regions it builds the graph of relations
 * any compatible structure must realise, and extracts a directed cycle if one
 * exists.  The certificate is decisive when the embedded regions are pairwise
 * disjoint or identical; the audits pair it with exhaustive search.
 *
 * A `Realisation` packages a network with a spacetime, an embedding (covering
 * both the network's systems and those of an optional finer network), and
 * per-region partitions.  `relativistic_causality` then asks for an acyclic
 * refined region structure that supports the finer network's signalling;
 * `io_correspondence` asks for matched input/output partitions per party.
 */
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcnet/finegraining.hpp"
#include "qcnet/network.hpp"
#include "qcnet/signalling.hpp"
#include "qcnet/spacetime.hpp"

namespace qcnet {

/** Assignment of each system (by name) to a spacetime region. */
struct Embedding {
  std::map<std::string, Region> assign;
};

/** Outcome of a compatibility check: ok, or one finding per unmatched edge. */
struct CompatReport {
  bool ok = false;
  std::vector<Diagnostic> violations;
};

/**
 * Whether every signalling edge of `sig` is matched by a directed path (of
 * length at least one) in `g` between regions overlapping the embedded
 * endpoint sets.  Throws when a system of `sig` has no assignment.
 */
CompatReport compatible(const SigGraph& sig, const Embedding& emb,
                        const RegionCausalStructure& g);

/**
 * A directed cycle of regions that any structure compatible with `sig` under
 * `emb` would have to close, built from singleton edges between distinct
 * regions; empty optional when that graph is acyclic.  The returned list
 * r₀, …, r_{k-1} is a cycle r₀ → r₁ → … → r₀.
 */
std::optional<std::vector<std::string>> certify_cycle(const SigGraph& sig,
                                                      const Embedding& emb);

/**
 * A network embedded into a spacetime, optionally refined by a finer network
 * with its system split, and by partitions of the embedded regions.  The
 * embedding covers the systems of both networks; an empty `fine_network`
 * means the network itself is already the finest description.
 */
struct Realisation {
  QuantumNetwork network;
  QuantumNetwork fine_network;
  SystemsFineGraining fine_map;
  Spacetime spacetime;
  Embedding embedding;
  std::map<std::string, Partition> partitions;  ///< keyed by region name
};

/** Outcome of the relativistic-causality check of a realisation. */
struct CausalityReport {
  bool ok = false;
  /** Whether the partitions refine the embedded regions into an acyclic
   *  structure — the precondition for the compatibility question. */
  bool refined_acyclic = false;
  RegionCausalStructure refined;
  std::vector<Diagnostic> findings;  ///< "refined-cyclic" or unmatched edges
};

/**
 * Relativistic causality of a realisation: the partitions must refine the
 * regions of the network's systems into an acyclic structure, and that
 * structure must support the signalling of the finer network (of the network
 * itself when no finer one is given).
 */
CausalityReport relativistic_causality(const Realisation& r, double tol = kDefaultTol);

/** Outcome of the input/output correspondence check. */
struct IoReport {
  bool ok = false;
  std::vector<Diagnostic> findings;
  /** Per party (keyed by input system): matched (input part, output part)
   *  pairs, each input part preceding its output part. */
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> matchings;
};

/**
 * For each party (input system, output system): the partitions of the two
 * embedded regions must admit a perfect matching in which every input part
 * precedes its matched output part in the causal order.  A region without a
 * partition counts as its own single part.  Throws when the two partitions
 * have different sizes or a system has no assignment.
 */
IoReport io_correspondence(const Embedding& emb,
                           const std::map<std::string, Partition>& partitions,
                           const Spacetime& st,
                           const std::vector<std::pair<std::string, std::string>>& parties);

}  // namespace qcnet
