/*
 * analysis.hpp — instance-level audits tying the toolkit together.
 *
 * Two audits are provided.  The cyclicity audit asks, for one network
 * realised in one spacetime, whether three observations are jointly
 * consistent: the process admits no fixed party order, the realisation is
 * relativistically causal, and the embedded regions form an acyclic
 * structure.  All three can never hold at once — a certified signalling
 * cycle defeats every acyclic region structure — so the audit reports which
 * of the three fails and why.
 *
 * The fine-graining audit checks a switch bundle end to end: the witnesses
 * verify, the finer process admits a fixed order of its (strictly more)
 * parties, inputs precede outputs part by part at both descriptions, and the
 * realisation is relativistically causal.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcnet/embedding.hpp"
#include "qcnet/process.hpp"

namespace qcnet {

/** Outcome of the cyclicity audit of one realised process. */
struct CyclicityVerdict {
  /** The process admits no fixed order of its parties. */
  bool no_fixed_order = false;
  /** The realisation passes the relativistic-causality check. */
  bool causal = false;
  /** The embedded regions of the network form an acyclic structure
   *  (self-signalling within a region counts as a loop). */
  bool image_acyclic = false;
  /** Never all three above at once; false flags an internal contradiction. */
  bool consistent = false;
  /** A region cycle every compatible structure must contain, if one exists. */
  std::optional<std::vector<std::string>> cycle;
  CausalityReport causality;     ///< underlying relativistic-causality report
  RegionCausalStructure image;   ///< embedded region structure of the network
};

/**
 * Audits the realisation of `process`: fixed-order search on the process,
 * relativistic causality of the realisation, acyclicity of the embedded
 * region structure, and a cycle certificate from the network's signalling.
 * The embedding must cover every node of the realisation's network.
 */
CyclicityVerdict cyclicity_audit(const Realisation& r, const ProcessMatrix& process,
                                 double tol = kDefaultTol);

/** Tally of an exhaustive search over acyclic region structures. */
struct CycleSearch {
  std::size_t structures = 0;  ///< acyclic edge sets enumerated
  std::size_t compatible = 0;  ///< how many of them support the signalling
};

/**
 * Enumerates every acyclic structure over the regions embedding the systems
 * of `sig` (at most five distinct regions) and counts how many are
 * compatible.  A certified cycle forces the count to zero; conversely a
 * nonzero count exhibits a causal explanation.
 */
CycleSearch exhaustive_acyclic_search(const SigGraph& sig, const Embedding& emb);

/** Outcome of the fine-graining audit of a switch bundle. */
struct FineGrainingVerdict {
  bool ok = false;                    ///< every check below holds
  bool witnesses_ok = false;          ///< all sub-network witnesses verify
  bool witnesses_complete = false;    ///< no requested sub-network lacked one
  bool coarse_fixed_order = false;    ///< the coarse process admits a fixed order
  bool fine_fixed_order = false;      ///< the fine process admits a fixed order
  bool coarse_io_ok = false;          ///< coarse inputs precede outputs part by part
  bool fine_io_ok = false;            ///< fine inputs precede outputs
  bool causal = false;                ///< the realisation is relativistically causal
  std::size_t coarse_parties = 0;
  std::size_t fine_parties = 0;
  std::optional<std::vector<std::string>> fine_order;  ///< witness order if any
  NetworkFineGrainingReport witnesses;                 ///< per-sub-network detail
  std::vector<Diagnostic> findings;   ///< named causes for every failed check
};

/**
 * Audits a switch fine-graining bundle: witness verification over the
 * bundle's sub-network family, fixed-order searches on both processes,
 * input/output correspondence at both descriptions, and relativistic
 * causality of the bundled realisation.
 */
FineGrainingVerdict fine_graining_audit(const SwitchFineGraining& bundle,
                                        double tol = kDefaultTol);

/**
 * The canonical switch network embedded at four pointlike regions, one per
 * party, with the intermediate parties spacelike to each other.  Causality
 * fails here: each party signals input to output inside a point, and the
 * parties signal to each other both ways.
 */
Realisation pointlike_switch_realisation();

/**
 * The canonical switch network on a 1+1 lattice with each intermediate party
 * straddling two lightlike-separated sites, no region partitions and no
 * finer network.  The regions embed the signalling both ways, but they
 * cannot be refined into an acyclic structure.
 */
Realisation straddling_switch_realisation();

/**
 * Embeds every named node of `net` at its own instant of a causal chain, in
 * the given order.  `nodes` must list each node of the cut-open network
 * exactly once.
 */
Realisation chain_realisation(const QuantumNetwork& net,
                              const std::vector<std::string>& nodes);

}  // namespace qcnet
