#pragma once
/**
 * Fine-graining of maps and networks: replacing a map by a more finely
 * resolved one, with each system split into a set of finer systems, such that
 * the original is recovered by an encoding/decoding pair and no signalling
 * relation is lost.
 *
 * A verified fine-graining consists of
 *   (i)  recovery: dec ∘ fine ∘ enc equals the coarse map, where enc carries
 *        coarse inputs to fine inputs and dec carries fine outputs back to
 *        coarse outputs; and
 *   (ii) signalling preservation: every signalling edge of the coarse map
 *        reappears between the images of its endpoint sets in the fine map.
 *
 * The relation is reflexive (identity split, identity witnesses) and
 * transitive (witnesses compose), which the tests exercise.  At network level
 * the same two conditions are required per sub-network; sub-networks without a
 * supplied witness leave the verification incomplete rather than failed.
 */
#include <map>
#include <string>
#include <vector>

#include "qcnet/network.hpp"
#include "qcnet/signalling.hpp"

namespace qcnet {

/** Assignment of each coarse system to its nonempty set of finer systems. */
struct SystemsFineGraining {
  std::map<std::string, std::vector<std::string>> assign;
};

/** The concatenated images of `coarse` under `f`, in entry order.  Throws on
 *  a name without an entry. */
std::vector<std::string> fine_image(const SystemsFineGraining& f,
                                    const std::vector<std::string>& coarse);

/** Identity fine-graining on the named systems (each mapped to itself). */
SystemsFineGraining identity_fine_graining(const std::vector<std::string>& names);

/** Composite split: first `outer` (coarse → mid), then `inner` (mid → fine). */
SystemsFineGraining compose_fine_graining(const SystemsFineGraining& inner,
                                          const SystemsFineGraining& outer);

/** Encoding/decoding pair connecting a coarse map to a finer one. */
struct FineGrainingWitness {
  CPM enc;  ///< coarse inputs → fine inputs, trace preserving
  CPM dec;  ///< fine outputs → coarse outputs, trace preserving on the image
};

/** Outcome of verifying one map against a candidate fine-graining. */
struct MapFineGrainingReport {
  bool ok = false;              ///< recovery_ok && signalling_ok && witness_ok
  bool recovery_ok = false;     ///< dec ∘ fine ∘ enc equals the coarse map
  bool signalling_ok = false;   ///< every coarse edge survives between images
  bool witness_ok = false;      ///< enc is TP; dec is TP on the reachable image
  double recovery_residual = 0.0;  ///< max-norm deviation of the recovery
  std::vector<Diagnostic> findings;  ///< one entry per failed check
};

/**
 * Verifies that `fine` fine-grains `coarse` along `f` with witness `w`.
 *
 * Structural requirements (throwing on violation): `f` must map every coarse
 * input to fine inputs and every coarse output to fine outputs, with pairwise
 * disjoint images that exactly cover the fine map's systems, and the witness
 * port lists must match the four interfaces.  Numerical checks are reported.
 * Coarse signalling edges are enumerated over sets of up to `max_set_size`
 * systems per side.
 */
MapFineGrainingReport verify_cpm_finegraining(const CPM& coarse, const CPM& fine,
                                              const SystemsFineGraining& f,
                                              const FineGrainingWitness& w,
                                              double tol = kDefaultTol,
                                              std::size_t max_set_size = 1);

/** One verified correspondence: a coarse sub-network, its fine counterpart,
 *  and the witness connecting their induced maps. */
struct SubNetworkWitness {
  SubNetwork coarse;
  SubNetwork fine;
  FineGrainingWitness witness;
};

/** Aggregate outcome of verifying a network against a finer network. */
struct NetworkFineGrainingReport {
  bool ok = false;        ///< no witnessed sub-network failed
  bool complete = false;  ///< every requested sub-network had a witness
  std::vector<std::string> verified;  ///< keys of sub-networks that passed
  std::vector<std::string> failed;    ///< keys of sub-networks that failed
  std::vector<std::string> missing;   ///< keys of sub-networks without witness
  std::vector<Diagnostic> findings;   ///< details for every failure
};

/**
 * Verifies `fine` as a fine-graining of `coarse` on the supplied family of
 * sub-network correspondences.  With `enumerate_max_maps` > 0 every
 * sub-network of `coarse` with at most that many maps is requested, and the
 * ones without a witness are reported as missing (incomplete, not failed);
 * otherwise exactly the supplied list is checked.
 */
NetworkFineGrainingReport verify_network_finegraining(
    const QuantumNetwork& coarse, const QuantumNetwork& fine,
    const SystemsFineGraining& f, const std::vector<SubNetworkWitness>& witnesses,
    double tol = kDefaultTol, std::size_t max_set_size = 1,
    std::size_t enumerate_max_maps = 0);

}  // namespace qcnet
