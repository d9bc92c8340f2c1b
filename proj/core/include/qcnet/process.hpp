/*
 * process.hpp — higher-order processes: operators that route quantum systems
 * between parties.
 *
 * A process holds one operator over all party systems; each party owns one
 * input system (received from the process) and one output system (returned to
 * it).  Viewed as a map the process sends the party outputs to the party
 * inputs, so closing it with one local operation per party yields a scalar —
 * the probability of that joint choice of operations.
 *
 * The quantum switch is built in: `quantum_switch` routes a target through
 * two parties in an order controlled coherently by a qubit, and
 * `fine_grained_switch` packages its six-party refinement, in which each
 * party acts at one definite slot, together with the sub-network witnesses
 * relating the two descriptions and a spacetime realisation of the whole
 * arrangement.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcnet/cpm.hpp"
#include "qcnet/embedding.hpp"
#include "qcnet/finegraining.hpp"
#include "qcnet/network.hpp"

namespace qcnet {

/** One party: the system it receives from the process and the one it returns. */
struct Party {
  std::string name;
  SystemLabel in;
  SystemLabel out;
};

/** An operator over all party systems, together with the party assignment. */
struct ProcessMatrix {
  std::vector<Party> parties;
  LabeledOperator w;
};

/** Outcome of process validation. */
struct ProcessReport {
  bool ok = false;
  std::vector<Diagnostic> findings;
};

/**
 * Validation: the parties must tile the operator's systems exactly; the
 * operator must be positive with trace equal to the product of the party
 * output dimensions and induce a trace-preserving map; with `samples` > 0,
 * that many random product instruments are drawn and the outcome
 * probabilities of each must sum to one within `tol`.
 * Kinds: malformed | not-positive | wrong-trace | not-a-channel |
 * not-normalised.
 */
ProcessReport validate_process(const ProcessMatrix& p, double tol = kDefaultTol,
                               std::size_t samples = 0, std::uint64_t seed = 0);

/**
 * Probability of one completely positive branch per party, in party order:
 * the trace pairing of the process operator with the tensored branch
 * operators.  Each branch must map exactly the party's input system to its
 * output system.
 */
double probability(const ProcessMatrix& p, const std::vector<CPM>& branches);

/** The process as a map from the party outputs to the party inputs. */
CPM process_to_map(const ProcessMatrix& p);

/**
 * The closed network of the process with one local map per party (in party
 * order): the process feeds each party's input system into its local map and
 * takes the party's output system back.  Locals may carry extra free ports.
 */
QuantumNetwork process_network(const ProcessMatrix& p, const std::vector<CPM>& locals);

/**
 * A party order compatible with the process, if one exists: along the order,
 * no set of later party outputs signals to any earlier party input.  The
 * lexicographically first such order is returned.  Supports up to eight
 * parties.
 */
std::optional<std::vector<std::string>> fixed_party_order(const ProcessMatrix& p,
                                                          double tol = kDefaultTol);

/** Whether any fixed party order exists. */
bool is_fixed_order(const ProcessMatrix& p, double tol = kDefaultTol);

/**
 * The quantum switch on a target of dimension `d` ≥ 2: parties C (control
 * preparation, output of dimension 2d = control ⊗ target), A and B (target
 * operations), and D (readout, input of dimension 2d).  When the control is
 * |0⟩ the target passes A then B; when it is |1⟩, B then A; superpositions
 * of the control route coherently.  The operator is rank one.
 */
ProcessMatrix quantum_switch(std::size_t d);

/**
 * The state the switch delivers to D when C prepares
 * (α|0⟩ + β|1⟩) ⊗ |ψ⟩, A applies `u` and B applies `v`:
 * the normalisation of α|0⟩ ⊗ vu|ψ⟩ + β|1⟩ ⊗ uv|ψ⟩.
 */
Vector qs_reference_output(Cx alpha, Cx beta, const Vector& psi, const Matrix& u,
                           const Matrix& v);

/**
 * The six-party refinement of the switch: C and D as before; A and B each
 * split into a first-slot party (A1, B1) and a second-slot party (A2, B2)
 * acting on d+1 dimensions — the target plus a vacuum level Ω marking the
 * slot in which the party is not visited.  The process routes the target
 * through slot 1 of one party and slot 2 of the other, with the assignment
 * controlled coherently, and absorbs its bookkeeping into an internal traced
 * system; the operator is an ensemble of d+3 vectors.
 */
ProcessMatrix fine_switch_process(std::size_t d);

/**
 * The state the fine-grained switch delivers to D when the four slot parties
 * apply u1, u2 (A's slots) and v1, v2 (B's slots): the normalisation of
 * α|0⟩ ⊗ v2 u1|ψ⟩ + β|1⟩ ⊗ u2 v1|ψ⟩.  With u1 = u2 and v1 = v2 it equals
 * `qs_reference_output`.
 */
Vector qsf_reference_output(Cx alpha, Cx beta, const Vector& psi, const Matrix& u1,
                            const Matrix& u2, const Matrix& v1, const Matrix& v2);

/** `u` extended by one dimension that it leaves untouched (the vacuum level). */
Matrix lift_unitary(const Matrix& u);

/** Parameters closing a switch into a concrete experiment. */
struct SwitchParams {
  Cx alpha;
  Cx beta;
  Vector psi;
  Matrix u;  ///< A's operation
  Matrix v;  ///< B's operation
};

/** A fixed, structureless instance: Fourier u, cyclic-shift v, equal-weight
 *  control with a π/4 relative phase, Fourier-basis target state. */
SwitchParams canonical_switch_params(std::size_t d);

/** Preparation feeding a switch: trivial input, pure (α|0⟩ + β|1⟩) ⊗ |ψ⟩. */
CPM switch_prep(const SystemLabel& in, const SystemLabel& out, Cx alpha, Cx beta,
                const Vector& psi);

/** Readout passing the process output to the fresh port `kept` while
 *  supplying the trivial return system. */
CPM switch_readout(const SystemLabel& in, const SystemLabel& trivial_out,
                   const SystemLabel& kept);

/**
 * The switch, its six-party refinement, and everything tying them together:
 * closed networks for both (local operations fixed by `params`, with the
 * slot parties applying the lifted operations), the system split, witnesses
 * for every coarse sub-network that admits one, and a realisation on a
 * chain of eight spacetime points in which A and B each occupy one region
 * straddling their two slots.
 */
struct SwitchFineGraining {
  ProcessMatrix coarse;
  ProcessMatrix fine;
  QuantumNetwork coarse_network;
  QuantumNetwork fine_network;
  SystemsFineGraining fine_map;
  std::vector<SubNetworkWitness> witnesses;
  Realisation realisation;
  SwitchParams params;
};

SwitchFineGraining fine_grained_switch(std::size_t d, const SwitchParams& params);

/** The bundle at the canonical parameters. */
SwitchFineGraining fine_grained_switch(std::size_t d);

}  // namespace qcnet
