/*
 * cpm.hpp — completely positive maps in Choi form.
 *
 * Convention (fixed for the whole library): the Choi operator of a map M from
 * input systems I to output systems O is
 *
 *     C = Σ_{i,j} |i⟩⟨j|_I ⊗ M(|i⟩⟨j|)_O
 *
 * over the ordered system list I ⧺ O in the computational basis.  Every
 * derived pairing (action on states, loop composition, probabilities) follows
 * from this one equation and is locked by round-trip tests.
 */

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qcnet/operators.hpp"

namespace qcnet {

/** Result of the complete-positivity / trace-preservation check. */
struct CptpVerdict {
  bool cp = false;
  bool tp = false;
  /** Largest observed violation among the checked properties. */
  double max_violation = 0.0;
};

class CPM {
 public:
  /**
   * Wraps an existing Choi operator.  `choi.systems()` must equal
   * `inputs ⧺ outputs`; positivity is checked lazily via is_cptp.
   */
  CPM(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
      LabeledOperator choi);

  /** Map with Kraus operators `kraus` (each dim(out) × dim(in)). */
  static CPM from_kraus(std::vector<SystemLabel> inputs,
                        std::vector<SystemLabel> outputs,
                        const std::vector<Matrix>& kraus);
  /** Unitary (or isometric) conjugation ρ ↦ UρU†. */
  static CPM from_unitary(std::vector<SystemLabel> inputs,
                          std::vector<SystemLabel> outputs, const Matrix& u);
  /** Identity channel between two equally-sized labels. */
  static CPM identity(const SystemLabel& in, const SystemLabel& out);
  /** Preparation of the pure state `psi` (no inputs). */
  static CPM prepare_pure(std::vector<SystemLabel> outputs, const Vector& psi);
  /** Preparation of the density operator `rho` (no inputs). */
  static CPM prepare(std::vector<SystemLabel> outputs, const Matrix& rho);
  /** Full trace over `inputs` (no outputs). */
  static CPM trace_out(std::vector<SystemLabel> inputs);
  /** State replacement ρ ↦ Tr[ρ]·σ. */
  static CPM replace(std::vector<SystemLabel> inputs,
                     std::vector<SystemLabel> outputs, const Matrix& sigma);

  const std::vector<SystemLabel>& inputs() const { return inputs_; }
  const std::vector<SystemLabel>& outputs() const { return outputs_; }
  const LabeledOperator& choi() const { return choi_; }

  std::size_t input_dim() const { return total_dim(inputs_); }
  std::size_t output_dim() const { return total_dim(outputs_); }

 private:
  std::vector<SystemLabel> inputs_;
  std::vector<SystemLabel> outputs_;
  LabeledOperator choi_;
};

/**
 * Choi operator of the map whose action on basis operators is given by
 * `action` (dense input → dense output on the joint spaces).  A linearity spot
 * check on a fixed combination of basis operators rejects non-linear actions.
 */
CPM choi_of(const std::function<Matrix(const Matrix&)>& action,
            std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs);

/**
 * Applies `cpm` to the state `rho`, acting as the identity on every system of
 * `rho` not consumed by the map.  `rho.systems()` must contain all of
 * `cpm.inputs()`; the result is ordered [outputs..., bystanders...].
 */
LabeledOperator apply(const CPM& cpm, const LabeledOperator& rho);

/** Complete positivity and trace preservation within `tol`. */
CptpVerdict is_cptp(const CPM& cpm, double tol = kDefaultTol);

/**
 * Loop composition: feeds the output system `out_sys` back into the input
 * system `in_sys` (equal dimensions).  On Choi operators this contracts with
 * the unnormalised maximally entangled vector on the pair, which reproduces
 * sequential composition when the loop connects two tensored maps.
 */
CPM loop_compose(const CPM& cpm, const std::string& out_sys, const std::string& in_sys);

/**
 * Tensor product of two maps (disjoint port labels required).  Falls back to
 * the ensemble representation when the dense result would exceed the cap.
 */
CPM tensor(const CPM& a, const CPM& b);

/**
 * Sequential composition `after ∘ before`, connecting every label that is an
 * output of `before` and an input of `after`.  Unconnected ports remain free.
 */
CPM compose_sequential(const CPM& after, const CPM& before);

}  // namespace qcnet
