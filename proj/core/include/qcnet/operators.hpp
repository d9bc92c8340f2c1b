/*
 * operators.hpp — labelled operators and the basic tensor algebra on them.
 *
 * A LabeledOperator carries an ordered list of systems together with either a
 * dense square matrix (dimension = product of system dimensions), a dense
 * column vector, or an *ensemble*: a list of pure vectors v_k representing the
 * positive semidefinite operator Σ_k v_k v_k†.  The ensemble form exists so
 * that high-dimensional Choi operators of low rank can be manipulated without
 * ever materialising matrices above the dense cap.
 */

#pragma once

#include <functional>
#include <vector>

#include "qcnet/labels.hpp"

namespace qcnet {

enum class OperatorKind {
  Matrix,    ///< dense square matrix over the joint basis
  Vector,    ///< dense column vector over the joint basis
  Ensemble,  ///< Σ_k v_k v_k† given by the list of (unnormalised) vectors v_k
};

class LabeledOperator {
 public:
  /** The scalar zero over no systems, as a placeholder for later assignment. */
  LabeledOperator() : data_(Matrix::Zero(1, 1)) {}

  /** Dense square operator over `systems` (matrix must be D×D). */
  static LabeledOperator matrix(std::vector<SystemLabel> systems, Matrix data);
  /** Dense column vector over `systems` (must be D×1). */
  static LabeledOperator vector(std::vector<SystemLabel> systems, Vector data);
  /** Ensemble form Σ_k v_k v_k† (each vector must have length D). */
  static LabeledOperator ensemble(std::vector<SystemLabel> systems,
                                  std::vector<Vector> vectors);

  OperatorKind kind() const { return kind_; }
  const std::vector<SystemLabel>& systems() const { return systems_; }
  std::size_t total_dim() const { return dim_; }

  /** Dense payload; throws for ensemble operators. */
  const Matrix& mat() const;
  /** Vector payload; throws unless kind() == Vector. */
  Vector vec() const;
  /** Ensemble payload; throws unless kind() == Ensemble. */
  const std::vector<Vector>& vectors() const;

  /**
   * Dense square matrix equal to this operator.  Vectors are promoted to
   * outer products v v†, ensembles are summed.  Throws if the total dimension
   * exceeds the dense cap.
   */
  Matrix dense() const;

  /**
   * Ensemble form of this operator.  Matrix operators must be Hermitian
   * positive semidefinite within `tol` (eigendecomposition); vector operators
   * become single-element ensembles.
   */
  std::vector<Vector> to_ensemble(double tol = kDefaultTol) const;

  /** Trace of the operator (Σ_k ‖v_k‖² for ensembles; throws for vectors). */
  Cx trace() const;

 private:
  std::vector<SystemLabel> systems_;
  std::size_t dim_ = 1;
  OperatorKind kind_ = OperatorKind::Matrix;
  Matrix data_;
  std::vector<Vector> ensemble_;
};

/**
 * Tensor product in list order.  System labels must be disjoint between the
 * two operands; the offending label is named on error.  Matrix⊗Matrix,
 * Vector⊗Vector and any combination involving an ensemble (the other operand
 * is converted) are supported; Matrix⊗Vector is rejected.
 */
LabeledOperator tensor_product(const LabeledOperator& a, const LabeledOperator& b);

/**
 * Partial trace over the listed system names.  Requires a square operator
 * (vector inputs are an error) and preserves the trace exactly.  Ensemble
 * operators are materialised on the kept systems, which must fit the cap.
 */
LabeledOperator partial_trace(const LabeledOperator& a,
                              const std::vector<std::string>& traced);

/**
 * Relabels the operator to the system order given by `order` (a permutation
 * of the current labels by name), permuting the data accordingly.
 */
LabeledOperator permute_systems(const LabeledOperator& a,
                                const std::vector<std::string>& order);

/**
 * Unnormalised maximally entangled vector Σ_i |ii⟩ on the pair (x, y).
 * Requires x.dim == y.dim; the squared norm is that dimension.
 */
LabeledOperator max_entangled(const SystemLabel& x, const SystemLabel& y);

}  // namespace qcnet
