/*
 * labels.hpp — named finite-dimensional systems and shared numeric conventions.
 *
 * Every operator in this library acts on an ordered list of labelled systems.
 * A joint basis index is row-major over that list: for systems (S_0, ..., S_{k-1})
 * with dimensions (d_0, ..., d_{k-1}), the basis vector |i_0, ..., i_{k-1}⟩ has
 * flat index i_0·d_1···d_{k-1} + i_1·d_2···d_{k-1} + ... + i_{k-1}, so the first
 * system is the most significant digit and Kronecker products compose in list
 * order.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcnet {

/** Default numeric tolerance for all approximate comparisons. */
inline constexpr double kDefaultTol = 1e-9;

/** Largest total dimension for which dense matrices may be materialised. */
inline constexpr std::size_t kDenseDimCap = std::size_t{1} << 12;

using Cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/** Exception type for all domain errors raised by this library. */
class Error : public std::logic_error {
 public:
  explicit Error(const std::string& message) : std::logic_error(message) {}
};

/** One finding from a structural validation routine. */
struct Diagnostic {
  std::string kind;    ///< short machine-checkable category, e.g. "unknown-port"
  std::string detail;  ///< human-readable description naming the offenders
};

/**
 * A named system with a fixed finite dimension.
 *
 * Labels are compared by (name, dim); names must be pairwise distinct within
 * any one operator.
 */
struct SystemLabel {
  std::string name;
  std::size_t dim = 1;

  friend bool operator==(const SystemLabel&, const SystemLabel&) = default;
  friend auto operator<=>(const SystemLabel&, const SystemLabel&) = default;
};

/** Convenience constructor: label `name` of dimension `dim` (≥ 1). */
inline SystemLabel sys(std::string name, std::size_t dim) {
  if (dim < 1) throw Error("system '" + name + "' must have dimension >= 1");
  return SystemLabel{std::move(name), dim};
}

/** Product of the dimensions of `systems` (1 for the empty list). */
std::size_t total_dim(const std::vector<SystemLabel>& systems);

/** Throws if any two labels in `systems` share a name. */
void check_distinct_labels(const std::vector<SystemLabel>& systems);

/** Index of the label named `name`, or throws. */
std::size_t find_system(const std::vector<SystemLabel>& systems, const std::string& name);

/** True if `systems` contains a label named `name`. */
bool has_system(const std::vector<SystemLabel>& systems, const std::string& name);

/**
 * Row-major index arithmetic over an ordered system list.
 *
 * Precomputes strides so that flat indices can be split into per-system digits
 * and reassembled after permutations or deletions.
 */
class IndexMap {
 public:
  explicit IndexMap(const std::vector<SystemLabel>& systems);

  std::size_t total() const { return total_; }
  std::size_t count() const { return dims_.size(); }
  std::size_t dim(std::size_t k) const { return dims_[k]; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }

  /** Digit of `flat` belonging to system `k`. */
  std::size_t digit(std::size_t flat, std::size_t k) const {
    return (flat / strides_[k]) % dims_[k];
  }

  /** Flat index assembled from one digit per system. */
  std::size_t flat(const std::vector<std::size_t>& digits) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

}  // namespace qcnet
