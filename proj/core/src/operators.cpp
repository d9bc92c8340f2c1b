#include "qcnet/operators.hpp"

#include <algorithm>
#include <set>

namespace qcnet {

// ── labels ──────────────────────────────────────────────────────────────────

std::size_t total_dim(const std::vector<SystemLabel>& systems) {
  std::size_t d = 1;
  for (const auto& s : systems) {
    if (s.dim < 1) throw Error("system '" + s.name + "' must have dimension >= 1");
    d *= s.dim;
  }
  return d;
}

void check_distinct_labels(const std::vector<SystemLabel>& systems) {
  std::set<std::string> seen;
  for (const auto& s : systems) {
    if (!seen.insert(s.name).second) {
      throw Error("duplicate system label '" + s.name + "' within one operator");
    }
  }
}

std::size_t find_system(const std::vector<SystemLabel>& systems, const std::string& name) {
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].name == name) return i;
  }
  throw Error("unknown system label '" + name + "'");
}

bool has_system(const std::vector<SystemLabel>& systems, const std::string& name) {
  return std::any_of(systems.begin(), systems.end(),
                     [&](const SystemLabel& s) { return s.name == name; });
}

IndexMap::IndexMap(const std::vector<SystemLabel>& systems) {
  dims_.reserve(systems.size());
  for (const auto& s : systems) dims_.push_back(s.dim);
  strides_.assign(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 0;) {
    strides_[k] = total_;
    total_ *= dims_[k];
  }
  // strides_ currently holds suffix products in reverse construction order:
  // stride of system k is the product of dimensions of systems k+1..end.
}

std::size_t IndexMap::flat(const std::vector<std::size_t>& digits) const {
  if (digits.size() != dims_.size()) throw Error("digit count mismatch in IndexMap::flat");
  std::size_t f = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (digits[k] >= dims_[k]) throw Error("digit out of range in IndexMap::flat");
    f += digits[k] * strides_[k];
  }
  return f;
}

// ── LabeledOperator ─────────────────────────────────────────────────────────

LabeledOperator LabeledOperator::matrix(std::vector<SystemLabel> systems, Matrix data) {
  check_distinct_labels(systems);
  const std::size_t d = qcnet::total_dim(systems);
  if (static_cast<std::size_t>(data.rows()) != d ||
      static_cast<std::size_t>(data.cols()) != d) {
    throw Error("matrix shape does not match the joint dimension " + std::to_string(d));
  }
  LabeledOperator op;
  op.systems_ = std::move(systems);
  op.dim_ = d;
  op.kind_ = OperatorKind::Matrix;
  op.data_ = std::move(data);
  return op;
}

LabeledOperator LabeledOperator::vector(std::vector<SystemLabel> systems, Vector data) {
  check_distinct_labels(systems);
  const std::size_t d = qcnet::total_dim(systems);
  if (static_cast<std::size_t>(data.size()) != d) {
    throw Error("vector length does not match the joint dimension " + std::to_string(d));
  }
  LabeledOperator op;
  op.systems_ = std::move(systems);
  op.dim_ = d;
  op.kind_ = OperatorKind::Vector;
  op.data_ = std::move(data);
  return op;
}

LabeledOperator LabeledOperator::ensemble(std::vector<SystemLabel> systems,
                                          std::vector<Vector> vectors) {
  check_distinct_labels(systems);
  const std::size_t d = qcnet::total_dim(systems);
  for (const auto& v : vectors) {
    if (static_cast<std::size_t>(v.size()) != d) {
      throw Error("ensemble vector length does not match the joint dimension " +
                  std::to_string(d));
    }
  }
  LabeledOperator op;
  op.systems_ = std::move(systems);
  op.dim_ = d;
  op.kind_ = OperatorKind::Ensemble;
  op.ensemble_ = std::move(vectors);
  return op;
}

const Matrix& LabeledOperator::mat() const {
  if (kind_ == OperatorKind::Ensemble) {
    throw Error("ensemble operator has no dense payload; use dense()");
  }
  return data_;
}

Vector LabeledOperator::vec() const {
  if (kind_ != OperatorKind::Vector) throw Error("operator is not a vector");
  return data_.col(0);
}

const std::vector<Vector>& LabeledOperator::vectors() const {
  if (kind_ != OperatorKind::Ensemble) throw Error("operator is not an ensemble");
  return ensemble_;
}

Matrix LabeledOperator::dense() const {
  switch (kind_) {
    case OperatorKind::Matrix:
      return data_;
    case OperatorKind::Vector:
      return data_ * data_.adjoint();
    case OperatorKind::Ensemble: {
      if (dim_ > kDenseDimCap) {
        throw Error("dense materialisation of dimension " + std::to_string(dim_) +
                    " exceeds the cap " + std::to_string(kDenseDimCap));
      }
      Matrix m = Matrix::Zero(dim_, dim_);
      for (const auto& v : ensemble_) m.noalias() += v * v.adjoint();
      return m;
    }
  }
  throw Error("unreachable operator kind");
}

std::vector<Vector> LabeledOperator::to_ensemble(double tol) const {
  switch (kind_) {
    case OperatorKind::Ensemble:
      return ensemble_;
    case OperatorKind::Vector:
      return {data_.col(0)};
    case OperatorKind::Matrix: {
      const double herm_dev = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
      if (herm_dev > tol) {
        throw Error("ensemble conversion requires a Hermitian operator");
      }
      Eigen::SelfAdjointEigenSolver<Matrix> es((data_ + data_.adjoint()) / 2.0);
      std::vector<Vector> vs;
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam < -tol) {
          throw Error("ensemble conversion requires a positive semidefinite operator");
        }
        if (lam > tol) vs.push_back(std::sqrt(lam) * es.eigenvectors().col(k));
      }
      return vs;
    }
  }
  throw Error("unreachable operator kind");
}

Cx LabeledOperator::trace() const {
  switch (kind_) {
    case OperatorKind::Matrix:
      return data_.trace();
    case OperatorKind::Ensemble: {
      double t = 0.0;
      for (const auto& v : ensemble_) t += v.squaredNorm();
      return Cx(t, 0.0);
    }
    case OperatorKind::Vector:
      throw Error("trace of a vector operator is undefined");
  }
  throw Error("unreachable operator kind");
}

// ── tensor product ──────────────────────────────────────────────────────────

namespace {

void check_disjoint(const std::vector<SystemLabel>& a, const std::vector<SystemLabel>& b) {
  for (const auto& s : b) {
    if (has_system(a, s.name)) {
      throw Error("tensor product operands share the label '" + s.name + "'");
    }
  }
}

std::vector<SystemLabel> concat(const std::vector<SystemLabel>& a,
                                const std::vector<SystemLabel>& b) {
  std::vector<SystemLabel> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

}  // namespace

LabeledOperator tensor_product(const LabeledOperator& a, const LabeledOperator& b) {
  check_disjoint(a.systems(), b.systems());
  auto systems = concat(a.systems(), b.systems());
  const bool ensemble = a.kind() == OperatorKind::Ensemble ||
                        b.kind() == OperatorKind::Ensemble;
  if (ensemble) {
    std::vector<Vector> va = a.to_ensemble();
    std::vector<Vector> vb = b.to_ensemble();
    std::vector<Vector> out;
    out.reserve(va.size() * vb.size());
    for (const auto& x : va) {
      for (const auto& y : vb) out.push_back(kron_vec(x, y));
    }
    return LabeledOperator::ensemble(std::move(systems), std::move(out));
  }
  if (a.kind() == OperatorKind::Vector && b.kind() == OperatorKind::Vector) {
    return LabeledOperator::vector(std::move(systems), kron_vec(a.vec(), b.vec()));
  }
  if (a.kind() == OperatorKind::Matrix && b.kind() == OperatorKind::Matrix) {
    return LabeledOperator::matrix(std::move(systems), kron(a.mat(), b.mat()));
  }
  throw Error("tensor product of a matrix with a vector is not defined");
}

// ── partial trace ───────────────────────────────────────────────────────────

LabeledOperator partial_trace(const LabeledOperator& a,
                              const std::vector<std::string>& traced) {
  if (a.kind() == OperatorKind::Vector) {
    throw Error("partial trace of a vector operator is not defined");
  }
  std::vector<bool> drop(a.systems().size(), false);
  for (const auto& name : traced) drop[find_system(a.systems(), name)] = true;

  std::vector<SystemLabel> kept, gone;
  for (std::size_t k = 0; k < a.systems().size(); ++k) {
    (drop[k] ? gone : kept).push_back(a.systems()[k]);
  }
  // Reorder to [kept..., traced...] first, then contract the trailing block.
  std::vector<std::string> order;
  for (const auto& s : kept) order.push_back(s.name);
  for (const auto& s : gone) order.push_back(s.name);
  const LabeledOperator p = permute_systems(a, order);

  const std::size_t dk = total_dim(kept);
  const std::size_t dt = total_dim(gone);
  Matrix out = Matrix::Zero(dk, dk);
  if (p.kind() == OperatorKind::Matrix) {
    const Matrix& m = p.mat();
    for (std::size_t r = 0; r < dk; ++r) {
      for (std::size_t c = 0; c < dk; ++c) {
        Cx acc = 0.0;
        for (std::size_t t = 0; t < dt; ++t) acc += m(r * dt + t, c * dt + t);
        out(r, c) = acc;
      }
    }
  } else {
    if (dk > kDenseDimCap) {
      throw Error("partial trace of an ensemble would materialise dimension " +
                  std::to_string(dk) + " above the cap");
    }
    // Tr_T[v v†] = V V† with V the (kept × traced) reshaping of v.
    for (const auto& v : p.vectors()) {
      Eigen::Map<const Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
          V(v.data(), static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dt));
      out.noalias() += V * V.adjoint();
    }
  }
  return LabeledOperator::matrix(std::move(kept), std::move(out));
}

// ── permutation ─────────────────────────────────────────────────────────────

LabeledOperator permute_systems(const LabeledOperator& a,
                                const std::vector<std::string>& order) {
  if (order.size() != a.systems().size()) {
    throw Error("permutation must list every system exactly once");
  }
  std::vector<std::size_t> src;  // src[k] = position in a.systems() of order[k]
  src.reserve(order.size());
  std::vector<bool> used(order.size(), false);
  for (const auto& name : order) {
    const std::size_t k = find_system(a.systems(), name);
    if (used[k]) throw Error("permutation lists system '" + name + "' twice");
    used[k] = true;
    src.push_back(k);
  }
  bool identity = true;
  for (std::size_t k = 0; k < src.size(); ++k) identity = identity && src[k] == k;
  if (identity) return a;

  std::vector<SystemLabel> new_systems;
  new_systems.reserve(order.size());
  for (std::size_t k : src) new_systems.push_back(a.systems()[k]);

  const IndexMap old_map(a.systems());
  const IndexMap new_map(new_systems);
  const std::size_t d = a.total_dim();
  // perm[new_flat] = old_flat
  std::vector<std::size_t> perm(d);
  std::vector<std::size_t> digits(order.size());
  for (std::size_t f = 0; f < d; ++f) {
    for (std::size_t k = 0; k < src.size(); ++k) digits[k] = old_map.digit(f, src[k]);
    perm[new_map.flat(digits)] = f;
  }

  switch (a.kind()) {
    case OperatorKind::Vector: {
      Vector v = a.vec();
      Vector out(d);
      for (std::size_t f = 0; f < d; ++f) out(f) = v(perm[f]);
      return LabeledOperator::vector(std::move(new_systems), std::move(out));
    }
    case OperatorKind::Matrix: {
      const Matrix& m = a.mat();
      Matrix out(d, d);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) out(r, c) = m(perm[r], perm[c]);
      }
      return LabeledOperator::matrix(std::move(new_systems), std::move(out));
    }
    case OperatorKind::Ensemble: {
      std::vector<Vector> vs;
      vs.reserve(a.vectors().size());
      for (const auto& v : a.vectors()) {
        Vector out(d);
        for (std::size_t f = 0; f < d; ++f) out(f) = v(perm[f]);
        vs.push_back(std::move(out));
      }
      return LabeledOperator::ensemble(std::move(new_systems), std::move(vs));
    }
  }
  throw Error("unreachable operator kind");
}

LabeledOperator max_entangled(const SystemLabel& x, const SystemLabel& y) {
  if (x.dim != y.dim) {
    throw Error("maximally entangled pair requires equal dimensions (got '" + x.name +
                "' and '" + y.name + "')");
  }
  const std::size_t d = x.dim;
  Vector v = Vector::Zero(d * d);
  for (std::size_t i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return LabeledOperator::vector({x, y}, std::move(v));
}

}  // namespace qcnet
