#include "qcnet/cpm.hpp"

#include <algorithm>

namespace qcnet {

namespace {

std::vector<SystemLabel> concat(const std::vector<SystemLabel>& a,
                                const std::vector<SystemLabel>& b) {
  std::vector<SystemLabel> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

CPM::CPM(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
         LabeledOperator choi)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), choi_(std::move(choi)) {
  if (choi_.kind() == OperatorKind::Vector) {
    throw Error("a Choi operator must be a matrix or an ensemble, not a vector");
  }
  const auto expected = concat(inputs_, outputs_);
  if (choi_.systems() != expected) {
    throw Error("Choi systems must equal inputs followed by outputs");
  }
}

CPM CPM::from_kraus(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
                    const std::vector<Matrix>& kraus) {
  const std::size_t din = total_dim(inputs);
  const std::size_t dout = total_dim(outputs);
  std::vector<Vector> vs;
  vs.reserve(kraus.size());
  for (const auto& k : kraus) {
    if (static_cast<std::size_t>(k.rows()) != dout ||
        static_cast<std::size_t>(k.cols()) != din) {
      throw Error("Kraus operator shape must be dim(out) x dim(in)");
    }
    // Choi vector of a single Kraus operator K: w[(i,o)] = K(o,i).
    Vector w(din * dout);
    for (std::size_t i = 0; i < din; ++i) {
      for (std::size_t o = 0; o < dout; ++o) w(i * dout + o) = k(o, i);
    }
    vs.push_back(std::move(w));
  }
  auto systems = concat(inputs, outputs);
  return CPM(std::move(inputs), std::move(outputs),
             LabeledOperator::ensemble(std::move(systems), std::move(vs)));
}

CPM CPM::from_unitary(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
                      const Matrix& u) {
  return from_kraus(std::move(inputs), std::move(outputs), {u});
}

CPM CPM::identity(const SystemLabel& in, const SystemLabel& out) {
  if (in.dim != out.dim) throw Error("identity channel requires equal dimensions");
  return from_unitary({in}, {out}, Matrix::Identity(in.dim, in.dim));
}

CPM CPM::prepare_pure(std::vector<SystemLabel> outputs, const Vector& psi) {
  const std::size_t d = total_dim(outputs);
  if (static_cast<std::size_t>(psi.size()) != d) {
    throw Error("prepared state length does not match the output dimension");
  }
  return from_kraus({}, std::move(outputs), {Matrix(psi)});
}

CPM CPM::prepare(std::vector<SystemLabel> outputs, const Matrix& rho) {
  const std::size_t d = total_dim(outputs);
  if (static_cast<std::size_t>(rho.rows()) != d ||
      static_cast<std::size_t>(rho.cols()) != d) {
    throw Error("prepared state shape does not match the output dimension");
  }
  auto systems = outputs;
  auto vs = LabeledOperator::matrix(systems, rho).to_ensemble();
  std::vector<Matrix> kraus;
  kraus.reserve(vs.size());
  for (const auto& v : vs) kraus.push_back(Matrix(v));
  return from_kraus({}, std::move(outputs), kraus);
}

CPM CPM::trace_out(std::vector<SystemLabel> inputs) {
  const std::size_t d = total_dim(inputs);
  std::vector<Matrix> kraus;
  kraus.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    Matrix row = Matrix::Zero(1, d);
    row(0, k) = 1.0;
    kraus.push_back(row);
  }
  return from_kraus(std::move(inputs), {}, kraus);
}

CPM CPM::replace(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
                 const Matrix& sigma) {
  return compose_sequential(prepare(std::move(outputs), sigma),
                            trace_out(std::move(inputs)));
}

CPM choi_of(const std::function<Matrix(const Matrix&)>& action,
            std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs) {
  const std::size_t din = total_dim(inputs);
  const std::size_t dout = total_dim(outputs);
  if (din * dout > kDenseDimCap) {
    throw Error("choi_of would materialise dimension above the cap");
  }
  auto basis = [&](std::size_t i, std::size_t j) {
    Matrix e = Matrix::Zero(din, din);
    e(i, j) = 1.0;
    return e;
  };
  auto check_shape = [&](const Matrix& m) {
    if (static_cast<std::size_t>(m.rows()) != dout ||
        static_cast<std::size_t>(m.cols()) != dout) {
      throw Error("map action returned a matrix of the wrong output dimension");
    }
  };
  Matrix c = Matrix::Zero(din * dout, din * dout);
  for (std::size_t i = 0; i < din; ++i) {
    for (std::size_t j = 0; j < din; ++j) {
      const Matrix block = action(basis(i, j));
      check_shape(block);
      for (std::size_t o = 0; o < dout; ++o) {
        for (std::size_t p = 0; p < dout; ++p) {
          c(i * dout + o, j * dout + p) = block(o, p);
        }
      }
    }
  }
  // Linearity spot check on a fixed combination of basis operators.
  if (din >= 2) {
    const Matrix probe = basis(0, 0) + 0.5 * basis(0, 1) + Cx(0.0, 0.25) * basis(1, 0);
    const Matrix got = action(probe);
    check_shape(got);
    const Matrix expect =
        action(basis(0, 0)) + 0.5 * action(basis(0, 1)) + Cx(0.0, 0.25) * action(basis(1, 0));
    if ((got - expect).cwiseAbs().maxCoeff() > 1e-7) {
      throw Error("map action failed the linearity spot check");
    }
  }
  auto systems = concat(inputs, outputs);
  return CPM(std::move(inputs), std::move(outputs),
             LabeledOperator::matrix(std::move(systems), std::move(c)));
}

LabeledOperator apply(const CPM& cpm, const LabeledOperator& rho) {
  for (const auto& s : cpm.inputs()) {
    if (!has_system(rho.systems(), s.name)) {
      throw Error("state is missing the map input '" + s.name + "'");
    }
    if (rho.systems()[find_system(rho.systems(), s.name)].dim != s.dim) {
      throw Error("state dimension mismatch on input '" + s.name + "'");
    }
  }
  // Reorder the state to [inputs..., bystanders...].
  std::vector<SystemLabel> bystanders;
  for (const auto& s : rho.systems()) {
    if (!has_system(cpm.inputs(), s.name)) bystanders.push_back(s);
  }
  std::vector<std::string> order;
  for (const auto& s : cpm.inputs()) order.push_back(s.name);
  for (const auto& s : bystanders) order.push_back(s.name);
  const Matrix rho_m = permute_systems(rho, order).dense();
  const Matrix choi = cpm.choi().dense();

  const std::size_t di = cpm.input_dim();
  const std::size_t dn = cpm.output_dim();
  const std::size_t dr = total_dim(bystanders);
  // out[(o,r),(p,s)] = Σ_{i,j} C[(i,o),(j,p)] · ρ[(i,r),(j,s)]
  Matrix out = Matrix::Zero(dn * dr, dn * dr);
  for (std::size_t i = 0; i < di; ++i) {
    for (std::size_t j = 0; j < di; ++j) {
      const auto c_block = choi.block(i * dn, j * dn, dn, dn);
      const auto r_block = rho_m.block(i * dr, j * dr, dr, dr);
      for (std::size_t o = 0; o < dn; ++o) {
        for (std::size_t p = 0; p < dn; ++p) {
          out.block(o * dr, p * dr, dr, dr) += c_block(o, p) * r_block;
        }
      }
    }
  }
  std::vector<SystemLabel> out_systems = cpm.outputs();
  out_systems.insert(out_systems.end(), bystanders.begin(), bystanders.end());
  return LabeledOperator::matrix(std::move(out_systems), std::move(out));
}

CptpVerdict is_cptp(const CPM& cpm, double tol) {
  CptpVerdict v;
  double cp_violation = 0.0;
  if (cpm.choi().kind() == OperatorKind::Ensemble) {
    // Σ_k v_k v_k† is positive semidefinite by construction.
    cp_violation = 0.0;
  } else {
    const Matrix& c = cpm.choi().mat();
    const double herm = (c - c.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es((c + c.adjoint()) / 2.0);
    const double min_eig = es.eigenvalues().minCoeff();
    cp_violation = std::max(herm, std::max(0.0, -min_eig));
  }
  v.cp = cp_violation <= tol;

  std::vector<std::string> out_names;
  for (const auto& s : cpm.outputs()) out_names.push_back(s.name);
  const Matrix margin = partial_trace(cpm.choi(), out_names).mat();
  const std::size_t di = cpm.input_dim();
  const double tp_violation =
      (margin - Matrix::Identity(di, di)).cwiseAbs().maxCoeff();
  v.tp = tp_violation <= tol;
  v.max_violation = std::max(cp_violation, tp_violation);
  return v;
}

CPM loop_compose(const CPM& cpm, const std::string& out_sys, const std::string& in_sys) {
  const std::size_t oi = find_system(cpm.outputs(), out_sys);
  const std::size_t ii = find_system(cpm.inputs(), in_sys);
  const SystemLabel out_label = cpm.outputs()[oi];
  const SystemLabel in_label = cpm.inputs()[ii];
  if (out_label.dim != in_label.dim) {
    throw Error("loop composition requires equal dimensions on '" + out_sys +
                "' and '" + in_sys + "'");
  }
  const std::size_t d = out_label.dim;

  std::vector<SystemLabel> new_in, new_out;
  for (std::size_t k = 0; k < cpm.inputs().size(); ++k) {
    if (k != ii) new_in.push_back(cpm.inputs()[k]);
  }
  for (std::size_t k = 0; k < cpm.outputs().size(); ++k) {
    if (k != oi) new_out.push_back(cpm.outputs()[k]);
  }
  // Bring the looped pair to the front, remaining systems in result order.
  std::vector<std::string> order{in_sys, out_sys};
  for (const auto& s : new_in) order.push_back(s.name);
  for (const auto& s : new_out) order.push_back(s.name);
  const LabeledOperator p = permute_systems(cpm.choi(), order);
  const std::size_t dr = p.total_dim() / (d * d);

  LabeledOperator result_choi = LabeledOperator::matrix({}, Matrix::Zero(1, 1));
  auto rest_systems = concat(new_in, new_out);
  if (p.kind() == OperatorKind::Ensemble) {
    // ⟨i|⟨i| v: keep components where the looped input and output digits agree.
    std::vector<Vector> vs;
    vs.reserve(p.vectors().size());
    for (const auto& v : p.vectors()) {
      Vector w = Vector::Zero(dr);
      for (std::size_t i = 0; i < d; ++i) {
        w += v.segment((i * d + i) * dr, dr);
      }
      vs.push_back(std::move(w));
    }
    result_choi = LabeledOperator::ensemble(rest_systems, std::move(vs));
  } else {
    const Matrix& m = p.mat();
    Matrix out = Matrix::Zero(dr, dr);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        out += m.block((i * d + i) * dr, (j * d + j) * dr, dr, dr);
      }
    }
    result_choi = LabeledOperator::matrix(rest_systems, std::move(out));
  }
  return CPM(std::move(new_in), std::move(new_out), std::move(result_choi));
}

CPM tensor(const CPM& a, const CPM& b) {
  for (const auto& s : b.choi().systems()) {
    if (has_system(a.choi().systems(), s.name)) {
      throw Error("tensor of maps sharing the port label '" + s.name + "'");
    }
  }
  const std::size_t dim = a.choi().total_dim() * b.choi().total_dim();
  LabeledOperator ca = a.choi();
  LabeledOperator cb = b.choi();
  if (dim > kDenseDimCap) {
    ca = LabeledOperator::ensemble(ca.systems(), ca.to_ensemble());
    cb = LabeledOperator::ensemble(cb.systems(), cb.to_ensemble());
  }
  LabeledOperator joint = tensor_product(ca, cb);
  std::vector<SystemLabel> in = concat(a.inputs(), b.inputs());
  std::vector<SystemLabel> out = concat(a.outputs(), b.outputs());
  std::vector<std::string> order;
  for (const auto& s : in) order.push_back(s.name);
  for (const auto& s : out) order.push_back(s.name);
  return CPM(std::move(in), std::move(out), permute_systems(joint, order));
}

namespace {

using RowMajorMatrix = Eigen::Matrix<Cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/**
 * Sequential composition without forming the tensored joint: each Choi vector
 * is reshaped to a matrix with the wired systems as one index and the pair is
 * contracted by matrix multiplication.  Exact, and the largest object ever
 * held is one reshaped operand.
 */
CPM compose_contracted(const CPM& after, const CPM& before,
                       const std::vector<std::string>& wires) {
  std::size_t wire_dim = 1;
  for (const auto& w : wires) {
    const SystemLabel& ob = before.outputs()[find_system(before.outputs(), w)];
    const SystemLabel& ia = after.inputs()[find_system(after.inputs(), w)];
    if (ob.dim != ia.dim) {
      throw Error("loop composition requires equal dimensions on '" + w + "' and '" + w +
                  "'");
    }
    wire_dim *= ob.dim;
  }
  const auto unwired = [&](const std::vector<SystemLabel>& systems) {
    std::vector<SystemLabel> out;
    for (const auto& s : systems) {
      if (std::find(wires.begin(), wires.end(), s.name) == wires.end()) out.push_back(s);
    }
    return out;
  };
  const std::vector<SystemLabel> kept_out = unwired(before.outputs());
  const std::vector<SystemLabel> kept_in = unwired(after.inputs());

  // before → [inputs..., kept outputs..., wires...]; after → [wires..., kept
  // inputs..., outputs...], so the wire block is innermost on both sides.
  std::vector<std::string> before_order, after_order;
  for (const auto& s : before.inputs()) before_order.push_back(s.name);
  for (const auto& s : kept_out) before_order.push_back(s.name);
  for (const auto& w : wires) before_order.push_back(w);
  for (const auto& w : wires) after_order.push_back(w);
  for (const auto& s : kept_in) after_order.push_back(s.name);
  for (const auto& s : after.outputs()) after_order.push_back(s.name);
  const LabeledOperator pb = permute_systems(before.choi(), before_order);
  const LabeledOperator pa = permute_systems(after.choi(), after_order);
  const std::size_t rows = pb.total_dim() / wire_dim;
  const std::size_t cols = pa.total_dim() / wire_dim;

  const std::vector<Vector> before_vecs =
      pb.kind() == OperatorKind::Ensemble ? pb.vectors() : pb.to_ensemble();
  const std::vector<Vector> after_vecs =
      pa.kind() == OperatorKind::Ensemble ? pa.vectors() : pa.to_ensemble();
  std::vector<Vector> result_vecs;
  result_vecs.reserve(before_vecs.size() * after_vecs.size());
  for (const auto& vb : before_vecs) {
    const Eigen::Map<const RowMajorMatrix> mb(vb.data(), rows, wire_dim);
    for (const auto& va : after_vecs) {
      const Eigen::Map<const RowMajorMatrix> ma(va.data(), wire_dim, cols);
      Vector r(rows * cols);
      Eigen::Map<RowMajorMatrix>(r.data(), rows, cols) = mb * ma;
      result_vecs.push_back(std::move(r));
    }
  }

  std::vector<SystemLabel> systems = before.inputs();
  systems.insert(systems.end(), kept_out.begin(), kept_out.end());
  systems.insert(systems.end(), kept_in.begin(), kept_in.end());
  systems.insert(systems.end(), after.outputs().begin(), after.outputs().end());
  LabeledOperator joint = LabeledOperator::ensemble(systems, std::move(result_vecs));

  std::vector<SystemLabel> new_in = concat(before.inputs(), kept_in);
  std::vector<SystemLabel> new_out = concat(kept_out, after.outputs());
  std::vector<std::string> final_order;
  for (const auto& s : new_in) final_order.push_back(s.name);
  for (const auto& s : new_out) final_order.push_back(s.name);
  return CPM(std::move(new_in), std::move(new_out),
             permute_systems(joint, final_order));
}

}  // namespace

CPM compose_sequential(const CPM& after, const CPM& before) {
  std::vector<std::string> wires;
  for (const auto& s : before.outputs()) {
    if (has_system(after.inputs(), s.name)) wires.push_back(s.name);
  }
  if (!wires.empty() &&
      before.choi().total_dim() > kDenseDimCap / std::max<std::size_t>(
                                       std::size_t{1}, after.choi().total_dim())) {
    return compose_contracted(after, before, wires);
  }
  // Temporarily rename the shared labels on the consumer side so the tensor
  // product sees disjoint ports, then contract each wire.
  std::vector<SystemLabel> renamed_in = after.inputs();
  for (auto& s : renamed_in) {
    if (std::find(wires.begin(), wires.end(), s.name) != wires.end()) {
      s.name = "\x01" + s.name;
    }
  }
  std::vector<SystemLabel> choi_systems = renamed_in;
  choi_systems.insert(choi_systems.end(), after.outputs().begin(), after.outputs().end());
  LabeledOperator renamed_choi = after.choi();
  renamed_choi = [&] {
    switch (renamed_choi.kind()) {
      case OperatorKind::Matrix:
        return LabeledOperator::matrix(choi_systems, renamed_choi.mat());
      case OperatorKind::Ensemble:
        return LabeledOperator::ensemble(choi_systems, renamed_choi.vectors());
      case OperatorKind::Vector:
        throw Error("unreachable: Choi operators are never vectors");
    }
    throw Error("unreachable operator kind");
  }();
  CPM after_renamed(renamed_in, after.outputs(), std::move(renamed_choi));

  CPM joint = tensor(before, after_renamed);
  for (const auto& w : wires) {
    joint = loop_compose(joint, w, "\x01" + w);
  }
  return joint;
}

}  // namespace qcnet
