#include "qcnet/random.hpp"

namespace qcnet {

Matrix ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) g(i, j) = Cx(normal(rng), normal(rng));
  }
  return g;
}

Matrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw Error("isometry requires rows >= cols");
  const Matrix g = ginibre(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  // Fix the phase freedom so the distribution is Haar (multiply each column by
  // the phase of the corresponding diagonal entry of R).
  Matrix r = qr.matrixQR().topLeftCorner(cols, cols).template triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < cols; ++j) {
    const Cx d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

Matrix random_unitary(std::size_t d, Rng& rng) { return random_isometry(d, d, rng); }

Vector random_pure_state(std::size_t d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (std::size_t i = 0; i < d; ++i) v(i) = Cx(normal(rng), normal(rng));
  return v / v.norm();
}

Matrix random_density(std::size_t d, Rng& rng) {
  const Matrix g = ginibre(d, d, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}

CPM random_cptp(std::vector<SystemLabel> inputs, std::vector<SystemLabel> outputs,
                Rng& rng, std::size_t env) {
  const std::size_t din = total_dim(inputs);
  const std::size_t dout = total_dim(outputs);
  if (env == 0) {
    env = 1;
    while (dout * env < din) ++env;  // smallest environment admitting an isometry
    if (din > 1 && env == 1) env = 2;
  }
  if (dout * env < din) throw Error("environment too small for a Stinespring isometry");
  const Matrix v = random_isometry(dout * env, din, rng);
  std::vector<Matrix> kraus;
  kraus.reserve(env);
  for (std::size_t e = 0; e < env; ++e) {
    Matrix k(dout, din);
    for (std::size_t o = 0; o < dout; ++o) k.row(o) = v.row(o * env + e);
    kraus.push_back(std::move(k));
  }
  return CPM::from_kraus(std::move(inputs), std::move(outputs), kraus);
}

std::vector<CPM> random_instrument_branches(std::vector<SystemLabel> inputs,
                                            std::vector<SystemLabel> outputs,
                                            std::size_t n_outcomes, Rng& rng) {
  if (n_outcomes < 1) throw Error("an instrument needs at least one outcome");
  const std::size_t din = total_dim(inputs);
  const std::size_t dout = total_dim(outputs);
  std::size_t extra = 1;
  while (dout * n_outcomes * extra < din) ++extra;
  const std::size_t env = n_outcomes * extra;
  const Matrix v = random_isometry(dout * env, din, rng);
  std::vector<CPM> branches;
  branches.reserve(n_outcomes);
  for (std::size_t x = 0; x < n_outcomes; ++x) {
    std::vector<Matrix> kraus;
    kraus.reserve(extra);
    for (std::size_t e = 0; e < extra; ++e) {
      Matrix k(dout, din);
      for (std::size_t o = 0; o < dout; ++o) k.row(o) = v.row(o * env + x * extra + e);
      kraus.push_back(std::move(k));
    }
    branches.push_back(CPM::from_kraus(inputs, outputs, kraus));
  }
  return branches;
}

}  // namespace qcnet
