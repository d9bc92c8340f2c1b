#include "qcnet/signalling.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>

namespace qcnet {

namespace {

void check_port_sets(const CPM& cpm, const std::set<std::string>& from_inputs,
                     const std::set<std::string>& to_outputs) {
  if (from_inputs.empty()) throw Error("signalling query needs a nonempty input set");
  if (to_outputs.empty()) throw Error("signalling query needs a nonempty output set");
  for (const auto& n : from_inputs) {
    if (!has_system(cpm.inputs(), n)) {
      throw Error("'" + n + "' is not an input system of the map");
    }
  }
  for (const auto& n : to_outputs) {
    if (!has_system(cpm.outputs(), n)) {
      throw Error("'" + n + "' is not an output system of the map");
    }
  }
}

/** Residual from a dense marginal ordered as [S_I block, remaining block]. */
double residual_from_dense(const Matrix& a, std::int64_t d_si) {
  const std::int64_t d_rest = a.rows() / d_si;
  Matrix b = Matrix::Zero(d_rest, d_rest);
  for (std::int64_t i = 0; i < d_si; ++i) {
    b += a.block(i * d_rest, i * d_rest, d_rest, d_rest);
  }
  double worst = 0.0;
  for (std::int64_t i = 0; i < d_si; ++i) {
    for (std::int64_t j = 0; j < d_si; ++j) {
      const Matrix block = a.block(i * d_rest, j * d_rest, d_rest, d_rest);
      const Matrix x = (i == j) ? (block - b / static_cast<double>(d_si)).eval() : block;
      worst = std::max(worst, x.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

/** Residual computed from the nonzero entries of ensemble vectors, for
 *  marginals too large to materialise.  The vectors must already be permuted
 *  to [S_I, remaining inputs, S_O, traced outputs] order. */
double residual_from_sparse(const std::vector<Vector>& vectors, std::int64_t kept_dim,
                            std::int64_t traced_dim, std::int64_t d_si) {
  if (kept_dim >= (std::int64_t{1} << 31)) {
    throw Error("signalling marginal dimension too large to evaluate");
  }
  const std::int64_t d_rest = kept_dim / d_si;

  std::unordered_map<std::uint64_t, Cx> a;
  std::size_t join_work = 0;
  for (const auto& v : vectors) {
    // Bucket nonzero entries of the kept x traced reshape by traced index.
    std::unordered_map<std::int64_t, std::vector<std::pair<std::int64_t, Cx>>> cols;
    for (std::int64_t idx = 0; idx < v.size(); ++idx) {
      if (v[idx] != Cx(0.0, 0.0)) {
        cols[idx % traced_dim].push_back({idx / traced_dim, v[idx]});
      }
    }
    for (const auto& [t, entries] : cols) {
      join_work += entries.size() * entries.size();
      if (join_work > std::size_t{50000000}) {
        throw Error("ensemble too dense for the sparse signalling path");
      }
      for (const auto& [k1, x1] : entries) {
        for (const auto& [k2, x2] : entries) {
          a[(static_cast<std::uint64_t>(k1) << 32) | static_cast<std::uint64_t>(k2)] +=
              x1 * std::conj(x2);
        }
      }
    }
  }

  std::unordered_map<std::uint64_t, Cx> b;
  for (const auto& [key, val] : a) {
    const std::int64_t k1 = static_cast<std::int64_t>(key >> 32);
    const std::int64_t k2 = static_cast<std::int64_t>(key & 0xffffffffu);
    if (k1 / d_rest == k2 / d_rest) {
      b[(static_cast<std::uint64_t>(k1 % d_rest) << 32) |
        static_cast<std::uint64_t>(k2 % d_rest)] += val;
    }
  }

  double worst = 0.0;
  for (const auto& [key, val] : a) {
    const std::int64_t k1 = static_cast<std::int64_t>(key >> 32);
    const std::int64_t k2 = static_cast<std::int64_t>(key & 0xffffffffu);
    Cx corr(0.0, 0.0);
    if (k1 / d_rest == k2 / d_rest) {
      const auto it = b.find((static_cast<std::uint64_t>(k1 % d_rest) << 32) |
                             static_cast<std::uint64_t>(k2 % d_rest));
      if (it != b.end()) corr = it->second / static_cast<double>(d_si);
    }
    worst = std::max(worst, std::abs(val - corr));
  }
  for (const auto& [key, val] : b) {
    const std::int64_t r1 = static_cast<std::int64_t>(key >> 32);
    const std::int64_t r2 = static_cast<std::int64_t>(key & 0xffffffffu);
    for (std::int64_t i = 0; i < d_si; ++i) {
      const std::uint64_t akey =
          (static_cast<std::uint64_t>(i * d_rest + r1) << 32) |
          static_cast<std::uint64_t>(i * d_rest + r2);
      if (!a.count(akey)) {
        worst = std::max(worst, std::abs(val) / static_cast<double>(d_si));
      }
    }
  }
  return worst;
}

}  // namespace

double signalling_residual(const CPM& cpm, const std::set<std::string>& from_inputs,
                           const std::set<std::string>& to_outputs) {
  check_port_sets(cpm, from_inputs, to_outputs);

  std::vector<SystemLabel> si, rest_in, so, traced;
  for (const auto& s : cpm.inputs()) {
    (from_inputs.count(s.name) ? si : rest_in).push_back(s);
  }
  for (const auto& s : cpm.outputs()) {
    (to_outputs.count(s.name) ? so : traced).push_back(s);
  }
  const std::int64_t d_si = total_dim(si);
  if (d_si == 1) return 0.0;  // nothing can be encoded in a trivial input

  std::vector<std::string> order;
  for (const auto& s : si) order.push_back(s.name);
  for (const auto& s : rest_in) order.push_back(s.name);
  for (const auto& s : so) order.push_back(s.name);
  const std::int64_t kept_dim = total_dim(si) * total_dim(rest_in) * total_dim(so);

  std::vector<std::string> traced_names;
  for (const auto& s : traced) traced_names.push_back(s.name);

  if (cpm.choi().kind() != OperatorKind::Ensemble ||
      kept_dim <= static_cast<std::int64_t>(kDenseDimCap)) {
    LabeledOperator marginal =
        traced_names.empty() ? cpm.choi() : partial_trace(cpm.choi(), traced_names);
    marginal = permute_systems(marginal, order);
    return residual_from_dense(marginal.dense(), d_si);
  }

  std::vector<std::string> full_order = order;
  for (const auto& s : traced) full_order.push_back(s.name);
  const LabeledOperator permuted = permute_systems(cpm.choi(), full_order);
  return residual_from_sparse(permuted.vectors(), kept_dim, total_dim(traced), d_si);
}

bool signals(const CPM& cpm, const std::set<std::string>& from_inputs,
             const std::set<std::string>& to_outputs, double tol) {
  return signalling_residual(cpm, from_inputs, to_outputs) > tol;
}

double intervention_residual(const CPM& cpm, const std::set<std::string>& from_inputs,
                             const std::set<std::string>& to_outputs, Rng& rng,
                             int trials) {
  check_port_sets(cpm, from_inputs, to_outputs);

  std::vector<SystemLabel> si, rest_in;
  for (const auto& s : cpm.inputs()) {
    (from_inputs.count(s.name) ? si : rest_in).push_back(s);
  }
  std::vector<std::string> traced_names;
  for (const auto& s : cpm.outputs()) {
    if (!to_outputs.count(s.name)) traced_names.push_back(s.name);
  }

  auto marginal = [&](const LabeledOperator& rho) {
    const LabeledOperator out = apply(cpm, rho);
    return (traced_names.empty() ? out : partial_trace(out, traced_names)).dense();
  };

  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    LabeledOperator rho1 =
        LabeledOperator::matrix(si, random_density(total_dim(si), rng));
    LabeledOperator rho2 =
        LabeledOperator::matrix(si, random_density(total_dim(si), rng));
    if (!rest_in.empty()) {
      const LabeledOperator sigma =
          LabeledOperator::matrix(rest_in, random_density(total_dim(rest_in), rng));
      rho1 = tensor_product(rho1, sigma);
      rho2 = tensor_product(rho2, sigma);
    }
    worst = std::max(worst, (marginal(rho1) - marginal(rho2)).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool has_edge(const SigGraph& g, const std::string& from, const std::string& to) {
  const SigEdge probe{{from}, {to}};
  return std::find(g.edges.begin(), g.edges.end(), probe) != g.edges.end();
}

namespace {

std::vector<std::set<std::string>> small_subsets(const std::vector<SystemLabel>& systems,
                                                 std::size_t max_set_size) {
  std::vector<std::set<std::string>> out;
  const std::size_t n = systems.size();
  if (n > 20) throw Error("too many systems for subset enumeration");
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::set<std::string> s;
    for (std::size_t b = 0; b < n; ++b) {
      if (mask & (std::size_t{1} << b)) s.insert(systems[b].name);
    }
    if (s.size() <= max_set_size) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

SigGraph signalling_structure(const CPM& cpm, std::size_t max_set_size, double tol) {
  const auto in_subsets = small_subsets(cpm.inputs(), max_set_size);
  const auto out_subsets = small_subsets(cpm.outputs(), max_set_size);
  if (in_subsets.size() * out_subsets.size() > 100000) {
    throw Error("signalling structure enumeration exceeds 100000 subset pairs");
  }
  SigGraph g;
  g.systems = cpm.inputs();
  g.systems.insert(g.systems.end(), cpm.outputs().begin(), cpm.outputs().end());
  for (const auto& si : in_subsets) {
    for (const auto& so : out_subsets) {
      if (signals(cpm, si, so, tol)) g.edges.push_back({si, so});
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

SigGraph network_signalling_structure(const QuantumNetwork& net, double tol) {
  const auto nodes = network_nodes(net);

  SigGraph g;
  std::map<std::pair<std::string, std::string>, std::string> in_node, out_node;
  for (const auto& n : nodes) {
    g.systems.push_back(n.label);
    if (n.in_side) in_node[*n.in_side] = n.label.name;
    if (n.out_side) out_node[*n.out_side] = n.label.name;
  }

  std::set<SigEdge> edges;
  for (const auto& [id, cpm] : net.maps) {
    const SigGraph local = signalling_structure(cpm, 1, tol);
    for (const auto& e : local.edges) {
      edges.insert({{in_node.at({id, *e.from.begin()})},
                    {out_node.at({id, *e.to.begin()})}});
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

}  // namespace qcnet
