/*
 * process.cpp — higher-order processes, the quantum switch, and its
 * six-party fine-graining.
 *
 * The probability pairing, the routing of the switch, and the slot structure
 * of the fine-grained switch are each locked by independent tests: the
 * pairing against closed-network contraction, the routing against the
 * reference output states, and the fine-graining against the sub-network
 * witnesses.
 */

#include "qcnet/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "qcnet/random.hpp"
#include "qcnet/signalling.hpp"

namespace qcnet {

namespace {

/** Index of the party whose systems mention `name`, or npos. */
constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t party_of(const std::vector<Party>& parties, const std::string& name) {
  for (std::size_t k = 0; k < parties.size(); ++k) {
    if (parties[k].in.name == name || parties[k].out.name == name) return k;
  }
  return npos;
}

std::vector<Diagnostic> structural_findings(const ProcessMatrix& p) {
  std::vector<Diagnostic> out;
  if (p.parties.empty()) {
    out.push_back({"malformed", "a process needs at least one party"});
    return out;
  }
  std::set<std::string> party_names, sys_names;
  for (const auto& party : p.parties) {
    if (!party_names.insert(party.name).second) {
      out.push_back({"malformed", "party name '" + party.name + "' is reused"});
    }
    for (const auto& s : {party.in, party.out}) {
      if (!sys_names.insert(s.name).second) {
        out.push_back({"malformed", "system '" + s.name + "' belongs to two party roles"});
        continue;
      }
      if (!has_system(p.w.systems(), s.name)) {
        out.push_back({"malformed",
                       "party system '" + s.name + "' is not a system of the operator"});
      } else if (p.w.systems()[find_system(p.w.systems(), s.name)].dim != s.dim) {
        out.push_back({"malformed", "party system '" + s.name +
                                        "' disagrees with the operator's dimension"});
      }
    }
  }
  for (const auto& s : p.w.systems()) {
    if (party_of(p.parties, s.name) == npos) {
      out.push_back({"malformed", "operator system '" + s.name + "' belongs to no party"});
    }
  }
  return out;
}

/** Number of outcomes so that `n · d_out ≥ d_in` with at least two outcomes. */
std::size_t outcome_count(std::size_t d_in, std::size_t d_out) {
  return std::max<std::size_t>(2, (d_in + d_out - 1) / d_out);
}

}  // namespace

ProcessReport validate_process(const ProcessMatrix& p, double tol, std::size_t samples,
                               std::uint64_t seed) {
  ProcessReport report;
  report.findings = structural_findings(p);
  if (!report.findings.empty()) return report;

  if (p.w.kind() == OperatorKind::Matrix) {
    const Matrix& m = p.w.mat();
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
    const double min_eig = es.eigenvalues().minCoeff();
    if (std::max(herm, -min_eig) > tol) {
      report.findings.push_back(
          {"not-positive", "largest deviation from a positive operator: " +
                               std::to_string(std::max(herm, -min_eig))});
    }
  }

  double expected = 1.0;
  for (const auto& party : p.parties) expected *= static_cast<double>(party.out.dim);
  const Cx tr = p.w.kind() == OperatorKind::Vector
                    ? Cx(p.w.vec().squaredNorm(), 0.0)
                    : p.w.trace();
  if (std::abs(tr - expected) > tol * expected) {
    report.findings.push_back({"wrong-trace",
                               "trace " + std::to_string(tr.real()) + " instead of " +
                                   std::to_string(expected)});
  }

  const CptpVerdict channel = is_cptp(process_to_map(p), tol);
  if (!channel.cp || !channel.tp) {
    report.findings.push_back(
        {"not-a-channel", "the induced map deviates from a channel by " +
                              std::to_string(channel.max_violation)});
  }

  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<std::vector<CPM>> instruments;
    for (const auto& party : p.parties) {
      instruments.push_back(random_instrument_branches(
          {party.in}, {party.out}, outcome_count(party.in.dim, party.out.dim), rng));
    }
    double total = 0.0;
    std::vector<std::size_t> pick(p.parties.size(), 0);
    for (;;) {
      std::vector<CPM> branches;
      for (std::size_t k = 0; k < pick.size(); ++k) {
        branches.push_back(instruments[k][pick[k]]);
      }
      total += probability(p, branches);
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == instruments[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    if (std::abs(total - 1.0) > tol) {
      report.findings.push_back(
          {"not-normalised", "sample " + std::to_string(s) +
                                 ": outcome probabilities sum to " + std::to_string(total)});
      break;
    }
  }

  report.ok = report.findings.empty();
  return report;
}

double probability(const ProcessMatrix& p, const std::vector<CPM>& branches) {
  if (branches.size() != p.parties.size()) {
    throw Error("expected one branch per party");
  }
  std::optional<LabeledOperator> joint;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const Party& party = p.parties[k];
    const CPM& b = branches[k];
    const bool fits = b.inputs().size() == 1 && b.outputs().size() == 1 &&
                      b.inputs().front() == party.in && b.outputs().front() == party.out;
    if (!fits) {
      throw Error("branch for party '" + party.name + "' must map '" + party.in.name +
                  "' to '" + party.out.name + "'");
    }
    joint = joint ? tensor_product(*joint, b.choi()) : b.choi();
  }

  std::vector<std::string> order;
  for (const auto& s : p.w.systems()) order.push_back(s.name);
  const std::vector<Vector> mv = permute_systems(*joint, order).to_ensemble();
  const std::vector<Vector> wv = p.w.to_ensemble();

  // Tr[Mᵀ W] for W = Σ_e w_e w_e†, M = Σ_k m_k m_k†: Σ_{e,k} |w_e · m_k|²
  // with the plain bilinear dot product.
  double prob = 0.0;
  for (const auto& w : wv) {
    for (const auto& m : mv) {
      prob += std::norm((w.array() * m.array()).sum());
    }
  }
  return prob;
}

CPM process_to_map(const ProcessMatrix& p) {
  const auto structural = structural_findings(p);
  if (!structural.empty()) {
    throw Error("process is not well-formed: " + structural.front().detail);
  }
  std::vector<SystemLabel> ins, outs;
  for (const auto& party : p.parties) {
    ins.push_back(party.out);
    outs.push_back(party.in);
  }
  std::vector<std::string> order;
  for (const auto& s : ins) order.push_back(s.name);
  for (const auto& s : outs) order.push_back(s.name);
  LabeledOperator choi = permute_systems(p.w, order);
  if (choi.kind() == OperatorKind::Vector) {
    choi = LabeledOperator::ensemble(choi.systems(), {choi.vec()});
  }
  return CPM(std::move(ins), std::move(outs), std::move(choi));
}

QuantumNetwork process_network(const ProcessMatrix& p, const std::vector<CPM>& locals) {
  if (locals.size() != p.parties.size()) {
    throw Error("expected one local map per party");
  }
  QuantumNetwork net;
  net.maps.insert({"process", process_to_map(p)});
  for (std::size_t k = 0; k < p.parties.size(); ++k) {
    const Party& party = p.parties[k];
    const CPM& local = locals[k];
    if (!has_system(local.inputs(), party.in.name) ||
        !has_system(local.outputs(), party.out.name)) {
      throw Error("local map for party '" + party.name + "' must consume '" +
                  party.in.name + "' and produce '" + party.out.name + "'");
    }
    if (party.name == "process" || net.maps.count(party.name)) {
      throw Error("party name '" + party.name + "' collides with another map");
    }
    net.maps.insert({party.name, local});
    net.comps.push_back({"process", party.in.name, party.name, party.in.name});
    net.comps.push_back({party.name, party.out.name, "process", party.out.name});
  }
  return net;
}

std::optional<std::vector<std::string>> fixed_party_order(const ProcessMatrix& p,
                                                          double tol) {
  if (p.parties.size() > 8) {
    throw Error("fixed-order search supports at most eight parties");
  }
  const CPM m = process_to_map(p);
  std::vector<std::string> names;
  std::map<std::string, const Party*> by_name;
  for (const auto& party : p.parties) {
    names.push_back(party.name);
    by_name[party.name] = &party;
  }
  std::sort(names.begin(), names.end());

  std::vector<std::string> order;
  std::set<std::string> placed;
  std::function<bool()> extend = [&]() -> bool {
    if (order.size() == names.size()) return true;
    for (const auto& candidate : names) {
      if (placed.count(candidate)) continue;
      placed.insert(candidate);
      order.push_back(candidate);
      std::set<std::string> later_outs, earlier_ins;
      for (const auto& n : names) {
        if (!placed.count(n)) later_outs.insert(by_name.at(n)->out.name);
      }
      for (const auto& n : order) earlier_ins.insert(by_name.at(n)->in.name);
      const bool cut_ok = later_outs.empty() || !signals(m, later_outs, earlier_ins, tol);
      if (cut_ok && extend()) return true;
      placed.erase(candidate);
      order.pop_back();
    }
    return false;
  };
  if (extend()) return order;
  return std::nullopt;
}

bool is_fixed_order(const ProcessMatrix& p, double tol) {
  return fixed_party_order(p, tol).has_value();
}

ProcessMatrix quantum_switch(std::size_t d) {
  if (d < 2) throw Error("the switch needs a target of dimension at least two");
  const std::size_t cd = 2 * d;
  const std::vector<SystemLabel> systems = {sys("C^I", 1), sys("C^O", cd),
                                            sys("A^I", d), sys("A^O", d),
                                            sys("B^I", d), sys("B^O", d),
                                            sys("D^I", cd), sys("D^O", 1)};
  const IndexMap im(systems);
  Vector w = Vector::Zero(static_cast<Eigen::Index>(im.total()));
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t = 0; t < d; ++t) {
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) {
          // Control 0: the target runs C → A → B → D; control 1: C → B → A → D.
          const std::size_t ai = c == 0 ? t : b;
          const std::size_t bi = c == 0 ? a : t;
          const std::size_t di = c == 0 ? b : d + a;
          w(static_cast<Eigen::Index>(
              im.flat({0, c * d + t, ai, a, bi, b, di, 0}))) = 1.0;
        }
      }
    }
  }
  ProcessMatrix p;
  p.parties = {{"C", sys("C^I", 1), sys("C^O", cd)},
               {"A", sys("A^I", d), sys("A^O", d)},
               {"B", sys("B^I", d), sys("B^O", d)},
               {"D", sys("D^I", cd), sys("D^O", 1)}};
  p.w = LabeledOperator::vector(systems, std::move(w));
  return p;
}

Vector qs_reference_output(Cx alpha, Cx beta, const Vector& psi, const Matrix& u,
                           const Matrix& v) {
  const Eigen::Index d = psi.size();
  Vector out(2 * d);
  out.segment(0, d) = alpha * (v * u * psi);
  out.segment(d, d) = beta * (u * v * psi);
  return out / out.norm();
}

Vector qsf_reference_output(Cx alpha, Cx beta, const Vector& psi, const Matrix& u1,
                            const Matrix& u2, const Matrix& v1, const Matrix& v2) {
  const Eigen::Index d = psi.size();
  Vector out(2 * d);
  out.segment(0, d) = alpha * (v2 * u1 * psi);
  out.segment(d, d) = beta * (u2 * v1 * psi);
  return out / out.norm();
}

Matrix lift_unitary(const Matrix& u) {
  const Eigen::Index d = u.rows();
  Matrix lifted = Matrix::Zero(d + 1, d + 1);
  lifted.topLeftCorner(d, d) = u;
  lifted(d, d) = 1.0;
  return lifted;
}

ProcessMatrix fine_switch_process(std::size_t d) {
  if (d < 2) throw Error("the switch needs a target of dimension at least two");
  const std::size_t cd = 2 * d;
  const std::size_t d1 = d + 1;
  const std::size_t om = d;  // the vacuum level
  const std::vector<SystemLabel> systems = {
      sys("C1^I", 1),  sys("C1^O", cd), sys("A1^I", d1), sys("A1^O", d1),
      sys("B1^I", d1), sys("B1^O", d1), sys("A2^I", d1), sys("A2^O", d1),
      sys("B2^I", d1), sys("B2^O", d1), sys("D1^I", cd), sys("D1^O", 1)};
  const IndexMap im(systems);

  // Merge of the two second-slot returns into target ⊗ bookkeeping: the
  // proper states (message, Ω) share the bookkeeping level 0 across both
  // control branches — that is what keeps the traced process coherent — and
  // the remaining d² + d + 1 pairs go injectively into the other levels.
  std::vector<std::pair<std::size_t, std::size_t>> merge(d1 * d1);
  std::size_t spill = 0;
  for (std::size_t act = 0; act < d1; ++act) {
    for (std::size_t pas = 0; pas < d1; ++pas) {
      if (act < d && pas == om) {
        merge[act * d1 + pas] = {act, 0};
      } else {
        merge[act * d1 + pas] = {spill % d, 1 + spill / d};
        ++spill;
      }
    }
  }
  const std::size_t env_dim = d + 3;

  std::vector<Vector> vs(env_dim,
                         Vector::Zero(static_cast<Eigen::Index>(im.total())));
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t t = 0; t < d; ++t) {
      for (std::size_t a1 = 0; a1 < d1; ++a1) {
        for (std::size_t b1 = 0; b1 < d1; ++b1) {
          for (std::size_t a2 = 0; a2 < d1; ++a2) {
            for (std::size_t b2 = 0; b2 < d1; ++b2) {
              const std::size_t a1i = c == 0 ? t : om;
              const std::size_t b1i = c == 0 ? om : t;
              const std::size_t a2i = b1;  // slot 2 receives the other party's slot-1 return
              const std::size_t b2i = a1;
              const std::size_t active = c == 0 ? b2 : a2;
              const std::size_t passive = c == 0 ? a2 : b2;
              const auto [dt, e] = merge[active * d1 + passive];
              vs[e](static_cast<Eigen::Index>(im.flat(
                  {0, c * d + t, a1i, a1, b1i, b1, a2i, a2, b2i, b2, c * d + dt,
                   0}))) += 1.0;
            }
          }
        }
      }
    }
  }

  ProcessMatrix p;
  p.parties = {{"C", sys("C1^I", 1), sys("C1^O", cd)},
               {"A1", sys("A1^I", d1), sys("A1^O", d1)},
               {"B1", sys("B1^I", d1), sys("B1^O", d1)},
               {"A2", sys("A2^I", d1), sys("A2^O", d1)},
               {"B2", sys("B2^I", d1), sys("B2^O", d1)},
               {"D", sys("D1^I", cd), sys("D1^O", 1)}};
  p.w = LabeledOperator::ensemble(systems, std::move(vs));
  return p;
}

SwitchParams canonical_switch_params(std::size_t d) {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix fourier(d, d);
  const Cx omega = std::exp(Cx(0.0, 2.0 * M_PI / static_cast<double>(d)));
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      fourier(j, k) = std::pow(omega, static_cast<double>(j * k)) /
                      std::sqrt(static_cast<double>(d));
    }
  }
  Matrix shift = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < d; ++k) shift((k + 1) % d, k) = 1.0;
  SwitchParams sp;
  sp.alpha = s;
  sp.beta = s * std::exp(Cx(0.0, M_PI / 4.0));
  sp.psi = fourier.col(1);
  sp.u = fourier;
  sp.v = shift;
  return sp;
}

CPM switch_prep(const SystemLabel& in, const SystemLabel& out, Cx alpha, Cx beta,
                const Vector& psi) {
  const Eigen::Index d = psi.size();
  Matrix k = Matrix::Zero(2 * d, 1);
  k.block(0, 0, d, 1) = alpha * psi;
  k.block(d, 0, d, 1) = beta * psi;
  return CPM::from_kraus({in}, {out}, {k});
}

CPM switch_readout(const SystemLabel& in, const SystemLabel& trivial_out,
                   const SystemLabel& kept) {
  const auto d = static_cast<Eigen::Index>(in.dim);
  return CPM::from_unitary({in}, {trivial_out, kept}, Matrix::Identity(d, d));
}

namespace {

/** Encoder piece splitting an unvisited party system into its two slots. */
CPM slot_encoder(const SystemLabel& coarse, const SystemLabel& slot1,
                 const SystemLabel& slot2) {
  const std::size_t d = coarse.dim;
  const std::size_t d1 = slot1.dim;
  Matrix k = Matrix::Zero(static_cast<Eigen::Index>(d1 * d1),
                          static_cast<Eigen::Index>(d));
  for (std::size_t m = 0; m < d; ++m) {
    k(static_cast<Eigen::Index>(m * d1 + d), static_cast<Eigen::Index>(m)) = 1.0;
  }
  return CPM::from_kraus({coarse}, {slot1, slot2}, {k});
}

/** Decoder piece reading the message back out of the first slot. */
CPM slot_decoder(const SystemLabel& slot1, const SystemLabel& slot2,
                 const SystemLabel& coarse) {
  const std::size_t d = coarse.dim;
  const std::size_t d1 = slot1.dim;
  Matrix k = Matrix::Zero(static_cast<Eigen::Index>(d),
                          static_cast<Eigen::Index>(d1 * d1));
  for (std::size_t m = 0; m < d; ++m) {
    k(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m * d1 + d)) = 1.0;
  }
  return CPM::from_kraus({slot1, slot2}, {coarse}, {k});
}

struct SubsetChoice {
  bool prep = false;
  bool alice = false;
  bool bob = false;
  bool dmeas = false;
};

/** Wires of `net` internal to the chosen map ids. */
std::vector<Composition> internal_wires(const QuantumNetwork& net,
                                        const std::set<std::string>& ids) {
  std::vector<Composition> out;
  for (const auto& c : net.comps) {
    if (ids.count(c.from_map) && ids.count(c.to_map)) out.push_back(c);
  }
  return out;
}

/**
 * Witness for the sub-network of the process together with the chosen party
 * operations, fully wired.  The encoder routes every unvisited party's
 * message into the slot that branch actually uses (reading the branch from
 * the free control); the decoder undoes it, reading the branch from the
 * readout system when it is free and otherwise summing one Kraus operator
 * per branch.
 */
FineGrainingWitness process_subset_witness(std::size_t d, const SubsetChoice& s) {
  const std::size_t cd = 2 * d;
  const std::size_t d1 = d + 1;
  const std::size_t om = d;

  std::vector<SystemLabel> enc_in, enc_out;
  if (!s.prep) {
    enc_in.push_back(sys("C^O", cd));
    enc_out.push_back(sys("C1^O", cd));
  }
  if (!s.alice) {
    enc_in.push_back(sys("A^O", d));
    enc_out.push_back(sys("A1^O", d1));
    enc_out.push_back(sys("A2^O", d1));
  }
  if (!s.bob) {
    enc_in.push_back(sys("B^O", d));
    enc_out.push_back(sys("B1^O", d1));
    enc_out.push_back(sys("B2^O", d1));
  }
  if (!s.dmeas) {
    enc_in.push_back(sys("D^O", 1));
    enc_out.push_back(sys("D1^O", 1));
  }

  const IndexMap in_map(enc_in), out_map(enc_out);
  Matrix enc_k = Matrix::Zero(static_cast<Eigen::Index>(out_map.total()),
                              static_cast<Eigen::Index>(in_map.total()));
  for (std::size_t col = 0; col < in_map.total(); ++col) {
    std::size_t pos = 0;
    std::vector<std::size_t> row_digits;
    std::size_t c = 0;
    if (!s.prep) {
      const std::size_t ct = in_map.digit(col, pos++);
      c = ct / d;
      row_digits.push_back(ct);
    }
    if (!s.alice) {
      const std::size_t a = in_map.digit(col, pos++);
      row_digits.push_back(c == 0 ? a : om);   // slot 1 acts first when c = 0
      row_digits.push_back(c == 0 ? om : a);
    }
    if (!s.bob) {
      const std::size_t b = in_map.digit(col, pos++);
      row_digits.push_back(c == 0 ? om : b);   // B's first slot is used when c = 1
      row_digits.push_back(c == 0 ? b : om);
    }
    if (!s.dmeas) {
      pos++;
      row_digits.push_back(0);
    }
    enc_k(static_cast<Eigen::Index>(out_map.flat(row_digits)),
          static_cast<Eigen::Index>(col)) = 1.0;
  }
  const CPM enc = CPM::from_kraus(enc_in, enc_out, {enc_k});

  std::vector<SystemLabel> dec_in, dec_out;
  if (!s.prep) {
    dec_in.push_back(sys("C1^I", 1));
    dec_out.push_back(sys("C^I", 1));
  }
  if (!s.alice) {
    dec_in.push_back(sys("A1^I", d1));
    dec_in.push_back(sys("A2^I", d1));
    dec_out.push_back(sys("A^I", d));
  }
  if (!s.bob) {
    dec_in.push_back(sys("B1^I", d1));
    dec_in.push_back(sys("B2^I", d1));
    dec_out.push_back(sys("B^I", d));
  }
  if (!s.dmeas) {
    dec_in.push_back(sys("D1^I", cd));
    dec_out.push_back(sys("D^I", cd));
  }

  const IndexMap din_map(dec_in), dout_map(dec_out);
  const bool extract = !s.alice || !s.bob;
  const auto branch_kraus = [&](std::size_t c) {
    Matrix k = Matrix::Zero(static_cast<Eigen::Index>(dout_map.total()),
                            static_cast<Eigen::Index>(din_map.total()));
    for (std::size_t row = 0; row < dout_map.total(); ++row) {
      std::size_t pos = 0;
      std::vector<std::size_t> col_digits;
      bool in_branch = true;
      if (!s.prep) {
        pos++;
        col_digits.push_back(0);
      }
      if (!s.alice) {
        const std::size_t m = dout_map.digit(row, pos++);
        col_digits.push_back(c == 0 ? m : om);
        col_digits.push_back(c == 0 ? om : m);
      }
      if (!s.bob) {
        const std::size_t m = dout_map.digit(row, pos++);
        col_digits.push_back(c == 0 ? om : m);
        col_digits.push_back(c == 0 ? m : om);
      }
      if (!s.dmeas) {
        const std::size_t di = dout_map.digit(row, pos++);
        in_branch = di / d == c;
        col_digits.push_back(di);
      }
      if (in_branch) {
        k(static_cast<Eigen::Index>(row),
          static_cast<Eigen::Index>(din_map.flat(col_digits))) = 1.0;
      }
    }
    return k;
  };

  std::vector<Matrix> dec_kraus;
  if (!extract) {
    dec_kraus.push_back(Matrix::Identity(static_cast<Eigen::Index>(dout_map.total()),
                                         static_cast<Eigen::Index>(din_map.total())));
  } else if (!s.dmeas) {
    // The readout system is free: one Kraus operator handles both branches,
    // switching on the branch half of the readout index.
    dec_kraus.push_back(branch_kraus(0) + branch_kraus(1));
  } else {
    // The readout is consumed inside: the branches live on orthogonal slot
    // patterns, so one Kraus operator per branch reproduces the sub-map.
    dec_kraus.push_back(branch_kraus(0));
    dec_kraus.push_back(branch_kraus(1));
  }
  const CPM dec = CPM::from_kraus(dec_in, dec_out, dec_kraus);

  return {enc, dec};
}

}  // namespace

SwitchFineGraining fine_grained_switch(std::size_t d, const SwitchParams& params) {
  const std::size_t cd = 2 * d;
  const std::size_t d1 = d + 1;

  SwitchFineGraining bundle;
  bundle.coarse = quantum_switch(d);
  bundle.fine = fine_switch_process(d);
  bundle.params = params;

  QuantumNetwork cn;
  cn.maps.insert({"process", process_to_map(bundle.coarse)});
  cn.maps.insert({"prep", switch_prep(sys("C^I", 1), sys("C^O", cd), params.alpha,
                                      params.beta, params.psi)});
  cn.maps.insert({"alice", CPM::from_unitary({sys("A^I", d)}, {sys("A^O", d)}, params.u)});
  cn.maps.insert({"bob", CPM::from_unitary({sys("B^I", d)}, {sys("B^O", d)}, params.v)});
  cn.maps.insert({"dmeas", CPM::replace({sys("D^I", cd)}, {sys("D^O", 1)},
                                        Matrix::Identity(1, 1))});
  const std::map<std::string, std::string> coarse_party_map = {
      {"C", "prep"}, {"A", "alice"}, {"B", "bob"}, {"D", "dmeas"}};
  for (const auto& party : bundle.coarse.parties) {
    const std::string& id = coarse_party_map.at(party.name);
    cn.comps.push_back({"process", party.in.name, id, party.in.name});
    cn.comps.push_back({id, party.out.name, "process", party.out.name});
  }
  bundle.coarse_network = cn;

  const Matrix lu = lift_unitary(params.u);
  const Matrix lv = lift_unitary(params.v);
  QuantumNetwork fn;
  fn.maps.insert({"process", process_to_map(bundle.fine)});
  fn.maps.insert({"prep", switch_prep(sys("C1^I", 1), sys("C1^O", cd), params.alpha,
                                      params.beta, params.psi)});
  fn.maps.insert({"alice1", CPM::from_unitary({sys("A1^I", d1)}, {sys("A1^O", d1)}, lu)});
  fn.maps.insert({"alice2", CPM::from_unitary({sys("A2^I", d1)}, {sys("A2^O", d1)}, lu)});
  fn.maps.insert({"bob1", CPM::from_unitary({sys("B1^I", d1)}, {sys("B1^O", d1)}, lv)});
  fn.maps.insert({"bob2", CPM::from_unitary({sys("B2^I", d1)}, {sys("B2^O", d1)}, lv)});
  fn.maps.insert({"dmeas", CPM::replace({sys("D1^I", cd)}, {sys("D1^O", 1)},
                                        Matrix::Identity(1, 1))});
  const std::map<std::string, std::string> fine_party_map = {
      {"C", "prep"},  {"A1", "alice1"}, {"B1", "bob1"},
      {"A2", "alice2"}, {"B2", "bob2"}, {"D", "dmeas"}};
  for (const auto& party : bundle.fine.parties) {
    const std::string& id = fine_party_map.at(party.name);
    fn.comps.push_back({"process", party.in.name, id, party.in.name});
    fn.comps.push_back({id, party.out.name, "process", party.out.name});
  }
  bundle.fine_network = fn;

  bundle.fine_map.assign = {
      {"C^I", {"C1^I"}},         {"C^O", {"C1^O"}},
      {"A^I", {"A1^I", "A2^I"}}, {"A^O", {"A1^O", "A2^O"}},
      {"B^I", {"B1^I", "B2^I"}}, {"B^O", {"B1^O", "B2^O"}},
      {"D^I", {"D1^I"}},         {"D^O", {"D1^O"}}};

  // Witnesses: every nonempty subset of the party operations alone, and the
  // process together with every operation subset in which the preparation is
  // only included once both target operations are — an encoder for a free
  // target system needs the free control to know which slot to fill.
  const std::map<std::string, std::set<std::string>> fine_ids = {
      {"prep", {"prep"}},
      {"alice", {"alice1", "alice2"}},
      {"bob", {"bob1", "bob2"}},
      {"dmeas", {"dmeas"}}};
  for (std::size_t mask = 1; mask < 16; ++mask) {
    const SubsetChoice s{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0,
                         (mask & 8) != 0};
    SubNetwork coarse_sub, fine_sub;
    std::optional<CPM> enc, dec;
    const auto add = [](std::optional<CPM>& acc, const CPM& piece) {
      acc = acc ? tensor(*acc, piece) : piece;
    };
    if (s.prep) {
      coarse_sub.map_ids.insert("prep");
      add(enc, CPM::identity(sys("C^I", 1), sys("C1^I", 1)));
      add(dec, CPM::identity(sys("C1^O", cd), sys("C^O", cd)));
    }
    if (s.alice) {
      coarse_sub.map_ids.insert("alice");
      add(enc, slot_encoder(sys("A^I", d), sys("A1^I", d1), sys("A2^I", d1)));
      add(dec, slot_decoder(sys("A1^O", d1), sys("A2^O", d1), sys("A^O", d)));
    }
    if (s.bob) {
      coarse_sub.map_ids.insert("bob");
      add(enc, slot_encoder(sys("B^I", d), sys("B1^I", d1), sys("B2^I", d1)));
      add(dec, slot_decoder(sys("B1^O", d1), sys("B2^O", d1), sys("B^O", d)));
    }
    if (s.dmeas) {
      coarse_sub.map_ids.insert("dmeas");
      add(enc, CPM::identity(sys("D^I", cd), sys("D1^I", cd)));
      add(dec, CPM::identity(sys("D1^O", 1), sys("D^O", 1)));
    }
    for (const auto& id : coarse_sub.map_ids) {
      const auto& fids = fine_ids.at(id);
      fine_sub.map_ids.insert(fids.begin(), fids.end());
    }
    bundle.witnesses.push_back(
        {std::move(coarse_sub), std::move(fine_sub), {*enc, *dec}});
  }
  for (std::size_t mask = 0; mask < 16; ++mask) {
    const SubsetChoice s{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0,
                         (mask & 8) != 0};
    if (s.prep && !(s.alice && s.bob)) continue;
    SubNetwork coarse_sub, fine_sub;
    coarse_sub.map_ids.insert("process");
    fine_sub.map_ids.insert("process");
    if (s.prep) coarse_sub.map_ids.insert("prep");
    if (s.alice) coarse_sub.map_ids.insert("alice");
    if (s.bob) coarse_sub.map_ids.insert("bob");
    if (s.dmeas) coarse_sub.map_ids.insert("dmeas");
    for (const auto& id : coarse_sub.map_ids) {
      if (id == "process") continue;
      const auto& fids = fine_ids.at(id);
      fine_sub.map_ids.insert(fids.begin(), fids.end());
    }
    coarse_sub.comps = internal_wires(cn, coarse_sub.map_ids);
    fine_sub.comps = internal_wires(fn, fine_sub.map_ids);
    bundle.witnesses.push_back(
        {std::move(coarse_sub), std::move(fine_sub), process_subset_witness(d, s)});
  }

  // Realisation: a chain of eight instants; A and B each occupy one region
  // straddling their two slots, refined by the per-slot partition.
  Spacetime st;
  for (int k = 0; k < 8; ++k) st.points.push_back("t" + std::to_string(k));
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < k; ++j) st.order.insert({st.points[j], st.points[k]});

  const auto single = [&](int k) {
    return Region{"r" + std::to_string(k), {st.points[k]}};
  };
  const Region bin_in{"bin_in", {"t2", "t4"}};
  const Region bin_out{"bin_out", {"t3", "t5"}};

  Realisation r;
  r.network = cn;
  r.fine_network = fn;
  r.fine_map = bundle.fine_map;
  r.spacetime = st;
  r.embedding.assign = {
      {"C^I", single(0)},  {"C^O", single(1)},  {"A^I", bin_in},
      {"B^I", bin_in},     {"A^O", bin_out},    {"B^O", bin_out},
      {"D^I", single(6)},  {"D^O", single(7)},  {"C1^I", single(0)},
      {"C1^O", single(1)}, {"A1^I", single(2)}, {"B1^I", single(2)},
      {"A1^O", single(3)}, {"B1^O", single(3)}, {"A2^I", single(4)},
      {"B2^I", single(4)}, {"A2^O", single(5)}, {"B2^O", single(5)},
      {"D1^I", single(6)}, {"D1^O", single(7)}};
  r.partitions = {
      {"bin_in", Partition{bin_in, {{"bin_in.0", {"t2"}}, {"bin_in.1", {"t4"}}}}},
      {"bin_out", Partition{bin_out, {{"bin_out.0", {"t3"}}, {"bin_out.1", {"t5"}}}}}};
  bundle.realisation = r;

  return bundle;
}

SwitchFineGraining fine_grained_switch(std::size_t d) {
  return fine_grained_switch(d, canonical_switch_params(d));
}

}  // namespace qcnet
