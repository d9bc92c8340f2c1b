/**
 * Tests for higher-order processes and the quantum switch.
 *
 * Oracle strategy: the probability pairing is locked three ways on a process
 * with a complex internal channel — closed-form amplitude, the pairing, and
 * full network contraction must all agree, which pins down the transpose and
 * conjugation conventions.  The switch is then checked against closed-form
 * output states for random parameters, and the fine-grained switch against
 * its reference outputs with independent operations in the two slots.
 */
#include <catch2/catch_amalgamated.hpp>

#include "qcnet/process.hpp"

#include <algorithm>

#include "qcnet/random.hpp"
#include "qcnet/signalling.hpp"

using namespace qcnet;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

/** Two-party process: the first party's output rides `g` into the second
 *  party's input.  The first party has a trivial input, the second a trivial
 *  output, so the process is a bare channel between the parties. */
ProcessMatrix channel_process(const std::string& first, const std::string& second,
                              const Matrix& g) {
  const auto d = static_cast<std::size_t>(g.rows());
  const std::vector<SystemLabel> systems = {sys(first + "_in", 1), sys(first + "_out", d),
                                            sys(second + "_in", d),
                                            sys(second + "_out", 1)};
  Vector w = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t o = 0; o < d; ++o) {
    for (std::size_t i = 0; i < d; ++i) {
      w(static_cast<Eigen::Index>(o * d + i)) = g(i, o);
    }
  }
  ProcessMatrix p;
  p.parties = {{first, systems[0], systems[1]}, {second, systems[2], systems[3]}},
  p.w = LabeledOperator::vector(systems, std::move(w));
  return p;
}

/** Scalar value of a fully closed network. */
double closed_value(const QuantumNetwork& net) {
  const CPM whole = induced_map(net, full_subnetwork(net));
  REQUIRE(whole.inputs().empty());
  REQUIRE(whole.outputs().empty());
  return whole.choi().trace().real();
}

/** Output state of the switch network for the given local operations, read
 *  off a fresh port in place of the final measurement. */
Matrix switch_output_state(const ProcessMatrix& p, const std::vector<CPM>& locals) {
  const QuantumNetwork net = process_network(p, locals);
  const CPM whole = induced_map(net, full_subnetwork(net));
  REQUIRE(whole.outputs().size() == 1);
  REQUIRE(whole.outputs().front().name == "kept");
  return whole.choi().dense();
}

/** True if some finding has the given kind. */
bool has_kind(const ProcessReport& r, const std::string& kind) {
  return std::any_of(r.findings.begin(), r.findings.end(),
                     [&](const Diagnostic& d) { return d.kind == kind; });
}

}  // namespace

TEST_CASE("probability pairing agrees with amplitudes and network contraction",
          "[process]") {
  Rng rng(11);
  const Matrix g = random_unitary(2, rng);
  const ProcessMatrix p = channel_process("P", "M", g);
  REQUIRE(validate_process(p, 1e-9, 2, 5).ok);

  const Vector chi = random_pure_state(2, rng);
  const Matrix r = ginibre(1, 2, rng) / 2.0;
  const CPM prep = CPM::from_kraus({sys("P_in", 1)}, {sys("P_out", 2)}, {Matrix(chi)});
  const CPM meas = CPM::from_kraus({sys("M_in", 2)}, {sys("M_out", 1)}, {r});

  SECTION("three-way agreement on one branch pair") {
    // Amplitude of the Kraus chain: measure after g after preparation.
    const double expected = std::norm((r * g * chi)(0, 0));
    REQUIRE_THAT(probability(p, {prep, meas}), WithinAbs(expected, 1e-12));
    REQUIRE_THAT(closed_value(process_network(p, {prep, meas})),
                 WithinAbs(expected, 1e-12));
  }

  SECTION("complete instruments sum to one") {
    const auto outcomes = random_instrument_branches({sys("M_in", 2)}, {sys("M_out", 1)},
                                                     3, rng);
    double total = 0.0;
    for (const auto& b : outcomes) total += probability(p, {prep, b});
    REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
  }

  SECTION("branch interfaces are checked") {
    REQUIRE_THROWS_WITH(probability(p, {prep}), ContainsSubstring("one branch per party"));
    REQUIRE_THROWS_WITH(probability(p, {meas, prep}),
                        ContainsSubstring("must map 'P_in' to 'P_out'"));
  }
}

TEST_CASE("the quantum switch routes its target by the control", "[process][switch]") {
  const ProcessMatrix p = quantum_switch(2);

  SECTION("shape and trace") {
    REQUIRE(p.parties.size() == 4);
    REQUIRE(p.w.total_dim() == 256);
    REQUIRE_THAT(p.w.vec().squaredNorm(), WithinAbs(16.0, 1e-12));
    REQUIRE_THAT(quantum_switch(3).w.vec().squaredNorm(), WithinAbs(54.0, 1e-12));
    REQUIRE_THROWS_WITH(quantum_switch(1), ContainsSubstring("dimension at least two"));
  }

  SECTION("validation passes including sampled normalisation") {
    REQUIRE(validate_process(p, 1e-9, 2, 3).ok);
  }

  SECTION("exact singleton signalling structure") {
    const std::vector<SigEdge> expected = {
        {{"A^O"}, {"B^I"}}, {{"A^O"}, {"D^I"}}, {{"B^O"}, {"A^I"}},
        {{"B^O"}, {"D^I"}}, {{"C^O"}, {"A^I"}}, {{"C^O"}, {"B^I"}},
        {{"C^O"}, {"D^I"}}};
    REQUIRE(signalling_structure(process_to_map(p), 1).edges == expected);
  }

  SECTION("measurement probabilities against the reference amplitude") {
    Rng rng(3);
    const SwitchParams sp = canonical_switch_params(2);
    const CPM prep = switch_prep(sys("C^I", 1), sys("C^O", 4), sp.alpha, sp.beta, sp.psi);
    const CPM ua = CPM::from_unitary({sys("A^I", 2)}, {sys("A^O", 2)}, sp.u);
    const CPM vb = CPM::from_unitary({sys("B^I", 2)}, {sys("B^O", 2)}, sp.v);
    const Matrix r = ginibre(1, 4, rng) / 2.0;
    const CPM meas = CPM::from_kraus({sys("D^I", 4)}, {sys("D^O", 1)}, {r});

    Vector w_out = Vector::Zero(4);
    w_out.segment(0, 2) = sp.alpha * (sp.v * sp.u * sp.psi);
    w_out.segment(2, 2) = sp.beta * (sp.u * sp.v * sp.psi);
    const double expected = std::norm((r * w_out)(0, 0));
    REQUIRE_THAT(probability(p, {prep, ua, vb, meas}), WithinAbs(expected, 1e-12));

    const CPM keep = CPM::replace({sys("D^I", 4)}, {sys("D^O", 1)},
                                  Matrix::Identity(1, 1));
    REQUIRE_THAT(probability(p, {prep, ua, vb, keep}), WithinAbs(1.0, 1e-12));
  }

  SECTION("network output state matches the reference for random parameters") {
    Rng rng(17);
    for (int draw = 0; draw < 3; ++draw) {
      const Matrix u = random_unitary(2, rng);
      const Matrix v = random_unitary(2, rng);
      const Vector psi = random_pure_state(2, rng);
      const Vector coeff = random_pure_state(2, rng);
      const Cx alpha = coeff(0), beta = coeff(1);

      const std::vector<CPM> locals = {
          switch_prep(sys("C^I", 1), sys("C^O", 4), alpha, beta, psi),
          CPM::from_unitary({sys("A^I", 2)}, {sys("A^O", 2)}, u),
          CPM::from_unitary({sys("B^I", 2)}, {sys("B^O", 2)}, v),
          switch_readout(sys("D^I", 4), sys("D^O", 1), sys("kept", 4))};
      const Matrix rho = switch_output_state(p, locals);
      const Vector ref = qs_reference_output(alpha, beta, psi, u, v);
      REQUIRE_THAT(rho.trace().real(), WithinAbs(1.0, 1e-9));
      REQUIRE_THAT((ref.adjoint() * rho * ref)(0, 0).real(), WithinAbs(1.0, 1e-9));
    }
  }
}

TEST_CASE("process validation separates its failure modes", "[process]") {
  SECTION("malformed structure") {
    ProcessMatrix p;
    p.parties = {{"X", sys("x_in", 2), sys("missing", 2)}};
    p.w = LabeledOperator::vector({sys("x_in", 2), sys("x_out", 2)}, Vector::Ones(4));
    const auto report = validate_process(p);
    REQUIRE_FALSE(report.ok);
    REQUIRE(has_kind(report, "malformed"));
  }

  SECTION("negative operators are rejected") {
    ProcessMatrix p;
    p.parties = {{"X", sys("x_in", 2), sys("x_out", 2)}};
    Vector diag(4);
    diag << -0.5, 1.0, 1.0, 0.5;
    p.w = LabeledOperator::matrix({sys("x_in", 2), sys("x_out", 2)},
                                  Matrix(diag.asDiagonal()));
    REQUIRE(has_kind(validate_process(p), "not-positive"));
  }

  SECTION("wrong trace") {
    ProcessMatrix p = quantum_switch(2);
    p.w = LabeledOperator::vector(p.w.systems(), 2.0 * p.w.vec());
    REQUIRE(has_kind(validate_process(p), "wrong-trace"));
  }

  SECTION("induced map must be a channel") {
    Matrix g(2, 2);
    g << 1.0, 1.0, 0.0, 0.0;
    REQUIRE(has_kind(validate_process(channel_process("P", "M", g)), "not-a-channel"));
  }

  SECTION("a two-wire loop passes the static stages but is caught by sampling") {
    // Both parties feed each other: the operator has the right trace, is
    // positive, and induces a channel (a swap), yet probabilities on closed
    // boxes do not sum to one — the loop is not a process.
    const std::vector<SystemLabel> systems = {sys("a_in", 2), sys("a_out", 2),
                                              sys("b_in", 2), sys("b_out", 2)};
    const IndexMap im(systems);
    Vector w = Vector::Zero(16);
    for (std::size_t o = 0; o < 2; ++o) {
      for (std::size_t q = 0; q < 2; ++q) {
        w(static_cast<Eigen::Index>(im.flat({q, o, o, q}))) = 1.0;
      }
    }
    ProcessMatrix p;
    p.parties = {{"A", systems[0], systems[1]}, {"B", systems[2], systems[3]}};
    p.w = LabeledOperator::vector(systems, std::move(w));

    REQUIRE(validate_process(p, 1e-9, 0).ok);
    const auto sampled = validate_process(p, 1e-9, 4, 1);
    REQUIRE_FALSE(sampled.ok);
    REQUIRE(has_kind(sampled, "not-normalised"));
  }
}

TEST_CASE("fixed party orders are found exactly when they exist", "[process]") {
  SECTION("a channel process orders its parties even against the name order") {
    Rng rng(5);
    const ProcessMatrix p = channel_process("B", "A", random_unitary(2, rng));
    const auto order = fixed_party_order(p);
    REQUIRE(order.has_value());
    REQUIRE(*order == std::vector<std::string>{"B", "A"});
  }

  SECTION("the switch admits no fixed order") {
    REQUIRE_FALSE(is_fixed_order(quantum_switch(2)));
  }

  SECTION("the fine-grained switch admits the slot order") {
    const auto order = fixed_party_order(fine_switch_process(2));
    REQUIRE(order.has_value());
    REQUIRE(*order == std::vector<std::string>{"C", "A1", "B1", "A2", "B2", "D"});
  }
}

TEST_CASE("the fine switch splits each party into ordered slots", "[process][switch]") {
  const ProcessMatrix p = fine_switch_process(2);

  SECTION("shape, trace and validation") {
    REQUIRE(p.parties.size() == 6);
    REQUIRE_THAT(p.w.trace().real(), WithinAbs(324.0, 1e-9));
    REQUIRE(validate_process(p, 1e-9, 1, 9).ok);
    REQUIRE_THROWS_WITH(fine_switch_process(1),
                        ContainsSubstring("dimension at least two"));
  }

  SECTION("exact singleton signalling structure") {
    const std::vector<SigEdge> expected = {
        {{"A1^O"}, {"B2^I"}}, {{"A2^O"}, {"D1^I"}}, {{"B1^O"}, {"A2^I"}},
        {{"B2^O"}, {"D1^I"}}, {{"C1^O"}, {"A1^I"}}, {{"C1^O"}, {"B1^I"}},
        {{"C1^O"}, {"D1^I"}}};
    REQUIRE(signalling_structure(process_to_map(p), 1).edges == expected);
  }

  SECTION("independent slot operations produce the two-step reference output") {
    Rng rng(23);
    for (int draw = 0; draw < 2; ++draw) {
      const Matrix u1 = random_unitary(2, rng);
      const Matrix u2 = random_unitary(2, rng);
      const Matrix v1 = random_unitary(2, rng);
      const Matrix v2 = random_unitary(2, rng);
      const Vector psi = random_pure_state(2, rng);
      const Vector coeff = random_pure_state(2, rng);
      const Cx alpha = coeff(0), beta = coeff(1);

      const std::vector<CPM> locals = {
          switch_prep(sys("C1^I", 1), sys("C1^O", 4), alpha, beta, psi),
          CPM::from_unitary({sys("A1^I", 3)}, {sys("A1^O", 3)}, lift_unitary(u1)),
          CPM::from_unitary({sys("B1^I", 3)}, {sys("B1^O", 3)}, lift_unitary(v1)),
          CPM::from_unitary({sys("A2^I", 3)}, {sys("A2^O", 3)}, lift_unitary(u2)),
          CPM::from_unitary({sys("B2^I", 3)}, {sys("B2^O", 3)}, lift_unitary(v2)),
          switch_readout(sys("D1^I", 4), sys("D1^O", 1), sys("kept", 4))};
      const Matrix rho = switch_output_state(p, locals);
      const Vector ref = qsf_reference_output(alpha, beta, psi, u1, u2, v1, v2);
      REQUIRE_THAT(rho.trace().real(), WithinAbs(1.0, 1e-9));
      // Coherence across the two control branches survives: the output is
      // the pure reference state, not a mixture of the branch outputs.
      REQUIRE_THAT((ref.adjoint() * rho * ref)(0, 0).real(), WithinAbs(1.0, 1e-9));
    }
  }

  SECTION("equal slot operations reproduce the plain switch output") {
    Rng rng(29);
    const Matrix u = random_unitary(2, rng);
    const Matrix v = random_unitary(2, rng);
    const Vector psi = random_pure_state(2, rng);
    const Vector coeff = random_pure_state(2, rng);
    const Cx alpha = coeff(0), beta = coeff(1);
    const Vector fine = qsf_reference_output(alpha, beta, psi, u, u, v, v);
    const Vector coarse = qs_reference_output(alpha, beta, psi, u, v);
    REQUIRE_THAT((fine - coarse).norm(), WithinAbs(0.0, 1e-12));

    const std::vector<CPM> locals = {
        switch_prep(sys("C1^I", 1), sys("C1^O", 4), alpha, beta, psi),
        CPM::from_unitary({sys("A1^I", 3)}, {sys("A1^O", 3)}, lift_unitary(u)),
        CPM::from_unitary({sys("B1^I", 3)}, {sys("B1^O", 3)}, lift_unitary(v)),
        CPM::from_unitary({sys("A2^I", 3)}, {sys("A2^O", 3)}, lift_unitary(u)),
        CPM::from_unitary({sys("B2^I", 3)}, {sys("B2^O", 3)}, lift_unitary(v)),
        switch_readout(sys("D1^I", 4), sys("D1^O", 1), sys("kept", 4))};
    const Matrix rho = switch_output_state(p, locals);
    REQUIRE_THAT((coarse.adjoint() * rho * coarse)(0, 0).real(), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("the switch fine-graining bundle verifies end to end", "[process][switch]") {
  const SwitchFineGraining bundle = fine_grained_switch(2);

  SECTION("witness family covers the party subsets and the wired process subsets") {
    REQUIRE(bundle.witnesses.size() == 25);
    const auto report =
        verify_network_finegraining(bundle.coarse_network, bundle.fine_network,
                                    bundle.fine_map, bundle.witnesses, 1e-9);
    CAPTURE(report.findings.size());
    for (const auto& f : report.findings) {
      CAPTURE(f.kind, f.detail);
    }
    REQUIRE(report.failed.empty());
    REQUIRE(report.ok);
    REQUIRE(report.complete);
    REQUIRE(report.verified.size() == 25);
  }

  SECTION("the realisation is relativistically causal") {
    const auto causal = relativistic_causality(bundle.realisation);
    REQUIRE(causal.refined_acyclic);
    REQUIRE(causal.ok);
    REQUIRE(causal.refined.regions.size() == 8);
  }

  SECTION("inputs precede outputs part by part") {
    const std::vector<std::pair<std::string, std::string>> parties = {
        {"C^I", "C^O"}, {"A^I", "A^O"}, {"B^I", "B^O"}, {"D^I", "D^O"}};
    const auto io = io_correspondence(bundle.realisation.embedding,
                                      bundle.realisation.partitions,
                                      bundle.realisation.spacetime, parties);
    REQUIRE(io.ok);
    const auto& pairs = io.matchings.at("A^I");
    REQUIRE(pairs ==
            std::vector<std::pair<std::string, std::string>>{
                {"bin_in.0", "bin_out.0"}, {"bin_in.1", "bin_out.1"}});
  }
}
