/**
 * Tests for the cyclicity and fine-graining audits.
 *
 * Oracle strategy: each audit is pinned to hand-checked verdicts on three
 * known realisations of the switch network — pointlike, straddling, and
 * slot-partitioned — whose compatibility questions are small enough to
 * verify on paper, plus a fixed-order channel network as the causal control
 * case.  The exhaustive acyclic search is cross-checked against the known
 * count of labeled acyclic digraphs on four vertices.
 */
#include <catch2/catch_amalgamated.hpp>

#include "qcnet/analysis.hpp"

#include "qcnet/random.hpp"
#include "qcnet/signalling.hpp"

using namespace qcnet;
using Catch::Matchers::ContainsSubstring;

namespace {

/** Two-party process riding `g` from the first party into the second. */
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
  p.parties = {{first, systems[0], systems[1]}, {second, systems[2], systems[3]}};
  p.w = LabeledOperator::vector(systems, std::move(w));
  return p;
}

}  // namespace

TEST_CASE("pointlike switch realisation: cyclic signalling, acyclic image",
          "[analysis]") {
  const Realisation r = pointlike_switch_realisation();
  const CyclicityVerdict v = cyclicity_audit(r, quantum_switch(2));

  REQUIRE(v.no_fixed_order);
  REQUIRE_FALSE(v.causal);
  REQUIRE(v.image_acyclic);
  REQUIRE(v.consistent);

  SECTION("the four unmatched edges are the in-point and crossed signals") {
    REQUIRE(v.causality.refined_acyclic);
    REQUIRE(v.causality.findings.size() == 4);
    for (const auto& f : v.causality.findings) REQUIRE(f.kind == "unmatched-edge");
  }

  SECTION("a two-cycle between the intermediate parties is certified") {
    REQUIRE(v.cycle.has_value());
    REQUIRE(*v.cycle == std::vector<std::string>{"p_A", "p_B"});
  }

  SECTION("no acyclic structure on the four regions is compatible") {
    const SigGraph sig = network_signalling_structure(r.network);
    const CycleSearch tally = exhaustive_acyclic_search(sig, r.embedding);
    REQUIRE(tally.structures == 543);  // labeled acyclic digraphs on 4 vertices
    REQUIRE(tally.compatible == 0);
  }
}

TEST_CASE("straddling switch realisation: regions cannot be refined acyclically",
          "[analysis]") {
  const Realisation r = straddling_switch_realisation();
  const CyclicityVerdict v = cyclicity_audit(r, quantum_switch(2));

  REQUIRE(v.no_fixed_order);
  REQUIRE_FALSE(v.causal);
  REQUIRE_FALSE(v.image_acyclic);
  REQUIRE(v.consistent);

  REQUIRE_FALSE(v.causality.refined_acyclic);
  REQUIRE(v.causality.findings.size() == 1);
  REQUIRE(v.causality.findings.front().kind == "refined-cyclic");

  REQUIRE(v.cycle.has_value());
  REQUIRE(*v.cycle == std::vector<std::string>{"R_A", "R_B"});
}

TEST_CASE("partitioned slot realisation: causal, with a cyclic coarse image",
          "[analysis][switch]") {
  const SwitchFineGraining bundle = fine_grained_switch(2);
  const CyclicityVerdict v = cyclicity_audit(bundle.realisation, bundle.coarse);

  REQUIRE(v.no_fixed_order);
  REQUIRE(v.causal);
  REQUIRE_FALSE(v.image_acyclic);
  REQUIRE(v.consistent);

  REQUIRE(v.cycle.has_value());
  REQUIRE(*v.cycle == std::vector<std::string>{"bin_in", "bin_out"});
}

TEST_CASE("fixed-order channels audit as causal with an acyclic image", "[analysis]") {
  Rng rng(31);
  const ProcessMatrix p = channel_process("P", "M", random_unitary(2, rng));
  const QuantumNetwork net = process_network(
      p, {CPM::from_kraus({sys("P_in", 1)}, {sys("P_out", 2)},
                          {Matrix(random_pure_state(2, rng))}),
          CPM::replace({sys("M_in", 2)}, {sys("M_out", 1)}, Matrix::Identity(1, 1))});
  const Realisation r = chain_realisation(net, {"P_in", "P_out", "M_in", "M_out"});
  const CyclicityVerdict v = cyclicity_audit(r, p);

  REQUIRE_FALSE(v.no_fixed_order);
  REQUIRE(v.causal);
  REQUIRE(v.image_acyclic);
  REQUIRE(v.consistent);
  REQUIRE_FALSE(v.cycle.has_value());

  SECTION("the exhaustive search exhibits compatible structures") {
    const SigGraph sig = network_signalling_structure(net);
    const CycleSearch tally = exhaustive_acyclic_search(sig, r.embedding);
    REQUIRE(tally.structures == 543);
    REQUIRE(tally.compatible > 0);
  }

  SECTION("the node list must cover the network") {
    REQUIRE_THROWS_WITH(chain_realisation(net, {"P_in", "P_out", "M_in"}),
                        ContainsSubstring("every network node exactly once"));
  }
}

TEST_CASE("the switch bundle passes the fine-graining audit", "[analysis][switch]") {
  const SwitchFineGraining bundle = fine_grained_switch(2);
  const FineGrainingVerdict v = fine_graining_audit(bundle);

  for (const auto& f : v.findings) {
    CAPTURE(f.kind, f.detail);
  }
  REQUIRE(v.witnesses_ok);
  REQUIRE(v.witnesses_complete);
  REQUIRE(v.witnesses.verified.size() == 25);
  REQUIRE_FALSE(v.coarse_fixed_order);
  REQUIRE(v.fine_fixed_order);
  REQUIRE(*v.fine_order ==
          std::vector<std::string>{"C", "A1", "B1", "A2", "B2", "D"});
  REQUIRE(v.coarse_io_ok);
  REQUIRE(v.fine_io_ok);
  REQUIRE(v.causal);
  REQUIRE(v.coarse_parties == 4);
  REQUIRE(v.fine_parties == 6);
  REQUIRE(v.ok);
  REQUIRE(v.findings.empty());
}
