/**
 * Tests for embeddings and compatibility.
 *
 * Oracle strategy: compatibility is exercised on hand-built region structures
 * whose path relations are read off directly (chains, two-step paths, merged
 * sources), and cross-checked exhaustively: for a certified cycle over two or
 * three regions, every acyclic edge set over those regions — enumerated
 * brute-force and counted against the known number of labeled DAGs — must be
 * incompatible.  Matching in the input/output correspondence is checked on
 * instances where the greedy assignment fails but an augmenting path exists.
 */
#include <catch2/catch_amalgamated.hpp>

#include "qcnet/cpm.hpp"
#include "qcnet/embedding.hpp"
#include "qcnet/signalling.hpp"

using namespace qcnet;
using Catch::Matchers::ContainsSubstring;

namespace {

/** Spacetime whose points form a chain in the listed order. */
Spacetime chain(const std::vector<std::string>& points) {
  Spacetime st;
  st.points = points;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    st.order.insert({points[i], points[i + 1]});
  }
  return st;
}

/** Controlled-not on (a, b): signals a -> c, a -> d and b -> d but not b -> c. */
CPM cnot_map() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = u(1, 1) = u(3, 2) = u(2, 3) = 1.0;
  return CPM::from_unitary({sys("a", 2), sys("b", 2)}, {sys("c", 2), sys("d", 2)}, u);
}

/** Every acyclic edge set over the named regions (self-loops included in the
 *  candidate pairs, so they are pruned by acyclicity). */
std::vector<std::set<std::pair<std::string, std::string>>> acyclic_edge_sets(
    const std::vector<std::string>& names) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& a : names) {
    for (const auto& b : names) pairs.push_back({a, b});
  }
  std::vector<std::set<std::pair<std::string, std::string>>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << pairs.size()); ++mask) {
    std::set<std::pair<std::string, std::string>> edges;
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (mask & (std::size_t{1} << b)) edges.insert(pairs[b]);
    }
    if (is_acyclic(names, edges)) out.push_back(std::move(edges));
  }
  return out;
}

}  // namespace

TEST_CASE("compatibility of signalling edges with region structures", "[embedding]") {
  const Region rp{"P", {"p"}};
  const Region rq{"Q", {"q"}};
  const Spacetime st = chain({"p", "q"});
  const CPM id = CPM::identity(sys("x", 2), sys("y", 2));
  const SigGraph sig = signalling_structure(id, 1);

  SECTION("timelike separation in the right order is compatible") {
    const Embedding emb{{{"x", rp}, {"y", rq}}};
    const auto g = region_causal_structure(st, {rp, rq});
    const auto report = compatible(sig, emb, g);
    REQUIRE(report.ok);
    REQUIRE(report.violations.empty());
  }

  SECTION("the reversed embedding is rejected") {
    const Embedding emb{{{"x", rq}, {"y", rp}}};
    const auto report = compatible(sig, emb, region_causal_structure(st, {rp, rq}));
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.violations.size() == 1);
    REQUIRE(report.violations.front().kind == "unmatched-edge");
    REQUIRE_THAT(report.violations.front().detail, ContainsSubstring("{x} -> {y}"));
  }

  SECTION("a pointlike region cannot signal to itself") {
    const Embedding emb{{{"x", rp}, {"y", rp}}};
    const auto report = compatible(sig, emb, region_causal_structure(st, {rp}));
    REQUIRE_FALSE(report.ok);
  }

  SECTION("a region with internal extent carries the self-loop that saves it") {
    const Region lab{"lab", {"p", "q"}};
    const Embedding emb{{{"x", lab}, {"y", lab}}};
    const auto g = region_causal_structure(st, {lab});
    REQUIRE(g.edges.count({"lab", "lab"}) == 1);
    REQUIRE(compatible(sig, emb, g).ok);
  }

  SECTION("a system without an assignment throws") {
    const Embedding emb{{{"x", rp}}};
    REQUIRE_THROWS_WITH(compatible(sig, emb, region_causal_structure(st, {rp, rq})),
                        ContainsSubstring("'y' has no embedding"));
  }
}

TEST_CASE("matching follows paths, not single edges", "[embedding]") {
  const Region ra{"A", {"pa"}};
  const Region rb{"B", {"pb"}};
  const Region rc{"C", {"pc"}};

  SigGraph sig;
  sig.systems = {sys("u1", 2), sys("u2", 2)};
  sig.edges = {{{"u1"}, {"u2"}}};
  const Embedding emb{{{"u1", ra}, {"u2", rc}}};

  RegionCausalStructure g;
  g.regions = {ra, rb, rc};
  g.edges = {{"A", "B"}, {"B", "C"}};

  SECTION("a two-step path matches the edge") {
    REQUIRE(compatible(sig, emb, g).ok);
  }

  SECTION("the reverse direction has no path") {
    SigGraph back;
    back.systems = sig.systems;
    back.edges = {{{"u2"}, {"u1"}}};
    REQUIRE_FALSE(compatible(back, emb, g).ok);
  }

  SECTION("a set-valued source matches through any of its members") {
    SigGraph join;
    join.systems = {sys("x1", 2), sys("x2", 2), sys("z", 2)};
    join.edges = {{{"x1", "x2"}, {"z"}}};
    const Embedding e2{{{"x1", ra}, {"x2", rb}, {"z", rc}}};
    RegionCausalStructure h;
    h.regions = {ra, rb, rc};
    h.edges = {{"B", "C"}};
    REQUIRE(compatible(join, e2, h).ok);

    SigGraph solo;
    solo.systems = join.systems;
    solo.edges = {{{"x1"}, {"z"}}};
    REQUIRE_FALSE(compatible(solo, e2, h).ok);
  }
}

TEST_CASE("cycle certificates from singleton edges", "[embedding]") {
  const Region ra{"A", {"pa"}};
  const Region rb{"B", {"pb"}};
  const Region rc{"C", {"pc"}};

  SECTION("mutual signalling between two regions certifies a two-cycle") {
    SigGraph sig;
    sig.systems = {sys("a_in", 2), sys("a_out", 2), sys("b_in", 2), sys("b_out", 2)};
    sig.edges = {{{"a_out"}, {"b_in"}}, {{"b_out"}, {"a_in"}}};
    const Embedding emb{
        {{"a_in", ra}, {"a_out", ra}, {"b_in", rb}, {"b_out", rb}}};
    const auto cycle = certify_cycle(sig, emb);
    REQUIRE(cycle.has_value());
    REQUIRE(*cycle == std::vector<std::string>{"A", "B"});
  }

  SECTION("one-way signalling certifies nothing") {
    SigGraph sig;
    sig.systems = {sys("a_out", 2), sys("b_in", 2)};
    sig.edges = {{{"a_out"}, {"b_in"}}};
    const Embedding emb{{{"a_out", ra}, {"b_in", rb}}};
    REQUIRE_FALSE(certify_cycle(sig, emb).has_value());
  }

  SECTION("edges within one region do not enter the certificate") {
    SigGraph sig;
    sig.systems = {sys("x", 2), sys("y", 2)};
    sig.edges = {{{"x"}, {"y"}}};
    const Embedding emb{{{"x", ra}, {"y", ra}}};
    REQUIRE_FALSE(certify_cycle(sig, emb).has_value());
  }

  SECTION("a three-cycle is returned starting from its smallest region") {
    SigGraph sig;
    sig.systems = {sys("u1", 2), sys("u2", 2), sys("u3", 2),
                   sys("u4", 2), sys("u5", 2), sys("u6", 2)};
    sig.edges = {{{"u2"}, {"u3"}}, {{"u4"}, {"u5"}}, {{"u6"}, {"u1"}}};
    const Embedding emb{{{"u1", ra}, {"u2", ra}, {"u3", rb},
                         {"u4", rb}, {"u5", rc}, {"u6", rc}}};
    const auto cycle = certify_cycle(sig, emb);
    REQUIRE(cycle.has_value());
    REQUIRE(*cycle == std::vector<std::string>{"A", "B", "C"});
  }
}

TEST_CASE("certified cycles defeat every acyclic structure", "[embedding]") {
  const Region ra{"A", {"pa"}};
  const Region rb{"B", {"pb"}};
  const Region rc{"C", {"pc"}};

  SECTION("two regions: three acyclic structures, none compatible") {
    SigGraph sig;
    sig.systems = {sys("a_in", 2), sys("a_out", 2), sys("b_in", 2), sys("b_out", 2)};
    sig.edges = {{{"a_out"}, {"b_in"}}, {{"b_out"}, {"a_in"}}};
    const Embedding emb{
        {{"a_in", ra}, {"a_out", ra}, {"b_in", rb}, {"b_out", rb}}};
    REQUIRE(certify_cycle(sig, emb).has_value());

    const auto sets = acyclic_edge_sets({"A", "B"});
    REQUIRE(sets.size() == 3);
    for (const auto& edges : sets) {
      RegionCausalStructure g;
      g.regions = {ra, rb};
      g.edges = edges;
      REQUIRE_FALSE(compatible(sig, emb, g).ok);
    }
  }

  SECTION("three regions: twenty-five acyclic structures, none compatible") {
    SigGraph sig;
    sig.systems = {sys("u1", 2), sys("u2", 2), sys("u3", 2),
                   sys("u4", 2), sys("u5", 2), sys("u6", 2)};
    sig.edges = {{{"u2"}, {"u3"}}, {{"u4"}, {"u5"}}, {{"u6"}, {"u1"}}};
    const Embedding emb{{{"u1", ra}, {"u2", ra}, {"u3", rb},
                         {"u4", rb}, {"u5", rc}, {"u6", rc}}};
    REQUIRE(certify_cycle(sig, emb).has_value());

    const auto sets = acyclic_edge_sets({"A", "B", "C"});
    REQUIRE(sets.size() == 25);
    for (const auto& edges : sets) {
      RegionCausalStructure g;
      g.regions = {ra, rb, rc};
      g.edges = edges;
      REQUIRE_FALSE(compatible(sig, emb, g).ok);
    }
  }

  SECTION("without the certificate some acyclic structure is compatible") {
    SigGraph sig;
    sig.systems = {sys("a_out", 2), sys("b_in", 2)};
    sig.edges = {{{"a_out"}, {"b_in"}}};
    const Embedding emb{{{"a_out", ra}, {"b_in", rb}}};
    REQUIRE_FALSE(certify_cycle(sig, emb).has_value());

    bool any = false;
    for (const auto& edges : acyclic_edge_sets({"A", "B"})) {
      RegionCausalStructure g;
      g.regions = {ra, rb};
      g.edges = edges;
      any = any || compatible(sig, emb, g).ok;
    }
    REQUIRE(any);
  }
}

TEST_CASE("relativistic causality of realisations", "[embedding]") {
  SECTION("a channel across timelike-separated points passes") {
    Realisation r;
    r.network.maps.insert({"ch", CPM::identity(sys("x", 2), sys("y", 2))});
    r.spacetime = chain({"p", "q"});
    r.embedding.assign = {{"x", Region{"P", {"p"}}}, {"y", Region{"Q", {"q"}}}};
    const auto report = relativistic_causality(r);
    REQUIRE(report.ok);
    REQUIRE(report.refined_acyclic);
    REQUIRE(report.findings.empty());
  }

  SECTION("an unpartitioned straddling region is refined-cyclic") {
    Realisation r;
    r.network.maps.insert({"ch", CPM::identity(sys("x", 2), sys("y", 2))});
    r.spacetime = chain({"p", "q"});
    const Region lab{"lab", {"p", "q"}};
    r.embedding.assign = {{"x", lab}, {"y", lab}};
    const auto report = relativistic_causality(r);
    REQUIRE_FALSE(report.ok);
    REQUIRE_FALSE(report.refined_acyclic);
    REQUIRE(report.findings.size() == 1);
    REQUIRE(report.findings.front().kind == "refined-cyclic");
  }

  SECTION("partitioning the straddling region restores the check") {
    Realisation r;
    r.network.maps.insert({"ch", CPM::identity(sys("x", 2), sys("y", 2))});
    r.spacetime = chain({"p", "q"});
    const Region lab{"lab", {"p", "q"}};
    r.embedding.assign = {{"x", lab}, {"y", lab}};
    r.partitions = {{"lab", Partition{lab, {{"lab.0", {"p"}}, {"lab.1", {"q"}}}}}};
    const auto report = relativistic_causality(r);
    REQUIRE(report.ok);
    REQUIRE(report.refined_acyclic);
    REQUIRE(report.refined.regions.size() == 2);
  }

  SECTION("wire nodes use the downstream port name") {
    Realisation r;
    r.network.maps.insert({"P", CPM::identity(sys("p_in", 2), sys("m", 2))});
    r.network.maps.insert({"Q", CPM::identity(sys("m2", 2), sys("q_out", 2))});
    r.network.comps = {{"P", "m", "Q", "m2"}};
    r.spacetime = chain({"t1", "t2", "t3"});
    r.embedding.assign = {{"p_in", Region{"R1", {"t1"}}},
                          {"m2", Region{"R2", {"t2"}}},
                          {"q_out", Region{"R3", {"t3"}}}};
    REQUIRE(relativistic_causality(r).ok);

    r.spacetime = chain({"t3", "t2", "t1"});
    const auto report = relativistic_causality(r);
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.findings.size() == 2);
  }

  SECTION("a finer network can pass where the coarse one fails") {
    Realisation r;
    r.network.maps.insert({"gate", cnot_map()});
    r.spacetime = {{"p1", "p2", "p3", "p4"}, {{"p1", "p3"}, {"p2", "p4"}}};
    r.embedding.assign = {{"a", Region{"A", {"p1"}}}, {"b", Region{"B", {"p2"}}},
                          {"c", Region{"C", {"p3"}}}, {"d", Region{"D", {"p4"}}},
                          {"af", Region{"A", {"p1"}}}, {"bf", Region{"B", {"p2"}}},
                          {"cf", Region{"C", {"p3"}}}, {"df", Region{"D", {"p4"}}}};

    const auto coarse_only = relativistic_causality(r);
    REQUIRE_FALSE(coarse_only.ok);
    REQUIRE(coarse_only.refined_acyclic);

    r.fine_network.maps.insert({"wire_a", CPM::identity(sys("af", 2), sys("cf", 2))});
    r.fine_network.maps.insert({"wire_b", CPM::identity(sys("bf", 2), sys("df", 2))});
    REQUIRE(relativistic_causality(r).ok);
  }

  SECTION("one region name with two extents throws") {
    Realisation r;
    r.network.maps.insert({"ch", CPM::identity(sys("x", 2), sys("y", 2))});
    r.spacetime = chain({"p", "q"});
    r.embedding.assign = {{"x", Region{"R", {"p"}}}, {"y", Region{"R", {"q"}}}};
    REQUIRE_THROWS_WITH(relativistic_causality(r),
                        ContainsSubstring("two different extents"));
  }
}

TEST_CASE("input/output correspondence", "[embedding]") {
  const Spacetime st{{"t1", "t2", "t3", "t4"}, {{"t1", "t3"}, {"t2", "t4"}}};
  const Region lab_in{"lab_in", {"t1", "t2"}};
  const Region lab_out{"lab_out", {"t3", "t4"}};
  const std::map<std::string, Partition> parts = {
      {"lab_in", Partition{lab_in, {{"in.0", {"t1"}}, {"in.1", {"t2"}}}}},
      {"lab_out", Partition{lab_out, {{"out.0", {"t3"}}, {"out.1", {"t4"}}}}}};
  const Embedding emb{{{"A_in", lab_in}, {"A_out", lab_out}}};

  SECTION("parallel uses of a lab match part by part") {
    const auto report = io_correspondence(emb, parts, st, {{"A_in", "A_out"}});
    REQUIRE(report.ok);
    const auto& pairs = report.matchings.at("A_in");
    REQUIRE(pairs == std::vector<std::pair<std::string, std::string>>{
                         {"in.0", "out.0"}, {"in.1", "out.1"}});
  }

  SECTION("reversing the roles leaves nothing to match") {
    const Embedding back{{{"A_in", lab_out}, {"A_out", lab_in}}};
    const auto report = io_correspondence(back, parts, st, {{"A_in", "A_out"}});
    REQUIRE_FALSE(report.ok);
    REQUIRE(report.findings.size() == 1);
    REQUIRE(report.findings.front().kind == "io-mismatch");
  }

  SECTION("a matching that needs an augmenting path is found") {
    // in.0 precedes both outputs, in.1 only the first: the greedy pairing
    // (in.0, out.0) must be revised to (in.0, out.1), (in.1, out.0).
    const Spacetime skew{{"t1", "t2", "t3", "t4"},
                         {{"t1", "t3"}, {"t1", "t4"}, {"t2", "t3"}}};
    const auto report = io_correspondence(emb, parts, skew, {{"A_in", "A_out"}});
    REQUIRE(report.ok);
    const auto& pairs = report.matchings.at("A_in");
    REQUIRE(pairs == std::vector<std::pair<std::string, std::string>>{
                         {"in.0", "out.1"}, {"in.1", "out.0"}});
  }

  SECTION("unpartitioned regions count as single parts") {
    const auto report = io_correspondence(emb, {}, st, {{"A_in", "A_out"}});
    REQUIRE(report.ok);
    REQUIRE(report.matchings.at("A_in") ==
            std::vector<std::pair<std::string, std::string>>{{"lab_in", "lab_out"}});
  }

  SECTION("part-count mismatch throws") {
    std::map<std::string, Partition> uneven = parts;
    uneven.erase("lab_out");
    REQUIRE_THROWS_WITH(io_correspondence(emb, uneven, st, {{"A_in", "A_out"}}),
                        ContainsSubstring("cannot match"));
  }

  SECTION("a missing assignment throws") {
    REQUIRE_THROWS_WITH(io_correspondence(emb, parts, st, {{"A_in", "B_out"}}),
                        ContainsSubstring("'B_out' has no embedding"));
  }
}
