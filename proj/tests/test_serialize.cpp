/**
 * Tests for JSON document round-trips, DOT export, and the command line tool.
 *
 * Oracle strategy: canonical serialization is pinned by byte equality of
 * save-after-load on freshly saved documents of every kind, with semantic
 * equality checked on the reloaded objects; DOT output is pinned to golden
 * strings small enough to eyeball.  The command line tool is exercised
 * end to end against the documents bundled under data/, including the two
 * audit modes, the demo battery, and every failure exit code.
 */
#include <catch2/catch_amalgamated.hpp>

#include "qcnet/serialize.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "qcnet/analysis.hpp"

using namespace qcnet;
using Catch::Matchers::ContainsSubstring;

namespace {

std::string tmp_path(const std::string& name) {
  return std::string(QCNET_TEST_TMPDIR) + "/" + name;
}

std::string data_path(const std::string& name) {
  return std::string(QCNET_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

/** Runs the tool with `args`, captures interleaved output, returns the exit code. */
int run_cli(const std::string& args, std::string* output = nullptr) {
  const std::string capture = tmp_path("cli_output.txt");
  const std::string command =
      std::string(QCNET_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  if (output != nullptr) *output = slurp(capture);
  return WEXITSTATUS(status);
}

/** Byte-stability: saving a freshly loaded document reproduces the text. */
void require_byte_stable(const Document& doc) {
  const std::string text = save_document(doc);
  const Document reloaded = load_document(text);
  REQUIRE(save_document(reloaded) == text);
}

/** Strict shape check standing in for a DOT parser: a digraph header, then
 *  only quoted node and edge lines, then a closing brace. */
void require_parseable_dot(const std::string& dot, const std::string& graph) {
  std::istringstream in(dot);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "digraph " + graph + " {");
  bool closed = false;
  std::size_t statements = 0;
  while (std::getline(in, line)) {
    if (line == "}") {
      closed = true;
      break;
    }
    REQUIRE(line.substr(0, 3) == "  \"");
    REQUIRE(line.back() == ';');
    ++statements;
  }
  REQUIRE(closed);
  REQUIRE(statements > 0);
}

}  // namespace

TEST_CASE("documents of every kind round-trip canonically", "[serialize]") {
  SECTION("network with matrix, vector, and ensemble payloads") {
    QuantumNetwork net;
    Matrix half = Matrix::Zero(4, 4);
    half(0, 0) = 1.0;
    half(0, 3) = Cx(0.25, -0.5);
    half(3, 0) = Cx(0.25, 0.5);
    half(3, 3) = 1.0;
    net.maps.emplace("dense", CPM({sys("p", 2)}, {sys("q", 2)},
                                  LabeledOperator::matrix({sys("p", 2), sys("q", 2)}, half)));
    net.maps.emplace("wire", CPM::identity(sys("a", 2), sys("b", 2)));
    Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k1(1, 1) = 1.0;
    net.maps.emplace("dephase", CPM::from_kraus({sys("b", 2)}, {sys("c", 2)}, {k0, k1}));
    net.comps = {{"wire", "b", "dephase", "b"}};
    require_byte_stable(make_document(net));

    const Document reloaded = load_document(save_document(make_document(net)));
    REQUIRE(reloaded.kind == DocKind::Network);
    REQUIRE(reloaded.network->maps.size() == 3);
    REQUIRE(reloaded.network->comps == net.comps);
    const CPM& dense = reloaded.network->maps.at("dense");
    REQUIRE(dense.choi().kind() == OperatorKind::Matrix);
    REQUIRE((dense.choi().mat() - half).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(reloaded.network->maps.at("dephase").choi().kind() == OperatorKind::Ensemble);
  }

  SECTION("the switch process and its finer description") {
    const ProcessMatrix w = quantum_switch(2);
    require_byte_stable(make_document(w));
    const Document reloaded = load_document(save_document(make_document(w)));
    REQUIRE(reloaded.process->parties.size() == 4);
    REQUIRE(reloaded.process->w.kind() == OperatorKind::Vector);
    REQUIRE((reloaded.process->w.vec() - w.w.vec()).cwiseAbs().maxCoeff() == 0.0);

    require_byte_stable(make_document(fine_switch_process(2)));
  }

  SECTION("spacetime and embedding") {
    const Realisation r = straddling_switch_realisation();
    require_byte_stable(make_document(r.spacetime));
    require_byte_stable(make_document(r.embedding));
    const Document reloaded = load_document(save_document(make_document(r.spacetime)));
    REQUIRE(reloaded.spacetime->points == r.spacetime.points);
    REQUIRE(reloaded.spacetime->order == r.spacetime.order);
  }

  SECTION("witness") {
    SubNetwork coarse;
    coarse.map_ids = {"m"};
    SubNetwork fine;
    fine.map_ids = {"m1", "m2"};
    fine.comps = {{"m1", "x1", "m2", "x2"}};
    const SubNetworkWitness w{coarse, fine,
                              {CPM::identity(sys("a", 2), sys("b", 2)),
                               CPM::identity(sys("c", 2), sys("d", 2))}};
    require_byte_stable(make_document(w));
    const Document reloaded = load_document(save_document(make_document(w)));
    REQUIRE(reloaded.witness->fine.map_ids == fine.map_ids);
    REQUIRE(reloaded.witness->fine.comps == fine.comps);
    REQUIRE(reloaded.witness->witness.enc.inputs().front().name == "a");
  }

  SECTION("the full fine-graining bundle") {
    const SwitchFineGraining bundle = fine_grained_switch(2);
    RealisationDocument doc;
    doc.realisation = bundle.realisation;
    doc.process = bundle.coarse;
    doc.fine_process = bundle.fine;
    doc.witnesses = bundle.witnesses;
    require_byte_stable(make_document(doc));

    const Document reloaded = load_document(save_document(make_document(doc)));
    REQUIRE(reloaded.realisation->witnesses.size() == bundle.witnesses.size());
    REQUIRE(reloaded.realisation->process->parties.size() == 4);
    REQUIRE(reloaded.realisation->fine_process->parties.size() == 6);
    REQUIRE(reloaded.realisation->realisation.partitions.size() == 2);
    REQUIRE(reloaded.realisation->realisation.fine_map.assign.at("A^I") ==
            bundle.realisation.fine_map.assign.at("A^I"));
  }

  SECTION("file round trip") {
    const std::string path = tmp_path("roundtrip.json");
    save_document_file(make_document(quantum_switch(2)), path);
    const Document reloaded = load_document_file(path);
    REQUIRE(save_document(reloaded) == slurp(path));
  }
}

TEST_CASE("the loader rejects documents that break the schema", "[serialize]") {
  SECTION("text that is not JSON") {
    REQUIRE_THROWS_WITH(load_document("{ not json"), ContainsSubstring("invalid JSON"));
  }

  SECTION("missing and unsupported versions") {
    REQUIRE_THROWS_WITH(load_document(R"({"kind": "network", "payload": {}})"),
                        ContainsSubstring("missing the field 'version'"));
    REQUIRE_THROWS_WITH(load_document(R"({"kind": "network", "payload": {}, "version": 2})"),
                        ContainsSubstring("unsupported document version"));
  }

  SECTION("unknown kinds, operator kinds, and entry shapes") {
    REQUIRE_THROWS_WITH(load_document(R"({"kind": "poem", "payload": {}, "version": 1})"),
                        ContainsSubstring("unknown document kind 'poem'"));
    const std::string bad_operator = R"({"kind": "process", "version": 1, "payload": {
      "parties": [{"name": "A", "in": {"name": "x", "dim": 2}, "out": {"name": "y", "dim": 2}}],
      "w": {"kind": "cloud", "systems": [{"name": "x", "dim": 2}], "entries": []}}})";
    REQUIRE_THROWS_WITH(load_document(bad_operator),
                        ContainsSubstring("unknown operator kind 'cloud'"));
    const std::string bad_pair = R"({"kind": "process", "version": 1, "payload": {
      "parties": [],
      "w": {"kind": "vector", "systems": [{"name": "x", "dim": 2}], "entries": [[0, [1.0]]]}}})";
    REQUIRE_THROWS_WITH(load_document(bad_pair), ContainsSubstring("[re, im]"));
  }

  SECTION("out-of-range entries") {
    const std::string text = R"({"kind": "process", "version": 1, "payload": {
      "parties": [{"name": "A", "in": {"name": "x", "dim": 2}, "out": {"name": "y", "dim": 2}}],
      "w": {"kind": "vector", "systems": [{"name": "x", "dim": 2}, {"name": "y", "dim": 2}],
            "entries": [[7, [1.0, 0.0]]]}}})";
    REQUIRE_THROWS_WITH(load_document(text), ContainsSubstring("out of range"));
  }

  SECTION("labels that do not match the wrapped Choi operator") {
    const std::string text = R"({"kind": "witness", "version": 1, "payload": {
      "coarse": {"comps": [], "map_ids": []}, "fine": {"comps": [], "map_ids": []},
      "enc": {"inputs": [{"name": "a", "dim": 3}], "outputs": [],
              "choi": {"kind": "vector", "systems": [{"name": "a", "dim": 2}], "entries": []}},
      "dec": {"inputs": [], "outputs": [],
              "choi": {"kind": "vector", "systems": [], "entries": []}}}})";
    REQUIRE_THROWS_AS(load_document(text), Error);
  }
}

TEST_CASE("DOT export is deterministic with quoted, brace-joined labels", "[serialize]") {
  SECTION("signalling graphs") {
    SigGraph g;
    g.systems = {sys("a", 2), sys("b", 2), sys("c", 2)};
    g.edges = {{{"a"}, {"b"}}, {{"a", "b"}, {"c"}}};
    const std::string expected =
        "digraph signalling {\n"
        "  \"a\";\n"
        "  \"b\";\n"
        "  \"c\";\n"
        "  \"{a,b}\";\n"
        "  \"a\" -> \"b\";\n"
        "  \"{a,b}\" -> \"c\";\n"
        "}\n";
    REQUIRE(to_dot(g) == expected);
    require_parseable_dot(to_dot(g), "signalling");
  }

  SECTION("region structures name multi-point regions in their label") {
    RegionCausalStructure g;
    g.regions = {{"R_A", {"x", "y"}}, {"p_B", {"p_B"}}};
    g.edges = {{"R_A", "p_B"}};
    const std::string expected =
        "digraph regions {\n"
        "  \"R_A\" [label=\"R_A {x,y}\"];\n"
        "  \"p_B\";\n"
        "  \"R_A\" -> \"p_B\";\n"
        "}\n";
    REQUIRE(to_dot(g) == expected);
    require_parseable_dot(to_dot(g), "regions");
  }
}

TEST_CASE("the command line tool drives the bundled documents", "[serialize]") {
  SECTION("validate accepts every bundled document") {
    for (const std::string name :
         {"qswitch.json", "chain.json", "lightcone.json", "qswitch_embedding.json",
          "qswitch_witness.json", "qswitch_pointlike.json", "qswitch_straddling.json",
          "qswitch_bundle.json"}) {
      std::string output;
      INFO(name);
      REQUIRE(run_cli("validate " + data_path(name), &output) == 0);
      REQUIRE_THAT(output, ContainsSubstring("document is valid"));
    }
  }

  SECTION("validate names a reused composition endpoint") {
    QuantumNetwork net;
    net.maps.emplace("first", CPM::identity(sys("a0", 2), sys("a1", 2)));
    net.maps.emplace("second", CPM::identity(sys("b0", 2), sys("b1", 2)));
    net.maps.emplace("third", CPM::identity(sys("c0", 2), sys("c1", 2)));
    net.comps = {{"first", "a1", "second", "b0"}, {"first", "a1", "third", "c0"}};
    const std::string path = tmp_path("reused.json");
    save_document_file(make_document(net), path);
    std::string output;
    REQUIRE(run_cli("validate " + path, &output) == 1);
    REQUIRE_THAT(output, ContainsSubstring("endpoint-reused"));
    REQUIRE_THAT(output, ContainsSubstring("first.a1"));
  }

  SECTION("unreadable, unparsable, and wrongly-typed inputs exit with code 2") {
    REQUIRE(run_cli("validate " + tmp_path("does_not_exist.json")) == 2);
    const std::string path = tmp_path("garbage.json");
    spit(path, "{ not json");
    REQUIRE(run_cli("validate " + path) == 2);
    std::string output;
    REQUIRE(run_cli("signalling " + data_path("lightcone.json"), &output) == 2);
    REQUIRE_THAT(output, ContainsSubstring("network or process document"));
  }

  SECTION("signalling prints the switch edges and the linear chain") {
    std::string output;
    REQUIRE(run_cli("signalling " + data_path("qswitch.json"), &output) == 0);
    REQUIRE_THAT(output, ContainsSubstring("A^O -> B^I"));
    REQUIRE_THAT(output, ContainsSubstring("B^O -> A^I"));
    REQUIRE(run_cli("signalling " + data_path("chain.json"), &output) == 0);
    REQUIRE(output == "a0 -> b0\nb0 -> c0\nc0 -> c1\n");
  }

  SECTION("signalling writes parseable DOT") {
    const std::string dot_file = tmp_path("switch_sig.dot");
    REQUIRE(run_cli("signalling " + data_path("qswitch.json") + " --dot " + dot_file) == 0);
    const std::string dot = slurp(dot_file);
    require_parseable_dot(dot, "signalling");
    REQUIRE_THAT(dot, ContainsSubstring("\"A^O\" -> \"B^I\";"));
  }

  SECTION("audit reports the forced cycle of the pointlike realisation") {
    std::string output;
    REQUIRE(run_cli("audit " + data_path("qswitch_pointlike.json") + " --mode cyclicity",
                    &output) == 0);
    REQUIRE_THAT(output, ContainsSubstring("forced signalling cycle: p_A -> p_B -> p_A"));
    REQUIRE_THAT(output, ContainsSubstring("relativistic causality: no"));
    REQUIRE_THAT(output, ContainsSubstring("verdict: consistent"));
  }

  SECTION("audit verifies the fine-graining bundle end to end") {
    std::string output;
    REQUIRE(run_cli("audit " + data_path("qswitch_bundle.json") + " --mode finegraining",
                    &output) == 0);
    REQUIRE_THAT(output, ContainsSubstring("coarse parties: 4"));
    REQUIRE_THAT(output, ContainsSubstring("finer parties: 6"));
    REQUIRE_THAT(output, ContainsSubstring("witnesses verified: 25 of 25"));
    REQUIRE_THAT(output, ContainsSubstring("finer order: C A1 B1 A2 B2 D"));
    REQUIRE_THAT(output, ContainsSubstring("verdict: consistent"));
  }

  SECTION("audit names a bundle without witnesses as the failure cause") {
    Document doc = load_document_file(data_path("qswitch_bundle.json"));
    doc.realisation->witnesses.clear();
    const std::string path = tmp_path("no_witnesses.json");
    save_document_file(doc, path);
    std::string output;
    REQUIRE(run_cli("audit " + path + " --mode finegraining", &output) == 1);
    REQUIRE_THAT(output, ContainsSubstring("no sub-network witnesses"));
  }

  SECTION("a corrupted bundle exits with the parse code") {
    const std::string text = slurp(data_path("qswitch_bundle.json"));
    const std::string path = tmp_path("corrupted.json");
    spit(path, text.substr(0, text.size() / 2));
    REQUIRE(run_cli("audit " + path + " --mode finegraining") == 2);
  }

  SECTION("compat and refine report the known verdicts") {
    std::string output;
    REQUIRE(run_cli("compat " + data_path("qswitch_pointlike.json"), &output) == 1);
    REQUIRE_THAT(output, ContainsSubstring("unmatched-edge"));
    REQUIRE(run_cli("refine " + data_path("qswitch_straddling.json"), &output) == 0);
    REQUIRE_THAT(output, ContainsSubstring("acyclic: no"));
    REQUIRE(run_cli("export-dot " + data_path("lightcone.json"), &output) == 0);
    REQUIRE_THAT(output, ContainsSubstring("digraph regions {"));
  }

  SECTION("the demo battery passes at dimension two") {
    std::string output;
    REQUIRE(run_cli("demo-qswitch --d 2 --seed 7", &output) == 0);
    REQUIRE_THAT(output, ContainsSubstring("Tr W_QS = 16"));
    REQUIRE_THAT(output, ContainsSubstring("Tr W_f = 324"));
    REQUIRE_THAT(output, ContainsSubstring("all checks passed"));
    REQUIRE_THAT(output, !ContainsSubstring("FAIL"));
  }

  SECTION("the demo rejects dimension one as a usage error") {
    std::string output;
    REQUIRE(run_cli("demo-qswitch --d 1", &output) == 2);
    REQUIRE_THAT(output, ContainsSubstring("at least 2"));
  }
}
