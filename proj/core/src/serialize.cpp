/*
 * serialize.cpp — JSON documents and GraphViz export.
 *
 * The JSON layer is built on the vendored single-header nlohmann parser.
 * Canonicality comes for free from two choices: object keys live in sorted
 * maps, and every numeric payload is written as a double through the
 * shortest round-trip formatter.  Sparse operator entries keep documents
 * small: the bundled switch processes have a handful of nonzero amplitudes
 * inside joint spaces of dimension 10^4 and beyond.
 */

#include "qcnet/serialize.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace qcnet {

namespace {

using Json = nlohmann::json;

/** Fetches an object field, naming it on failure. */
const Json& field(const Json& j, const std::string& key) {
  if (!j.is_object()) throw Error("expected a JSON object with field '" + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw Error("document is missing the field '" + key + "'");
  return *it;
}

std::string str_of(const Json& j, const std::string& what) {
  if (!j.is_string()) throw Error("field '" + what + "' must be a string");
  return j.get<std::string>();
}

Json label_json(const SystemLabel& l) {
  return Json{{"dim", l.dim}, {"name", l.name}};
}

SystemLabel label_from(const Json& j) {
  SystemLabel l;
  l.name = str_of(field(j, "name"), "name");
  const Json& d = field(j, "dim");
  if (!d.is_number_unsigned() || d.get<std::size_t>() == 0)
    throw Error("system '" + l.name + "' must have a positive integer dimension");
  l.dim = d.get<std::size_t>();
  return l;
}

std::vector<SystemLabel> labels_from(const Json& j) {
  if (!j.is_array()) throw Error("expected an array of system labels");
  std::vector<SystemLabel> out;
  for (const Json& e : j) out.push_back(label_from(e));
  return out;
}

Json labels_json(const std::vector<SystemLabel>& ls) {
  Json out = Json::array();
  for (const SystemLabel& l : ls) out.push_back(label_json(l));
  return out;
}

Json complex_json(Cx z) { return Json::array({z.real(), z.imag()}); }

Cx complex_from(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error("a complex number must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

/** Sparse entries [index, [re, im]] of a column vector, zeros omitted. */
Json vector_entries(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) == Cx{0.0, 0.0}) continue;
    out.push_back(Json::array({static_cast<std::size_t>(i), complex_json(v(i))}));
  }
  return out;
}

Vector vector_from(const Json& j, std::size_t dim) {
  if (!j.is_array()) throw Error("vector entries must form an array");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned())
      throw Error("a vector entry must be [index, [re, im]]");
    const std::size_t i = e[0].get<std::size_t>();
    if (i >= dim) throw Error("vector entry index " + std::to_string(i) + " is out of range");
    v(static_cast<Eigen::Index>(i)) = complex_from(e[1]);
  }
  return v;
}

/** Sparse row-major entries [row, col, [re, im]] of a matrix, zeros omitted. */
Json matrix_entries(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(r, c) == Cx{0.0, 0.0}) continue;
      out.push_back(Json::array({static_cast<std::size_t>(r),
                                 static_cast<std::size_t>(c), complex_json(m(r, c))}));
    }
  return out;
}

Matrix matrix_from(const Json& j, std::size_t dim) {
  if (!j.is_array()) throw Error("matrix entries must form an array");
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_unsigned() ||
        !e[1].is_number_unsigned())
      throw Error("a matrix entry must be [row, col, [re, im]]");
    const std::size_t r = e[0].get<std::size_t>();
    const std::size_t c = e[1].get<std::size_t>();
    if (r >= dim || c >= dim)
      throw Error("matrix entry index (" + std::to_string(r) + ", " + std::to_string(c) +
                  ") is out of range");
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from(e[2]);
  }
  return m;
}

Json operator_json(const LabeledOperator& op) {
  Json j;
  j["systems"] = labels_json(op.systems());
  switch (op.kind()) {
    case OperatorKind::Matrix:
      j["kind"] = "matrix";
      j["entries"] = matrix_entries(op.mat());
      break;
    case OperatorKind::Vector:
      j["kind"] = "vector";
      j["entries"] = vector_entries(op.vec());
      break;
    case OperatorKind::Ensemble: {
      Json e = Json::array();
      for (const Vector& v : op.vectors()) e.push_back(vector_entries(v));
      j["kind"] = "ensemble";
      j["entries"] = e;
      break;
    }
  }
  return j;
}

LabeledOperator operator_from(const Json& j) {
  std::vector<SystemLabel> systems = labels_from(field(j, "systems"));
  std::size_t dim = 1;
  for (const SystemLabel& l : systems) dim *= l.dim;
  const std::string kind = str_of(field(j, "kind"), "kind");
  const Json& entries = field(j, "entries");
  if (kind == "matrix")
    return LabeledOperator::matrix(std::move(systems), matrix_from(entries, dim));
  if (kind == "vector")
    return LabeledOperator::vector(std::move(systems), vector_from(entries, dim));
  if (kind == "ensemble") {
    if (!entries.is_array() || entries.empty())
      throw Error("an ensemble operator needs at least one vector");
    std::vector<Vector> vectors;
    for (const Json& e : entries) vectors.push_back(vector_from(e, dim));
    return LabeledOperator::ensemble(std::move(systems), std::move(vectors));
  }
  throw Error("unknown operator kind '" + kind + "'");
}

Json cpm_json(const CPM& m) {
  return Json{{"choi", operator_json(m.choi())},
              {"inputs", labels_json(m.inputs())},
              {"outputs", labels_json(m.outputs())}};
}

CPM cpm_from(const Json& j) {
  return CPM(labels_from(field(j, "inputs")), labels_from(field(j, "outputs")),
             operator_from(field(j, "choi")));
}

Json comps_json(const std::vector<Composition>& comps) {
  Json out = Json::array();
  for (const Composition& c : comps)
    out.push_back(Json::array({c.from_map, c.from_sys, c.to_map, c.to_sys}));
  return out;
}

std::vector<Composition> comps_from(const Json& j) {
  if (!j.is_array()) throw Error("compositions must form an array");
  std::vector<Composition> out;
  for (const Json& e : j) {
    if (!e.is_array() || e.size() != 4)
      throw Error("a composition must be [from_map, from_sys, to_map, to_sys]");
    out.push_back({str_of(e[0], "from_map"), str_of(e[1], "from_sys"),
                   str_of(e[2], "to_map"), str_of(e[3], "to_sys")});
  }
  return out;
}

Json network_json(const QuantumNetwork& net) {
  Json maps = Json::object();
  for (const auto& [id, m] : net.maps) maps[id] = cpm_json(m);
  return Json{{"comps", comps_json(net.comps)}, {"maps", maps}};
}

QuantumNetwork network_from(const Json& j) {
  QuantumNetwork net;
  const Json& maps = field(j, "maps");
  if (!maps.is_object()) throw Error("network maps must be an object keyed by map id");
  for (auto it = maps.begin(); it != maps.end(); ++it)
    net.maps.emplace(it.key(), cpm_from(it.value()));
  net.comps = comps_from(field(j, "comps"));
  return net;
}

Json spacetime_json(const Spacetime& st) {
  Json order = Json::array();
  for (const auto& [a, b] : st.order) order.push_back(Json::array({a, b}));
  return Json{{"order", order}, {"points", Json(st.points)}};
}

Spacetime spacetime_from(const Json& j) {
  Spacetime st;
  const Json& points = field(j, "points");
  if (!points.is_array()) throw Error("spacetime points must form an array");
  for (const Json& p : points) st.points.push_back(str_of(p, "points"));
  const Json& order = field(j, "order");
  if (!order.is_array()) throw Error("spacetime order must form an array of pairs");
  for (const Json& e : order) {
    if (!e.is_array() || e.size() != 2)
      throw Error("a precedence must be a [before, after] pair");
    st.order.emplace(str_of(e[0], "order"), str_of(e[1], "order"));
  }
  return st;
}

Json region_json(const Region& r) {
  Json points = Json::array();
  for (const std::string& p : r.points) points.push_back(p);
  return Json{{"name", r.name}, {"points", points}};
}

Region region_from(const Json& j) {
  Region r;
  r.name = str_of(field(j, "name"), "name");
  const Json& points = field(j, "points");
  if (!points.is_array()) throw Error("region points must form an array");
  for (const Json& p : points) r.points.insert(str_of(p, "points"));
  return r;
}

Json embedding_json(const Embedding& emb) {
  Json assign = Json::object();
  for (const auto& [sys, region] : emb.assign) assign[sys] = region_json(region);
  return Json{{"assign", assign}};
}

Embedding embedding_from(const Json& j) {
  Embedding emb;
  const Json& assign = field(j, "assign");
  if (!assign.is_object()) throw Error("embedding assignment must be an object");
  for (auto it = assign.begin(); it != assign.end(); ++it)
    emb.assign.emplace(it.key(), region_from(it.value()));
  return emb;
}

Json partition_json(const Partition& p) {
  Json parts = Json::array();
  for (const Region& r : p.parts) parts.push_back(region_json(r));
  return Json{{"parent", region_json(p.parent)}, {"parts", parts}};
}

Partition partition_from(const Json& j) {
  Partition p;
  p.parent = region_from(field(j, "parent"));
  const Json& parts = field(j, "parts");
  if (!parts.is_array()) throw Error("partition parts must form an array");
  for (const Json& e : parts) p.parts.push_back(region_from(e));
  return p;
}

Json finemap_json(const SystemsFineGraining& f) {
  Json assign = Json::object();
  for (const auto& [coarse, fine] : f.assign) assign[coarse] = Json(fine);
  return Json{{"assign", assign}};
}

SystemsFineGraining finemap_from(const Json& j) {
  SystemsFineGraining f;
  const Json& assign = field(j, "assign");
  if (!assign.is_object()) throw Error("fine-graining assignment must be an object");
  for (auto it = assign.begin(); it != assign.end(); ++it) {
    if (!it.value().is_array())
      throw Error("fine systems of '" + it.key() + "' must form an array");
    std::vector<std::string> fine;
    for (const Json& e : it.value()) fine.push_back(str_of(e, it.key()));
    f.assign.emplace(it.key(), std::move(fine));
  }
  return f;
}

Json process_json(const ProcessMatrix& p) {
  Json parties = Json::array();
  for (const Party& party : p.parties)
    parties.push_back(Json{{"in", label_json(party.in)},
                           {"name", party.name},
                           {"out", label_json(party.out)}});
  return Json{{"parties", parties}, {"w", operator_json(p.w)}};
}

ProcessMatrix process_from(const Json& j) {
  ProcessMatrix p;
  const Json& parties = field(j, "parties");
  if (!parties.is_array()) throw Error("process parties must form an array");
  for (const Json& e : parties)
    p.parties.push_back({str_of(field(e, "name"), "name"), label_from(field(e, "in")),
                         label_from(field(e, "out"))});
  p.w = operator_from(field(j, "w"));
  return p;
}

Json subnetwork_json(const SubNetwork& s) {
  Json ids = Json::array();
  for (const std::string& id : s.map_ids) ids.push_back(id);
  return Json{{"comps", comps_json(s.comps)}, {"map_ids", ids}};
}

SubNetwork subnetwork_from(const Json& j) {
  SubNetwork s;
  const Json& ids = field(j, "map_ids");
  if (!ids.is_array()) throw Error("sub-network map ids must form an array");
  for (const Json& e : ids) s.map_ids.insert(str_of(e, "map_ids"));
  s.comps = comps_from(field(j, "comps"));
  return s;
}

Json witness_json(const SubNetworkWitness& w) {
  return Json{{"coarse", subnetwork_json(w.coarse)},
              {"dec", cpm_json(w.witness.dec)},
              {"enc", cpm_json(w.witness.enc)},
              {"fine", subnetwork_json(w.fine)}};
}

SubNetworkWitness witness_from(const Json& j) {
  return {subnetwork_from(field(j, "coarse")), subnetwork_from(field(j, "fine")),
          {cpm_from(field(j, "enc")), cpm_from(field(j, "dec"))}};
}

Json realisation_json(const RealisationDocument& d) {
  Json partitions = Json::object();
  for (const auto& [name, part] : d.realisation.partitions)
    partitions[name] = partition_json(part);
  Json j{{"embedding", embedding_json(d.realisation.embedding)},
         {"fine_map", finemap_json(d.realisation.fine_map)},
         {"fine_network", network_json(d.realisation.fine_network)},
         {"network", network_json(d.realisation.network)},
         {"partitions", partitions},
         {"spacetime", spacetime_json(d.realisation.spacetime)}};
  if (d.process) j["process"] = process_json(*d.process);
  if (d.fine_process) j["fine_process"] = process_json(*d.fine_process);
  if (!d.witnesses.empty()) {
    Json ws = Json::array();
    for (const SubNetworkWitness& w : d.witnesses) ws.push_back(witness_json(w));
    j["witnesses"] = ws;
  }
  return j;
}

RealisationDocument realisation_from(const Json& j) {
  RealisationDocument d;
  d.realisation.network = network_from(field(j, "network"));
  d.realisation.fine_network = network_from(field(j, "fine_network"));
  d.realisation.fine_map = finemap_from(field(j, "fine_map"));
  d.realisation.spacetime = spacetime_from(field(j, "spacetime"));
  d.realisation.embedding = embedding_from(field(j, "embedding"));
  const Json& partitions = field(j, "partitions");
  if (!partitions.is_object()) throw Error("partitions must be an object keyed by region");
  for (auto it = partitions.begin(); it != partitions.end(); ++it)
    d.realisation.partitions.emplace(it.key(), partition_from(it.value()));
  if (j.contains("process")) d.process = process_from(j.at("process"));
  if (j.contains("fine_process")) d.fine_process = process_from(j.at("fine_process"));
  if (j.contains("witnesses")) {
    const Json& ws = j.at("witnesses");
    if (!ws.is_array()) throw Error("witnesses must form an array");
    for (const Json& e : ws) d.witnesses.push_back(witness_from(e));
  }
  return d;
}

/** Quotes a name for DOT output, escaping backslashes and double quotes. */
std::string dot_quote(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/** Rendering of a set endpoint: the element for singletons, {a,b} otherwise. */
std::string set_node_name(const std::set<std::string>& s) {
  if (s.size() == 1) return *s.begin();
  std::string out = "{";
  bool first = true;
  for (const std::string& e : s) {
    if (!first) out.push_back(',');
    out += e;
    first = false;
  }
  out.push_back('}');
  return out;
}

}  // namespace

std::string doc_kind_name(DocKind kind) {
  switch (kind) {
    case DocKind::Network: return "network";
    case DocKind::Spacetime: return "spacetime";
    case DocKind::Embedding: return "embedding";
    case DocKind::Process: return "process";
    case DocKind::Realisation: return "realisation";
    case DocKind::Witness: return "witness";
  }
  throw Error("unknown document kind");
}

Document make_document(QuantumNetwork net) {
  Document d;
  d.kind = DocKind::Network;
  d.network = std::move(net);
  return d;
}

Document make_document(Spacetime st) {
  Document d;
  d.kind = DocKind::Spacetime;
  d.spacetime = std::move(st);
  return d;
}

Document make_document(Embedding emb) {
  Document d;
  d.kind = DocKind::Embedding;
  d.embedding = std::move(emb);
  return d;
}

Document make_document(ProcessMatrix process) {
  Document d;
  d.kind = DocKind::Process;
  d.process = std::move(process);
  return d;
}

Document make_document(RealisationDocument bundle) {
  Document d;
  d.kind = DocKind::Realisation;
  d.realisation = std::move(bundle);
  return d;
}

Document make_document(SubNetworkWitness witness) {
  Document d;
  d.kind = DocKind::Witness;
  d.witness = std::move(witness);
  return d;
}

std::string save_document(const Document& doc) {
  Json payload;
  const std::string kind = doc_kind_name(doc.kind);
  switch (doc.kind) {
    case DocKind::Network:
      if (!doc.network) throw Error("document of kind 'network' has no network payload");
      payload = network_json(*doc.network);
      break;
    case DocKind::Spacetime:
      if (!doc.spacetime) throw Error("document of kind 'spacetime' has no spacetime payload");
      payload = spacetime_json(*doc.spacetime);
      break;
    case DocKind::Embedding:
      if (!doc.embedding) throw Error("document of kind 'embedding' has no embedding payload");
      payload = embedding_json(*doc.embedding);
      break;
    case DocKind::Process:
      if (!doc.process) throw Error("document of kind 'process' has no process payload");
      payload = process_json(*doc.process);
      break;
    case DocKind::Realisation:
      if (!doc.realisation)
        throw Error("document of kind 'realisation' has no realisation payload");
      payload = realisation_json(*doc.realisation);
      break;
    case DocKind::Witness:
      if (!doc.witness) throw Error("document of kind 'witness' has no witness payload");
      payload = witness_json(*doc.witness);
      break;
  }
  Json j{{"kind", kind}, {"payload", payload}, {"version", 1}};
  return j.dump(2) + "\n";
}

Document load_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  try {
    const Json& version = field(j, "version");
    if (!version.is_number_unsigned() || version.get<std::size_t>() != 1)
      throw Error("unsupported document version (expected 1)");
    const std::string kind = str_of(field(j, "kind"), "kind");
    const Json& payload = field(j, "payload");
    Document d;
    if (kind == "network") {
      d.kind = DocKind::Network;
      d.network = network_from(payload);
    } else if (kind == "spacetime") {
      d.kind = DocKind::Spacetime;
      d.spacetime = spacetime_from(payload);
    } else if (kind == "embedding") {
      d.kind = DocKind::Embedding;
      d.embedding = embedding_from(payload);
    } else if (kind == "process") {
      d.kind = DocKind::Process;
      d.process = process_from(payload);
    } else if (kind == "realisation") {
      d.kind = DocKind::Realisation;
      d.realisation = realisation_from(payload);
    } else if (kind == "witness") {
      d.kind = DocKind::Witness;
      d.witness = witness_from(payload);
    } else {
      throw Error("unknown document kind '" + kind + "'");
    }
    return d;
  } catch (const Json::exception& e) {
    throw Error(std::string("document does not match the schema: ") + e.what());
  }
}

void save_document_file(const Document& doc, const std::string& path) {
  const std::string text = save_document(doc);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw Error("cannot write file '" + path + "'");
}

Document load_document_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_document(buffer.str());
}

std::string to_dot(const SigGraph& g) {
  std::set<std::string> nodes;
  for (const SystemLabel& s : g.systems) nodes.insert(s.name);
  std::set<std::pair<std::string, std::string>> edges;
  for (const SigEdge& e : g.edges) {
    const std::string from = set_node_name(e.from);
    const std::string to = set_node_name(e.to);
    nodes.insert(from);
    nodes.insert(to);
    edges.emplace(from, to);
  }
  std::ostringstream out;
  out << "digraph signalling {\n";
  for (const std::string& n : nodes) out << "  " << dot_quote(n) << ";\n";
  for (const auto& [from, to] : edges)
    out << "  " << dot_quote(from) << " -> " << dot_quote(to) << ";\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(const RegionCausalStructure& g) {
  std::ostringstream out;
  out << "digraph regions {\n";
  std::set<std::string> names;
  std::map<std::string, const Region*> by_name;
  for (const Region& r : g.regions) {
    names.insert(r.name);
    by_name.emplace(r.name, &r);
  }
  for (const std::string& n : names) {
    const Region& r = *by_name.at(n);
    const bool self_named = r.points.size() == 1 && *r.points.begin() == r.name;
    out << "  " << dot_quote(n);
    if (!self_named) {
      std::string label = n + " " + set_node_name(r.points);
      if (r.points.size() == 1) label = n + " {" + *r.points.begin() + "}";
      out << " [label=" << dot_quote(label) << "]";
    }
    out << ";\n";
  }
  for (const auto& [from, to] : g.edges)
    out << "  " << dot_quote(from) << " -> " << dot_quote(to) << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace qcnet
