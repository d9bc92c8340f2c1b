/*
 * serialize.hpp — JSON documents and GraphViz export.
 *
 * Every on-disk artefact is a single JSON document {kind, version, payload}
 * with version 1 and kind one of: network, spacetime, embedding, process,
 * realisation, witness.  Complex numbers are written as [re, im] pairs,
 * matrices as row-major sparse entry lists [row, col, [re, im]], vectors as
 * [index, [re, im]]; exact zeros are omitted.  Object keys are emitted in
 * sorted order and arrays in a fixed order, so `save_document` is canonical:
 * saving a freshly loaded document reproduces the input byte for byte.
 *
 * The DOT exporters render signalling graphs and region causal structures
 * with quoted node names, brace-joined labels for set-valued endpoints, and
 * deterministic node and edge ordering, so their output is diff-stable.
 */

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcnet/embedding.hpp"
#include "qcnet/network.hpp"
#include "qcnet/process.hpp"
#include "qcnet/signalling.hpp"
#include "qcnet/spacetime.hpp"

namespace qcnet {

/** The kind tag of a document; fixes which payload field is present. */
enum class DocKind {
  Network,      ///< a QuantumNetwork
  Spacetime,    ///< a Spacetime
  Embedding,    ///< an Embedding (regions carry their own points)
  Process,      ///< a ProcessMatrix
  Realisation,  ///< a Realisation plus the optional objects audits consume
  Witness,      ///< a single SubNetworkWitness
};

/** The kind tag as it appears in the JSON document. */
std::string doc_kind_name(DocKind kind);

/**
 * A realisation bundle.  The realisation itself is always present; the
 * process, the finer process, and the sub-network witnesses are optional
 * extras that the audit commands require (and report as missing when an
 * audit needs them).
 */
struct RealisationDocument {
  Realisation realisation;
  std::optional<ProcessMatrix> process;       ///< process the network realises
  std::optional<ProcessMatrix> fine_process;  ///< process of the finer network
  std::vector<SubNetworkWitness> witnesses;   ///< per sub-network witnesses
};

/**
 * One loadable document.  Exactly the payload member matching `kind` is
 * engaged; the others stay disengaged.
 */
struct Document {
  DocKind kind = DocKind::Network;
  std::optional<QuantumNetwork> network;
  std::optional<Spacetime> spacetime;
  std::optional<Embedding> embedding;
  std::optional<ProcessMatrix> process;
  std::optional<RealisationDocument> realisation;
  std::optional<SubNetworkWitness> witness;
};

/** Wraps a network as a document. */
Document make_document(QuantumNetwork net);
/** Wraps a spacetime as a document. */
Document make_document(Spacetime st);
/** Wraps an embedding as a document. */
Document make_document(Embedding emb);
/** Wraps a process as a document. */
Document make_document(ProcessMatrix process);
/** Wraps a realisation bundle as a document. */
Document make_document(RealisationDocument bundle);
/** Wraps a sub-network witness as a document. */
Document make_document(SubNetworkWitness witness);

/** Canonical JSON text of the document (two-space indent, sorted keys,
 *  trailing newline). */
std::string save_document(const Document& doc);

/** Parses a document from JSON text.  Throws Error on malformed JSON, on an
 *  unknown kind or version, and on any payload that does not match the
 *  schema (bad shapes, out-of-range indices, mismatched labels). */
Document load_document(const std::string& text);

/** `save_document` to a file.  Throws Error when the file cannot be written. */
void save_document_file(const Document& doc, const std::string& path);

/** `load_document` from a file.  Throws Error when the file cannot be read. */
Document load_document_file(const std::string& path);

/**
 * GraphViz digraph of a signalling relation.  One node per system, plus one
 * node per set-valued endpoint labelled "{a,b}"; nodes and edges are emitted
 * in sorted order.
 */
std::string to_dot(const SigGraph& g);

/** GraphViz digraph of a region causal structure, nodes and edges sorted. */
std::string to_dot(const RegionCausalStructure& g);

}  // namespace qcnet
