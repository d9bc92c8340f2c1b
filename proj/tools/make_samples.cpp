/*
 * make_samples.cpp — regenerates the sample documents under data/.
 *
 * The samples are deterministic builds of the library's canonical objects,
 * written through the canonical serializer, so rerunning this tool after a
 * construction change refreshes the checked-in files byte for byte.  Usage:
 * make_samples [output-dir]   (default: data).
 */

#include <iostream>
#include <string>

#include "qcnet/analysis.hpp"
#include "qcnet/serialize.hpp"

namespace {

using namespace qcnet;

QuantumNetwork identity_chain() {
  const SystemLabel a0{"a0", 2}, a1{"a1", 2};
  const SystemLabel b0{"b0", 2}, b1{"b1", 2};
  const SystemLabel c0{"c0", 2}, c1{"c1", 2};
  QuantumNetwork net;
  net.maps.emplace("first", CPM::identity(a0, a1));
  net.maps.emplace("second", CPM::identity(b0, b1));
  net.maps.emplace("third", CPM::identity(c0, c1));
  net.comps = {{"first", "a1", "second", "b0"}, {"second", "b1", "third", "c0"}};
  return net;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  try {
    save_document_file(make_document(quantum_switch(2)), dir + "/qswitch.json");
    save_document_file(make_document(identity_chain()), dir + "/chain.json");

    const Realisation pointlike = pointlike_switch_realisation();
    save_document_file(make_document(straddling_switch_realisation().spacetime),
                       dir + "/lightcone.json");
    save_document_file(make_document(pointlike.embedding),
                       dir + "/qswitch_embedding.json");

    RealisationDocument pointlike_doc;
    pointlike_doc.realisation = pointlike;
    pointlike_doc.process = quantum_switch(2);
    save_document_file(make_document(std::move(pointlike_doc)),
                       dir + "/qswitch_pointlike.json");

    RealisationDocument straddling_doc;
    straddling_doc.realisation = straddling_switch_realisation();
    straddling_doc.process = quantum_switch(2);
    save_document_file(make_document(std::move(straddling_doc)),
                       dir + "/qswitch_straddling.json");

    const SwitchFineGraining bundle = fine_grained_switch(2);
    save_document_file(make_document(bundle.witnesses.front()),
                       dir + "/qswitch_witness.json");
    RealisationDocument bundle_doc;
    bundle_doc.realisation = bundle.realisation;
    bundle_doc.process = bundle.coarse;
    bundle_doc.fine_process = bundle.fine;
    bundle_doc.witnesses = bundle.witnesses;
    save_document_file(make_document(std::move(bundle_doc)),
                       dir + "/qswitch_bundle.json");
  } catch (const qcnet::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cout << "samples written to " << dir << "\n";
  return 0;
}
