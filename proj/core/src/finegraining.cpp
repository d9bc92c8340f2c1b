#include "qcnet/finegraining.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qcnet {

namespace {

std::vector<std::string> names_of(const std::vector<SystemLabel>& systems) {
  std::vector<std::string> out;
  out.reserve(systems.size());
  for (const auto& s : systems) out.push_back(s.name);
  return out;
}

std::string joined(const std::vector<std::string>& names) {
  std::ostringstream os;
  for (std::size_t k = 0; k < names.size(); ++k) os << (k ? "," : "") << names[k];
  return os.str();
}

/** Same labels as sets (name and dimension), ignoring order. */
bool same_label_set(const std::vector<SystemLabel>& a, const std::vector<SystemLabel>& b) {
  auto key = [](const std::vector<SystemLabel>& v) {
    std::set<std::pair<std::string, std::size_t>> s;
    for (const auto& l : v) s.insert({l.name, l.dim});
    return s;
  };
  return key(a) == key(b);
}

/**
 * Checks that `f` carries every system of `coarse_side` into the fine side,
 * with disjoint images that exactly cover `fine_side`.  Throws on violation;
 * `role` names the direction in messages.
 */
void check_side(const SystemsFineGraining& f, const std::vector<SystemLabel>& coarse_side,
                const std::vector<SystemLabel>& fine_side, const std::string& role) {
  std::set<std::string> fine_names;
  for (const auto& s : fine_side) fine_names.insert(s.name);
  std::set<std::string> used;
  for (const auto& s : coarse_side) {
    const auto it = f.assign.find(s.name);
    if (it == f.assign.end() || it->second.empty()) {
      throw Error("fine-graining has no image for " + role + " '" + s.name + "'");
    }
    for (const auto& fine_name : it->second) {
      if (!fine_names.count(fine_name)) {
        throw Error("fine-graining maps " + role + " '" + s.name + "' to '" + fine_name +
                    "', which is not a fine " + role);
      }
      if (!used.insert(fine_name).second) {
        throw Error("fine system '" + fine_name + "' lies in two images");
      }
    }
  }
  for (const auto& name : fine_names) {
    if (!used.count(name)) {
      throw Error("fine " + role + " '" + name + "' is not the image of any coarse system");
    }
  }
}

}  // namespace

std::vector<std::string> fine_image(const SystemsFineGraining& f,
                                    const std::vector<std::string>& coarse) {
  std::vector<std::string> out;
  for (const auto& name : coarse) {
    const auto it = f.assign.find(name);
    if (it == f.assign.end()) {
      throw Error("no fine-graining entry for system '" + name + "'");
    }
    out.insert(out.end(), it->second.begin(), it->second.end());
  }
  return out;
}

SystemsFineGraining identity_fine_graining(const std::vector<std::string>& names) {
  SystemsFineGraining f;
  for (const auto& n : names) f.assign[n] = {n};
  return f;
}

SystemsFineGraining compose_fine_graining(const SystemsFineGraining& inner,
                                          const SystemsFineGraining& outer) {
  SystemsFineGraining out;
  for (const auto& [coarse, mids] : outer.assign) {
    out.assign[coarse] = fine_image(inner, mids);
  }
  return out;
}

MapFineGrainingReport verify_cpm_finegraining(const CPM& coarse, const CPM& fine,
                                              const SystemsFineGraining& f,
                                              const FineGrainingWitness& w, double tol,
                                              std::size_t max_set_size) {
  check_side(f, coarse.inputs(), fine.inputs(), "input");
  check_side(f, coarse.outputs(), fine.outputs(), "output");
  if (!same_label_set(w.enc.inputs(), coarse.inputs())) {
    throw Error("witness encoder inputs must match the coarse inputs");
  }
  if (!same_label_set(w.enc.outputs(), fine.inputs())) {
    throw Error("witness encoder outputs must match the fine inputs");
  }
  if (!same_label_set(w.dec.inputs(), fine.outputs())) {
    throw Error("witness decoder inputs must match the fine outputs");
  }
  if (!same_label_set(w.dec.outputs(), coarse.outputs())) {
    throw Error("witness decoder outputs must match the coarse outputs");
  }

  MapFineGrainingReport report;

  // Witness regularity.  The encoder must be a channel outright; the decoder
  // must preserve trace on everything reachable through fine ∘ enc, which is
  // exactly the statement that tracing the coarse outputs of the recovered map
  // agrees with tracing the fine outputs before decoding.
  const CptpVerdict enc_verdict = is_cptp(w.enc, tol);
  bool witness_ok = true;
  if (!(enc_verdict.cp && enc_verdict.tp)) {
    witness_ok = false;
    report.findings.push_back(
        {"witness-encoder", "encoder is not a channel (violation " +
                                std::to_string(enc_verdict.max_violation) + ")"});
  }
  const CPM reached = compose_sequential(fine, w.enc);
  const CPM recovered = compose_sequential(w.dec, reached);
  {
    const auto reached_margin =
        partial_trace(reached.choi(), names_of(reached.outputs()));
    const auto recovered_margin =
        partial_trace(recovered.choi(), names_of(recovered.outputs()));
    const std::vector<std::string> order = names_of(coarse.inputs());
    const Matrix a = permute_systems(reached_margin, order).dense();
    const Matrix b = permute_systems(recovered_margin, order).dense();
    const double dev = (a - b).cwiseAbs().maxCoeff();
    if (dev > tol) {
      witness_ok = false;
      report.findings.push_back(
          {"witness-decoder",
           "decoder loses trace on the reachable image (deviation " +
               std::to_string(dev) + ")"});
    }
  }
  report.witness_ok = witness_ok;

  // Condition (i): recovery of the coarse map.
  std::vector<std::string> coarse_order = names_of(coarse.inputs());
  for (const auto& s : coarse.outputs()) coarse_order.push_back(s.name);
  const Matrix got = permute_systems(recovered.choi(), coarse_order).dense();
  const Matrix want = permute_systems(coarse.choi(), coarse_order).dense();
  report.recovery_residual = (got - want).cwiseAbs().maxCoeff();
  report.recovery_ok = report.recovery_residual <= tol;
  if (!report.recovery_ok) {
    report.findings.push_back(
        {"recovery", "dec ∘ fine ∘ enc deviates from the coarse map by " +
                         std::to_string(report.recovery_residual)});
  }

  // Condition (ii): every coarse signalling edge survives between the images.
  const SigGraph coarse_sig = signalling_structure(coarse, max_set_size, tol);
  bool signalling_ok = true;
  for (const auto& edge : coarse_sig.edges) {
    const std::vector<std::string> from_list(edge.from.begin(), edge.from.end());
    const std::vector<std::string> to_list(edge.to.begin(), edge.to.end());
    const auto fine_from = fine_image(f, from_list);
    const auto fine_to = fine_image(f, to_list);
    if (!signals(fine, {fine_from.begin(), fine_from.end()},
                 {fine_to.begin(), fine_to.end()}, tol)) {
      signalling_ok = false;
      report.findings.push_back(
          {"unpreserved-edge", "coarse edge {" + joined(from_list) + "} -> {" +
                                   joined(to_list) + "} has no fine counterpart {" +
                                   joined(fine_from) + "} -> {" + joined(fine_to) + "}"});
    }
  }
  report.signalling_ok = signalling_ok;

  report.ok = report.recovery_ok && report.signalling_ok && report.witness_ok;
  return report;
}

NetworkFineGrainingReport verify_network_finegraining(
    const QuantumNetwork& coarse, const QuantumNetwork& fine,
    const SystemsFineGraining& f, const std::vector<SubNetworkWitness>& witnesses,
    double tol, std::size_t max_set_size, std::size_t enumerate_max_maps) {
  std::map<std::string, const SubNetworkWitness*> by_key;
  for (const auto& entry : witnesses) by_key[entry.coarse.key()] = &entry;

  std::vector<SubNetwork> requested;
  if (enumerate_max_maps > 0) {
    requested = enumerate_subnetworks(coarse, enumerate_max_maps);
  } else {
    for (const auto& entry : witnesses) requested.push_back(entry.coarse);
  }

  NetworkFineGrainingReport report;
  for (const auto& sub : requested) {
    const std::string key = sub.key();
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      report.missing.push_back(key);
      continue;
    }
    const SubNetworkWitness& entry = *it->second;
    try {
      const CPM m = induced_map(coarse, entry.coarse);
      const CPM mf = induced_map(fine, entry.fine);
      SystemsFineGraining f_sub;
      for (const auto& s : m.inputs()) f_sub.assign[s.name] = fine_image(f, {s.name});
      for (const auto& s : m.outputs()) f_sub.assign[s.name] = fine_image(f, {s.name});
      const MapFineGrainingReport one =
          verify_cpm_finegraining(m, mf, f_sub, entry.witness, tol, max_set_size);
      if (one.ok) {
        report.verified.push_back(key);
      } else {
        report.failed.push_back(key);
        for (const auto& d : one.findings) {
          report.findings.push_back({d.kind, key + ": " + d.detail});
        }
      }
    } catch (const Error& e) {
      report.failed.push_back(key);
      report.findings.push_back({"structural", key + ": " + e.what()});
    }
  }
  report.ok = report.failed.empty();
  report.complete = report.missing.empty();
  return report;
}

}  // namespace qcnet
