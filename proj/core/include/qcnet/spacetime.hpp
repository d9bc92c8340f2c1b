#pragma once
/**
 * Finite causal structures: named spacetime points with a strict precedence
 * relation, regions over those points, and the induced causal relation
 * between regions.
 *
 * The precedence relation is stored extensionally as ordered pairs.  A
 * well-formed causal order is irreflexive and transitive; `validate_spacetime`
 * reports deviations and `transitive_closure` completes a generating relation.
 * Reachability queries (`precedes`) follow paths, so they are meaningful even
 * on a non-closed relation, and a cyclic relation makes a point precede
 * itself — which is exactly how closed causal loops are expressed here.
 *
 * Regions inherit precedence existentially: R reaches R' when some point of R
 * precedes some point of R'.  A region whose own extent contains a related
 * pair of points reaches itself, so the induced graph carries a self-loop at
 * it by default; self-loops count as directed cycles.  Regions may overlap —
 * two agents can occupy the same stretch of spacetime — so no disjointness is
 * imposed on region lists.
 */
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qcnet/labels.hpp"

namespace qcnet {

/** A finite set of spacetime points with strict precedence pairs (p, q): p ≺ q. */
struct Spacetime {
  std::vector<std::string> points;
  std::set<std::pair<std::string, std::string>> order;
};

/**
 * Structural validation.  Total: returns every finding instead of throwing.
 * Kinds: duplicate-point | unknown-point | self-precedence | missing-transitivity.
 */
std::vector<Diagnostic> validate_spacetime(const Spacetime& st);

/** The same points with the order completed to its transitive closure. */
Spacetime transitive_closure(const Spacetime& st);

/** Whether a path of one or more precedence steps leads from `a` to `b`.
 *  With a = b this detects a closed causal loop through the point. */
bool precedes(const Spacetime& st, const std::string& a, const std::string& b);

/** A named set of spacetime points. */
struct Region {
  std::string name;
  std::set<std::string> points;
};

/** Whether the two regions share at least one point. */
bool overlaps(const Region& a, const Region& b);

/**
 * Validation of regions against a spacetime.  Total.
 * Kinds: duplicate-region | empty-region | unknown-point.
 */
std::vector<Diagnostic> validate_regions(const Spacetime& st,
                                         const std::vector<Region>& regions);

/** Directed graph over named regions induced by a causal order. */
struct RegionCausalStructure {
  std::vector<Region> regions;
  std::set<std::pair<std::string, std::string>> edges;  ///< pairs of region names
};

/**
 * Induced causal relation on regions: edge (R, R') when some point of R
 * precedes some point of R'.  With `include_self_loops` (the default) the rule
 * is applied verbatim to R = R', so a region containing an internally related
 * pair carries a self-loop; pass false to restrict to distinct regions.
 * Throws on empty or duplicate regions or unknown points.
 */
RegionCausalStructure region_causal_structure(const Spacetime& st,
                                              const std::vector<Region>& regions,
                                              bool include_self_loops = true);

/** Whether the directed graph has no directed cycle (a self-loop is a cycle). */
bool is_acyclic(const std::vector<std::string>& nodes,
                const std::set<std::pair<std::string, std::string>>& edges);

/** Whether the region graph has no directed cycle (a self-loop is a cycle). */
bool is_acyclic(const RegionCausalStructure& g);

/** A split of one region into pairwise-disjoint parts that exactly cover it. */
struct Partition {
  Region parent;
  std::vector<Region> parts;
};

/**
 * Replace each partitioned region by its parts; regions without an entry pass
 * through unchanged.  The map is keyed by parent region name.  Throws unless
 * every key matches its partition's parent, every parent matches a listed
 * region point-for-point, and each partition's parts are nonempty, mutually
 * disjoint, exactly cover the parent, and introduce no duplicate names.
 */
std::vector<Region> refine_regions(const std::vector<Region>& coarse,
                                   const std::map<std::string, Partition>& partitions);

/**
 * Causal structure over the refined region list: `refine_regions` followed by
 * `region_causal_structure` on the same spacetime.
 */
RegionCausalStructure refine(const std::vector<Region>& regions,
                             const std::map<std::string, Partition>& partitions,
                             const Spacetime& st, bool include_self_loops = true);

}  // namespace qcnet
