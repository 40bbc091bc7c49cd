#ifndef pbn_dependency_hpp
#define pbn_dependency_hpp

#include <string>
#include <vector>

#include "pbn/model.hpp"

namespace pbn {

// Ground parent/child relation. Parents of an RV are every RV referenced by
// the grounded bodies of all clauses of its decision list.
struct DependencyGraph {
  std::vector<std::vector<RvIndex>> parents;   // sorted, per RV
  std::vector<std::vector<RvIndex>> children;  // inverse of parents

  int size() const { return static_cast<int>(parents.size()); }
};

DependencyGraph build_dependency_graph(const Model& model);

// Empty when acyclic; otherwise a cycle that starts and ends with the same RV.
std::vector<RvIndex> check_acyclic(const DependencyGraph& graph);

// Parents before children; ties go to the lower RV index. Throws ModelError on a cycle.
std::vector<RvIndex> topological_order(const DependencyGraph& graph);

const std::vector<RvIndex>& children_of(const DependencyGraph& graph, RvIndex rv);

// `parent -> child` lines.
std::string dump_edges(const Model& model, const DependencyGraph& graph);

std::string cycle_text(const Model& model, const std::vector<RvIndex>& cycle);

}  // namespace pbn

#endif
