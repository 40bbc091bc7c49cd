#include "pbn/dependency.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "pbn/specializer.hpp"

namespace pbn {

namespace {

void referenced(const Model& m, const BodyFormula& f, std::vector<RvIndex>& out) {
  if (f.kind == BodyFormula::Kind::Lit) {
    std::vector<SymbolId> params;
    for (const auto& a : f.literal.args) params.push_back(a.id);
    RvIndex rv = m.rv_index(f.literal.parrv, params);
    if (rv >= 0) out.push_back(rv);
    return;
  }
  for (const auto& c : f.children) referenced(m, c, out);
}

}  // namespace

DependencyGraph build_dependency_graph(const Model& model) {
  DependencyGraph g;
  g.parents.resize(model.rv_count());
  g.children.resize(model.rv_count());
  for (RvIndex rv = 0; rv < model.rv_count(); ++rv) {
    GroundRV q = model.ground_rv(rv);
    std::vector<RvIndex> ps;
    for (const auto& c : model.cpd(q.parrv).clauses) {
      if (c.head.size() != q.params.size()) continue;
      std::vector<SymbolId> bind(c.var_names.size(), -1);
      bool applies = true;
      for (std::size_t i = 0; i < c.head.size(); ++i) {
        if (c.head[i].is_var()) {
          bind.at(c.head[i].id) = q.params[i];
        } else if (c.head[i].id != q.params[i]) {
          applies = false;
        }
      }
      if (!applies) continue;
      BodyFormula body = substitute(c.body, bind);
      referenced(model, ground_body(model, body, variable_domains(model, q.parrv, c)), ps);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    g.parents[rv] = std::move(ps);
  }
  for (RvIndex rv = 0; rv < model.rv_count(); ++rv) {
    for (RvIndex p : g.parents[rv]) g.children[p].push_back(rv);
  }
  return g;
}

std::vector<RvIndex> check_acyclic(const DependencyGraph& graph) {
  const int n = graph.size();
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<char> color(n, 0);
  std::vector<RvIndex> stack;
  std::vector<std::size_t> next;
  for (RvIndex root = 0; root < n; ++root) {
    if (color[root]) continue;
    stack.assign(1, root);
    next.assign(1, 0);
    color[root] = 1;
    while (!stack.empty()) {
      RvIndex u = stack.back();
      const auto& ch = graph.children[u];
      if (next.back() < ch.size()) {
        RvIndex v = ch[next.back()++];
        if (color[v] == 1) {
          auto it = std::find(stack.begin(), stack.end(), v);
          std::vector<RvIndex> cycle(it, stack.end());
          cycle.push_back(v);
          return cycle;
        }
        if (color[v] == 0) {
          color[v] = 1;
          stack.push_back(v);
          next.push_back(0);
        }
      } else {
        color[u] = 2;
        stack.pop_back();
        next.pop_back();
      }
    }
  }
  return {};
}

std::vector<RvIndex> topological_order(const DependencyGraph& graph) {
  const int n = graph.size();
  std::vector<int> indeg(n);
  for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(graph.parents[v].size());
  std::priority_queue<RvIndex, std::vector<RvIndex>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<RvIndex> order;
  order.reserve(n);
  while (!ready.empty()) {
    RvIndex u = ready.top();
    ready.pop();
    order.push_back(u);
    for (RvIndex c : graph.children[u]) {
      if (--indeg[c] == 0) ready.push(c);
    }
  }
  if (static_cast<int>(order.size()) != n) throw ModelError("dependency graph has a cycle");
  return order;
}

const std::vector<RvIndex>& children_of(const DependencyGraph& graph, RvIndex rv) {
  if (rv < 0 || rv >= graph.size()) throw ModelError("unknown RV index " + std::to_string(rv));
  return graph.children[rv];
}

std::string dump_edges(const Model& model, const DependencyGraph& graph) {
  std::ostringstream os;
  for (RvIndex p = 0; p < graph.size(); ++p) {
    for (RvIndex c : graph.children[p]) os << model.rv_name(p) << " -> " << model.rv_name(c) << '\n';
  }
  return os.str();
}

std::string cycle_text(const Model& model, const std::vector<RvIndex>& cycle) {
  std::string out;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) out += " -> ";
    out += model.rv_name(cycle[i]);
  }
  return out;
}

}  // namespace pbn
