#include "pbn/specializer.hpp"

#include <chrono>
#include <numeric>
#include <random>

#include "pbn/evaluator.hpp"
#include "pbn/state_kb.hpp"

namespace pbn {

const DecisionList& SpecializedProgram::list_for(RvIndex q) const {
  const auto& slot = lists.at(q);
  if (slot) return *slot;
  return model->cpd(model->rv_parrv(q));
}

EvidenceView::EvidenceView(const Model& model, const Evidence& evidence)
    : observed_(model.rv_count(), -1) {
  for (const auto& [rv, st] : evidence.assignments) observed_.at(rv) = st;
}

BodyFormula specialize_literal(const Model& model, const Literal& lit, const EvidenceView& ev) {
  std::vector<SymbolId> params;
  params.reserve(lit.args.size());
  for (const auto& a : lit.args) {
    if (a.is_var()) return BodyFormula::lit(lit);
    params.push_back(a.id);
  }
  if (lit.state.is_var()) return BodyFormula::lit(lit);
  RvIndex rv = model.rv_index(lit.parrv, params);
  bool holds;
  if (rv < 0) {
    holds = false;
  } else if (ev.is_observed(rv)) {
    holds = ev.observed_state(rv) == model.state_index(lit.parrv, lit.state.id);
  } else {
    return BodyFormula::lit(lit);
  }
  return holds == lit.positive ? BodyFormula::truth() : BodyFormula::falsity();
}

BodyFormula specialize_literals(const Model& model, const BodyFormula& f, const EvidenceView& ev) {
  if (f.kind == BodyFormula::Kind::Lit) return specialize_literal(model, f.literal, ev);
  BodyFormula out = f;
  for (auto& c : out.children) c = specialize_literals(model, c, ev);
  return out;
}

namespace {

bool holds_for_all(int lo, int hi, Comparator cmp, int bound) {
  for (int k = lo; k <= hi; ++k) {
    if (!compare(k, cmp, bound)) return false;
  }
  return true;
}

bool holds_for_none(int lo, int hi, Comparator cmp, int bound) {
  for (int k = lo; k <= hi; ++k) {
    if (compare(k, cmp, bound)) return false;
  }
  return true;
}

}  // namespace

BodyFormula simplify_body(const BodyFormula& f) {
  using K = BodyFormula::Kind;
  switch (f.kind) {
    case K::True:
    case K::False:
    case K::Lit: return f;
    case K::Or:
    case K::And: {
      const bool is_or = f.kind == K::Or;
      std::vector<BodyFormula> kept;
      for (const auto& c : f.children) {
        BodyFormula s = simplify_body(c);
        if (s.kind == (is_or ? K::True : K::False)) return s;
        if (s.kind == (is_or ? K::False : K::True)) continue;
        if (s.kind == f.kind) {
          for (auto& g : s.children) kept.push_back(std::move(g));
        } else {
          kept.push_back(std::move(s));
        }
      }
      if (kept.empty()) return is_or ? BodyFormula::falsity() : BodyFormula::truth();
      return is_or ? BodyFormula::disj(std::move(kept)) : BodyFormula::conj(std::move(kept));
    }
    case K::Count: {
      if (!f.count.grounded) return f;
      int offset = f.count.offset;
      std::vector<BodyFormula> kept;
      for (const auto& c : f.children) {
        BodyFormula s = simplify_body(c);
        if (s.is_true()) {
          ++offset;
        } else if (!s.is_false()) {
          kept.push_back(std::move(s));
        }
      }
      int lo = offset;
      int hi = offset + static_cast<int>(kept.size());
      if (holds_for_all(lo, hi, f.count.cmp, f.count.bound)) return BodyFormula::truth();
      if (holds_for_none(lo, hi, f.count.cmp, f.count.bound)) return BodyFormula::falsity();
      return BodyFormula::count_ground(std::move(kept), offset, f.count.cmp, f.count.bound);
    }
  }
  return f;
}

namespace {

const BodyFormula& unwrap(const BodyFormula& f) {
  const BodyFormula* p = &f;
  while ((p->kind == BodyFormula::Kind::And || p->kind == BodyFormula::Kind::Or) &&
         p->children.size() == 1) {
    p = &p->children.front();
  }
  return *p;
}

}  // namespace

bool same_structure(const BodyFormula& a0, const BodyFormula& b0) {
  const BodyFormula& a = unwrap(a0);
  const BodyFormula& b = unwrap(b0);
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BodyFormula::Kind::True:
    case BodyFormula::Kind::False: return true;
    case BodyFormula::Kind::Lit: return a.literal == b.literal;
    case BodyFormula::Kind::Count:
      if (!(a.count == b.count)) return false;
      if (!a.count.grounded && !(a.literal == b.literal)) return false;
      break;
    default: break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_structure(a.children[i], b.children[i])) return false;
  }
  return true;
}

namespace {

class Grounder {
 public:
  explicit Grounder(const std::vector<std::vector<SymbolId>>& domains) : domains_(domains) {}

  BodyFormula ground(const BodyFormula& f, std::vector<SymbolId>& env) {
    using K = BodyFormula::Kind;
    switch (f.kind) {
      case K::True:
      case K::False: return f;
      case K::Lit: return literal(f.literal, env);
      case K::Count: {
        if (f.count.grounded) {
          std::vector<BodyFormula> ds;
          for (const auto& c : f.children) ds.push_back(ground(c, env));
          return BodyFormula::count_ground(std::move(ds), f.count.offset, f.count.cmp,
                                           f.count.bound);
        }
        int v = f.count.counted_var;
        std::vector<BodyFormula> ds;
        Literal goal = f.literal;
        goal.positive = true;
        for (SymbolId s : domain(v)) {
          env_set(env, v, s);
          ds.push_back(literal(goal, env));
        }
        env_set(env, v, -1);
        return BodyFormula::count_ground(std::move(ds), 0, f.count.cmp, f.count.bound);
      }
      case K::Or: {
        std::vector<BodyFormula> out;
        for (const auto& c : f.children) out.push_back(ground(c, env));
        return BodyFormula::disj(std::move(out));
      }
      case K::And: return conjunction(f.children, env);
    }
    return f;
  }

 private:
  const std::vector<SymbolId>& domain(int v) const {
    static const std::vector<SymbolId> kEmpty;
    return v < static_cast<int>(domains_.size()) ? domains_[v] : kEmpty;
  }

  static void env_set(std::vector<SymbolId>& env, int v, SymbolId s) {
    if (v >= static_cast<int>(env.size())) env.resize(v + 1, -1);
    env[v] = s;
  }

  static bool unbound(const std::vector<SymbolId>& env, int v) {
    return v >= static_cast<int>(env.size()) || env[v] < 0;
  }

  std::vector<int> free_vars(const Literal& l, const std::vector<SymbolId>& env) const {
    std::vector<int> out;
    for (int v : formula_variables(BodyFormula::lit(l))) {
      if (unbound(env, v)) out.push_back(v);
    }
    return out;
  }

  // All groundings of a literal's free variables, joined by Or (positive)
  // or And (negated).
  BodyFormula literal(const Literal& l, std::vector<SymbolId>& env) {
    std::vector<int> vars = free_vars(l, env);
    if (vars.empty()) return BodyFormula::lit(substitute(l, env));
    std::vector<BodyFormula> items;
    expand(l, vars, 0, env, items);
    for (int v : vars) env_set(env, v, -1);
    if (items.empty()) return l.positive ? BodyFormula::falsity() : BodyFormula::truth();
    return l.positive ? BodyFormula::disj(std::move(items)) : BodyFormula::conj(std::move(items));
  }

  void expand(const Literal& l, const std::vector<int>& vars, std::size_t k,
              std::vector<SymbolId>& env, std::vector<BodyFormula>& items) {
    if (k == vars.size()) {
      items.push_back(BodyFormula::lit(substitute(l, env)));
      return;
    }
    for (SymbolId s : domain(vars[k])) {
      env_set(env, vars[k], s);
      expand(l, vars, k + 1, env, items);
    }
  }

  // A conjunction is split into components connected by shared scope
  // variables (free variables of positive literal conjuncts); each component
  // is grounded over its first scope variable, recursively.
  BodyFormula conjunction(const std::vector<BodyFormula>& kids, std::vector<SymbolId>& env) {
    const std::size_t n = kids.size();
    std::vector<std::vector<int>> vars(n);
    std::vector<char> is_scope;
    for (std::size_t i = 0; i < n; ++i) {
      for (int v : formula_variables(kids[i])) {
        if (unbound(env, v)) vars[i].push_back(v);
      }
      if (kids[i].kind == BodyFormula::Kind::Lit && kids[i].literal.positive) {
        for (int v : vars[i]) {
          if (v >= static_cast<int>(is_scope.size())) is_scope.resize(v + 1, 0);
          is_scope[v] = 1;
        }
      }
    }
    auto scope = [&](int v) { return v < static_cast<int>(is_scope.size()) && is_scope[v]; };

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<int> owner;
    for (std::size_t i = 0; i < n; ++i) {
      for (int v : vars[i]) {
        if (!scope(v)) continue;
        if (v >= static_cast<int>(owner.size())) owner.resize(v + 1, -1);
        if (owner[v] < 0) {
          owner[v] = static_cast<int>(i);
        } else {
          parent[find(i)] = find(static_cast<std::size_t>(owner[v]));
        }
      }
    }

    std::vector<BodyFormula> out;
    std::vector<char> done(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      std::vector<std::size_t> members;
      for (std::size_t j = i; j < n; ++j) {
        if (!done[j] && find(j) == find(i)) {
          members.push_back(j);
          done[j] = 1;
        }
      }
      int first_scope = -1;
      for (std::size_t j : members) {
        for (int v : vars[j]) {
          if (scope(v)) {
            first_scope = v;
            break;
          }
        }
        if (first_scope >= 0) break;
      }
      if (first_scope < 0) {
        for (std::size_t j : members) out.push_back(ground(kids[j], env));
        continue;
      }
      std::vector<BodyFormula> sub;
      for (std::size_t j : members) sub.push_back(kids[j]);
      std::vector<BodyFormula> alts;
      for (SymbolId s : domain(first_scope)) {
        env_set(env, first_scope, s);
        alts.push_back(conjunction(sub, env));
      }
      env_set(env, first_scope, -1);
      if (alts.empty()) {
        out.push_back(BodyFormula::falsity());
      } else {
        out.push_back(BodyFormula::disj(std::move(alts)));
      }
    }
    return BodyFormula::conj(std::move(out));
  }

  const std::vector<std::vector<SymbolId>>& domains_;
};

// nullopt when the guard keeps the body as it was.
std::optional<BodyFormula> specialize_changed(const Model& model, const BodyFormula& body,
                                              const std::vector<std::vector<SymbolId>>& domains,
                                              const EvidenceView& ev) {
  BodyFormula b1 = ground_body(model, body, domains);
  BodyFormula b3 = simplify_body(specialize_literals(model, b1, ev));
  if (same_structure(b3, b1)) return std::nullopt;
  return b3;
}

}  // namespace

BodyFormula ground_body(const Model&, const BodyFormula& body,
                        const std::vector<std::vector<SymbolId>>& domains) {
  Grounder g(domains);
  std::vector<SymbolId> env(domains.size(), -1);
  return g.ground(body, env);
}

BodyFormula specialize_body(const Model& model, const BodyFormula& body,
                            const std::vector<std::vector<SymbolId>>& domains,
                            const EvidenceView& ev) {
  auto changed = specialize_changed(model, body, domains, ev);
  return changed ? *changed : body;
}

SpecResult spec_decision_list(const Model& model, const DecisionList& list, const CPDQuery& q,
                              const EvidenceView& ev) {
  SpecResult result;
  bool unchanged = true;
  bool total = false;
  for (const auto& c : list.clauses) {
    if (c.head.size() != q.params.size()) throw ModelError("CPD-query arity mismatch");
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
    auto changed = specialize_changed(model, body, variable_domains(model, q.parrv, c), ev);
    if (changed) {
      unchanged = false;
      body = std::move(*changed);
    }
    if (body.is_false()) continue;
    Clause out;
    for (SymbolId s : q.params) out.head.push_back(Term::constant(s));
    out.distribution = c.distribution;
    out.body = std::move(body);
    out.var_names = c.var_names;
    out.span = c.span;
    compact_variables(out);
    bool fact = out.body.is_true();
    result.list.clauses.push_back(std::move(out));
    if (fact) {
      total = true;
      break;
    }
  }
  if (!total) throw ModelError("decision list is not total");
  if (unchanged) {
    result.outcome = SpecOutcome::UseOriginal;
    result.list.clauses.clear();
  } else {
    result.outcome = SpecOutcome::Ground;
  }
  return result;
}

SpecializedProgram specialize(std::shared_ptr<const Model> model, const Evidence& evidence) {
  auto start = std::chrono::steady_clock::now();
  SpecializedProgram prog;
  prog.model = model;
  const Model& m = *model;
  EvidenceView ev(m, evidence);
  prog.lists.resize(m.rv_count());
  for (RvIndex rv = 0; rv < m.rv_count(); ++rv) {
    GroundRV g = m.ground_rv(rv);
    CPDQuery q{g.parrv, std::move(g.params)};
    SpecResult r = spec_decision_list(m, m.cpd(q.parrv), q, ev);
    if (r.outcome == SpecOutcome::Ground) prog.lists[rv] = std::move(r.list);
  }
  prog.t_spec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return prog;
}

EquivalenceReport verify_equivalence(const Model& model, const Evidence& evidence,
                                     const SpecializedProgram& specialized, int n_trials,
                                     std::uint64_t seed) {
  EquivalenceReport rep;
  CompiledProgram orig = CompiledProgram::original(model);
  CompiledProgram spec = CompiledProgram::specialized(specialized);
  StateKB kb(model, evidence);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < n_trials; ++t) {
    for (RvIndex rv : kb.unobserved()) {
      std::uniform_int_distribution<int> pick(0, kb.range_size(rv) - 1);
      kb.set_state(rv, pick(rng));
    }
    ++rep.trials;
    for (RvIndex q = 0; q < model.rv_count(); ++q) {
      auto a = orig.apply(kb, q);
      auto b = spec.apply(kb, q);
      ++rep.checks;
      bool same = a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
      if (!same) {
        if (rep.mismatches == 0) {
          rep.first_counterexample =
              "trial " + std::to_string(t) + ": query " + model.rv_name(q) + "\n" + dump_state(kb);
        }
        ++rep.mismatches;
      }
    }
  }
  return rep;
}

std::size_t clause_count(const SpecializedProgram& prog, RvIndex q) {
  return prog.list_for(q).clauses.size();
}

}  // namespace pbn
