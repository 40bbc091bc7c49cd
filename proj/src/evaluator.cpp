#include "pbn/evaluator.hpp"

#include <algorithm>
#include <array>

#include "pbn/specializer.hpp"

namespace pbn {

namespace {

constexpr int kMaxVars = 64;

struct CArg {
  int var = -1;     // >= 0: variable id
  int member = -1;  // constant's member index (var < 0)
  int pop = -1;
  int stride = 1;
};

struct CLit {
  int parrv = -1;
  int base = 0;
  bool positive = true;
  int fixed_rv = -1;  // >= 0 ground; -1 computed at run time; -2 no such RV
  int state = -1;     // state index when constant (-1: not in range)
  int state_var = -1;
  int args_begin = 0;
  int args_count = 0;
};

struct CNode {
  BodyFormula::Kind kind = BodyFormula::Kind::True;
  int lit = -1;
  int child_begin = 0;
  int child_count = 0;
  int vars_begin = 0;  // locals of a Lit / non-counted free vars of a Count
  int vars_count = 0;
  int counted_var = -1;
  bool grounded = false;
  int offset = 0;
  Comparator cmp = Comparator::Less;
  int bound = 0;
};

struct CClause {
  int root = -1;
  int var_count = 0;
  int domain_begin = 0;
  int head_begin = 0;
  int head_count = 0;
  int prob_begin = 0;
  int prob_count = 0;
};

struct CHead {
  int var = -1;
  SymbolId constant = -1;
};

struct CList {
  int begin = 0;
  int count = 0;
};

}  // namespace

struct CompiledProgram::Impl {
  const Model* model = nullptr;
  std::shared_ptr<const Model> owner;
  int nsym = 0;
  std::vector<int> member_of;  // [pop * nsym + sym]
  std::vector<int> state_of;   // [parrv * nsym + sym]

  std::vector<CArg> args;
  std::vector<CLit> lits;
  std::vector<CNode> nodes;
  std::vector<int> children;
  std::vector<int> intro_begin;  // parallel to children: variables introduced
  std::vector<int> intro_count;  // before evaluating that And child
  std::vector<int> vars;
  std::vector<std::vector<SymbolId>> domains;
  std::vector<CHead> heads;
  std::vector<double> probs;
  std::vector<CClause> clauses;
  std::vector<CList> lists;
  std::vector<int> list_of_rv;
  std::vector<int> list_of_parrv;

  void init_tables(const Model& m) {
    model = &m;
    nsym = static_cast<int>(m.symbol_count());
    member_of.assign(m.populations().size() * nsym, -1);
    for (int p = 0; p < static_cast<int>(m.populations().size()); ++p) {
      const auto& mem = m.population(p).members;
      for (int i = 0; i < static_cast<int>(mem.size()); ++i) member_of[p * nsym + mem[i]] = i;
    }
    state_of.assign(m.parrvs().size() * nsym, -1);
    for (int p = 0; p < static_cast<int>(m.parrvs().size()); ++p) {
      const auto& r = m.parrv(p).range;
      for (int i = 0; i < static_cast<int>(r.size()); ++i) state_of[p * nsym + r[i]] = i;
    }
  }
};

namespace {

using Impl = CompiledProgram::Impl;

class Compiler {
 public:
  explicit Compiler(Impl& p) : P(p), m(*p.model) {}

  int clause(int parrv, const Clause& c) {
    const auto& decl = m.parrv(parrv);
    if (c.head.size() != decl.param_types.size()) {
      throw EvalError("arity mismatch in head of " + decl.name);
    }
    return clause_with(c.head, c.var_names.size(), c.body, c.distribution,
                       variable_domains(m, parrv, c));
  }

  int clause_with(const std::vector<Term>& head, std::size_t var_count, const BodyFormula& body,
                  const CategoricalDistribution& dist,
                  std::vector<std::vector<SymbolId>> domains) {
    std::size_t needed = std::max<std::size_t>(var_count, max_var(body) + 1);
    for (const auto& t : head) {
      if (t.is_var()) needed = std::max<std::size_t>(needed, t.id + 1);
    }
    if (needed > static_cast<std::size_t>(kMaxVars)) {
      throw EvalError("clause has more than " + std::to_string(kMaxVars) + " variables");
    }
    domains.resize(needed);
    CClause cc;
    cc.var_count = static_cast<int>(needed);
    cc.domain_begin = static_cast<int>(P.domains.size());
    for (auto& d : domains) P.domains.push_back(std::move(d));
    domain_begin_ = cc.domain_begin;

    cc.head_begin = static_cast<int>(P.heads.size());
    std::vector<char> bound(needed, 0);
    for (const auto& t : head) {
      CHead h;
      if (t.is_var()) {
        h.var = t.id;
        bound[t.id] = 1;
      } else {
        h.constant = t.id;
      }
      P.heads.push_back(h);
    }
    cc.head_count = static_cast<int>(head.size());
    cc.root = node(body, bound);
    cc.prob_begin = static_cast<int>(P.probs.size());
    P.probs.insert(P.probs.end(), dist.probs.begin(), dist.probs.end());
    cc.prob_count = static_cast<int>(dist.probs.size());
    P.clauses.push_back(cc);
    return static_cast<int>(P.clauses.size()) - 1;
  }

  int list(int parrv, const DecisionList& l) {
    CList cl;
    std::vector<int> ids;
    for (const auto& c : l.clauses) ids.push_back(clause(parrv, c));
    cl.begin = ids.empty() ? static_cast<int>(P.clauses.size()) : ids.front();
    cl.count = static_cast<int>(ids.size());
    P.lists.push_back(cl);
    return static_cast<int>(P.lists.size()) - 1;
  }

  int node(const BodyFormula& f, std::vector<char>& bound) {
    CNode n;
    n.kind = f.kind;
    switch (f.kind) {
      case BodyFormula::Kind::True:
      case BodyFormula::Kind::False: break;
      case BodyFormula::Kind::Lit: {
        n.lit = literal(f.literal);
        push_vars(unbound_vars(f.literal, bound, -1), n);
        break;
      }
      case BodyFormula::Kind::Count: {
        n.grounded = f.count.grounded;
        n.offset = f.count.offset;
        n.cmp = f.count.cmp;
        n.bound = f.count.bound;
        if (!f.count.grounded) {
          n.counted_var = f.count.counted_var;
          n.lit = literal(f.literal);
          push_vars(unbound_vars(f.literal, bound, f.count.counted_var), n);
        } else {
          std::vector<int> kids;
          for (const auto& c : f.children) {
            std::vector<char> b = bound;
            kids.push_back(node(c, b));
          }
          push_children(kids, {}, n);
        }
        break;
      }
      case BodyFormula::Kind::Or: {
        std::vector<int> kids;
        for (const auto& c : f.children) {
          std::vector<char> b = bound;
          kids.push_back(node(c, b));
        }
        push_children(kids, {}, n);
        break;
      }
      case BodyFormula::Kind::And: {
        // Scope variables: unbound variables of positive literal conjuncts.
        std::vector<char> scope(bound.size(), 0);
        for (const auto& c : f.children) {
          if (c.kind == BodyFormula::Kind::Lit && c.literal.positive) {
            for (int v : unbound_vars(c.literal, bound, -1)) scope[v] = 1;
          }
        }
        std::vector<int> kids;
        std::vector<std::vector<int>> intros;
        std::vector<char> b = bound;
        for (const auto& c : f.children) {
          std::vector<int> intro;
          for (int v : formula_variables(c)) {
            if (scope[v] && !b[v]) {
              intro.push_back(v);
              b[v] = 1;
            }
          }
          std::vector<char> inner = b;
          kids.push_back(node(c, inner));
          intros.push_back(std::move(intro));
        }
        push_children(kids, intros, n);
        break;
      }
    }
    P.nodes.push_back(n);
    return static_cast<int>(P.nodes.size()) - 1;
  }

 private:
  static std::size_t max_var(const BodyFormula& f) {
    auto vs = formula_variables(f);
    int mx = -1;
    for (int v : vs) mx = std::max(mx, v);
    if (f.kind == BodyFormula::Kind::Count && !f.count.grounded) {
      mx = std::max(mx, f.count.counted_var);
    }
    return static_cast<std::size_t>(mx + 1 > 0 ? mx : 0);
  }

  std::vector<int> unbound_vars(const Literal& l, const std::vector<char>& bound, int skip) {
    BodyFormula tmp = BodyFormula::lit(l);
    std::vector<int> out;
    for (int v : formula_variables(tmp)) {
      if (v == skip) continue;
      if (v >= static_cast<int>(bound.size()) || !bound[v]) out.push_back(v);
    }
    return out;
  }

  void push_vars(const std::vector<int>& vs, CNode& n) {
    n.vars_begin = static_cast<int>(P.vars.size());
    n.vars_count = static_cast<int>(vs.size());
    P.vars.insert(P.vars.end(), vs.begin(), vs.end());
  }

  void push_children(const std::vector<int>& kids, const std::vector<std::vector<int>>& intros,
                     CNode& n) {
    n.child_begin = static_cast<int>(P.children.size());
    n.child_count = static_cast<int>(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      P.children.push_back(kids[i]);
      if (i < intros.size() && !intros[i].empty()) {
        P.intro_begin.push_back(static_cast<int>(P.vars.size()));
        P.intro_count.push_back(static_cast<int>(intros[i].size()));
        P.vars.insert(P.vars.end(), intros[i].begin(), intros[i].end());
      } else {
        P.intro_begin.push_back(0);
        P.intro_count.push_back(0);
      }
    }
  }

  int literal(const Literal& l) {
    const auto& decl = m.parrv(l.parrv);
    if (l.args.size() != decl.param_types.size()) {
      throw EvalError("arity mismatch in literal of " + decl.name);
    }
    CLit c;
    c.parrv = l.parrv;
    c.positive = l.positive;
    c.base = m.rv_base(l.parrv);
    c.args_begin = static_cast<int>(P.args.size());
    c.args_count = static_cast<int>(l.args.size());
    bool ground = true;
    bool missing = false;
    int stride = 1;
    std::vector<CArg> tmp(l.args.size());
    for (std::size_t i = l.args.size(); i-- > 0;) {
      int pop = decl.param_types[i];
      CArg a;
      a.pop = pop;
      a.stride = stride;
      if (l.args[i].is_var()) {
        a.var = l.args[i].id;
        ground = false;
      } else {
        a.member = m.member_index(pop, l.args[i].id);
        if (a.member < 0) missing = true;
      }
      tmp[i] = a;
      stride *= static_cast<int>(m.population(pop).members.size());
    }
    P.args.insert(P.args.end(), tmp.begin(), tmp.end());
    if (missing) {
      c.fixed_rv = -2;
    } else if (ground) {
      int rv = c.base;
      for (const auto& a : tmp) rv += a.member * a.stride;
      c.fixed_rv = rv;
    }
    if (l.state.is_var()) {
      c.state_var = l.state.id;
    } else {
      c.state = m.state_index(l.parrv, l.state.id);
    }
    P.lits.push_back(c);
    return static_cast<int>(P.lits.size()) - 1;
  }

  Impl& P;
  const Model& m;
  int domain_begin_ = 0;
};

class Interp {
 public:
  Interp(const Impl& p, const StateKB& kb, SymbolId* bind, int domain_begin)
      : P(p), kb_(kb), bind_(bind), domain_begin_(domain_begin) {}

  bool node(int idx) const {
    const CNode& n = P.nodes[idx];
    switch (n.kind) {
      case BodyFormula::Kind::True: return true;
      case BodyFormula::Kind::False: return false;
      case BodyFormula::Kind::Lit: {
        const CLit& l = P.lits[n.lit];
        if (n.vars_count == 0) return test(l) == l.positive;
        bool found = exists(&P.vars[n.vars_begin], n.vars_count, [&] { return test(l); });
        return found == l.positive;
      }
      case BodyFormula::Kind::Count: return count(n);
      case BodyFormula::Kind::And: return conj(n, 0);
      case BodyFormula::Kind::Or:
        for (int k = 0; k < n.child_count; ++k) {
          if (node(P.children[n.child_begin + k])) return true;
        }
        return false;
    }
    return false;
  }

 private:
  int member(int pop, SymbolId s) const {
    return (s >= 0 && s < P.nsym) ? P.member_of[pop * P.nsym + s] : -1;
  }
  int state_index(int parrv, SymbolId s) const {
    return (s >= 0 && s < P.nsym) ? P.state_of[parrv * P.nsym + s] : -1;
  }

  [[noreturn]] void uninitialized(int rv) const {
    throw EvalError("uninitialized RV " + P.model->rv_name(rv));
  }

  // Positive reading of a literal under the current bindings.
  bool test(const CLit& l) const {
    int rv = l.fixed_rv;
    if (rv == -1) {
      rv = l.base;
      const CArg* a = &P.args[l.args_begin];
      for (int k = 0; k < l.args_count; ++k) {
        int mi = a[k].var >= 0 ? member(a[k].pop, bind_[a[k].var]) : a[k].member;
        if (mi < 0) return false;
        rv += mi * a[k].stride;
      }
    } else if (rv < 0) {
      return false;
    }
    int cur = kb_.raw_state(rv);
    if (cur < 0) uninitialized(rv);
    int want = l.state_var >= 0 ? state_index(l.parrv, bind_[l.state_var]) : l.state;
    return cur == want;
  }

  template <class F>
  bool exists(const int* vars, int n, const F& f) const {
    if (n == 0) return f();
    int v = vars[0];
    const auto& dom = P.domains[domain_begin_ + v];
    SymbolId saved = bind_[v];
    for (SymbolId s : dom) {
      bind_[v] = s;
      if (exists(vars + 1, n - 1, f)) {
        bind_[v] = saved;
        return true;
      }
    }
    bind_[v] = saved;
    return false;
  }

  bool conj(const CNode& n, int k) const {
    if (k == n.child_count) return true;
    int slot = n.child_begin + k;
    int child = P.children[slot];
    int ic = P.intro_count[slot];
    if (ic == 0) return node(child) && conj(n, k + 1);
    return exists(&P.vars[P.intro_begin[slot]], ic,
                  [&] { return node(child) && conj(n, k + 1); });
  }

  bool count(const CNode& n) const {
    int total = n.offset;
    if (n.grounded) {
      for (int k = 0; k < n.child_count; ++k) total += node(P.children[n.child_begin + k]) ? 1 : 0;
    } else {
      const CLit& goal = P.lits[n.lit];
      int v = n.counted_var;
      SymbolId saved = bind_[v];
      for (SymbolId s : P.domains[domain_begin_ + v]) {
        bind_[v] = s;
        bool hit = n.vars_count == 0
                       ? test(goal)
                       : exists(&P.vars[n.vars_begin], n.vars_count, [&] { return test(goal); });
        total += hit ? 1 : 0;
      }
      bind_[v] = saved;
    }
    return compare(total, n.cmp, n.bound);
  }

  const Impl& P;
  const StateKB& kb_;
  SymbolId* bind_;
  int domain_begin_;
};

}  // namespace

CompiledProgram CompiledProgram::original(const Model& model) {
  auto impl = std::make_shared<Impl>();
  impl->init_tables(model);
  Compiler c(*impl);
  impl->list_of_parrv.resize(model.parrvs().size());
  for (int p = 0; p < static_cast<int>(model.parrvs().size()); ++p) {
    impl->list_of_parrv[p] = c.list(p, model.cpd(p));
  }
  impl->list_of_rv.resize(model.rv_count());
  for (RvIndex q = 0; q < model.rv_count(); ++q) {
    impl->list_of_rv[q] = impl->list_of_parrv[model.rv_parrv(q)];
  }
  return CompiledProgram(std::move(impl));
}

CompiledProgram CompiledProgram::specialized(const SpecializedProgram& prog) {
  const Model& model = *prog.model;
  auto impl = std::make_shared<Impl>();
  impl->owner = prog.model;
  impl->init_tables(model);
  Compiler c(*impl);
  impl->list_of_parrv.assign(model.parrvs().size(), -1);
  impl->list_of_rv.resize(model.rv_count());
  for (RvIndex q = 0; q < model.rv_count(); ++q) {
    int p = model.rv_parrv(q);
    if (prog.uses_original(q)) {
      if (impl->list_of_parrv[p] < 0) impl->list_of_parrv[p] = c.list(p, model.cpd(p));
      impl->list_of_rv[q] = impl->list_of_parrv[p];
    } else {
      impl->list_of_rv[q] = c.list(p, *prog.lists[q]);
    }
  }
  return CompiledProgram(std::move(impl));
}

const Model& CompiledProgram::model() const { return *impl_->model; }

std::span<const double> CompiledProgram::apply(const StateKB& kb, RvIndex q) const {
  const Impl& P = *impl_;
  const CList& list = P.lists[P.list_of_rv.at(q)];
  const Model& m = *P.model;
  const int p = m.rv_parrv(q);
  // Query constants, recovered from the dense index (last parameter fastest).
  std::array<SymbolId, 16> qparams{};
  const auto& decl = m.parrv(p);
  const int arity = static_cast<int>(decl.param_types.size());
  if (arity > static_cast<int>(qparams.size())) throw EvalError("parrv arity too large");
  {
    int rest = q - m.rv_base(p);
    for (int k = arity; k-- > 0;) {
      const auto& mem = m.population(decl.param_types[k]).members;
      int n = static_cast<int>(mem.size());
      qparams[k] = mem[rest % n];
      rest /= n;
    }
  }
  std::array<SymbolId, kMaxVars> bind;
  for (int ci = 0; ci < list.count; ++ci) {
    const CClause& c = P.clauses[list.begin + ci];
    std::fill_n(bind.begin(), c.var_count, -1);
    bool match = true;
    for (int k = 0; k < c.head_count; ++k) {
      const CHead& h = P.heads[c.head_begin + k];
      if (h.var >= 0) {
        bind[h.var] = qparams[k];
      } else if (h.constant != qparams[k]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (Interp(P, kb, bind.data(), c.domain_begin).node(c.root)) {
      return {P.probs.data() + c.prob_begin, static_cast<std::size_t>(c.prob_count)};
    }
  }
  throw EvalError("no clause fired for " + m.rv_name(q) + " (decision list not total)");
}

CategoricalDistribution apply_cpd(const StateKB& kb, const CompiledProgram& prog,
                                  const CPDQuery& q) {
  RvIndex rv = prog.model().rv_index(q.parrv, q.params);
  if (rv < 0) throw EvalError("unknown CPD-query");
  auto d = prog.apply(kb, rv);
  return {std::vector<double>(d.begin(), d.end())};
}

namespace {

bool eval_standalone(const StateKB& kb, const BodyFormula& body, const Bindings& bind) {
  const Model& m = kb.model();
  Impl impl;
  impl.init_tables(m);
  Compiler c(impl);
  std::size_t var_count = bind.size();
  for (int v : formula_variables(body)) var_count = std::max<std::size_t>(var_count, v + 1);
  if (body.kind == BodyFormula::Kind::Count && !body.count.grounded) {
    var_count = std::max<std::size_t>(var_count, body.count.counted_var + 1);
  }
  // Bound variables are passed as head variables; the query supplies none, so
  // seed them through the binding array instead.
  std::vector<Term> head;
  std::vector<std::vector<SymbolId>> domains = variable_domains(m, body, var_count);
  std::vector<char> bound(var_count, 0);
  for (std::size_t v = 0; v < bind.size(); ++v) {
    if (bind[v] >= 0) head.push_back(Term::var(static_cast<int>(v)));
  }
  CategoricalDistribution none;
  int ci = c.clause_with(head, var_count, body, none, std::move(domains));
  const CClause& cc = impl.clauses[ci];
  std::array<SymbolId, kMaxVars> b;
  std::fill(b.begin(), b.end(), -1);
  for (std::size_t v = 0; v < bind.size() && v < b.size(); ++v) b[v] = bind[v];
  return Interp(impl, kb, b.data(), cc.domain_begin).node(cc.root);
}

}  // namespace

bool eval_body(const StateKB& kb, const BodyFormula& body, const Bindings& bind) {
  return eval_standalone(kb, body, bind);
}

bool eval_count(const StateKB& kb, const BodyFormula& count, const Bindings& bind) {
  if (count.kind != BodyFormula::Kind::Count) throw EvalError("eval_count needs a count node");
  return eval_standalone(kb, count, bind);
}

}  // namespace pbn
