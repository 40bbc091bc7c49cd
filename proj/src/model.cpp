#include "pbn/model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace pbn {

bool compare(int lhs, Comparator cmp, int rhs) {
  switch (cmp) {
    case Comparator::Less: return lhs < rhs;
    case Comparator::LessEq: return lhs <= rhs;
    case Comparator::Equal: return lhs == rhs;
    case Comparator::GreaterEq: return lhs >= rhs;
    case Comparator::Greater: return lhs > rhs;
  }
  return false;
}

std::string_view comparator_text(Comparator cmp) {
  switch (cmp) {
    case Comparator::Less: return "<";
    case Comparator::LessEq: return "<=";
    case Comparator::Equal: return "=";
    case Comparator::GreaterEq: return ">=";
    case Comparator::Greater: return ">";
  }
  return "?";
}

BodyFormula BodyFormula::falsity() {
  BodyFormula f;
  f.kind = Kind::False;
  return f;
}

BodyFormula BodyFormula::lit(Literal l) {
  BodyFormula f;
  f.kind = Kind::Lit;
  f.literal = std::move(l);
  return f;
}

namespace {

BodyFormula junction(BodyFormula::Kind kind, std::vector<BodyFormula> items) {
  if (items.empty()) throw ModelError("empty conjunction/disjunction");
  BodyFormula f;
  f.kind = kind;
  for (auto& item : items) {
    if (item.kind == kind) {
      for (auto& c : item.children) f.children.push_back(std::move(c));
    } else {
      f.children.push_back(std::move(item));
    }
  }
  if (f.children.size() == 1) return std::move(f.children.front());
  return f;
}

}  // namespace

BodyFormula BodyFormula::conj(std::vector<BodyFormula> items) {
  return junction(Kind::And, std::move(items));
}

BodyFormula BodyFormula::disj(std::vector<BodyFormula> items) {
  return junction(Kind::Or, std::move(items));
}

BodyFormula BodyFormula::count_goal(int counted_var, Literal goal, Comparator cmp, int bound) {
  BodyFormula f;
  f.kind = Kind::Count;
  f.literal = std::move(goal);
  f.count.counted_var = counted_var;
  f.count.cmp = cmp;
  f.count.bound = bound;
  return f;
}

BodyFormula BodyFormula::count_ground(std::vector<BodyFormula> disjuncts, int offset,
                                      Comparator cmp, int bound) {
  BodyFormula f;
  f.kind = Kind::Count;
  f.children = std::move(disjuncts);
  f.count.grounded = true;
  f.count.offset = offset;
  f.count.cmp = cmp;
  f.count.bound = bound;
  return f;
}

bool operator==(const BodyFormula& a, const BodyFormula& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BodyFormula::Kind::True:
    case BodyFormula::Kind::False: return true;
    case BodyFormula::Kind::Lit: return a.literal == b.literal;
    case BodyFormula::Kind::Count:
      return a.count == b.count && a.children == b.children &&
             (a.count.grounded || a.literal == b.literal);
    case BodyFormula::Kind::And:
    case BodyFormula::Kind::Or: return a.children == b.children;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Model

SymbolId Model::intern(std::string_view name) {
  auto it = symbol_ids_.find(std::string(name));
  if (it != symbol_ids_.end()) return it->second;
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.emplace_back(name);
  symbol_ids_.emplace(std::string(name), id);
  return id;
}

std::optional<SymbolId> Model::find_symbol(std::string_view name) const {
  auto it = symbol_ids_.find(std::string(name));
  if (it == symbol_ids_.end()) return std::nullopt;
  return it->second;
}

int Model::add_population(Population p) {
  std::unordered_map<SymbolId, int> ids;
  for (int i = 0; i < static_cast<int>(p.members.size()); ++i) {
    if (!ids.emplace(p.members[i], i).second) {
      throw ModelError("duplicate member '" + symbol_name(p.members[i]) + "' in population " +
                       p.type_name);
    }
  }
  populations_.push_back(std::move(p));
  member_ids_.push_back(std::move(ids));
  return static_cast<int>(populations_.size()) - 1;
}

int Model::add_parrv(ParRVDecl d) {
  std::unordered_map<SymbolId, int> ids;
  for (int i = 0; i < static_cast<int>(d.range.size()); ++i) {
    if (!ids.emplace(d.range[i], i).second) {
      throw ModelError("duplicate state '" + symbol_name(d.range[i]) + "' in range of " + d.name);
    }
  }
  if (d.range.size() < 2) throw ModelError("parrv " + d.name + " needs at least 2 states");
  parrvs_.push_back(std::move(d));
  state_ids_.push_back(std::move(ids));
  cpds_.emplace_back();
  return static_cast<int>(parrvs_.size()) - 1;
}

std::optional<int> Model::find_population(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(populations_.size()); ++i) {
    if (populations_[i].type_name == name) return i;
  }
  return std::nullopt;
}

std::optional<int> Model::find_parrv(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(parrvs_.size()); ++i) {
    if (parrvs_[i].name == name) return i;
  }
  return std::nullopt;
}

int Model::member_index(int population, SymbolId s) const {
  const auto& ids = member_ids_.at(population);
  auto it = ids.find(s);
  return it == ids.end() ? -1 : it->second;
}

int Model::state_index(int parrv, SymbolId s) const {
  const auto& ids = state_ids_.at(parrv);
  auto it = ids.find(s);
  return it == ids.end() ? -1 : it->second;
}

void Model::finalize() {
  for (const auto& pop : populations_) {
    if (pop.members.empty()) throw ModelError("population " + pop.type_name + " is empty");
  }
  rv_base_.assign(parrvs_.size(), 0);
  long total = 0;
  for (std::size_t p = 0; p < parrvs_.size(); ++p) {
    rv_base_[p] = static_cast<int>(total);
    long n = 1;
    for (int t : parrvs_[p].param_types) {
      n *= static_cast<long>(populations_.at(t).members.size());
    }
    total += n;
    if (total > (1L << 30)) throw ModelError("model has too many ground RVs");
  }
  rv_count_ = static_cast<int>(total);
}

int Model::rv_count_of(int parrv) const {
  int end = parrv + 1 < static_cast<int>(rv_base_.size()) ? rv_base_[parrv + 1] : rv_count_;
  return end - rv_base_.at(parrv);
}

RvIndex Model::rv_index(int parrv, std::span<const SymbolId> params) const {
  const auto& decl = parrvs_.at(parrv);
  if (params.size() != decl.param_types.size()) return -1;
  long idx = 0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    int pop = decl.param_types[i];
    int m = member_index(pop, params[i]);
    if (m < 0) return -1;
    idx = idx * static_cast<long>(populations_[pop].members.size()) + m;
  }
  return rv_base_.at(parrv) + static_cast<int>(idx);
}

RvIndex Model::rv_index(const GroundRV& rv) const { return rv_index(rv.parrv, rv.params); }

int Model::rv_parrv(RvIndex i) const {
  auto it = std::upper_bound(rv_base_.begin(), rv_base_.end(), i);
  // Bases of zero-RV parRVs cannot occur: populations are non-empty.
  return static_cast<int>(it - rv_base_.begin()) - 1;
}

GroundRV Model::ground_rv(RvIndex i) const {
  if (i < 0 || i >= rv_count_) throw ModelError("RV index out of range");
  GroundRV rv;
  rv.parrv = rv_parrv(i);
  const auto& decl = parrvs_[rv.parrv];
  long rest = i - rv_base_[rv.parrv];
  rv.params.assign(decl.param_types.size(), -1);
  for (std::size_t k = decl.param_types.size(); k-- > 0;) {
    const auto& pop = populations_[decl.param_types[k]];
    long n = static_cast<long>(pop.members.size());
    rv.params[k] = pop.members[rest % n];
    rest /= n;
  }
  return rv;
}

std::string Model::rv_name(RvIndex i) const {
  GroundRV rv = ground_rv(i);
  std::string out = parrvs_[rv.parrv].name;
  if (!rv.params.empty()) {
    out += '(';
    for (std::size_t k = 0; k < rv.params.size(); ++k) {
      if (k) out += ',';
      out += symbol_name(rv.params[k]);
    }
    out += ')';
  }
  return out;
}

std::string Model::literal_text(const Literal& l, const std::vector<std::string>& var_names) const {
  auto term = [&](const Term& t) -> std::string {
    if (!t.is_var()) return symbol_name(t.id);
    if (t.id >= 0 && t.id < static_cast<int>(var_names.size())) {
      const auto& n = var_names[t.id];
      return n == "_" ? "_" : n;
    }
    return "_V" + std::to_string(t.id);
  };
  std::string out = l.positive ? "" : "not ";
  out += parrvs_.at(l.parrv).name;
  out += '(';
  for (const auto& a : l.args) {
    out += term(a);
    out += ',';
  }
  out += term(l.state);
  out += ')';
  return out;
}

// ---------------------------------------------------------------------------
// Grounding helpers

std::vector<GroundRV> enumerate_rvs(const Model& model) {
  for (const auto& pop : model.populations()) {
    if (pop.members.empty()) throw ModelError("population " + pop.type_name + " is empty");
  }
  std::vector<GroundRV> out;
  out.reserve(model.rv_count());
  for (int i = 0; i < model.rv_count(); ++i) out.push_back(model.ground_rv(i));
  return out;
}

std::vector<CPDQuery> cpd_queries_for(std::string_view parrv, const Model& model) {
  auto p = model.find_parrv(parrv);
  if (!p) throw ModelError("unknown parrv '" + std::string(parrv) + "'");
  for (int t : model.parrv(*p).param_types) {
    if (model.population(t).members.empty()) {
      throw ModelError("population " + model.population(t).type_name + " is empty");
    }
  }
  std::vector<CPDQuery> out;
  int base = model.rv_base(*p);
  for (int i = 0; i < model.rv_count_of(*p); ++i) {
    GroundRV rv = model.ground_rv(base + i);
    out.push_back({rv.parrv, std::move(rv.params)});
  }
  return out;
}

namespace {

void collect_variables(const Literal& l, std::vector<int>& out, std::vector<char>& seen) {
  auto add = [&](const Term& t) {
    if (!t.is_var()) return;
    if (t.id >= static_cast<int>(seen.size())) seen.resize(t.id + 1, 0);
    if (!seen[t.id]) {
      seen[t.id] = 1;
      out.push_back(t.id);
    }
  };
  for (const auto& a : l.args) add(a);
  add(l.state);
}

void collect_variables(const BodyFormula& f, std::vector<int>& out, std::vector<char>& seen) {
  switch (f.kind) {
    case BodyFormula::Kind::Lit: collect_variables(f.literal, out, seen); break;
    case BodyFormula::Kind::Count:
      if (!f.count.grounded) collect_variables(f.literal, out, seen);
      for (const auto& c : f.children) collect_variables(c, out, seen);
      break;
    case BodyFormula::Kind::And:
    case BodyFormula::Kind::Or:
      for (const auto& c : f.children) collect_variables(c, out, seen);
      break;
    default: break;
  }
}

struct DomainCollector {
  const Model& model;
  std::vector<std::vector<SymbolId>>& domains;
  std::vector<char> assigned;

  void assign(const Term& t, const std::vector<SymbolId>& dom) {
    if (!t.is_var() || t.id < 0) return;
    if (t.id >= static_cast<int>(domains.size())) {
      domains.resize(t.id + 1);
    }
    if (t.id >= static_cast<int>(assigned.size())) assigned.resize(t.id + 1, 0);
    if (assigned[t.id]) return;
    assigned[t.id] = 1;
    domains[t.id] = dom;
  }

  void literal(const Literal& l) {
    if (l.parrv < 0) return;
    const auto& decl = model.parrv(l.parrv);
    for (std::size_t i = 0; i < l.args.size() && i < decl.param_types.size(); ++i) {
      assign(l.args[i], model.population(decl.param_types[i]).members);
    }
    assign(l.state, decl.range);
  }

  void formula(const BodyFormula& f) {
    switch (f.kind) {
      case BodyFormula::Kind::Lit: literal(f.literal); break;
      case BodyFormula::Kind::Count:
        if (!f.count.grounded) literal(f.literal);
        for (const auto& c : f.children) formula(c);
        break;
      case BodyFormula::Kind::And:
      case BodyFormula::Kind::Or:
        for (const auto& c : f.children) formula(c);
        break;
      default: break;
    }
  }
};

}  // namespace

std::vector<int> formula_variables(const BodyFormula& f) {
  std::vector<int> out;
  std::vector<char> seen;
  collect_variables(f, out, seen);
  return out;
}

std::vector<std::vector<SymbolId>> variable_domains(const Model& model, int parrv,
                                                    const Clause& clause) {
  std::vector<std::vector<SymbolId>> domains(clause.var_names.size());
  DomainCollector c{model, domains, {}};
  const auto& decl = model.parrv(parrv);
  for (std::size_t i = 0; i < clause.head.size() && i < decl.param_types.size(); ++i) {
    c.assign(clause.head[i], model.population(decl.param_types[i]).members);
  }
  c.formula(clause.body);
  return domains;
}

std::vector<std::vector<SymbolId>> variable_domains(const Model& model, const BodyFormula& body,
                                                    std::size_t var_count) {
  std::vector<std::vector<SymbolId>> domains(var_count);
  DomainCollector c{model, domains, {}};
  c.formula(body);
  return domains;
}

Literal substitute(const Literal& l, std::span<const SymbolId> binding) {
  Literal out = l;
  auto sub = [&](Term& t) {
    if (t.is_var() && t.id >= 0 && t.id < static_cast<int>(binding.size()) && binding[t.id] >= 0) {
      t = Term::constant(binding[t.id]);
    }
  };
  for (auto& a : out.args) sub(a);
  sub(out.state);
  return out;
}

BodyFormula substitute(const BodyFormula& f, std::span<const SymbolId> binding) {
  BodyFormula out;
  out.kind = f.kind;
  out.count = f.count;
  if (f.kind == BodyFormula::Kind::Lit ||
      (f.kind == BodyFormula::Kind::Count && !f.count.grounded)) {
    out.literal = substitute(f.literal, binding);
  }
  out.children.reserve(f.children.size());
  for (const auto& c : f.children) out.children.push_back(substitute(c, binding));
  return out;
}

namespace {

void renumber(Term& t, const std::vector<int>& map) {
  if (t.is_var()) t.id = map.at(t.id);
}

void renumber(Literal& l, const std::vector<int>& map) {
  for (auto& a : l.args) renumber(a, map);
  renumber(l.state, map);
}

void renumber(BodyFormula& f, const std::vector<int>& map) {
  if (f.kind == BodyFormula::Kind::Lit) renumber(f.literal, map);
  if (f.kind == BodyFormula::Kind::Count && !f.count.grounded) {
    renumber(f.literal, map);
    f.count.counted_var = map.at(f.count.counted_var);
  }
  for (auto& c : f.children) renumber(c, map);
}

}  // namespace

void compact_variables(Clause& clause) {
  std::vector<int> order;
  std::vector<char> seen;
  Literal head_lit;
  head_lit.args = clause.head;
  head_lit.state = Term::constant(0);
  collect_variables(head_lit, order, seen);
  collect_variables(clause.body, order, seen);
  std::vector<int> map(clause.var_names.size(), -1);
  std::vector<std::string> names;
  for (int v : order) {
    map.at(v) = static_cast<int>(names.size());
    names.push_back(clause.var_names.at(v));
  }
  for (auto& t : clause.head) renumber(t, map);
  renumber(clause.body, map);
  clause.var_names = std::move(names);
}

bool is_ground(const BodyFormula& f) { return formula_variables(f).empty(); }

// ---------------------------------------------------------------------------
// Validation

namespace {

struct Validator {
  const Model& model;
  ValidationReport& report;

  void add(std::string msg) { report.violations.push_back(std::move(msg)); }

  void check_literal(const Literal& l, const Clause& c, const std::string& where,
                     std::vector<int>& var_kind) {
    const auto& decl = model.parrv(l.parrv);
    if (l.args.size() != decl.param_types.size()) {
      add(where + ": arity mismatch in " + decl.name + ": expected " +
          std::to_string(decl.param_types.size()) + " parameters, got " +
          std::to_string(l.args.size()));
      return;
    }
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      int pop = decl.param_types[i];
      const Term& t = l.args[i];
      if (t.is_var()) {
        note_var(t.id, pop, c, where, var_kind);
      } else if (model.member_index(pop, t.id) < 0) {
        add(where + ": unknown constant '" + model.symbol_name(t.id) + "' for population " +
            model.population(pop).type_name + " in " + model.literal_text(l, c.var_names));
      }
    }
    if (l.state.is_var()) {
      note_var(l.state.id, -1 - l.parrv, c, where, var_kind);
    } else if (model.state_index(l.parrv, l.state.id) < 0) {
      add(where + ": state '" + model.symbol_name(l.state.id) + "' not in range of " + decl.name);
    }
  }

  // var_kind: population index (>= 0) or -1 - parrv for state positions.
  void note_var(int v, int kind, const Clause& c, const std::string& where,
                std::vector<int>& var_kind) {
    constexpr int kUnset = 1 << 30;
    if (v >= static_cast<int>(var_kind.size())) var_kind.resize(v + 1, kUnset);
    if (var_kind[v] == kUnset) {
      var_kind[v] = kind;
      return;
    }
    auto same_type = [&](int a, int b) {
      if (a == b) return true;
      if (a < 0 && b < 0) {
        return model.parrv(-1 - a).range == model.parrv(-1 - b).range;
      }
      return false;
    };
    if (!same_type(var_kind[v], kind)) {
      add(where + ": variable " + c.var_names.at(v) + " used with conflicting types");
    }
  }

  std::vector<int> counted_vars;

  // Each counted variable is local to its count: it may not occur in the
  // head or anywhere else in the body.
  void check_counted_locality(const Clause& c, const std::string& where) {
    for (int v : counted_vars) {
      int uses = 0;
      auto visit = [&](const Literal& l) {
        for (const auto& a : l.args) uses += a.is_var() && a.id == v;
        uses += l.state.is_var() && l.state.id == v;
      };
      std::vector<const BodyFormula*> stack{&c.body};
      bool own_count_seen = false;
      while (!stack.empty()) {
        const BodyFormula* f = stack.back();
        stack.pop_back();
        if (f->kind == BodyFormula::Kind::Lit) visit(f->literal);
        if (f->kind == BodyFormula::Kind::Count && !f->count.grounded) {
          if (f->count.counted_var == v && !own_count_seen) {
            own_count_seen = true;
          } else {
            visit(f->literal);
            if (f->count.counted_var == v) ++uses;
          }
        }
        for (const auto& ch : f->children) stack.push_back(&ch);
      }
      for (const auto& t : c.head) uses += t.is_var() && t.id == v;
      if (uses > 0) {
        add(where + ": counted variable " + c.var_names.at(v) + " occurs outside its count");
      }
    }
    counted_vars.clear();
  }

  void check_formula(const BodyFormula& f, const Clause& c, const std::string& where,
                     std::vector<int>& var_kind) {
    switch (f.kind) {
      case BodyFormula::Kind::Lit: check_literal(f.literal, c, where, var_kind); break;
      case BodyFormula::Kind::Count:
        if (!f.count.grounded) {
          check_literal(f.literal, c, where, var_kind);
          if (!f.literal.positive) add(where + ": count goal must be a positive literal");
          bool occurs = false;
          for (const auto& a : f.literal.args) occurs |= a.is_var() && a.id == f.count.counted_var;
          occurs |= f.literal.state.is_var() && f.literal.state.id == f.count.counted_var;
          if (!occurs) add(where + ": counted variable does not occur in the count goal");
          counted_vars.push_back(f.count.counted_var);
        }
        for (const auto& d : f.children) check_formula(d, c, where, var_kind);
        break;
      case BodyFormula::Kind::And:
      case BodyFormula::Kind::Or:
        for (const auto& d : f.children) check_formula(d, c, where, var_kind);
        break;
      default: break;
    }
  }

  // Non-counted variables of a count goal must be bound by the head or by a
  // positive literal of the enclosing conjunction.
  void check_count_safety(const BodyFormula& f, const std::vector<char>& bound, const Clause& c,
                          const std::string& where) {
    auto check = [&](const BodyFormula& cnt, const std::vector<char>& b) {
      if (cnt.kind != BodyFormula::Kind::Count || cnt.count.grounded) return;
      std::vector<int> vars;
      std::vector<char> seen;
      collect_variables(cnt.literal, vars, seen);
      for (int v : vars) {
        if (v == cnt.count.counted_var) continue;
        if (v >= static_cast<int>(b.size()) || !b[v]) {
          add(where + ": count goal variable " + c.var_names.at(v) + " is not bound");
        }
      }
    };
    if (f.kind == BodyFormula::Kind::And) {
      std::vector<char> b = bound;
      for (const auto& ch : f.children) {
        if (ch.kind == BodyFormula::Kind::Lit && ch.literal.positive) {
          std::vector<int> vars;
          std::vector<char> seen;
          collect_variables(ch.literal, vars, seen);
          for (int v : vars) {
            if (v >= static_cast<int>(b.size())) b.resize(v + 1, 0);
            b[v] = 1;
          }
        }
      }
      for (const auto& ch : f.children) {
        if (ch.kind == BodyFormula::Kind::Count) check(ch, b);
        else if (ch.kind == BodyFormula::Kind::Or || ch.kind == BodyFormula::Kind::And)
          check_count_safety(ch, b, c, where);
      }
    } else if (f.kind == BodyFormula::Kind::Or) {
      for (const auto& ch : f.children) check_count_safety(ch, bound, c, where);
    } else {
      check(f, bound);
    }
  }

  void check_distribution(const Clause& c, const ParRVDecl& decl, const std::string& where) {
    const auto& p = c.distribution.probs;
    if (p.size() != decl.range.size()) {
      add(where + ": distribution has " + std::to_string(p.size()) + " entries, range has " +
          std::to_string(decl.range.size()));
      return;
    }
    double sum = 0.0;
    for (double x : p) {
      if (!(x >= 0.0 && x <= 1.0)) {
        add(where + ": probability outside [0,1]");
        return;
      }
      sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
      std::ostringstream os;
      os << std::setprecision(12) << sum;
      add(where + ": distribution sums to " + os.str());
    }
  }

  void run() {
    for (int p = 0; p < static_cast<int>(model.parrvs().size()); ++p) {
      const auto& decl = model.parrv(p);
      const auto& list = model.cpd(p);
      if (list.clauses.empty()) {
        add("decision list for " + decl.name + " not total: no cpd clauses");
        continue;
      }
      for (std::size_t k = 0; k < list.clauses.size(); ++k) {
        const Clause& c = list.clauses[k];
        std::string where = "cpd " + decl.name + " clause " + std::to_string(k + 1);
        if (c.span.line > 0 && !c.span.file.empty()) {
          where = c.span.file + ":" + std::to_string(c.span.line) + ": " + where;
        }
        check_distribution(c, decl, where);
        std::vector<int> var_kind;
        std::vector<char> head_bound;
        if (c.head.size() != decl.param_types.size()) {
          add(where + ": arity mismatch in head of " + decl.name);
        } else {
          std::vector<char> seen_head;
          for (std::size_t i = 0; i < c.head.size(); ++i) {
            const Term& t = c.head[i];
            if (t.is_var()) {
              if (t.id >= static_cast<int>(seen_head.size())) seen_head.resize(t.id + 1, 0);
              if (seen_head[t.id]) add(where + ": repeated head variable " + c.var_names.at(t.id));
              seen_head[t.id] = 1;
              note_var(t.id, decl.param_types[i], c, where, var_kind);
            } else if (model.member_index(decl.param_types[i], t.id) < 0) {
              add(where + ": unknown constant '" + model.symbol_name(t.id) + "' for population " +
                  model.population(decl.param_types[i]).type_name + " in head");
            }
          }
          head_bound = seen_head;
        }
        check_formula(c.body, c, where, var_kind);
        check_count_safety(c.body, head_bound, c, where);
        check_counted_locality(c, where);
      }
      const Clause& last = list.clauses.back();
      bool general_head =
          std::all_of(last.head.begin(), last.head.end(), [](const Term& t) { return t.is_var(); });
      if (!last.body.is_true() || !general_head) {
        add("decision list for " + decl.name + " not total: last clause must be unconditional");
      }
    }
  }
};

}  // namespace

ValidationReport validate_model(const Model& model) {
  ValidationReport report;
  for (const auto& pop : model.populations()) {
    if (pop.members.empty()) report.violations.push_back("population " + pop.type_name + " is empty");
  }
  Validator{model, report, {}}.run();
  return report;
}

}  // namespace pbn
