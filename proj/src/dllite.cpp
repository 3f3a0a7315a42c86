/*
 * Copyright 2026 the kabv authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "kab/dllite.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <optional>
#include <sstream>

namespace kab {

std::string GroundTerm::str() const {
    if (is_constant()) return name;
    std::ostringstream os;
    os << name << "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ",";
        os << args[i];
    }
    os << ")";
    return os.str();
}

std::string Assertion::str() const {
    std::ostringstream os;
    os << predicate << "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ",";
        os << args[i].str();
    }
    os << ")";
    return os.str();
}

std::string QueryAtom::str() const {
    std::ostringstream os;
    os << predicate << "(";
    for (size_t i = 0; i < terms.size(); ++i) {
        if (i) os << ",";
        os << terms[i].str();
    }
    os << ")";
    return os.str();
}

std::set<GroundTerm> adom(const ABox& a) {
    std::set<GroundTerm> out;
    for (const auto& f : a)
        for (const auto& t : f.args) out.insert(t);
    return out;
}

std::set<std::string> adom_constants(const ABox& a) {
    std::set<std::string> out;
    for (const auto& f : a)
        for (const auto& t : f.args)
            if (t.is_constant()) out.insert(t.name);
    return out;
}

std::vector<std::string> TBox::labels() const {
    std::vector<std::string> out;
    for (const auto& n : negative_concepts) out.push_back(n.label);
    for (const auto& n : negative_roles) out.push_back(n.label);
    for (const auto& f : functionalities) out.push_back(f.label);
    return out;
}

// --- ECQ construction ----------------------------------------------------

EcqPtr Ecq::embedded(UCQ q) {
    auto e = std::make_shared<Ecq>();
    e->kind = Kind::Embedded;
    e->ucq = std::move(q);
    return e;
}

EcqPtr Ecq::truth() { return embedded(UCQ::trivial_true()); }

static EcqPtr make_node(Ecq::Kind k, EcqPtr a, EcqPtr b, std::string var = {}) {
    auto e = std::make_shared<Ecq>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    e->var = std::move(var);
    return e;
}

EcqPtr Ecq::negation(EcqPtr e) { return make_node(Kind::Not, std::move(e), nullptr); }
EcqPtr Ecq::conj(EcqPtr a, EcqPtr b) { return make_node(Kind::And, std::move(a), std::move(b)); }
EcqPtr Ecq::disj(EcqPtr a, EcqPtr b) { return make_node(Kind::Or, std::move(a), std::move(b)); }
EcqPtr Ecq::implies(EcqPtr a, EcqPtr b) {
    return make_node(Kind::Implies, std::move(a), std::move(b));
}
EcqPtr Ecq::exists(std::string v, EcqPtr e) {
    return make_node(Kind::Exists, std::move(e), nullptr, std::move(v));
}
EcqPtr Ecq::forall(std::string v, EcqPtr e) {
    return make_node(Kind::Forall, std::move(e), nullptr, std::move(v));
}

static bool ucq_equal(const UCQ& a, const UCQ& b) {
    if (a.free_vars != b.free_vars) return false;
    if (a.disjuncts.size() != b.disjuncts.size()) return false;
    for (size_t i = 0; i < a.disjuncts.size(); ++i) {
        const auto& x = a.disjuncts[i];
        const auto& y = b.disjuncts[i];
        if (x.free_vars != y.free_vars || x.existential_vars != y.existential_vars ||
            x.atoms != y.atoms)
            return false;
    }
    return true;
}

bool ecq_equal(const Ecq& a, const Ecq& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Ecq::Kind::Embedded:
            return ucq_equal(a.ucq, b.ucq);
        case Ecq::Kind::Not:
            return ecq_equal(*a.lhs, *b.lhs);
        case Ecq::Kind::And:
        case Ecq::Kind::Or:
        case Ecq::Kind::Implies:
            return ecq_equal(*a.lhs, *b.lhs) && ecq_equal(*a.rhs, *b.rhs);
        case Ecq::Kind::Exists:
        case Ecq::Kind::Forall:
            return a.var == b.var && ecq_equal(*a.lhs, *b.lhs);
    }
    return false;
}

std::set<std::string> ecq_free_vars(const Ecq& e) {
    std::set<std::string> out;
    switch (e.kind) {
        case Ecq::Kind::Embedded:
            out.insert(e.ucq.free_vars.begin(), e.ucq.free_vars.end());
            break;
        case Ecq::Kind::Not:
            out = ecq_free_vars(*e.lhs);
            break;
        case Ecq::Kind::And:
        case Ecq::Kind::Or:
        case Ecq::Kind::Implies: {
            out = ecq_free_vars(*e.lhs);
            auto r = ecq_free_vars(*e.rhs);
            out.insert(r.begin(), r.end());
            break;
        }
        case Ecq::Kind::Exists:
        case Ecq::Kind::Forall:
            out = ecq_free_vars(*e.lhs);
            out.erase(e.var);
            break;
    }
    return out;
}

UCQ ucq_substitute(const UCQ& q, const Substitution& s) {
    UCQ out;
    for (const auto& v : q.free_vars)
        if (!s.count(v)) out.free_vars.push_back(v);
    for (const auto& cq : q.disjuncts) {
        ConjunctiveQuery c;
        c.free_vars = out.free_vars;
        c.existential_vars = cq.existential_vars;
        for (const auto& at : cq.atoms) {
            QueryAtom a;
            a.predicate = at.predicate;
            for (const auto& t : at.terms) {
                auto it = t.is_var() ? s.find(t.var) : s.end();
                a.terms.push_back(it == s.end() ? t : QueryTerm::constant(it->second));
            }
            c.atoms.push_back(std::move(a));
        }
        out.disjuncts.push_back(std::move(c));
    }
    return out;
}

EcqPtr ecq_substitute(const EcqPtr& e, const Substitution& s) {
    if (s.empty()) return e;
    switch (e->kind) {
        case Ecq::Kind::Embedded:
            return Ecq::embedded(ucq_substitute(e->ucq, s));
        case Ecq::Kind::Not:
            return Ecq::negation(ecq_substitute(e->lhs, s));
        case Ecq::Kind::And:
            return Ecq::conj(ecq_substitute(e->lhs, s), ecq_substitute(e->rhs, s));
        case Ecq::Kind::Or:
            return Ecq::disj(ecq_substitute(e->lhs, s), ecq_substitute(e->rhs, s));
        case Ecq::Kind::Implies:
            return Ecq::implies(ecq_substitute(e->lhs, s), ecq_substitute(e->rhs, s));
        case Ecq::Kind::Exists:
        case Ecq::Kind::Forall: {
            Substitution inner = s;
            inner.erase(e->var);  // shadowing
            auto body = ecq_substitute(e->lhs, inner);
            return e->kind == Ecq::Kind::Exists ? Ecq::exists(e->var, body)
                                                : Ecq::forall(e->var, body);
        }
    }
    return e;
}

// --- Database evaluation --------------------------------------------------

namespace {

using Env = std::map<std::string, GroundTerm>;

bool match_atom(const QueryAtom& atom, const Assertion& fact, Env& env,
                std::vector<std::string>& trail) {
    if (atom.predicate != fact.predicate || atom.terms.size() != fact.args.size())
        return false;
    size_t mark = trail.size();
    for (size_t i = 0; i < atom.terms.size(); ++i) {
        const auto& t = atom.terms[i];
        const auto& v = fact.args[i];
        if (!t.is_var()) {
            if (t.value != v) goto undo;
            continue;
        }
        {
            auto it = env.find(t.var);
            if (it != env.end()) {
                if (it->second != v) goto undo;
            } else {
                env.emplace(t.var, v);
                trail.push_back(t.var);
            }
        }
    }
    return true;
undo:
    while (trail.size() > mark) {
        env.erase(trail.back());
        trail.pop_back();
    }
    return false;
}

void match_cq(const ConjunctiveQuery& cq, size_t idx,
              const std::map<std::string, std::vector<const Assertion*>>& index,
              const std::set<GroundTerm>& dom, const std::vector<std::string>& frees,
              Env& env, TupleSet& out) {
    if (idx == cq.atoms.size()) {
        // Free variables not constrained by any atom range over the domain.
        std::vector<std::string> unbound;
        for (const auto& v : frees)
            if (!env.count(v)) unbound.push_back(v);
        std::vector<Env> envs{env};
        for (const auto& v : unbound) {
            std::vector<Env> next;
            for (const auto& e : envs)
                for (const auto& d : dom) {
                    Env e2 = e;
                    e2.emplace(v, d);
                    next.push_back(std::move(e2));
                }
            envs = std::move(next);
        }
        for (const auto& e : envs) {
            Tuple tup;
            for (const auto& v : frees) tup.push_back(e.at(v));
            out.insert(std::move(tup));
        }
        return;
    }
    auto it = index.find(cq.atoms[idx].predicate);
    if (it == index.end()) return;
    for (const Assertion* f : it->second) {
        std::vector<std::string> trail;
        if (match_atom(cq.atoms[idx], *f, env, trail)) {
            match_cq(cq, idx + 1, index, dom, frees, env, out);
            for (const auto& v : trail) env.erase(v);
        }
    }
}

} // namespace

TupleSet evaluate_ucq(const UCQ& q, const ABox& a) {
    std::map<std::string, std::vector<const Assertion*>> index;
    for (const auto& f : a) index[f.predicate].push_back(&f);
    auto dom = adom(a);
    TupleSet out;
    for (const auto& cq : q.disjuncts) {
        Env env;
        match_cq(cq, 0, index, dom, q.free_vars, env, out);
    }
    return out;
}

// --- Rewriting ------------------------------------------------------------

namespace {

// Internal variable prefix: cannot collide with parsed identifiers.
std::string rewrite_var(size_t i) { return "~e" + std::to_string(i); }

struct WorkCq {
    std::vector<QueryAtom> atoms;  // canonical form; frees/constants verbatim
};

std::set<std::string> collect_vars(const std::vector<QueryAtom>& atoms) {
    std::set<std::string> vs;
    for (const auto& at : atoms)
        for (const auto& t : at.terms)
            if (t.is_var()) vs.insert(t.var);
    return vs;
}

std::map<std::string, int> occurrence_counts(const std::vector<QueryAtom>& atoms) {
    std::map<std::string, int> n;
    for (const auto& at : atoms)
        for (const auto& t : at.terms)
            if (t.is_var()) n[t.var]++;
    return n;
}

// Canonical form: existential variables renamed so that structurally equal
// queries get byte-equal atom lists. Exact up to 7 existentials (all
// permutations tried), a first-occurrence pass beyond that.
std::vector<QueryAtom> canonical_atoms(std::vector<QueryAtom> atoms,
                                       const std::set<std::string>& frees) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    std::vector<std::string> ex;
    for (const auto& v : collect_vars(atoms))
        if (!frees.count(v)) ex.push_back(v);
    if (ex.empty()) return atoms;

    auto rename = [&](const std::vector<std::string>& order) {
        std::map<std::string, std::string> m;
        for (size_t i = 0; i < order.size(); ++i) m[order[i]] = rewrite_var(i);
        std::vector<QueryAtom> out = atoms;
        for (auto& at : out)
            for (auto& t : at.terms)
                if (t.is_var() && m.count(t.var)) t.var = m[t.var];
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    if (ex.size() <= 7) {
        std::sort(ex.begin(), ex.end());
        std::vector<QueryAtom> best;
        do {
            auto cand = rename(ex);
            if (best.empty() || cand < best) best = cand;
        } while (std::next_permutation(ex.begin(), ex.end()));
        return best;
    }
    // Fallback: deterministic but not a perfect canonical form; duplicates
    // may survive, which costs time, not correctness.
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& at : atoms)
        for (const auto& t : at.terms)
            if (t.is_var() && !frees.count(t.var) && seen.insert(t.var).second)
                order.push_back(t.var);
    return rename(order);
}

QueryAtom concept_form(const BasicConcept& b, const QueryTerm& t, size_t& fresh) {
    if (b.kind == BasicConcept::Kind::Named) return QueryAtom(b.name, t);
    QueryTerm anon = QueryTerm::variable("~f" + std::to_string(fresh++));
    if (!b.role.inverse) return QueryAtom(b.role.name, t, anon);
    return QueryAtom(b.role.name, anon, t);
}

// Unification for the reduce step. Only existential variables may be
// substituted; free variables and constants are rigid.
bool unify_atoms(const QueryAtom& g1, const QueryAtom& g2,
                 const std::set<std::string>& frees,
                 std::map<std::string, QueryTerm>& sigma) {
    if (g1.predicate != g2.predicate || g1.terms.size() != g2.terms.size())
        return false;
    auto resolve = [&](QueryTerm t) {
        while (t.is_var()) {
            auto it = sigma.find(t.var);
            if (it == sigma.end()) break;
            t = it->second;
        }
        return t;
    };
    for (size_t i = 0; i < g1.terms.size(); ++i) {
        QueryTerm a = resolve(g1.terms[i]);
        QueryTerm b = resolve(g2.terms[i]);
        if (a == b) continue;
        bool a_sub = a.is_var() && !frees.count(a.var);
        bool b_sub = b.is_var() && !frees.count(b.var);
        if (a_sub)
            sigma[a.var] = b;
        else if (b_sub)
            sigma[b.var] = a;
        else
            return false;
    }
    return true;
}

std::vector<QueryAtom> apply_sigma(const std::vector<QueryAtom>& atoms,
                                   const std::map<std::string, QueryTerm>& sigma) {
    auto resolve = [&](QueryTerm t) {
        while (t.is_var()) {
            auto it = sigma.find(t.var);
            if (it == sigma.end()) break;
            t = it->second;
        }
        return t;
    };
    std::vector<QueryAtom> out = atoms;
    for (auto& at : out)
        for (auto& t : at.terms) t = resolve(t);
    return out;
}

} // namespace

UCQ rewrite_ucq(const UCQ& q, const std::vector<PositiveInclusion>& positives) {
    std::set<std::string> frees(q.free_vars.begin(), q.free_vars.end());
    std::set<std::vector<QueryAtom>> seen;
    std::vector<std::vector<QueryAtom>> queue;

    auto push = [&](std::vector<QueryAtom> atoms) {
        auto canon = canonical_atoms(std::move(atoms), frees);
        if (seen.insert(canon).second) queue.push_back(std::move(canon));
    };
    for (const auto& cq : q.disjuncts) push(cq.atoms);

    size_t fresh = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        std::vector<QueryAtom> atoms = queue[qi];  // copy: queue can grow
        auto occ = occurrence_counts(atoms);
        auto unbound = [&](const QueryTerm& t) {
            return t.is_var() && !frees.count(t.var) && occ[t.var] == 1;
        };
        // Atom rewriting against the positive inclusions.
        for (size_t i = 0; i < atoms.size(); ++i) {
            const QueryAtom& g = atoms[i];
            for (const auto& inc : positives) {
                bool applies = false;
                QueryTerm anchor = g.terms[0];
                if (g.terms.size() == 1) {
                    applies = inc.rhs.kind == BasicConcept::Kind::Named &&
                              inc.rhs.name == g.predicate;
                } else if (inc.rhs.kind == BasicConcept::Kind::Exists &&
                           inc.rhs.role.name == g.predicate) {
                    if (!inc.rhs.role.inverse && unbound(g.terms[1])) {
                        applies = true;
                        anchor = g.terms[0];
                    } else if (inc.rhs.role.inverse && unbound(g.terms[0])) {
                        applies = true;
                        anchor = g.terms[1];
                    }
                }
                if (!applies) continue;
                std::vector<QueryAtom> next = atoms;
                next[i] = concept_form(inc.lhs, anchor, fresh);
                push(std::move(next));
            }
        }
        // Reduce: unify pairs of atoms to unlock further rewriting.
        for (size_t i = 0; i < atoms.size(); ++i)
            for (size_t j = i + 1; j < atoms.size(); ++j) {
                std::map<std::string, QueryTerm> sigma;
                if (unify_atoms(atoms[i], atoms[j], frees, sigma) && !sigma.empty())
                    push(apply_sigma(atoms, sigma));
            }
    }

    UCQ out;
    out.free_vars = q.free_vars;
    for (const auto& atoms : seen) {
        ConjunctiveQuery cq;
        cq.free_vars = q.free_vars;
        cq.atoms = atoms;
        for (const auto& v : collect_vars(atoms))
            if (!frees.count(v)) cq.existential_vars.push_back(v);
        out.disjuncts.push_back(std::move(cq));
    }
    return out;
}

TupleSet certain_answers(const UCQ& q, const TBox& t, const ABox& a) {
    return evaluate_ucq(rewrite_ucq(q, t.positives), a);
}

// --- Epistemic query evaluation -------------------------------------------

namespace {

bool eval_ecq_node(const Ecq& e, const std::set<GroundTerm>& dom, Env& env,
                   const UcqAnswerFn& leaf) {
    switch (e.kind) {
        case Ecq::Kind::Embedded: {
            Substitution s;
            for (const auto& v : e.ucq.free_vars) {
                auto it = env.find(v);
                if (it == env.end())
                    throw SemanticError("unbound variable " + v + " in embedded query");
                s.emplace(v, it->second);
            }
            return !leaf(ucq_substitute(e.ucq, s)).empty();
        }
        case Ecq::Kind::Not:
            return !eval_ecq_node(*e.lhs, dom, env, leaf);
        case Ecq::Kind::And:
            return eval_ecq_node(*e.lhs, dom, env, leaf) &&
                   eval_ecq_node(*e.rhs, dom, env, leaf);
        case Ecq::Kind::Or:
            return eval_ecq_node(*e.lhs, dom, env, leaf) ||
                   eval_ecq_node(*e.rhs, dom, env, leaf);
        case Ecq::Kind::Implies:
            return !eval_ecq_node(*e.lhs, dom, env, leaf) ||
                   eval_ecq_node(*e.rhs, dom, env, leaf);
        case Ecq::Kind::Exists:
        case Ecq::Kind::Forall: {
            bool want = e.kind == Ecq::Kind::Exists;
            auto saved = env.find(e.var) != env.end()
                             ? std::optional<GroundTerm>(env[e.var])
                             : std::nullopt;
            for (const auto& d : dom) {
                env[e.var] = d;
                bool r = eval_ecq_node(*e.lhs, dom, env, leaf);
                if (r == want) {
                    if (saved)
                        env[e.var] = *saved;
                    else
                        env.erase(e.var);
                    return want;
                }
            }
            if (saved)
                env[e.var] = *saved;
            else
                env.erase(e.var);
            return !want;
        }
    }
    return false;
}

} // namespace

TupleSet eval_ecq_generic(const Ecq& q, const std::vector<std::string>& free_vars,
                          const ABox& a, const UcqAnswerFn& leaf) {
    auto dom = adom(a);
    TupleSet out;
    std::vector<Tuple> tuples{{}};
    for (size_t i = 0; i < free_vars.size(); ++i) {
        std::vector<Tuple> next;
        for (const auto& t : tuples)
            for (const auto& d : dom) {
                Tuple t2 = t;
                t2.push_back(d);
                next.push_back(std::move(t2));
            }
        tuples = std::move(next);
    }
    for (const auto& t : tuples) {
        Env env;
        for (size_t i = 0; i < free_vars.size(); ++i) env.emplace(free_vars[i], t[i]);
        if (eval_ecq_node(q, dom, env, leaf)) out.insert(t);
    }
    return out;
}

bool eval_ecq_closed_generic(const Ecq& q, const ABox& a, const UcqAnswerFn& leaf) {
    auto dom = adom(a);
    Env env;
    return eval_ecq_node(q, dom, env, leaf);
}

TupleSet eval_ecq(const Ecq& q, const std::vector<std::string>& free_vars,
                  const TBox& t, const ABox& a) {
    return eval_ecq_generic(q, free_vars, a,
                            [&](const UCQ& u) { return certain_answers(u, t, a); });
}

bool eval_ecq_closed(const Ecq& q, const TBox& t, const ABox& a) {
    return eval_ecq_closed_generic(
        q, a, [&](const UCQ& u) { return certain_answers(u, t, a); });
}

// --- Unsatisfiability probes ----------------------------------------------

bool funct_violated(const Functionality& f, const ABox& a) {
    std::map<GroundTerm, std::set<GroundTerm>> fillers;
    for (const auto& fact : a) {
        if (fact.predicate != f.role.name || fact.args.size() != 2) continue;
        const GroundTerm& subj = f.role.inverse ? fact.args[1] : fact.args[0];
        const GroundTerm& fill = f.role.inverse ? fact.args[0] : fact.args[1];
        if (fillers[subj].insert(fill).second && fillers[subj].size() > 1) return true;
    }
    return false;
}

namespace {

QueryAtom eta(const Role& r, QueryTerm x, QueryTerm y) {
    return r.inverse ? QueryAtom(r.name, std::move(y), std::move(x))
                     : QueryAtom(r.name, std::move(x), std::move(y));
}

QueryAtom gamma(const BasicConcept& b, const QueryTerm& x, size_t& fresh) {
    return concept_form(b, x, fresh);
}

UCQ boolean_cq(std::vector<QueryAtom> atoms) {
    UCQ q;
    ConjunctiveQuery cq;
    cq.atoms = std::move(atoms);
    std::set<std::string> vs;
    for (const auto& at : cq.atoms)
        for (const auto& t : at.terms)
            if (t.is_var()) vs.insert(t.var);
    cq.existential_vars.assign(vs.begin(), vs.end());
    q.disjuncts.push_back(std::move(cq));
    return q;
}

} // namespace

UCQ unsat_query_neg(const NegativeConceptInclusion& n,
                    const std::vector<PositiveInclusion>& positives) {
    size_t fresh = 0;
    QueryTerm x = QueryTerm::variable("~x");
    UCQ base = boolean_cq({gamma(n.lhs, x, fresh), gamma(n.rhs, x, fresh)});
    return rewrite_ucq(base, positives);
}

UCQ unsat_query_neg(const NegativeRoleInclusion& n,
                    const std::vector<PositiveInclusion>& positives) {
    QueryTerm x1 = QueryTerm::variable("~x1");
    QueryTerm x2 = QueryTerm::variable("~x2");
    UCQ base = boolean_cq({eta(n.lhs, x1, x2), eta(n.rhs, x1, x2)});
    return rewrite_ucq(base, positives);
}

bool is_consistent(const TBox& t, const ABox& a) {
    for (const auto& f : t.functionalities)
        if (funct_violated(f, a)) return false;
    for (const auto& n : t.negative_concepts)
        if (!evaluate_ucq(unsat_query_neg(n, t.positives), a).empty()) return false;
    for (const auto& n : t.negative_roles)
        if (!evaluate_ucq(unsat_query_neg(n, t.positives), a).empty()) return false;
    return true;
}

} // namespace kab
