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

// Lightweight description logic core: ground terms, assertions, TBoxes over
// basic concepts and roles, unions of conjunctive queries, and the query
// operations the rest of the toolkit is built on (rewriting-based certain
// answers, epistemic query evaluation, unsatisfiability probes).

#ifndef KAB_DLLITE_HPP
#define KAB_DLLITE_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "kab/errors.hpp"

namespace kab {

// Reserved vocabulary. "State" marks intermediate states in two-phase
// transition systems, "Viol" records violated axiom labels, "temp" is the
// distinguished constant carried by the marker, "$v" prefixes minted fresh
// values, "@" prefixes auto-minted axiom labels.
inline const std::string kStatePredicate = "State";
inline const std::string kViolPredicate = "Viol";
inline const std::string kTempConstant = "temp";
inline const std::string kFreshPrefix = "$v";
inline const std::string kLabelPrefix = "@";

// A ground term is either a plain constant or an uninterpreted service call
// f(c1,...,cn) whose arguments are constants.
struct GroundTerm {
    enum class Kind { Constant, Call };
    Kind kind = Kind::Constant;
    std::string name;               // constant name, or call function name
    std::vector<std::string> args;  // call arguments; empty for constants

    GroundTerm() = default;
    static GroundTerm constant(std::string n) {
        GroundTerm t;
        t.kind = Kind::Constant;
        t.name = std::move(n);
        return t;
    }
    static GroundTerm call(std::string fn, std::vector<std::string> a) {
        GroundTerm t;
        t.kind = Kind::Call;
        t.name = std::move(fn);
        t.args = std::move(a);
        return t;
    }

    bool is_constant() const { return kind == Kind::Constant; }
    bool is_call() const { return kind == Kind::Call; }
    std::string str() const;

    friend bool operator==(const GroundTerm& a, const GroundTerm& b) {
        return a.kind == b.kind && a.name == b.name && a.args == b.args;
    }
    friend bool operator!=(const GroundTerm& a, const GroundTerm& b) { return !(a == b); }
    friend bool operator<(const GroundTerm& a, const GroundTerm& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.name != b.name) return a.name < b.name;
        return a.args < b.args;
    }
};

// Concept assertion N(t) or role assertion P(t1,t2), depending on arity.
struct Assertion {
    std::string predicate;
    std::vector<GroundTerm> args;  // size 1 or 2

    Assertion() = default;
    Assertion(std::string p, GroundTerm t) : predicate(std::move(p)), args{std::move(t)} {}
    Assertion(std::string p, GroundTerm t1, GroundTerm t2)
        : predicate(std::move(p)), args{std::move(t1), std::move(t2)} {}

    bool is_concept() const { return args.size() == 1; }
    std::string str() const;

    friend bool operator==(const Assertion& a, const Assertion& b) {
        return a.predicate == b.predicate && a.args == b.args;
    }
    friend bool operator<(const Assertion& a, const Assertion& b) {
        if (a.predicate != b.predicate) return a.predicate < b.predicate;
        return a.args < b.args;
    }
};

// ABoxes are kept canonically sorted; set semantics throughout.
using ABox = std::set<Assertion>;

std::set<GroundTerm> adom(const ABox& a);
std::set<std::string> adom_constants(const ABox& a);

// Roles: a named role P or its inverse P^-.
struct Role {
    std::string name;
    bool inverse = false;

    Role() = default;
    Role(std::string n, bool inv = false) : name(std::move(n)), inverse(inv) {}
    Role flipped() const { return Role(name, !inverse); }
    std::string str() const { return inverse ? "inv " + name : name; }

    friend bool operator==(const Role& a, const Role& b) {
        return a.name == b.name && a.inverse == b.inverse;
    }
    friend bool operator<(const Role& a, const Role& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.inverse < b.inverse;
    }
};

// Basic concept: a named concept N or an unqualified existential exists R.
struct BasicConcept {
    enum class Kind { Named, Exists };
    Kind kind = Kind::Named;
    std::string name;  // named concept
    Role role;         // for Exists

    static BasicConcept named(std::string n) {
        BasicConcept b;
        b.kind = Kind::Named;
        b.name = std::move(n);
        return b;
    }
    static BasicConcept exists(Role r) {
        BasicConcept b;
        b.kind = Kind::Exists;
        b.role = std::move(r);
        return b;
    }
    std::string str() const {
        return kind == Kind::Named ? name : "exists " + role.str();
    }
    friend bool operator==(const BasicConcept& a, const BasicConcept& b) {
        return a.kind == b.kind && a.name == b.name && a.role == b.role;
    }
    friend bool operator<(const BasicConcept& a, const BasicConcept& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.name != b.name) return a.name < b.name;
        return a.role < b.role;
    }
};

// Axioms. Every negative inclusion and functionality assertion carries a
// label: a distinguished constant that names it in Viol facts.
struct PositiveInclusion {
    BasicConcept lhs, rhs;
};
struct NegativeConceptInclusion {
    BasicConcept lhs, rhs;
    std::string label;
};
struct NegativeRoleInclusion {
    Role lhs, rhs;
    std::string label;
};
struct Functionality {
    Role role;
    std::string label;
};

struct TBox {
    std::vector<PositiveInclusion> positives;
    std::vector<NegativeConceptInclusion> negative_concepts;
    std::vector<NegativeRoleInclusion> negative_roles;
    std::vector<Functionality> functionalities;

    bool has_constraints() const {
        return !negative_concepts.empty() || !negative_roles.empty() ||
               !functionalities.empty();
    }
    // All axiom labels, in declaration order (negative concepts, negative
    // roles, then functionalities as stored).
    std::vector<std::string> labels() const;
};

// Query terms are variables or constants. Variables are plain names; the
// distinction between free and existential variables lives in the query.
struct QueryTerm {
    enum class Kind { Var, Const };
    Kind kind = Kind::Var;
    std::string var;
    GroundTerm value;

    static QueryTerm variable(std::string v) {
        QueryTerm t;
        t.kind = Kind::Var;
        t.var = std::move(v);
        return t;
    }
    static QueryTerm constant(GroundTerm g) {
        QueryTerm t;
        t.kind = Kind::Const;
        t.value = std::move(g);
        return t;
    }
    bool is_var() const { return kind == Kind::Var; }
    std::string str() const { return is_var() ? var : value.str(); }

    friend bool operator==(const QueryTerm& a, const QueryTerm& b) {
        return a.kind == b.kind && a.var == b.var && a.value == b.value;
    }
    friend bool operator<(const QueryTerm& a, const QueryTerm& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.var != b.var) return a.var < b.var;
        return a.value < b.value;
    }
};

struct QueryAtom {
    std::string predicate;
    std::vector<QueryTerm> terms;  // 1 or 2

    QueryAtom() = default;
    QueryAtom(std::string p, QueryTerm t) : predicate(std::move(p)), terms{std::move(t)} {}
    QueryAtom(std::string p, QueryTerm t1, QueryTerm t2)
        : predicate(std::move(p)), terms{std::move(t1), std::move(t2)} {}
    std::string str() const;

    friend bool operator==(const QueryAtom& a, const QueryAtom& b) {
        return a.predicate == b.predicate && a.terms == b.terms;
    }
    friend bool operator<(const QueryAtom& a, const QueryAtom& b) {
        if (a.predicate != b.predicate) return a.predicate < b.predicate;
        return a.terms < b.terms;
    }
};

// Conjunctive query over free and existential variables. An empty atom list
// is the trivially true query.
struct ConjunctiveQuery {
    std::vector<std::string> free_vars;
    std::vector<std::string> existential_vars;
    std::vector<QueryAtom> atoms;
};

// Union of conjunctive queries. Every disjunct shares the same free-variable
// tuple (the union's own free_vars).
struct UCQ {
    std::vector<std::string> free_vars;
    std::vector<ConjunctiveQuery> disjuncts;

    static UCQ trivial_true() {
        UCQ q;
        q.disjuncts.emplace_back();
        return q;
    }
    bool is_boolean() const { return free_vars.empty(); }
};

// Answers are tuples aligned with a query's free-variable list.
using Tuple = std::vector<GroundTerm>;
using TupleSet = std::set<Tuple>;

// Substitutions map variable names to ground terms.
using Substitution = std::map<std::string, GroundTerm>;

// Epistemic queries: first-order composition of embedded UCQs, evaluated
// under an active-domain semantics with certain-answer leaves.
struct Ecq;
using EcqPtr = std::shared_ptr<const Ecq>;

struct Ecq {
    enum class Kind { Embedded, Not, And, Or, Implies, Exists, Forall };
    Kind kind = Kind::Embedded;
    UCQ ucq;          // Embedded
    std::string var;  // Exists / Forall
    EcqPtr lhs, rhs;  // children; unary nodes use lhs

    static EcqPtr embedded(UCQ q);
    static EcqPtr truth();  // embedded trivially-true UCQ
    static EcqPtr negation(EcqPtr e);
    static EcqPtr conj(EcqPtr a, EcqPtr b);
    static EcqPtr disj(EcqPtr a, EcqPtr b);
    static EcqPtr implies(EcqPtr a, EcqPtr b);
    static EcqPtr exists(std::string v, EcqPtr e);
    static EcqPtr forall(std::string v, EcqPtr e);
};

bool ecq_equal(const Ecq& a, const Ecq& b);
std::set<std::string> ecq_free_vars(const Ecq& e);
EcqPtr ecq_substitute(const EcqPtr& e, const Substitution& s);

UCQ ucq_substitute(const UCQ& q, const Substitution& s);

// --- Operations ---------------------------------------------------------

// Rewrites q against the positive inclusions so that evaluating the result
// directly over an ABox yields the certain answers over the full TBox.
// Output disjuncts are deduplicated modulo renaming of existential
// variables and canonically ordered.
UCQ rewrite_ucq(const UCQ& q, const std::vector<PositiveInclusion>& positives);

// Certain answers of q over (T, A), computed as the database evaluation of
// the rewriting. A need not be consistent with T; callers that require
// consistency must check it first.
TupleSet certain_answers(const UCQ& q, const TBox& t, const ABox& a);

// Plain database evaluation of a UCQ over an ABox (no rewriting).
TupleSet evaluate_ucq(const UCQ& q, const ABox& a);

// Epistemic query evaluation. Free variables and quantifiers range over the
// constants of adom(A). The leaf function maps an embedded (possibly
// partially substituted) UCQ to its answer set; eval_ecq plugs in
// certain_answers, other modules plug in their own leaf evaluation.
using UcqAnswerFn = std::function<TupleSet(const UCQ&)>;

TupleSet eval_ecq_generic(const Ecq& q, const std::vector<std::string>& free_vars,
                          const ABox& a, const UcqAnswerFn& leaf);
bool eval_ecq_closed_generic(const Ecq& q, const ABox& a, const UcqAnswerFn& leaf);

TupleSet eval_ecq(const Ecq& q, const std::vector<std::string>& free_vars,
                  const TBox& t, const ABox& a);
bool eval_ecq_closed(const Ecq& q, const TBox& t, const ABox& a);

// True iff the ABox violates the functionality assertion, i.e. some
// individual has two distinct fillers. Evaluated over the ABox alone.
bool funct_violated(const Functionality& f, const ABox& a);

// Boolean query detecting a violation of the negative inclusion, closed
// under the positive inclusions. Evaluate with evaluate_ucq (the rewriting
// is already folded in).
UCQ unsat_query_neg(const NegativeConceptInclusion& n,
                    const std::vector<PositiveInclusion>& positives);
UCQ unsat_query_neg(const NegativeRoleInclusion& n,
                    const std::vector<PositiveInclusion>& positives);

bool is_consistent(const TBox& t, const ABox& a);

} // namespace kab

#endif
