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

// Shared helpers for the test suites: terse constructors and a randomized
// small-instance generator with a fixed-seed RNG.

#ifndef KAB_TESTUTIL_HPP
#define KAB_TESTUTIL_HPP

#include <random>
#include <string>
#include <vector>

#include "kab/dllite.hpp"
#include "kab/model.hpp"

namespace kab::test {

inline GroundTerm C(const std::string& name) { return GroundTerm::constant(name); }
inline QueryTerm V(const std::string& name) { return QueryTerm::variable(name); }
inline QueryTerm K(const std::string& name) {
    return QueryTerm::constant(GroundTerm::constant(name));
}

inline Assertion fact(const std::string& p, const std::string& x) {
    return Assertion(p, C(x));
}
inline Assertion fact(const std::string& p, const std::string& x, const std::string& y) {
    return Assertion(p, C(x), C(y));
}

// Single-CQ UCQ; existential vars are the atom vars not listed free.
inline UCQ cq(std::vector<std::string> frees, std::vector<QueryAtom> atoms) {
    UCQ q;
    q.free_vars = frees;
    ConjunctiveQuery c;
    c.free_vars = std::move(frees);
    c.atoms = std::move(atoms);
    std::set<std::string> fs(c.free_vars.begin(), c.free_vars.end());
    std::set<std::string> ex;
    for (const auto& at : c.atoms)
        for (const auto& t : at.terms)
            if (t.is_var() && !fs.count(t.var)) ex.insert(t.var);
    c.existential_vars.assign(ex.begin(), ex.end());
    q.disjuncts.push_back(std::move(c));
    return q;
}

inline UCQ ucq_union(UCQ a, const UCQ& b) {
    for (const auto& d : b.disjuncts) a.disjuncts.push_back(d);
    return a;
}

inline PositiveInclusion isa(BasicConcept l, BasicConcept r) {
    return PositiveInclusion{std::move(l), std::move(r)};
}
inline BasicConcept nc(const std::string& n) { return BasicConcept::named(n); }
inline BasicConcept ex(const std::string& r, bool inv = false) {
    return BasicConcept::exists(Role(r, inv));
}

inline Tuple tup() { return {}; }
inline Tuple tup(const std::string& a) { return {C(a)}; }
inline Tuple tup(const std::string& a, const std::string& b) { return {C(a), C(b)}; }

inline TermTemplate tv(const std::string& v) { return TermTemplate::variable(v); }
inline TermTemplate tc(const std::string& c) { return TermTemplate::constant(C(c)); }
inline TermTemplate tcall(const std::string& f, std::vector<TermTemplate> args) {
    return TermTemplate::call(f, std::move(args));
}

// The two-action fixture used across the step, transition-system and
// verification suites: disjoint C and D, gamma1 copies C into D, gamma2
// feeds C individuals to a service call.
inline KabSpec running_kab() {
    KabSpec k;
    k.tbox.negative_concepts.push_back({nc("C"), nc("D"), "@ax1"});
    k.a0 = {fact("C", "a")};
    k.declared_constants = {"a"};

    Action g1;
    g1.name = "gamma1";
    g1.effects.push_back({cq({"x"}, {QueryAtom("C", V("x"))}),
                          nullptr,
                          {AtomTemplate("D", tv("x")), AtomTemplate("C", tv("x"))}});
    Action g2;
    g2.name = "gamma2";
    g2.params = {"p"};
    g2.effects.push_back({cq({"p"}, {QueryAtom("C", V("p"))}),
                          nullptr,
                          {AtomTemplate("G", tcall("f", {tv("p")}))}});
    k.actions = {g1, g2};

    k.process.push_back({Ecq::truth(), {}, "gamma1"});
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("C", V("y"))})), {"y"}, "gamma2"});
    return k;
}

// Constraint-free fixture whose single action issues two service calls at
// once, exercising the multi-call commitment combinatorics.
inline KabSpec two_call_kab() {
    KabSpec k;
    k.a0 = {fact("C", "a")};
    k.declared_constants = {"a"};
    Action g;
    g.name = "pair";
    g.params = {"p"};
    g.effects.push_back({cq({"p"}, {QueryAtom("C", V("p"))}),
                         nullptr,
                         {AtomTemplate("P", tcall("f", {tv("p")}), tcall("g", {tv("p")}))}});
    k.actions = {g};
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("C", V("y"))})), {"y"}, "pair"});
    return k;
}

// --- Randomized small instances -------------------------------------------

struct RandomInstance {
    TBox tbox;
    ABox abox;
    UCQ query;
};

class InstanceGen {
public:
    explicit InstanceGen(uint32_t seed) : rng_(seed) {}

    RandomInstance next() {
        RandomInstance inst;
        inst.tbox = random_tbox();
        inst.abox = random_abox();
        inst.query = random_query();
        return inst;
    }

    TBox random_tbox() {
        TBox t;
        int label = 0;
        int n_pos = pick(0, 2), n_neg = pick(0, 1), n_fun = pick(0, 1);
        for (int i = 0; i < n_pos; ++i)
            t.positives.push_back({random_basic(), random_basic()});
        for (int i = 0; i < n_neg; ++i) {
            if (flip()) {
                t.negative_concepts.push_back(
                    {random_basic(), random_basic(), "@ax" + std::to_string(++label)});
            } else {
                t.negative_roles.push_back(
                    {random_role(), random_role(), "@ax" + std::to_string(++label)});
            }
        }
        for (int i = 0; i < n_fun; ++i)
            t.functionalities.push_back({random_role(), "@ax" + std::to_string(++label)});
        return t;
    }

    ABox random_abox() {
        ABox a;
        int n = pick(1, 6);
        for (int i = 0; i < n; ++i) {
            if (flip())
                a.insert(fact(concepts_[pick(0, 3)], inds_[pick(0, 2)]));
            else
                a.insert(fact(roles_[pick(0, 1)], inds_[pick(0, 2)], inds_[pick(0, 2)]));
        }
        return a;
    }

    UCQ random_query() {
        int n_free = pick(0, 2);
        std::vector<std::string> frees(vars_.begin(), vars_.begin() + n_free);
        UCQ q;
        q.free_vars = frees;
        int n_disj = pick(1, 2);
        for (int d = 0; d < n_disj; ++d) {
            ConjunctiveQuery c;
            c.free_vars = frees;
            int n_atoms = pick(1, 2);
            std::set<std::string> used;
            for (int i = 0; i < n_atoms; ++i) {
                if (flip()) {
                    c.atoms.emplace_back(concepts_[pick(0, 3)], random_term(frees, used));
                } else {
                    c.atoms.emplace_back(roles_[pick(0, 1)], random_term(frees, used),
                                         random_term(frees, used));
                }
            }
            std::set<std::string> fs(frees.begin(), frees.end());
            for (const auto& v : used)
                if (!fs.count(v)) c.existential_vars.push_back(v);
            q.disjuncts.push_back(std::move(c));
        }
        return q;
    }

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool flip() { return pick(0, 1) == 1; }

private:
    BasicConcept random_basic() {
        if (pick(0, 2) == 0) return ex(roles_[pick(0, 1)], flip());
        return nc(concepts_[pick(0, 3)]);
    }
    Role random_role() { return Role(roles_[pick(0, 1)], flip()); }

    QueryTerm random_term(const std::vector<std::string>& frees,
                          std::set<std::string>& used) {
        int r = pick(0, 5);
        if (r <= 1 && !frees.empty()) {
            const auto& v = frees[pick(0, (int)frees.size() - 1)];
            used.insert(v);
            return V(v);
        }
        if (r <= 3) {
            const auto& v = evars_[pick(0, 1)];
            used.insert(v);
            return V(v);
        }
        return K(inds_[pick(0, 2)]);
    }

    std::mt19937 rng_;
    std::vector<std::string> concepts_{"A", "B", "C", "D"};
    std::vector<std::string> roles_{"P", "R"};
    std::vector<std::string> inds_{"a", "b", "c"};
    std::vector<std::string> vars_{"x", "y"};
    std::vector<std::string> evars_{"u", "v"};
};

} // namespace kab::test

#endif
