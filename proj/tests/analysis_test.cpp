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

#include "kab/analysis.hpp"

#include <algorithm>
#include <functional>
#include <vector>

#include "doctest.h"
#include "kab/errors.hpp"
#include "kab/ts.hpp"
#include "testutil.hpp"

using namespace kab;
using namespace kab::test;

namespace {

GraphNode node(const std::string& p, int i = 1) { return {p, i}; }
GraphEdge edge(GraphNode a, GraphNode b) { return {std::move(a), std::move(b)}; }

bool same_graph(const DependencyGraph& a, const DependencyGraph& b) {
    return a.nodes == b.nodes && a.ordinary_edges == b.ordinary_edges &&
           a.special_edges == b.special_edges;
}

// Drops the violation-marker node and its incident edges, i.e. the plumbing
// the approximant adds on top of the original vocabulary.
DependencyGraph mask_viol(DependencyGraph g) {
    g.nodes.erase(node(kViolPredicate));
    auto prune = [](std::set<GraphEdge>& edges) {
        for (auto it = edges.begin(); it != edges.end();) {
            if (it->first.first == kViolPredicate || it->second.first == kViolPredicate)
                it = edges.erase(it);
            else
                ++it;
        }
    };
    prune(g.ordinary_edges);
    prune(g.special_edges);
    return g;
}

// The two bookkeeping predicates never count for containment comparisons:
// the marker is transient and the dominant carries every Viol fact forever.
ABox strip_bookkeeping(const ABox& a) {
    ABox out;
    for (const auto& f : a)
        if (f.predicate != kStatePredicate && f.predicate != kViolPredicate)
            out.insert(f);
    return out;
}

bool marked(const TsState& s) {
    return s.abox.count(Assertion(kStatePredicate, C(kTempConstant))) > 0;
}

// All maximal paths with at most max_states states, starting at the initial
// state. Prefixes of an emitted path are covered by the path itself.
std::vector<std::vector<size_t>> raw_runs(const TransitionSystem& ts,
                                          size_t max_states) {
    std::vector<std::vector<size_t>> out;
    std::vector<size_t> path{ts.initial};
    std::function<void()> go = [&]() {
        if (path.size() == max_states || ts.successors[path.back()].empty()) {
            out.push_back(path);
            return;
        }
        for (size_t nxt : ts.successors[path.back()]) {
            path.push_back(nxt);
            go();
            path.pop_back();
        }
    };
    go();
    return out;
}

// Folds a raw path into per-action-step coverage requirements: an action
// step moves to the next requirement, a repair step merges into the current
// one, so one dominant state must cover the marked state and its repairs.
std::vector<ABox> requirements(const TransitionSystem& ts,
                               const std::vector<size_t>& path) {
    std::vector<ABox> req{strip_bookkeeping(ts.states[path[0]].abox)};
    for (size_t j = 1; j < path.size(); ++j) {
        if (!marked(ts.states[path[j - 1]])) req.emplace_back();
        for (const auto& f : strip_bookkeeping(ts.states[path[j]].abox))
            req.back().insert(f);
    }
    return req;
}

bool run_covered(const TransitionSystem& dts, const std::vector<ABox>& dstripped,
                 const std::vector<ABox>& req) {
    std::set<std::pair<size_t, size_t>> dead;
    std::function<bool(size_t, size_t)> go = [&](size_t t, size_t i) -> bool {
        const ABox& have = dstripped[t];
        if (!std::includes(have.begin(), have.end(), req[i].begin(), req[i].end()))
            return false;
        if (i + 1 == req.size()) return true;
        if (dead.count({t, i})) return false;
        for (size_t nxt : dts.successors[t])
            if (go(nxt, i + 1)) return true;
        dead.insert({t, i});
        return false;
    };
    return go(dts.initial, 0);
}

bool all_runs_dominated(const TransitionSystem& ts, const TransitionSystem& dts) {
    std::vector<ABox> dstripped;
    dstripped.reserve(dts.states.size());
    for (const auto& s : dts.states) dstripped.push_back(strip_bookkeeping(s.abox));
    for (const auto& run : raw_runs(ts, 6))
        if (!run_covered(dts, dstripped, requirements(ts, run))) return false;
    return true;
}

// Unbounded fixture: each step feeds the freshly minted value back into a
// new service call, so the call map grows along every run.
KabSpec divergent_kab() {
    KabSpec k;
    k.a0 = {fact("G", "a")};
    k.declared_constants = {"a"};
    Action g3;
    g3.name = "gamma3";
    g3.params = {"p"};
    g3.effects.push_back({cq({"p"}, {QueryAtom("G", V("p"))}),
                          nullptr,
                          {AtomTemplate("G", tcall("f", {tv("p")}))}});
    k.actions = {g3};
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("G", V("y"))})), {"y"}, "gamma3"});
    return k;
}

// Two service-call hops closing a loop: C feeds G through one call, G feeds
// C back through another.
KabSpec call_cycle_kab() {
    KabSpec k = running_kab();
    Action g3;
    g3.name = "gamma3";
    g3.params = {"p"};
    g3.effects.push_back({cq({"p"}, {QueryAtom("G", V("p"))}),
                          nullptr,
                          {AtomTemplate("C", tcall("g", {tv("p")}))}});
    k.actions.push_back(g3);
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("G", V("y"))})), {"y"}, "gamma3"});
    return k;
}

const std::vector<Semantics> kAllSemantics{Semantics::Standard, Semantics::B,
                                           Semantics::C,        Semantics::Eb,
                                           Semantics::Ec,       Semantics::It};

} // namespace

TEST_CASE("dependency graph of the running fixture") {
    DependencyGraph g = dependency_graph(running_kab());

    CHECK(g.nodes == std::set<GraphNode>{node("C"), node("D"), node("G")});
    CHECK(g.ordinary_edges == std::set<GraphEdge>{edge(node("C"), node("C")),
                                                  edge(node("C"), node("D"))});
    CHECK(g.special_edges == std::set<GraphEdge>{edge(node("C"), node("G"))});
    CHECK(is_weakly_acyclic(g));
}

TEST_CASE("constant head positions contribute no edges") {
    KabSpec k;
    k.a0 = {fact("C", "a")};
    Action g;
    g.name = "mark";
    g.effects.push_back({cq({"x"}, {QueryAtom("C", V("x"))}),
                         nullptr,
                         {AtomTemplate("D", tc("a")), AtomTemplate("P", tc("a"), tv("x"))}});
    k.actions = {g};
    k.process.push_back({Ecq::truth(), {}, "mark"});

    DependencyGraph gr = dependency_graph(k);
    CHECK(gr.special_edges.empty());
    CHECK(gr.ordinary_edges == std::set<GraphEdge>{edge(node("C"), node("P", 2))});
    CHECK(gr.nodes == std::set<GraphNode>{node("C"), node("D"), node("P"), node("P", 2)});
}

TEST_CASE("condition rewriting adds edge sources") {
    KabSpec k;
    k.tbox.positives.push_back(isa(nc("A"), nc("C")));
    k.a0 = {fact("A", "a")};
    Action g;
    g.name = "copy";
    g.effects.push_back({cq({"x"}, {QueryAtom("C", V("x"))}),
                         nullptr,
                         {AtomTemplate("D", tv("x"))}});
    k.actions = {g};
    k.process.push_back({Ecq::truth(), {}, "copy"});

    DependencyGraph gr = dependency_graph(k);
    CHECK(gr.ordinary_edges == std::set<GraphEdge>{edge(node("C"), node("D")),
                                                   edge(node("A"), node("D"))});
    CHECK(gr.special_edges.empty());
    CHECK(is_weakly_acyclic(gr));
}

TEST_CASE("role atoms give per-position edges") {
    KabSpec k;
    k.a0 = {fact("P", "a", "b")};
    Action g;
    g.name = "swap";
    g.effects.push_back({cq({"x", "y"}, {QueryAtom("P", V("x"), V("y"))}),
                         nullptr,
                         {AtomTemplate("P", tv("y"), tv("x")),
                          AtomTemplate("R", tcall("f", {tv("x")}), tv("y"))}});
    k.actions = {g};
    k.process.push_back({Ecq::truth(), {}, "swap"});

    DependencyGraph gr = dependency_graph(k);
    CHECK(gr.ordinary_edges ==
          std::set<GraphEdge>{edge(node("P", 1), node("P", 2)),
                              edge(node("P", 2), node("P", 1)),
                              edge(node("P", 2), node("R", 2))});
    CHECK(gr.special_edges == std::set<GraphEdge>{edge(node("P", 1), node("R", 1))});

    SUBCASE("the swap cycle is ordinary, so the graph stays weakly acyclic") {
        CHECK(is_weakly_acyclic(gr));
    }
    SUBCASE("routing the called value back closes a special cycle") {
        Action back;
        back.name = "back";
        back.effects.push_back({cq({"u", "v"}, {QueryAtom("R", V("u"), V("v"))}),
                                nullptr,
                                {AtomTemplate("P", tv("u"), tv("v"))}});
        k.actions.push_back(back);
        k.process.push_back({Ecq::truth(), {}, "back"});
        CHECK_FALSE(is_weakly_acyclic(dependency_graph(k)));
    }
}

TEST_CASE("weak acyclicity depends only on special edges inside components") {
    DependencyGraph g;
    SUBCASE("edgeless graphs pass") {
        CHECK(is_weakly_acyclic(g));
        g.nodes = {node("C")};
        CHECK(is_weakly_acyclic(g));
    }
    SUBCASE("an ordinary self-loop passes, a special one fails") {
        g.nodes = {node("C")};
        g.ordinary_edges = {edge(node("C"), node("C"))};
        CHECK(is_weakly_acyclic(g));
        g.special_edges = {edge(node("C"), node("C"))};
        CHECK_FALSE(is_weakly_acyclic(g));
    }
    SUBCASE("a special edge between components passes") {
        g.nodes = {node("C"), node("G")};
        g.special_edges = {edge(node("C"), node("G"))};
        CHECK(is_weakly_acyclic(g));
    }
    SUBCASE("an ordinary edge closing the loop around a special one fails") {
        g.nodes = {node("C"), node("G")};
        g.special_edges = {edge(node("C"), node("G"))};
        g.ordinary_edges = {edge(node("G"), node("C"))};
        CHECK_FALSE(is_weakly_acyclic(g));
    }
}

TEST_CASE("the call cycle variant of the running fixture is not weakly acyclic") {
    CHECK_FALSE(is_weakly_acyclic(dependency_graph(call_cycle_kab())));
}

TEST_CASE("consistent approximant saturates violations and copies them") {
    KabSpec k = running_kab();
    KabSpec ap = consistent_approximant(k);

    CHECK(ap.tbox.positives.empty());
    CHECK_FALSE(ap.tbox.has_constraints());
    CHECK(ap.a0 == ABox{fact("C", "a"), fact("Viol", "@ax1")});

    REQUIRE(ap.actions.size() == 2);
    for (const auto& act : ap.actions) {
        REQUIRE(act.effects.size() == 2);
        const EffectSpec& ev = act.effects.front();
        CHECK(ev.qplus.free_vars == std::vector<std::string>{"x"});
        REQUIRE(ev.qplus.disjuncts.size() == 1);
        CHECK(ev.qplus.disjuncts[0].atoms ==
              std::vector<QueryAtom>{QueryAtom("Viol", V("x"))});
        CHECK(ev.qminus == nullptr);
        REQUIRE(ev.head.size() == 1);
        CHECK(ev.head[0].predicate == "Viol");
        CHECK(ev.head[0].args[0].is_var());
        CHECK(ev.head[0].args[0].var == "x");
    }
    CHECK(ap.actions[1].params == std::vector<std::string>{"p"});
    CHECK(ap.actions[1].effects[1].qplus.disjuncts[0].atoms ==
          std::vector<QueryAtom>{QueryAtom("C", V("p"))});

    REQUIRE(ap.process.size() == 2);
    CHECK(ap.process[0].action == "gamma1");
    CHECK(ecq_equal(*ap.process[0].condition, *k.process[0].condition));
    CHECK(ap.process[1].action == "gamma2");
    CHECK(ap.process[1].arg_vars == std::vector<std::string>{"y"});
    CHECK(ecq_equal(*ap.process[1].condition, *k.process[1].condition));
}

TEST_CASE("approximant of a constraint-free spec only gains the copy effect") {
    KabSpec k = two_call_kab();
    KabSpec ap = consistent_approximant(k);
    CHECK(ap.a0 == k.a0);
    REQUIRE(ap.actions.size() == 1);
    CHECK(ap.actions[0].effects.size() == 2);
    CHECK(ap.actions[0].effects[0].head[0].predicate == "Viol");
}

TEST_CASE("every dropped constraint contributes one violation fact") {
    KabSpec k;
    k.tbox.negative_concepts.push_back({nc("C"), nc("D"), "@ax1"});
    k.tbox.functionalities.push_back({Role("P"), "@ax2"});
    k.a0 = {fact("C", "a")};
    KabSpec ap = consistent_approximant(k);
    CHECK(ap.a0 == ABox{fact("C", "a"), fact("Viol", "@ax1"), fact("Viol", "@ax2")});
}

TEST_CASE("the copy effect variable dodges a clashing parameter name") {
    KabSpec k;
    k.a0 = {fact("C", "a")};
    Action g;
    g.name = "touch";
    g.params = {"x"};
    g.effects.push_back({cq({"x"}, {QueryAtom("C", V("x"))}),
                         nullptr,
                         {AtomTemplate("C", tv("x"))}});
    k.actions = {g};
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("C", V("y"))})), {"y"}, "touch"});

    KabSpec ap = consistent_approximant(k);
    const EffectSpec& ev = ap.actions[0].effects.front();
    CHECK(ev.qplus.free_vars == std::vector<std::string>{"x0"});
    CHECK(ev.head[0].args[0].var == "x0");
}

TEST_CASE("positive dominant folds parameters into the conditions") {
    KabSpec pd = positive_dominant(running_kab());

    for (const auto& act : pd.actions) CHECK(act.params.empty());

    const EffectSpec& g2 = pd.actions[1].effects[1];
    CHECK(g2.qplus.free_vars == std::vector<std::string>{"p"});
    CHECK(g2.qminus == nullptr);
    REQUIRE(g2.head.size() == 1);
    CHECK(g2.head[0].args[0].is_call());

    REQUIRE(pd.process.size() == 2);
    for (const auto& rule : pd.process) {
        CHECK(ecq_equal(*rule.condition, *Ecq::truth()));
        CHECK(rule.arg_vars.empty());
    }
    CHECK(pd.process[0].action == "gamma1");
    CHECK(pd.process[1].action == "gamma2");
}

TEST_CASE("a parameter only mentioned by atoms is promoted to an answer variable") {
    KabSpec k;
    k.a0 = {fact("C", "a")};
    Action g;
    g.name = "touch";
    g.params = {"p"};
    g.effects.push_back({cq({}, {QueryAtom("C", V("p"))}),
                         nullptr,
                         {AtomTemplate("D", tv("p"))}});
    k.actions = {g};
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("C", V("y"))})), {"y"}, "touch"});

    CHECK(k.actions[0].effects[0].qplus.disjuncts[0].existential_vars ==
          std::vector<std::string>{"p"});
    KabSpec pd = positive_dominant(k);
    const EffectSpec& e = pd.actions[0].effects[1];
    CHECK(e.qplus.free_vars == std::vector<std::string>{"p"});
    CHECK(e.qplus.disjuncts[0].free_vars == std::vector<std::string>{"p"});
    CHECK(e.qplus.disjuncts[0].existential_vars.empty());
}

TEST_CASE("a head parameter absent from the condition is rejected") {
    KabSpec k;
    k.a0 = {fact("C", "a")};
    Action g;
    g.name = "mint";
    g.params = {"p"};
    g.effects.push_back({cq({"x"}, {QueryAtom("C", V("x"))}),
                         nullptr,
                         {AtomTemplate("G", tcall("f", {tv("p")}))}});
    k.actions = {g};
    k.process.push_back({Ecq::embedded(cq({"y"}, {QueryAtom("C", V("y"))})), {"y"}, "mint"});

    CHECK_THROWS_AS((void)positive_dominant(k), SemanticError);
}

TEST_CASE("the three dependency graphs coincide up to the violation plumbing") {
    for (const KabSpec& k : {running_kab(), two_call_kab(), call_cycle_kab()}) {
        DependencyGraph orig = dependency_graph(k);
        DependencyGraph ap = dependency_graph(consistent_approximant(k));
        DependencyGraph pd = dependency_graph(positive_dominant(k));

        CHECK(same_graph(ap, pd));
        CHECK(same_graph(mask_viol(ap), orig));
        CHECK(is_weakly_acyclic(ap) == is_weakly_acyclic(orig));
    }
}

TEST_CASE("weakly acyclic specs build to a fixed point under every semantics") {
    std::vector<KabSpec> specs{running_kab(), two_call_kab(),
                               consistent_approximant(running_kab()),
                               positive_dominant(running_kab())};
    for (size_t i = 0; i < specs.size(); ++i) {
        INFO("spec #", i);
        REQUIRE(is_weakly_acyclic(dependency_graph(specs[i])));
        for (Semantics sem : kAllSemantics) {
            INFO("semantics ", semantics_name(sem));
            TransitionSystem ts = build_ts(specs[i], sem);
            CHECK(ts.states.size() >= 1);
            CHECK(ts.states.size() < BuildLimits{}.max_states);
        }
    }
}

TEST_CASE("a special cycle can outgrow any state bound") {
    KabSpec k = divergent_kab();
    REQUIRE_FALSE(is_weakly_acyclic(dependency_graph(k)));
    BuildLimits lim;
    lim.max_states = 200;
    CHECK_THROWS_AS((void)build_ts(k, Semantics::Standard, lim), LimitExceeded);
}

TEST_CASE("short runs are dominated by the positive dominant's standard runs") {
    for (const KabSpec& k : {running_kab(), two_call_kab()}) {
        TransitionSystem dts = build_ts(positive_dominant(k), Semantics::Standard);
        for (Semantics sem : kAllSemantics) {
            INFO("semantics ", semantics_name(sem));
            TransitionSystem ts = build_ts(k, sem);
            CHECK(all_runs_dominated(ts, dts));
        }
    }

    SUBCASE("the check is not vacuous: a foreign dominant fails") {
        TransitionSystem ts = build_ts(running_kab(), Semantics::B);
        TransitionSystem foreign =
            build_ts(positive_dominant(two_call_kab()), Semantics::Standard);
        CHECK_FALSE(all_runs_dominated(ts, foreign));
    }
}

TEST_CASE("graphviz export stars special edges") {
    std::string dot = graph_to_dot(dependency_graph(running_kab()));
    CHECK(dot.find("digraph dependencies {") != std::string::npos);
    CHECK(dot.find("\"C,1\" -> \"D,1\";") != std::string::npos);
    CHECK(dot.find("\"C,1\" -> \"G,1\" [label=\"*\"];") != std::string::npos);
    CHECK(dot == graph_to_dot(dependency_graph(running_kab())));
}
