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
#include <map>
#include <vector>

#include "kab/errors.hpp"

namespace kab {

namespace {

void note(std::map<std::string, int>& arity, const std::string& name, int n) {
    auto [it, fresh] = arity.emplace(name, n);
    if (!fresh && it->second < n) it->second = n;
}

void note_basic(std::map<std::string, int>& arity, const BasicConcept& b) {
    if (b.kind == BasicConcept::Kind::Named)
        note(arity, b.name, 1);
    else
        note(arity, b.role.name, 2);
}

void note_ucq(std::map<std::string, int>& arity, const UCQ& q) {
    for (const auto& d : q.disjuncts)
        for (const auto& at : d.atoms)
            note(arity, at.predicate, static_cast<int>(at.terms.size()));
}

void note_ecq(std::map<std::string, int>& arity, const EcqPtr& e) {
    if (!e) return;
    if (e->kind == Ecq::Kind::Embedded) {
        note_ucq(arity, e->ucq);
        return;
    }
    note_ecq(arity, e->lhs);
    note_ecq(arity, e->rhs);
}

// Predicate name -> arity, over every occurrence in the spec. The TBox
// alone does not suffice: predicates written by effects or queried by rules
// may never appear in an axiom.
std::map<std::string, int> vocabulary(const KabSpec& spec) {
    std::map<std::string, int> arity;
    for (const auto& pi : spec.tbox.positives) {
        note_basic(arity, pi.lhs);
        note_basic(arity, pi.rhs);
    }
    for (const auto& ni : spec.tbox.negative_concepts) {
        note_basic(arity, ni.lhs);
        note_basic(arity, ni.rhs);
    }
    for (const auto& ni : spec.tbox.negative_roles) {
        note(arity, ni.lhs.name, 2);
        note(arity, ni.rhs.name, 2);
    }
    for (const auto& f : spec.tbox.functionalities) note(arity, f.role.name, 2);
    for (const auto& a : spec.a0)
        note(arity, a.predicate, static_cast<int>(a.args.size()));
    for (const auto& act : spec.actions) {
        for (const auto& e : act.effects) {
            note_ucq(arity, e.qplus);
            note_ecq(arity, e.qminus);
            for (const auto& at : e.head)
                note(arity, at.predicate, static_cast<int>(at.args.size()));
        }
    }
    for (const auto& r : spec.process) note_ecq(arity, r.condition);
    return arity;
}

void template_vars(const TermTemplate& t, std::set<std::string>& out) {
    if (t.is_var()) out.insert(t.var);
    for (const auto& a : t.call_args) template_vars(a, out);
}

} // namespace

DependencyGraph dependency_graph(const KabSpec& spec) {
    DependencyGraph g;
    for (const auto& [name, arity] : vocabulary(spec)) {
        g.nodes.insert({name, 1});
        if (arity == 2) g.nodes.insert({name, 2});
    }
    for (const auto& act : spec.actions) {
        for (const auto& e : act.effects) {
            UCQ rew = rewrite_ucq(e.qplus, spec.tbox.positives);
            std::map<std::string, std::set<GraphNode>> sources;
            for (const auto& d : rew.disjuncts)
                for (const auto& at : d.atoms)
                    for (size_t i = 0; i < at.terms.size(); ++i)
                        if (at.terms[i].is_var())
                            sources[at.terms[i].var].insert(
                                {at.predicate, static_cast<int>(i) + 1});
            for (const auto& at : e.head) {
                for (size_t j = 0; j < at.args.size(); ++j) {
                    GraphNode dst{at.predicate, static_cast<int>(j) + 1};
                    const TermTemplate& arg = at.args[j];
                    if (arg.is_const()) continue;
                    std::set<std::string> vars;
                    template_vars(arg, vars);
                    auto& bucket = arg.is_var() ? g.ordinary_edges : g.special_edges;
                    for (const auto& v : vars) {
                        auto it = sources.find(v);
                        if (it == sources.end()) continue;
                        for (const auto& src : it->second) bucket.insert({src, dst});
                    }
                }
            }
        }
    }
    return g;
}

bool is_weakly_acyclic(const DependencyGraph& g) {
    std::vector<GraphNode> nodes(g.nodes.begin(), g.nodes.end());
    std::map<GraphNode, size_t> index;
    for (size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;

    size_t n = nodes.size();
    std::vector<std::vector<size_t>> fwd(n), rev(n);
    auto add = [&](const GraphEdge& e) {
        size_t u = index.at(e.first), v = index.at(e.second);
        fwd[u].push_back(v);
        rev[v].push_back(u);
    };
    for (const auto& e : g.ordinary_edges) add(e);
    for (const auto& e : g.special_edges) add(e);

    // Kosaraju: order by completion time, then sweep the reverse graph.
    std::vector<size_t> order;
    std::vector<char> seen(n, 0);
    for (size_t r = 0; r < n; ++r) {
        if (seen[r]) continue;
        seen[r] = 1;
        std::vector<std::pair<size_t, size_t>> stack{{r, 0}};
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < fwd[u].size()) {
                size_t v = fwd[u][next++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::vector<size_t> comp(n, 0);
    std::fill(seen.begin(), seen.end(), 0);
    size_t ncomp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (seen[*it]) continue;
        ++ncomp;
        std::vector<size_t> stack{*it};
        seen[*it] = 1;
        while (!stack.empty()) {
            size_t u = stack.back();
            stack.pop_back();
            comp[u] = ncomp;
            for (size_t v : rev[u]) {
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
    for (const auto& e : g.special_edges)
        if (comp[index.at(e.first)] == comp[index.at(e.second)]) return false;
    return true;
}

namespace {

// First of x, x0, x1, ... not clashing with the action's parameters, so the
// copy effect's variable cannot be captured by a parameter binding.
std::string copy_effect_var(const Action& act) {
    std::set<std::string> taken(act.params.begin(), act.params.end());
    std::string v = "x";
    for (int i = 0; taken.count(v); ++i) v = "x" + std::to_string(i);
    return v;
}

EffectSpec copy_effect(const std::string& var) {
    EffectSpec e;
    ConjunctiveQuery c;
    c.free_vars = {var};
    c.atoms = {QueryAtom(kViolPredicate, QueryTerm::variable(var))};
    e.qplus.free_vars = {var};
    e.qplus.disjuncts.push_back(std::move(c));
    e.head = {AtomTemplate(kViolPredicate, TermTemplate::variable(var))};
    return e;
}

} // namespace

KabSpec consistent_approximant(const KabSpec& spec) {
    KabSpec out = spec;
    for (const auto& label : spec.tbox.labels())
        out.a0.insert(Assertion(kViolPredicate, GroundTerm::constant(label)));
    out.tbox.negative_concepts.clear();
    out.tbox.negative_roles.clear();
    out.tbox.functionalities.clear();
    for (auto& act : out.actions)
        act.effects.insert(act.effects.begin(), copy_effect(copy_effect_var(act)));
    return out;
}

KabSpec positive_dominant(const KabSpec& spec) {
    KabSpec out = consistent_approximant(spec);
    for (auto& act : out.actions) {
        for (auto& e : act.effects) {
            e.qminus = nullptr;

            std::set<std::string> cond_vars;
            for (const auto& d : e.qplus.disjuncts)
                for (const auto& at : d.atoms)
                    for (const auto& t : at.terms)
                        if (t.is_var()) cond_vars.insert(t.var);

            std::set<std::string> frees(e.qplus.free_vars.begin(),
                                        e.qplus.free_vars.end());
            for (const auto& p : act.params) {
                if (!cond_vars.count(p) || frees.count(p)) continue;
                e.qplus.free_vars.push_back(p);
                for (auto& d : e.qplus.disjuncts) {
                    d.free_vars.push_back(p);
                    d.existential_vars.erase(std::remove(d.existential_vars.begin(),
                                                         d.existential_vars.end(), p),
                                             d.existential_vars.end());
                }
                frees.insert(p);
            }

            std::set<std::string> head_vars;
            for (const auto& at : e.head)
                for (const auto& arg : at.args) template_vars(arg, head_vars);
            for (const auto& v : head_vars) {
                if (!frees.count(v))
                    throw SemanticError("effect head variable '" + v +
                                        "' is not bound by the effect condition "
                                        "once parameters are dropped");
            }
        }
        act.params.clear();
    }
    for (auto& rule : out.process) rule = {Ecq::truth(), {}, rule.action};
    return out;
}

std::string graph_to_dot(const DependencyGraph& g) {
    auto id = [](const GraphNode& n) {
        return "\"" + n.first + "," + std::to_string(n.second) + "\"";
    };
    std::string out = "digraph dependencies {\n";
    for (const auto& n : g.nodes) out += "  " + id(n) + ";\n";
    for (const auto& e : g.ordinary_edges)
        out += "  " + id(e.first) + " -> " + id(e.second) + ";\n";
    for (const auto& e : g.special_edges)
        out += "  " + id(e.first) + " -> " + id(e.second) + " [label=\"*\"];\n";
    out += "}\n";
    return out;
}

} // namespace kab
