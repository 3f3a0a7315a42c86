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

#include "kab/repair.hpp"

#include <algorithm>

namespace kab {

namespace {

// Minimal inconsistent subsets have at most two assertions: functionality
// violations name two role facts, and every disjunct of a rewritten
// negative-inclusion probe has at most two atoms. Consistency of a subset
// therefore reduces to independence in a conflict graph over the
// individually consistent assertions.
struct ConflictGraph {
    std::vector<Assertion> facts;      // individually consistent
    std::vector<Assertion> poisoned;   // inconsistent on their own
    std::vector<std::set<int>> edges;  // adjacency by index
};

ConflictGraph build_conflicts(const TBox& t, const ABox& a) {
    ConflictGraph g;
    for (const auto& f : a) {
        if (is_consistent(t, ABox{f}))
            g.facts.push_back(f);
        else
            g.poisoned.push_back(f);
    }
    g.edges.resize(g.facts.size());
    for (size_t i = 0; i < g.facts.size(); ++i)
        for (size_t j = i + 1; j < g.facts.size(); ++j)
            if (!is_consistent(t, ABox{g.facts[i], g.facts[j]})) {
                g.edges[i].insert((int)j);
                g.edges[j].insert((int)i);
            }
    return g;
}

void enumerate_independent(const ConflictGraph& g, std::set<int> current,
                           std::set<std::set<int>>& seen,
                           std::vector<std::set<int>>& out) {
    if (!seen.insert(current).second) return;
    for (int i : current)
        for (int j : g.edges[i])
            if (current.count(j) && j > i) {
                std::set<int> left = current, right = current;
                left.erase(i);
                right.erase(j);
                enumerate_independent(g, std::move(left), seen, out);
                enumerate_independent(g, std::move(right), seen, out);
                return;
            }
    out.push_back(std::move(current));
}

} // namespace

RepairSet b_repairs(const TBox& t, const ABox& a) {
    ConflictGraph g = build_conflicts(t, a);
    std::set<int> all;
    for (size_t i = 0; i < g.facts.size(); ++i) all.insert((int)i);
    std::set<std::set<int>> seen;
    std::vector<std::set<int>> independent;
    enumerate_independent(g, std::move(all), seen, independent);

    // The branching can emit non-maximal sets; keep the maximal ones only.
    RepairSet out;
    for (const auto& s : independent) {
        bool maximal = true;
        for (const auto& other : independent)
            if (&other != &s && s != other &&
                std::includes(other.begin(), other.end(), s.begin(), s.end())) {
                maximal = false;
                break;
            }
        if (!maximal) continue;
        ABox rep;
        for (int i : s) rep.insert(g.facts[i]);
        out.insert(std::move(rep));
    }
    return out;
}

ABox c_repair(const TBox& t, const ABox& a) {
    RepairSet reps = b_repairs(t, a);
    ABox inter = *reps.begin();
    for (const auto& r : reps) {
        ABox next;
        std::set_intersection(inter.begin(), inter.end(), r.begin(), r.end(),
                              std::inserter(next, next.begin()));
        inter = std::move(next);
    }
    return inter;
}

std::set<std::string> viol(const TBox& t, const ABox& a) {
    std::set<std::string> out;
    for (const auto& n : t.negative_concepts)
        if (!evaluate_ucq(unsat_query_neg(n, t.positives), a).empty())
            out.insert(n.label);
    for (const auto& n : t.negative_roles)
        if (!evaluate_ucq(unsat_query_neg(n, t.positives), a).empty())
            out.insert(n.label);
    for (const auto& f : t.functionalities)
        if (funct_violated(f, a)) out.insert(f.label);
    return out;
}

TupleSet cqa_answers(const UCQ& q, const TBox& t, const ABox& a) {
    RepairSet reps = b_repairs(t, a);
    auto it = reps.begin();
    TupleSet inter = certain_answers(q, t, *it);
    for (++it; it != reps.end() && !inter.empty(); ++it) {
        TupleSet next;
        TupleSet cur = certain_answers(q, t, *it);
        std::set_intersection(inter.begin(), inter.end(), cur.begin(), cur.end(),
                              std::inserter(next, next.begin()));
        inter = std::move(next);
    }
    return inter;
}

TupleSet cqa_eval_ecq(const Ecq& q, const std::vector<std::string>& free_vars,
                      const TBox& t, const ABox& a) {
    RepairSet reps = b_repairs(t, a);
    auto leaf = [&](const UCQ& u) {
        auto it = reps.begin();
        TupleSet inter = certain_answers(u, t, *it);
        for (++it; it != reps.end() && !inter.empty(); ++it) {
            TupleSet next;
            TupleSet cur = certain_answers(u, t, *it);
            std::set_intersection(inter.begin(), inter.end(), cur.begin(), cur.end(),
                                  std::inserter(next, next.begin()));
            inter = std::move(next);
        }
        return inter;
    };
    return eval_ecq_generic(q, free_vars, a, leaf);
}

bool cqa_eval_ecq_closed(const Ecq& q, const TBox& t, const ABox& a) {
    auto r = cqa_eval_ecq(q, {}, t, a);
    return !r.empty();
}

} // namespace kab
