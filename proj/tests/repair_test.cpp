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

#include "doctest.h"

#include <algorithm>

#include "kab/dllite.hpp"
#include "kab/repair.hpp"
#include "oracle.hpp"
#include "testutil.hpp"

using namespace kab;
using namespace kab::test;

namespace {

TBox disjoint_cd() {
    TBox t;
    t.negative_concepts.push_back({nc("C"), nc("D"), "@ax1"});
    return t;
}

TupleSet intersect_over(const std::set<ABox>& reps, const UCQ& q, const TBox& t) {
    auto it = reps.begin();
    TupleSet inter = oracle::oracle_certain_answers(q, t, *it);
    for (++it; it != reps.end(); ++it) {
        TupleSet cur = oracle::oracle_certain_answers(q, t, *it);
        TupleSet next;
        std::set_intersection(inter.begin(), inter.end(), cur.begin(), cur.end(),
                              std::inserter(next, next.begin()));
        inter = std::move(next);
    }
    return inter;
}

} // namespace

TEST_CASE("b-repairs of a disjointness clash drop either side") {
    TBox t = disjoint_cd();
    ABox a{fact("C", "a"), fact("D", "a")};
    RepairSet reps = b_repairs(t, a);
    CHECK(reps == RepairSet{ABox{fact("C", "a")}, ABox{fact("D", "a")}});
    CHECK(c_repair(t, a).empty());
    CHECK(viol(t, a) == std::set<std::string>{"@ax1"});
}

TEST_CASE("b-repairs of a functionality clash keep the bystander") {
    TBox t;
    t.functionalities.push_back({Role("P"), "@f1"});
    ABox a{fact("P", "a", "b"), fact("P", "a", "c"), fact("N", "a")};
    RepairSet expect{ABox{fact("P", "a", "b"), fact("N", "a")},
                     ABox{fact("P", "a", "c"), fact("N", "a")}};
    CHECK(b_repairs(t, a) == expect);
    CHECK(c_repair(t, a) == ABox{fact("N", "a")});
    CHECK(viol(t, a) == std::set<std::string>{"@f1"});
}

TEST_CASE("a consistent ABox is its own single repair") {
    TBox t = disjoint_cd();
    ABox a{fact("C", "a"), fact("D", "b")};
    CHECK(b_repairs(t, a) == RepairSet{a});
    CHECK(c_repair(t, a) == a);
    CHECK(viol(t, a).empty());
}

TEST_CASE("individually inconsistent assertions are in no repair") {
    // exists P disjoint with exists inv P makes P(a,a) bad on its own.
    TBox t;
    t.negative_concepts.push_back({ex("P"), ex("P", true), "@ax1"});
    ABox a{fact("P", "a", "a"), fact("C", "b")};
    CHECK(b_repairs(t, a) == RepairSet{ABox{fact("C", "b")}});
    CHECK(viol(t, a) == std::set<std::string>{"@ax1"});
}

TEST_CASE("violations are detected through positive inclusions") {
    TBox t = disjoint_cd();
    t.positives.push_back(isa(nc("E"), nc("C")));
    ABox a{fact("E", "a"), fact("D", "a")};
    CHECK(viol(t, a) == std::set<std::string>{"@ax1"});
    RepairSet expect{ABox{fact("E", "a")}, ABox{fact("D", "a")}};
    CHECK(b_repairs(t, a) == expect);
}

TEST_CASE("role disjointness violations carry their own label") {
    TBox t;
    t.negative_roles.push_back({Role("P"), Role("R", true), "@r1"});
    t.functionalities.push_back({Role("P"), "@f1"});
    ABox a{fact("P", "a", "b"), fact("R", "b", "a"), fact("P", "a", "c")};
    CHECK(viol(t, a) == std::set<std::string>{"@f1", "@r1"});
}

TEST_CASE("repairs agree with subset enumeration on random instances") {
    InstanceGen gen(4021);
    int checked = 0, skipped = 0;
    while (checked < 120) {
        RandomInstance inst = gen.next();
        try {
            auto expect = oracle::oracle_b_repairs(inst.tbox, inst.abox);
            RepairSet got = b_repairs(inst.tbox, inst.abox);
            REQUIRE(got == RepairSet(expect.begin(), expect.end()));

            ABox inter = *expect.begin();
            for (const auto& r : expect) {
                ABox next;
                std::set_intersection(inter.begin(), inter.end(), r.begin(),
                                      r.end(), std::inserter(next, next.begin()));
                inter = std::move(next);
            }
            REQUIRE(c_repair(inst.tbox, inst.abox) == inter);

            // Violation labels are the consistency check, itemized.
            REQUIRE(viol(inst.tbox, inst.abox).empty() ==
                    is_consistent(inst.tbox, inst.abox));
            ++checked;
        } catch (const DepthInsufficient&) {
            REQUIRE(++skipped < 2000);
        }
    }
}

TEST_CASE("consistent-answer tuples survive every repair") {
    TBox t = disjoint_cd();
    ABox a{fact("C", "a"), fact("D", "a"), fact("C", "b")};

    // C(x) is only consistently true where D never contests it.
    UCQ qc = cq({"x"}, {QueryAtom("C", V("x"))});
    CHECK(cqa_answers(qc, t, a) == TupleSet{tup("b")});
    CHECK(certain_answers(qc, t, a) == TupleSet{tup("a"), tup("b")});

    // The union C(x) or D(x) holds at a in both repairs.
    UCQ qu = ucq_union(qc, cq({"x"}, {QueryAtom("D", V("x"))}));
    CHECK(cqa_answers(qu, t, a) == TupleSet{tup("a"), tup("b")});
}

TEST_CASE("ECQ under consistent answers intersects per leaf") {
    TBox t = disjoint_cd();
    ABox a{fact("C", "a"), fact("D", "a")};

    // As one embedded UCQ the disjunction survives both repairs...
    UCQ qu = ucq_union(cq({"x"}, {QueryAtom("C", V("x"))}),
                       cq({"x"}, {QueryAtom("D", V("x"))}));
    CHECK(cqa_eval_ecq(*Ecq::embedded(qu), {"x"}, t, a) == TupleSet{tup("a")});

    // ...but as a connective over two leaves each side is refuted somewhere.
    auto split = Ecq::disj(Ecq::embedded(cq({"x"}, {QueryAtom("C", V("x"))})),
                           Ecq::embedded(cq({"x"}, {QueryAtom("D", V("x"))})));
    CHECK(cqa_eval_ecq(*split, {"x"}, t, a).empty());

    // Negation works against the same intersection.
    auto none = Ecq::forall(
        "x", Ecq::negation(Ecq::embedded(cq({"x"}, {QueryAtom("C", V("x"))}))));
    CHECK(cqa_eval_ecq_closed(*none, t, a));
}

TEST_CASE("consistent answers on random instances match repair intersection") {
    InstanceGen gen(977);
    int checked = 0, skipped = 0;
    while (checked < 80) {
        RandomInstance inst = gen.next();
        try {
            auto reps = oracle::oracle_b_repairs(inst.tbox, inst.abox);
            TupleSet expect = intersect_over(reps, inst.query, inst.tbox);
            REQUIRE(cqa_answers(inst.query, inst.tbox, inst.abox) == expect);
            if (oracle::oracle_consistency(inst.tbox, inst.abox))
                REQUIRE(expect == certain_answers(inst.query, inst.tbox, inst.abox));
            ++checked;
        } catch (const DepthInsufficient&) {
            REQUIRE(++skipped < 2000);
        }
    }
}
