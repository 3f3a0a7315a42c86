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

#include <json.hpp>
#include <string>

#include "kab/exports.hpp"
#include "testutil.hpp"

using namespace kab;
using namespace kab::test;

TEST_CASE("the json export carries the whole system and is byte-stable") {
    TransitionSystem ts = build_ts(running_kab(), Semantics::Standard);
    std::string text = ts_to_json(ts);
    CHECK(ts_to_json(build_ts(running_kab(), Semantics::Standard)) == text);

    auto j = nlohmann::json::parse(text);
    CHECK(j["semantics"] == "standard");
    CHECK(j["states"].size() == ts.states.size());
    CHECK(j["edges"].size() == ts.edges.size());
    CHECK(j["initial"] == ts.initial);
    const auto& init = j["states"][ts.initial];
    CHECK(init["abox"][0] == "C(a)");
    CHECK(init["map"].empty());

    bool saw_call = false;
    for (const auto& s : j["states"])
        for (const auto& m : s["map"])
            if (m["call"] == "f(a)") saw_call = true;
    CHECK(saw_call);

    std::set<std::string> labels;
    for (const auto& e : j["edges"]) {
        CHECK(e["src"].is_number_unsigned());
        CHECK(e["dst"].is_number_unsigned());
        labels.insert(e["label"].get<std::string>().substr(0, e["label"].get<std::string>().find(" | ")));
    }
    CHECK(labels.count("gamma1()") == 1);
    CHECK(labels.count("gamma2(a)") == 1);

    std::set<std::string> dom;
    for (const auto& c : j["active_domain"]) dom.insert(c.get<std::string>());
    CHECK(dom.count("a") == 1);
}

TEST_CASE("the dot export dashes repair edges") {
    std::string plain = ts_to_dot(build_ts(running_kab(), Semantics::Standard));
    CHECK(plain.find("digraph ts {") == 0);
    CHECK(plain.find("style=dashed") == std::string::npos);

    std::string repaired = ts_to_dot(build_ts(running_kab(), Semantics::B));
    CHECK(repaired.find("style=dashed") != std::string::npos);
    CHECK(repaired.find("b-repair") != std::string::npos);
    CHECK(ts_to_dot(build_ts(running_kab(), Semantics::B)) == repaired);
}
