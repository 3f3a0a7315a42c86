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

#include "kab/exports.hpp"

#include <json.hpp>

namespace kab {

std::string ts_to_json(const TransitionSystem& ts) {
    nlohmann::ordered_json j;
    j["semantics"] = semantics_name(ts.semantics);
    j["states"] = nlohmann::ordered_json::array();
    for (const auto& s : ts.states) {
        nlohmann::ordered_json js;
        js["id"] = s.id;
        js["abox"] = nlohmann::ordered_json::array();
        for (const auto& a : s.abox) js["abox"].push_back(a.str());
        js["map"] = nlohmann::ordered_json::array();
        for (const auto& [call, value] : s.map)
            js["map"].push_back({{"call", call.str()}, {"value", value.str()}});
        j["states"].push_back(std::move(js));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : ts.edges)
        j["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"label", e.label}});
    j["initial"] = ts.initial;
    j["active_domain"] = nlohmann::ordered_json::array();
    for (const auto& c : ts.active_domain) j["active_domain"].push_back(c);
    return j.dump(2) + "\n";
}

std::string ts_to_dot(const TransitionSystem& ts) {
    std::string out = "digraph ts {\n    rankdir=LR;\n    node [shape=box];\n";
    for (const auto& s : ts.states) {
        std::string label = "s" + std::to_string(s.id);
        for (const auto& a : s.abox) label += "\\n" + a.str();
        out += "    s" + std::to_string(s.id) + " [label=\"" + label + "\"";
        if (s.id == ts.initial) out += ", penwidth=2";
        out += "];\n";
    }
    for (const auto& e : ts.edges) {
        out += "    s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) +
               " [label=\"" + e.label + "\"";
        if (e.is_repair) out += ", style=dashed";
        out += "];\n";
    }
    out += "}\n";
    return out;
}

} // namespace kab
