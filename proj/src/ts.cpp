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

#include "kab/ts.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "kab/errors.hpp"
#include "kab/repair.hpp"

namespace kab {

std::string semantics_name(Semantics s) {
    switch (s) {
        case Semantics::Standard: return "standard";
        case Semantics::B: return "b";
        case Semantics::C: return "c";
        case Semantics::Eb: return "eb";
        case Semantics::Ec: return "ec";
        case Semantics::It: return "it";
    }
    return "?";
}

std::optional<Semantics> semantics_from_name(const std::string& name) {
    if (name == "standard") return Semantics::Standard;
    if (name == "b") return Semantics::B;
    if (name == "c") return Semantics::C;
    if (name == "eb") return Semantics::Eb;
    if (name == "ec") return Semantics::Ec;
    if (name == "it") return Semantics::It;
    return std::nullopt;
}

std::string EqualityCommitment::digest() const {
    std::string s;
    for (const auto& cell : cells) {
        if (!s.empty()) s += " ";
        for (size_t i = 0; i < cell.calls.size(); ++i) {
            if (i) s += "=";
            s += cell.calls[i].str();
        }
        s += "=";
        s += cell.anchor ? *cell.anchor : "*";
    }
    return s;
}

namespace {

void place_calls(const std::vector<GroundTerm>& cs, size_t next,
                 const std::set<std::string>& pool, EqualityCommitment& cur,
                 std::set<std::string>& taken, std::vector<EqualityCommitment>& out) {
    if (next == cs.size()) {
        out.push_back(cur);
        return;
    }
    const GroundTerm& c = cs[next];
    for (auto& cell : cur.cells) {
        cell.calls.push_back(c);
        place_calls(cs, next + 1, pool, cur, taken, out);
        cell.calls.pop_back();
    }
    for (const auto& p : pool) {
        if (taken.count(p)) continue;
        taken.insert(p);
        cur.cells.push_back({{c}, p});
        place_calls(cs, next + 1, pool, cur, taken, out);
        cur.cells.pop_back();
        taken.erase(p);
    }
    cur.cells.push_back({{c}, std::nullopt});
    place_calls(cs, next + 1, pool, cur, taken, out);
    cur.cells.pop_back();
}

} // namespace

std::vector<EqualityCommitment> equality_commitments(
    const std::set<GroundTerm>& new_calls, const std::set<std::string>& pool) {
    std::vector<GroundTerm> cs(new_calls.begin(), new_calls.end());
    std::vector<EqualityCommitment> out;
    EqualityCommitment cur;
    std::set<std::string> taken;
    place_calls(cs, 0, pool, cur, taken, out);
    return out;
}

std::vector<std::string> FreshValueSource::mint(const KabSpec& spec,
                                                const TsState& state, size_t n) {
    std::set<std::string> used = spec.delta0();
    for (const auto& c : adom_constants(state.abox)) used.insert(c);
    for (const auto& [call, value] : state.map) {
        used.insert(value.name);
        for (const auto& arg : call.args) used.insert(arg);
    }
    std::vector<std::string> out;
    for (size_t k = 0; out.size() < n; ++k) {
        std::string name = kFreshPrefix + std::to_string(k);
        if (!used.count(name)) out.push_back(std::move(name));
    }
    return out;
}

ServiceCallMap canonical_theta(const EqualityCommitment& h, const KabSpec& spec,
                               const TsState& state, AllocOrder order) {
    size_t fresh_cells = 0;
    for (const auto& cell : h.cells)
        if (!cell.anchor) ++fresh_cells;

    std::vector<std::string> fresh = FreshValueSource::mint(spec, state, fresh_cells);
    if (order == AllocOrder::Reversed) std::reverse(fresh.begin(), fresh.end());

    ServiceCallMap theta;
    size_t next_fresh = 0;
    for (const auto& cell : h.cells) {
        std::string value = cell.anchor ? *cell.anchor : fresh[next_fresh++];
        for (const auto& call : cell.calls)
            theta.emplace(call, GroundTerm::constant(value));
    }
    return theta;
}

namespace {

Assertion state_marker() {
    return Assertion(kStatePredicate, GroundTerm::constant(kTempConstant));
}

// The constants a new call may be identified with: the distinguished ones,
// the state's, the recorded call results, and whatever the effect result
// mentions. Recorded calls themselves sit with their results, so joining
// them adds no further anchors.
std::set<std::string> commitment_pool(const KabSpec& spec, const TsState& state,
                                      const ABox& effect) {
    std::set<std::string> pool = spec.delta0();
    for (const auto& c : adom_constants(state.abox)) pool.insert(c);
    for (const auto& [call, value] : state.map) pool.insert(value.name);
    for (const auto& c : adom_constants(effect)) pool.insert(c);
    return pool;
}

} // namespace

std::vector<Successor> action_successors(const TsState& state, const KabSpec& spec,
                                         Semantics sem, AllocOrder order) {
    QueryMode mode = sem == Semantics::It ? QueryMode::Cqa : QueryMode::Certain;
    bool marked = sem != Semantics::Standard && sem != Semantics::It;

    std::vector<Successor> out;
    for (const auto& inst : legal_assignments(spec, state.abox, mode)) {
        const Action& act = spec.actions[inst.action];
        ABox effect = do_effects(spec.tbox, state.abox, act, inst.sigma, mode);

        std::set<GroundTerm> new_calls;
        for (const auto& call : calls(effect))
            if (!state.map.count(call)) new_calls.insert(call);

        auto pool = commitment_pool(spec, state, effect);
        for (const auto& h : equality_commitments(new_calls, pool)) {
            ServiceCallMap theta = canonical_theta(h, spec, state, order);
            ServiceCallMap merged = state.map;
            merged.insert(theta.begin(), theta.end());

            ABox next = ground(effect, merged);
            if (sem == Semantics::Standard && !is_consistent(spec.tbox, next))
                continue;
            if (marked) next.insert(state_marker());

            std::string label = inst.label(spec);
            std::string digest = h.digest();
            if (!digest.empty()) label += " | " + digest;
            out.push_back({std::move(label), false, std::move(next), merged});
        }
    }
    return out;
}

std::vector<Successor> repair_successors(const TsState& state, const KabSpec& spec,
                                         Semantics sem) {
    ABox pre = state.abox;
    pre.erase(state_marker());

    bool decorated = sem == Semantics::Eb || sem == Semantics::Ec;
    ABox decoration;
    if (decorated)
        for (const auto& label : viol(spec.tbox, pre))
            decoration.insert(Assertion(kViolPredicate, GroundTerm::constant(label)));

    RepairSet repairs;
    if (sem == Semantics::B || sem == Semantics::Eb)
        repairs = b_repairs(spec.tbox, pre);
    else if (sem == Semantics::C || sem == Semantics::Ec)
        repairs = {c_repair(spec.tbox, pre)};
    else
        throw SemanticError("repair step undefined under " + semantics_name(sem) +
                            " semantics");

    std::vector<Successor> out;
    std::string label = semantics_name(sem) + "-repair";
    for (const auto& r : repairs) {
        ABox next = r;
        next.insert(decoration.begin(), decoration.end());
        out.push_back({label, true, std::move(next), state.map});
    }
    return out;
}

namespace {

size_t run_domain_size(const TsState& s) {
    std::set<std::string> seen = adom_constants(s.abox);
    for (const auto& [call, value] : s.map) {
        seen.insert(value.name);
        for (const auto& arg : call.args) seen.insert(arg);
    }
    return seen.size();
}

} // namespace

TransitionSystem build_ts(const KabSpec& spec, Semantics sem,
                          const BuildLimits& limits, AllocOrder order) {
    if (!is_consistent(spec.tbox, spec.a0)) throw InconsistentInitialAbox();

    TransitionSystem ts;
    ts.semantics = sem;
    ts.tbox = spec.tbox;
    ts.delta0 = spec.delta0();

    bool uses_marker = sem != Semantics::Standard && sem != Semantics::It;
    std::map<std::pair<ABox, ServiceCallMap>, size_t> index;

    auto intern = [&](ABox abox, ServiceCallMap map) -> std::pair<size_t, bool> {
        auto key = std::make_pair(abox, map);
        auto it = index.find(key);
        if (it != index.end()) return {it->second, false};
        if (ts.states.size() >= limits.max_states)
            throw LimitExceeded(LimitKind::States,
                                "more than " + std::to_string(limits.max_states) +
                                    " states; the system may not be run-bounded");
        TsState s;
        s.abox = std::move(abox);
        s.map = std::move(map);
        s.id = ts.states.size();
        if (run_domain_size(s) > limits.max_run_domain)
            throw LimitExceeded(LimitKind::RunDomain,
                                "state " + std::to_string(s.id) + " accumulates over " +
                                    std::to_string(limits.max_run_domain) +
                                    " constants; the system may not be run-bounded");
        index.emplace(std::move(key), s.id);
        ts.states.push_back(std::move(s));
        return {ts.states.size() - 1, true};
    };

    auto [root, fresh_root] = intern(spec.a0, {});
    (void)fresh_root;
    ts.initial = root;

    std::deque<std::pair<size_t, size_t>> frontier{{root, 0}};
    while (!frontier.empty()) {
        auto [id, depth] = frontier.front();
        frontier.pop_front();

        TsState state = ts.states[id];
        bool marker = uses_marker && state.abox.count(state_marker()) > 0;
        std::vector<Successor> succs = marker ? repair_successors(state, spec, sem)
                                              : action_successors(state, spec, sem, order);
        for (auto& succ : succs) {
            auto [dst, added] = intern(std::move(succ.abox), std::move(succ.map));
            ts.edges.push_back({id, dst, std::move(succ.label), succ.is_repair});
            if (added) {
                if (depth + 1 > limits.max_depth)
                    throw LimitExceeded(LimitKind::Depth,
                                        "no fixpoint within " +
                                            std::to_string(limits.max_depth) +
                                            " steps; the system may not be run-bounded");
                frontier.emplace_back(dst, depth + 1);
            }
        }
    }

    ts.successors.resize(ts.states.size());
    for (const auto& e : ts.edges) ts.successors[e.src].push_back(e.dst);
    for (auto& row : ts.successors) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }

    ts.active_domain = ts.delta0;
    for (const auto& s : ts.states)
        for (const auto& c : adom_constants(s.abox)) ts.active_domain.insert(c);
    return ts;
}

} // namespace kab
