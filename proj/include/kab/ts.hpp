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

// Transition-system construction under the six execution semantics.
// Infinite branching on fresh service-call results is tamed by equality
// commitments: a successor per placement of the new calls among the
// visible constants, with fresh results drawn from a reserved namespace
// so that isomorphic successors collide and the state space can close.

#ifndef KAB_TS_HPP
#define KAB_TS_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kab/model.hpp"

namespace kab {

enum class Semantics { Standard, B, C, Eb, Ec, It };

std::string semantics_name(Semantics s);
std::optional<Semantics> semantics_from_name(const std::string& name);

struct TsState {
    ABox abox;
    ServiceCallMap map;
    size_t id = 0;
};

struct Edge {
    size_t src = 0;
    size_t dst = 0;
    std::string label;
    bool is_repair = false;
};

struct TransitionSystem {
    Semantics semantics = Semantics::Standard;
    TBox tbox;
    std::set<std::string> delta0;
    std::vector<TsState> states;
    std::vector<Edge> edges;
    std::vector<std::vector<size_t>> successors;  // by state id, sorted, unique
    size_t initial = 0;
    std::set<std::string> active_domain;
};

// One cell per group of new service calls, anchored either at a visible
// constant or at nothing (a fresh result). Cells without new calls are
// forced -- every recorded call sits with its value and no two constants
// may share a cell -- so only the branching-relevant cells are stored.
struct EqualityCommitment {
    struct Cell {
        std::vector<GroundTerm> calls;
        std::optional<std::string> anchor;
    };
    std::vector<Cell> cells;

    std::string digest() const;
};

// All equality commitments for the given new calls against the visible
// constants, in a deterministic order.
std::vector<EqualityCommitment> equality_commitments(
    const std::set<GroundTerm>& new_calls, const std::set<std::string>& pool);

enum class AllocOrder { Forward, Reversed };

// Mints the n smallest reserved constants not visible in the state. Pure in
// the state content, which is what makes isomorphic successors identical.
struct FreshValueSource {
    static std::vector<std::string> mint(const KabSpec& spec, const TsState& state,
                                         size_t n);
};

// The unique representative call evaluation for a commitment: anchored
// cells resolve to their anchor, fresh cells to minted constants assigned
// in cell order (or reversed, to exercise representative independence).
ServiceCallMap canonical_theta(const EqualityCommitment& h, const KabSpec& spec,
                               const TsState& state,
                               AllocOrder order = AllocOrder::Forward);

struct BuildLimits {
    size_t max_states = 100000;
    size_t max_run_domain = 64;
    size_t max_depth = 256;
};

struct Successor {
    std::string label;
    bool is_repair = false;
    ABox abox;
    ServiceCallMap map;
};

// Successors of a marker-free state: one per legal action instance and
// equality commitment. Standard semantics drops inconsistent results,
// the inconsistency-tolerant one keeps them, and the repair semantics
// defer the decision by marking the state for a repair step.
std::vector<Successor> action_successors(const TsState& state, const KabSpec& spec,
                                         Semantics sem,
                                         AllocOrder order = AllocOrder::Forward);

// Successors of a marked state: its repairs, decorated with the violation
// witnesses of the pre-repair ABox under eb/ec.
std::vector<Successor> repair_successors(const TsState& state, const KabSpec& spec,
                                         Semantics sem);

TransitionSystem build_ts(const KabSpec& spec, Semantics sem,
                          const BuildLimits& limits = {},
                          AllocOrder order = AllocOrder::Forward);

} // namespace kab

#endif
