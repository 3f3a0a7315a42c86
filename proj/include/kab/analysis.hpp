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

// Static analysis of action specifications. The dependency graph tracks how
// individuals flow from effect conditions into effect heads, separating
// plain copies from service-call results; weak acyclicity of that graph is
// the certificate that state spaces stay bounded. The two spec rewritings
// (consistent approximant, positive dominant) strip constraints and
// parameters so that the rewritten system's runs cover the original's.

#ifndef KAB_ANALYSIS_HPP
#define KAB_ANALYSIS_HPP

#include <set>
#include <string>
#include <utility>

#include "kab/model.hpp"

namespace kab {

// Graph over predicate argument positions: (name, 1) for concepts, (name, 1)
// and (name, 2) for roles.
using GraphNode = std::pair<std::string, int>;
using GraphEdge = std::pair<GraphNode, GraphNode>;

struct DependencyGraph {
    std::set<GraphNode> nodes;
    std::set<GraphEdge> ordinary_edges;
    std::set<GraphEdge> special_edges;
};

// Builds the dependency graph of the spec. Each effect condition is
// rewritten against the positive inclusions first, so positions reachable
// only through the TBox count as edge sources, and action parameters are
// treated like free condition variables. A head position filled by a plain
// variable yields ordinary edges from the variable's source positions; one
// filled by a service call yields special edges from the sources of every
// variable inside the call.
DependencyGraph dependency_graph(const KabSpec& spec);

// True iff no cycle passes through a special edge, checked as: no strongly
// connected component contains one.
bool is_weakly_acyclic(const DependencyGraph& g);

// The spec with its constraints dropped (positive inclusions survive), the
// initial ABox saturated with one Viol fact per dropped constraint label,
// and a copy effect Viol(x) ~> {Viol(x)} prepended to every action. The
// process rules are untouched.
KabSpec consistent_approximant(const KabSpec& spec);

// The consistent approximant with every action nullary: parameters are
// folded into the effect conditions as answer variables, the negative
// filters are dropped, and each process rule is replaced by an
// unconditional rule for the same action. Throws SemanticError if an
// effect head mentions a parameter its condition does not, since nothing
// grounds such a head once the parameters are gone.
KabSpec positive_dominant(const KabSpec& spec);

// GraphViz rendering; special edges are starred.
std::string graph_to_dot(const DependencyGraph& g);

} // namespace kab

#endif
