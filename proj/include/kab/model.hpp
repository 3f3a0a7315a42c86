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

// Knowledge and action base specifications and the single-step action
// machinery: which parameter assignments the process rules permit, what
// facts an action instance produces, and how pending service calls in
// those facts are extracted and resolved.

#ifndef KAB_MODEL_HPP
#define KAB_MODEL_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kab/dllite.hpp"
#include "kab/repair.hpp"

namespace kab {

// Whether query answering inside the step machinery is plain certain
// answers or consistent answers over all b-repairs.
enum class QueryMode { Certain, Cqa };

TupleSet answer_ecq(const Ecq& q, const std::vector<std::string>& free_vars,
                    const TBox& t, const ABox& a, QueryMode mode);

// A term position in an effect head: a constant, a variable bound by the
// effect condition or the action parameters, or a service call f(t1..tn)
// over such terms.
struct TermTemplate {
    enum class Kind { Var, Const, Call };

    Kind kind = Kind::Const;
    std::string var;
    GroundTerm value;
    std::string call_name;
    std::vector<TermTemplate> call_args;

    static TermTemplate variable(std::string v);
    static TermTemplate constant(GroundTerm g);
    static TermTemplate call(std::string f, std::vector<TermTemplate> args);

    bool is_var() const { return kind == Kind::Var; }
    bool is_const() const { return kind == Kind::Const; }
    bool is_call() const { return kind == Kind::Call; }
    std::string str() const;
};

struct AtomTemplate {
    std::string predicate;
    std::vector<TermTemplate> args;

    AtomTemplate() = default;
    AtomTemplate(std::string p, TermTemplate a);
    AtomTemplate(std::string p, TermTemplate a, TermTemplate b);
    std::string str() const;
};

// One conditional effect: when ([qplus] and qminus) has answer rho, the
// head templates instantiated by rho join the successor state. A null
// qminus means no filter.
struct EffectSpec {
    UCQ qplus;
    EcqPtr qminus;
    std::vector<AtomTemplate> head;
};

struct Action {
    std::string name;
    std::vector<std::string> params;
    std::vector<EffectSpec> effects;
};

// Condition-action rule: each answer of the condition, read off along
// arg_vars, supplies the action's parameters positionally.
struct ProcessRule {
    EcqPtr condition;
    std::vector<std::string> arg_vars;
    std::string action;
};

struct KabSpec {
    TBox tbox;
    ABox a0;
    std::vector<Action> actions;
    std::vector<ProcessRule> process;
    std::set<std::string> declared_constants;

    // Distinguished constants: the declared ones, the state-marker
    // constant, and one label per negative TBox assertion.
    std::set<std::string> delta0() const;

    const Action& action_named(const std::string& name) const;
    size_t action_index(const std::string& name) const;
};

// A ground action instance: an action of the spec plus a full parameter
// assignment.
struct ActionInstance {
    size_t action = 0;
    Substitution sigma;

    std::string label(const KabSpec& spec) const;

    friend bool operator==(const ActionInstance& a, const ActionInstance& b) {
        return a.action == b.action && a.sigma == b.sigma;
    }
    friend bool operator<(const ActionInstance& a, const ActionInstance& b) {
        if (a.action != b.action) return a.action < b.action;
        return a.sigma < b.sigma;
    }
};

// All action instances the process rules permit on the given ABox.
std::set<ActionInstance> legal_assignments(const KabSpec& spec, const ABox& a,
                                           QueryMode mode = QueryMode::Certain);

// Facts produced by running the action's effects under sigma. The result
// may contain service-call terms; it is not yet an ABox of constants.
ABox do_effects(const TBox& t, const ABox& a, const Action& action,
                const Substitution& sigma, QueryMode mode = QueryMode::Certain);

// Service-call terms occurring in a fact set.
std::set<GroundTerm> calls(const ABox& e);

// Deterministic service results accumulated so far: ground call -> value.
using ServiceCallMap = std::map<GroundTerm, GroundTerm>;

// Replace every service call by its theta-image. Throws MissingCallBinding
// if theta is not total on calls(e).
ABox ground(const ABox& e, const ServiceCallMap& theta);

} // namespace kab

#endif
