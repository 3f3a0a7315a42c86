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

#include "kab/model.hpp"

#include "kab/errors.hpp"

namespace kab {

TupleSet answer_ecq(const Ecq& q, const std::vector<std::string>& free_vars,
                    const TBox& t, const ABox& a, QueryMode mode) {
    return mode == QueryMode::Certain ? eval_ecq(q, free_vars, t, a)
                                      : cqa_eval_ecq(q, free_vars, t, a);
}

TermTemplate TermTemplate::variable(std::string v) {
    TermTemplate t;
    t.kind = Kind::Var;
    t.var = std::move(v);
    return t;
}

TermTemplate TermTemplate::constant(GroundTerm g) {
    TermTemplate t;
    t.kind = Kind::Const;
    t.value = std::move(g);
    return t;
}

TermTemplate TermTemplate::call(std::string f, std::vector<TermTemplate> args) {
    TermTemplate t;
    t.kind = Kind::Call;
    t.call_name = std::move(f);
    t.call_args = std::move(args);
    return t;
}

std::string TermTemplate::str() const {
    switch (kind) {
        case Kind::Var: return var;
        case Kind::Const: return value.str();
        case Kind::Call: break;
    }
    std::string s = call_name + "(";
    for (size_t i = 0; i < call_args.size(); ++i) {
        if (i) s += ",";
        s += call_args[i].str();
    }
    return s + ")";
}

AtomTemplate::AtomTemplate(std::string p, TermTemplate a)
    : predicate(std::move(p)), args{std::move(a)} {}

AtomTemplate::AtomTemplate(std::string p, TermTemplate a, TermTemplate b)
    : predicate(std::move(p)), args{std::move(a), std::move(b)} {}

std::string AtomTemplate::str() const {
    std::string s = predicate + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i].str();
    }
    return s + ")";
}

std::set<std::string> KabSpec::delta0() const {
    std::set<std::string> d = declared_constants;
    d.insert(kTempConstant);
    for (const auto& l : tbox.labels()) d.insert(l);
    return d;
}

const Action& KabSpec::action_named(const std::string& name) const {
    return actions[action_index(name)];
}

size_t KabSpec::action_index(const std::string& name) const {
    for (size_t i = 0; i < actions.size(); ++i)
        if (actions[i].name == name) return i;
    throw SemanticError("unknown action " + name);
}

std::string ActionInstance::label(const KabSpec& spec) const {
    const Action& act = spec.actions[action];
    std::string s = act.name + "(";
    for (size_t i = 0; i < act.params.size(); ++i) {
        if (i) s += ",";
        s += sigma.at(act.params[i]).str();
    }
    return s + ")";
}

std::set<ActionInstance> legal_assignments(const KabSpec& spec, const ABox& a,
                                           QueryMode mode) {
    std::set<ActionInstance> out;
    for (const auto& rule : spec.process) {
        size_t idx = spec.action_index(rule.action);
        const Action& act = spec.actions[idx];
        if (rule.arg_vars.size() != act.params.size())
            throw SemanticError("rule for " + act.name + " passes " +
                                std::to_string(rule.arg_vars.size()) +
                                " arguments, action takes " +
                                std::to_string(act.params.size()));
        TupleSet answers = answer_ecq(*rule.condition, rule.arg_vars, spec.tbox, a, mode);
        for (const auto& tup : answers) {
            ActionInstance inst;
            inst.action = idx;
            for (size_t i = 0; i < act.params.size(); ++i)
                inst.sigma.emplace(act.params[i], tup[i]);
            out.insert(std::move(inst));
        }
    }
    return out;
}

namespace {

GroundTerm resolve(const TermTemplate& t, const Substitution& binding) {
    switch (t.kind) {
        case TermTemplate::Kind::Const:
            return t.value;
        case TermTemplate::Kind::Var: {
            auto it = binding.find(t.var);
            if (it == binding.end())
                throw SemanticError("unbound variable " + t.var + " in effect head");
            return it->second;
        }
        case TermTemplate::Kind::Call:
            break;
    }
    std::vector<std::string> args;
    args.reserve(t.call_args.size());
    for (const auto& a : t.call_args) {
        GroundTerm g = resolve(a, binding);
        if (!g.is_constant())
            throw SemanticError("service call " + t.call_name +
                                " takes a non-constant argument " + g.str());
        args.push_back(g.name);
    }
    return GroundTerm::call(t.call_name, std::move(args));
}

} // namespace

ABox do_effects(const TBox& t, const ABox& a, const Action& action,
                const Substitution& sigma, QueryMode mode) {
    ABox out;
    for (const auto& e : action.effects) {
        UCQ qp = ucq_substitute(e.qplus, sigma);
        EcqPtr cond = Ecq::embedded(qp);
        if (e.qminus) cond = Ecq::conj(cond, ecq_substitute(e.qminus, sigma));

        const std::vector<std::string>& frees = qp.free_vars;
        TupleSet answers = answer_ecq(*cond, frees, t, a, mode);
        for (const auto& tup : answers) {
            Substitution binding = sigma;
            for (size_t i = 0; i < frees.size(); ++i) binding[frees[i]] = tup[i];
            for (const auto& at : e.head) {
                Assertion f;
                f.predicate = at.predicate;
                for (const auto& arg : at.args) f.args.push_back(resolve(arg, binding));
                out.insert(std::move(f));
            }
        }
    }
    return out;
}

std::set<GroundTerm> calls(const ABox& e) {
    std::set<GroundTerm> out;
    for (const auto& f : e)
        for (const auto& arg : f.args)
            if (arg.is_call()) out.insert(arg);
    return out;
}

ABox ground(const ABox& e, const ServiceCallMap& theta) {
    ABox out;
    for (const auto& f : e) {
        Assertion g = f;
        for (auto& arg : g.args) {
            if (!arg.is_call()) continue;
            auto it = theta.find(arg);
            if (it == theta.end()) throw MissingCallBinding(arg.str());
            arg = it->second;
        }
        out.insert(std::move(g));
    }
    return out;
}

} // namespace kab
