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

#include "kab/printer.hpp"

namespace kab {
namespace {

std::string role_str(const Role& r) { return r.inverse ? "inv " + r.name : r.name; }

std::string basic_str(const BasicConcept& b) {
    return b.kind == BasicConcept::Kind::Named ? b.name : "exists " + role_str(b.role);
}

std::string term_str(const QueryTerm& t) { return t.is_var() ? t.var : t.value.str(); }

std::string atom_str(const QueryAtom& a) {
    std::string s = a.predicate + "(" + term_str(a.terms[0]);
    if (a.terms.size() == 2) s += ", " + term_str(a.terms[1]);
    return s + ")";
}

bool is_truth(const UCQ& q) {
    return q.free_vars.empty() && q.disjuncts.size() == 1 && q.disjuncts[0].atoms.empty();
}

std::string template_str(const TermTemplate& t) {
    switch (t.kind) {
        case TermTemplate::Kind::Var: return t.var;
        case TermTemplate::Kind::Const: return t.value.str();
        case TermTemplate::Kind::Call: {
            std::string s = t.call_name + "(";
            for (size_t i = 0; i < t.call_args.size(); ++i)
                s += (i ? ", " : "") + template_str(t.call_args[i]);
            return s + ")";
        }
    }
    return "?";
}

std::string head_atom_str(const AtomTemplate& a) {
    std::string s = a.predicate + "(" + template_str(a.args[0]);
    if (a.args.size() == 2) s += ", " + template_str(a.args[1]);
    return s + ")";
}

} // namespace

std::string print_ucq(const UCQ& q) {
    if (is_truth(q)) return "true";
    std::string s;
    for (size_t d = 0; d < q.disjuncts.size(); ++d) {
        if (d) s += " | ";
        const auto& atoms = q.disjuncts[d].atoms;
        for (size_t i = 0; i < atoms.size(); ++i) {
            if (i) s += " & ";
            s += atom_str(atoms[i]);
        }
    }
    return s;
}

std::string print_ecq(const Ecq& e) {
    switch (e.kind) {
        case Ecq::Kind::Embedded:
            return is_truth(e.ucq) ? "true" : "[" + print_ucq(e.ucq) + "]";
        case Ecq::Kind::Not:
            return "!" + print_ecq(*e.lhs);
        case Ecq::Kind::And:
            return "(" + print_ecq(*e.lhs) + " & " + print_ecq(*e.rhs) + ")";
        case Ecq::Kind::Or:
            return "(" + print_ecq(*e.lhs) + " | " + print_ecq(*e.rhs) + ")";
        case Ecq::Kind::Implies:
            return "(" + print_ecq(*e.lhs) + " -> " + print_ecq(*e.rhs) + ")";
        case Ecq::Kind::Exists:
            return "exists " + e.var + "." + print_ecq(*e.lhs);
        case Ecq::Kind::Forall:
            return "forall " + e.var + "." + print_ecq(*e.lhs);
    }
    return "?";
}

std::string print_mu(const MuFormula& f) {
    switch (f.kind) {
        case MuFormula::Kind::Query:
            return print_ecq(*f.ecq);
        case MuFormula::Kind::Not:
            return "!" + print_mu(*f.lhs);
        case MuFormula::Kind::And:
            return "(" + print_mu(*f.lhs) + " & " + print_mu(*f.rhs) + ")";
        case MuFormula::Kind::Or:
            return "(" + print_mu(*f.lhs) + " | " + print_mu(*f.rhs) + ")";
        case MuFormula::Kind::Implies:
            return "(" + print_mu(*f.lhs) + " -> " + print_mu(*f.rhs) + ")";
        case MuFormula::Kind::Exists:
            return "exists " + f.var + "." + print_mu(*f.lhs);
        case MuFormula::Kind::Forall:
            return "forall " + f.var + "." + print_mu(*f.lhs);
        case MuFormula::Kind::Diamond:
            return "<>" + print_mu(*f.lhs);
        case MuFormula::Kind::Box:
            return "[]" + print_mu(*f.lhs);
        case MuFormula::Kind::PredVar:
            return f.var;
        case MuFormula::Kind::Mu:
            return "mu " + f.var + "." + print_mu(*f.lhs);
        case MuFormula::Kind::Nu:
            return "nu " + f.var + "." + print_mu(*f.lhs);
    }
    return "?";
}

std::string print_kab(const KabSpec& spec) {
    std::string out;
    const TBox& t = spec.tbox;
    if (!t.positives.empty() || t.has_constraints()) {
        out += "TBOX {\n";
        for (const auto& ax : t.positives)
            out += "    " + basic_str(ax.lhs) + " isa " + basic_str(ax.rhs) + ";\n";
        for (const auto& ax : t.negative_concepts)
            out += "    " + basic_str(ax.lhs) + " disjoint " + basic_str(ax.rhs) + ";\n";
        for (const auto& ax : t.negative_roles)
            out += "    " + role_str(ax.lhs) + " roledisjoint " + role_str(ax.rhs) + ";\n";
        for (const auto& ax : t.functionalities)
            out += "    funct " + role_str(ax.role) + ";\n";
        out += "}\n";
    }
    if (!spec.a0.empty()) {
        out += "ABOX {\n";
        for (const auto& a : spec.a0) out += "    " + a.str() + ";\n";
        out += "}\n";
    }
    // Initial individuals are declared implicitly; list only the extras.
    std::set<std::string> extras = spec.declared_constants;
    for (const auto& c : adom_constants(spec.a0)) extras.erase(c);
    if (!extras.empty()) {
        out += "CONSTANTS {\n";
        for (const auto& c : extras) out += "    " + c + ";\n";
        out += "}\n";
    }
    for (const auto& act : spec.actions) {
        out += "ACTION " + act.name + "(";
        for (size_t i = 0; i < act.params.size(); ++i) out += (i ? ", " : "") + act.params[i];
        out += ") {\n";
        for (const auto& e : act.effects) {
            out += "    effect [" + print_ucq(e.qplus) + "]";
            if (e.qminus) out += " and " + print_ecq(*e.qminus);
            out += " ~> {";
            for (size_t i = 0; i < e.head.size(); ++i)
                out += (i ? ", " : "") + head_atom_str(e.head[i]);
            out += "};\n";
        }
        out += "}\n";
    }
    if (!spec.process.empty()) {
        out += "PROCESS {\n";
        for (const auto& r : spec.process) {
            out += "    " + print_ecq(*r.condition) + " -> " + r.action + "(";
            for (size_t i = 0; i < r.arg_vars.size(); ++i) out += (i ? ", " : "") + r.arg_vars[i];
            out += ");\n";
        }
        out += "}\n";
    }
    return out;
}

} // namespace kab
