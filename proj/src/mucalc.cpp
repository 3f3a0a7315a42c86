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

#include "kab/mucalc.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "kab/errors.hpp"
#include "kab/repair.hpp"

namespace kab {

namespace {

MuPtr make(MuFormula::Kind k, EcqPtr q, std::string var, MuPtr lhs, MuPtr rhs) {
    auto f = std::make_shared<MuFormula>();
    f->kind = k;
    f->ecq = std::move(q);
    f->var = std::move(var);
    f->lhs = std::move(lhs);
    f->rhs = std::move(rhs);
    return f;
}

} // namespace

using Kind = MuFormula::Kind;

MuPtr MuFormula::query(EcqPtr q) {
    return make(Kind::Query, std::move(q), "", nullptr, nullptr);
}
MuPtr MuFormula::truth() { return query(Ecq::truth()); }
MuPtr MuFormula::negation(MuPtr f) {
    return make(Kind::Not, nullptr, "", std::move(f), nullptr);
}
MuPtr MuFormula::conj(MuPtr a, MuPtr b) {
    return make(Kind::And, nullptr, "", std::move(a), std::move(b));
}
MuPtr MuFormula::disj(MuPtr a, MuPtr b) {
    return make(Kind::Or, nullptr, "", std::move(a), std::move(b));
}
MuPtr MuFormula::implies(MuPtr a, MuPtr b) {
    return make(Kind::Implies, nullptr, "", std::move(a), std::move(b));
}
MuPtr MuFormula::exists(std::string v, MuPtr f) {
    return make(Kind::Exists, nullptr, std::move(v), std::move(f), nullptr);
}
MuPtr MuFormula::forall(std::string v, MuPtr f) {
    return make(Kind::Forall, nullptr, std::move(v), std::move(f), nullptr);
}
MuPtr MuFormula::diamond(MuPtr f) {
    return make(Kind::Diamond, nullptr, "", std::move(f), nullptr);
}
MuPtr MuFormula::box(MuPtr f) {
    return make(Kind::Box, nullptr, "", std::move(f), nullptr);
}
MuPtr MuFormula::predvar(std::string z) {
    return make(Kind::PredVar, nullptr, std::move(z), nullptr, nullptr);
}
MuPtr MuFormula::mu(std::string z, MuPtr f) {
    return make(Kind::Mu, nullptr, std::move(z), std::move(f), nullptr);
}
MuPtr MuFormula::nu(std::string z, MuPtr f) {
    return make(Kind::Nu, nullptr, std::move(z), std::move(f), nullptr);
}

bool mu_equal(const MuPtr& a, const MuPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->var != b->var) return false;
    if (a->kind == Kind::Query) return ecq_equal(*a->ecq, *b->ecq);
    return mu_equal(a->lhs, b->lhs) && mu_equal(a->rhs, b->rhs);
}

namespace {

void collect_free_ivars(const MuPtr& f, std::set<std::string>& bound,
                        std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
        case Kind::Query:
            for (const auto& v : ecq_free_vars(*f->ecq))
                if (!bound.count(v)) out.insert(v);
            return;
        case Kind::Exists:
        case Kind::Forall: {
            bool fresh = bound.insert(f->var).second;
            collect_free_ivars(f->lhs, bound, out);
            if (fresh) bound.erase(f->var);
            return;
        }
        default:
            collect_free_ivars(f->lhs, bound, out);
            collect_free_ivars(f->rhs, bound, out);
            return;
    }
}

void collect_free_predvars(const MuPtr& f, std::set<std::string>& bound,
                           std::set<std::string>& out) {
    if (!f) return;
    switch (f->kind) {
        case Kind::PredVar:
            if (!bound.count(f->var)) out.insert(f->var);
            return;
        case Kind::Mu:
        case Kind::Nu: {
            bool fresh = bound.insert(f->var).second;
            collect_free_predvars(f->lhs, bound, out);
            if (fresh) bound.erase(f->var);
            return;
        }
        default:
            collect_free_predvars(f->lhs, bound, out);
            collect_free_predvars(f->rhs, bound, out);
            return;
    }
}

void require_polarity(const MuPtr& f, const std::string& z, bool positive) {
    if (!f) return;
    switch (f->kind) {
        case Kind::PredVar:
            if (f->var == z && !positive) throw NonMonotoneFixpoint(z);
            return;
        case Kind::Not:
            require_polarity(f->lhs, z, !positive);
            return;
        case Kind::Implies:
            require_polarity(f->lhs, z, !positive);
            require_polarity(f->rhs, z, positive);
            return;
        case Kind::Mu:
        case Kind::Nu:
            if (f->var == z) return;  // shadowed
            require_polarity(f->lhs, z, positive);
            return;
        case Kind::Query:
            return;
        default:
            require_polarity(f->lhs, z, positive);
            require_polarity(f->rhs, z, positive);
            return;
    }
}

} // namespace

std::set<std::string> mu_free_ivars(const MuPtr& f) {
    std::set<std::string> bound, out;
    collect_free_ivars(f, bound, out);
    return out;
}

std::set<std::string> mu_free_predvars(const MuPtr& f) {
    std::set<std::string> bound, out;
    collect_free_predvars(f, bound, out);
    return out;
}

bool mu_is_closed(const MuPtr& f) {
    return mu_free_ivars(f).empty() && mu_free_predvars(f).empty();
}

void mu_check_monotone(const MuPtr& f) {
    if (!f) return;
    if (f->kind == Kind::Mu || f->kind == Kind::Nu)
        require_polarity(f->lhs, f->var, true);
    mu_check_monotone(f->lhs);
    mu_check_monotone(f->rhs);
}

bool is_it_fragment(const MuPtr& f) {
    if (!f) return true;
    switch (f->kind) {
        case Kind::Diamond:
        case Kind::Box: {
            const MuPtr& inner = f->lhs;
            if (!inner || (inner->kind != Kind::Diamond && inner->kind != Kind::Box))
                return false;
            return is_it_fragment(inner->lhs);
        }
        case Kind::And:
        case Kind::Or:
        case Kind::Implies:
            return is_it_fragment(f->lhs) && is_it_fragment(f->rhs);
        case Kind::Query:
        case Kind::PredVar:
            return true;
        default:
            return is_it_fragment(f->lhs);
    }
}

namespace {

void collect_ecq_vars(const Ecq& e, std::set<std::string>& out) {
    if (e.kind == Ecq::Kind::Embedded) {
        out.insert(e.ucq.free_vars.begin(), e.ucq.free_vars.end());
        for (const auto& d : e.ucq.disjuncts) {
            out.insert(d.free_vars.begin(), d.free_vars.end());
            out.insert(d.existential_vars.begin(), d.existential_vars.end());
            for (const auto& at : d.atoms)
                for (const auto& t : at.terms)
                    if (t.is_var()) out.insert(t.var);
        }
        return;
    }
    if (e.kind == Ecq::Kind::Exists || e.kind == Ecq::Kind::Forall) out.insert(e.var);
    if (e.lhs) collect_ecq_vars(*e.lhs, out);
    if (e.rhs) collect_ecq_vars(*e.rhs, out);
}

void collect_all_ivars(const MuPtr& f, std::set<std::string>& out) {
    if (!f) return;
    if (f->kind == Kind::Query) {
        collect_ecq_vars(*f->ecq, out);
        return;
    }
    if (f->kind == Kind::Exists || f->kind == Kind::Forall) out.insert(f->var);
    collect_all_ivars(f->lhs, out);
    collect_all_ivars(f->rhs, out);
}

// not exists gv. [Viol(gv)]
MuPtr no_violation_guard(const std::string& gv) {
    UCQ u;
    u.free_vars = {gv};
    ConjunctiveQuery c;
    c.free_vars = {gv};
    c.atoms.emplace_back(kViolPredicate, QueryTerm::variable(gv));
    u.disjuncts.push_back(std::move(c));
    return MuFormula::negation(
        MuFormula::exists(gv, MuFormula::query(Ecq::embedded(std::move(u)))));
}

MuPtr tau_rec(const MuPtr& f, const MuPtr& guard) {
    switch (f->kind) {
        case Kind::Diamond:
            return MuFormula::diamond(MuFormula::diamond(
                MuFormula::conj(guard, tau_rec(f->lhs, guard))));
        case Kind::Box:
            return MuFormula::box(MuFormula::diamond(
                MuFormula::implies(guard, tau_rec(f->lhs, guard))));
        case Kind::Query:
        case Kind::PredVar:
            return f;
        default:
            return make(f->kind, f->ecq, f->var,
                        f->lhs ? tau_rec(f->lhs, guard) : nullptr,
                        f->rhs ? tau_rec(f->rhs, guard) : nullptr);
    }
}

} // namespace

MuPtr tau(const MuPtr& f) {
    if (!f) return f;
    std::set<std::string> used;
    collect_all_ivars(f, used);
    std::string gv = "x";
    for (int i = 0; used.count(gv); ++i) gv = "x" + std::to_string(i);
    return tau_rec(f, no_violation_guard(gv));
}

namespace {

// Evaluation is bottom-up over state-id sets. Subformulas without free
// predicate variables are memoized per valuation slice of their free
// individual variables; anything mentioning a fixpoint variable is
// recomputed each Kleene round because the predicate valuation moved.
class Evaluator {
public:
    Evaluator(const TransitionSystem& ts, QueryMode mode) : ts_(ts), mode_(mode) {
        domain_.assign(ts.active_domain.begin(), ts.active_domain.end());
        adoms_.reserve(ts.states.size());
        for (const auto& st : ts.states) {
            adoms_.push_back(adom_constants(st.abox));
            all_.insert(st.id);
        }
    }

    std::set<size_t> eval(const MuPtr& f) {
        const NodeInfo& info = node_info(f);
        MemoKey key;
        if (!info.open_pred) {
            key.first = f.get();
            for (const auto& v : info.free_ivars) key.second.push_back(valuation_.at(v));
            auto it = memo_.find(key);
            if (it != memo_.end()) return it->second;
        }
        std::set<size_t> r = compute(f);
        if (!info.open_pred) memo_.emplace(std::move(key), r);
        return r;
    }

private:
    struct NodeInfo {
        std::vector<std::string> free_ivars;
        bool open_pred = false;
    };
    using MemoKey = std::pair<const MuFormula*, std::vector<std::string>>;

    struct ScopedBinding {
        std::map<std::string, std::string>& env;
        std::string var;
        std::optional<std::string> saved;
        ScopedBinding(std::map<std::string, std::string>& e, std::string v,
                      const std::string& value)
            : env(e), var(std::move(v)) {
            auto it = env.find(var);
            if (it != env.end()) saved = it->second;
            env[var] = value;
        }
        ~ScopedBinding() {
            if (saved)
                env[var] = *saved;
            else
                env.erase(var);
        }
    };

    const NodeInfo& node_info(const MuPtr& f) {
        auto it = info_.find(f.get());
        if (it != info_.end()) return it->second;
        NodeInfo ni;
        std::set<std::string> iv = mu_free_ivars(f);
        ni.free_ivars.assign(iv.begin(), iv.end());
        ni.open_pred = !mu_free_predvars(f).empty();
        return info_.emplace(f.get(), std::move(ni)).first->second;
    }

    std::set<size_t> compute(const MuPtr& f) {
        switch (f->kind) {
            case Kind::Query:
                return eval_query(f);
            case Kind::Not:
                return complement(eval(f->lhs));
            case Kind::And: {
                std::set<size_t> l = eval(f->lhs), r = eval(f->rhs), out;
                std::set_intersection(l.begin(), l.end(), r.begin(), r.end(),
                                      std::inserter(out, out.end()));
                return out;
            }
            case Kind::Or: {
                std::set<size_t> out = eval(f->lhs), r = eval(f->rhs);
                out.insert(r.begin(), r.end());
                return out;
            }
            case Kind::Implies: {
                std::set<size_t> out = complement(eval(f->lhs)), r = eval(f->rhs);
                out.insert(r.begin(), r.end());
                return out;
            }
            case Kind::Exists: {
                std::set<size_t> out;
                for (const auto& d : domain_) {
                    ScopedBinding bind(valuation_, f->var, d);
                    for (size_t id : eval(f->lhs))
                        if (adoms_[id].count(d)) out.insert(id);
                }
                return out;
            }
            case Kind::Forall: {
                std::set<size_t> out = all_;
                for (const auto& d : domain_) {
                    ScopedBinding bind(valuation_, f->var, d);
                    std::set<size_t> s = eval(f->lhs);
                    for (size_t id : all_)
                        if (adoms_[id].count(d) && !s.count(id)) out.erase(id);
                }
                return out;
            }
            case Kind::Diamond: {
                std::set<size_t> s = eval(f->lhs), out;
                for (size_t id : all_)
                    for (size_t t : ts_.successors[id])
                        if (s.count(t)) {
                            out.insert(id);
                            break;
                        }
                return out;
            }
            case Kind::Box: {
                std::set<size_t> s = eval(f->lhs), out;
                for (size_t id : all_) {
                    bool every = true;
                    for (size_t t : ts_.successors[id])
                        if (!s.count(t)) {
                            every = false;
                            break;
                        }
                    if (every) out.insert(id);
                }
                return out;
            }
            case Kind::PredVar:
                return predval_.at(f->var);
            case Kind::Mu:
                return fixpoint(f, {});
            case Kind::Nu:
                return fixpoint(f, all_);
        }
        throw SemanticError("model_check: unknown formula node");
    }

    std::set<size_t> fixpoint(const MuPtr& f, std::set<size_t> start) {
        std::optional<std::set<size_t>> saved;
        auto it = predval_.find(f->var);
        if (it != predval_.end()) saved = it->second;
        predval_[f->var] = std::move(start);
        size_t rounds = ts_.states.size() + 2;
        for (size_t i = 0; i < rounds; ++i) {
            std::set<size_t> next = eval(f->lhs);
            if (next == predval_[f->var]) break;
            if (i + 1 == rounds)
                throw SemanticError("fixpoint iteration did not converge");
            predval_[f->var] = std::move(next);
        }
        std::set<size_t> result = predval_[f->var];
        if (saved)
            predval_[f->var] = std::move(*saved);
        else
            predval_.erase(f->var);
        return result;
    }

    std::set<size_t> eval_query(const MuPtr& f) {
        Substitution sub;
        for (const auto& v : node_info(f).free_ivars)
            sub[v] = GroundTerm::constant(valuation_.at(v));
        EcqPtr q = sub.empty() ? f->ecq : ecq_substitute(f->ecq, sub);
        std::set<size_t> out;
        for (const auto& st : ts_.states) {
            bool holds = mode_ == QueryMode::Certain
                             ? eval_ecq_closed(*q, ts_.tbox, st.abox)
                             : cqa_eval_ecq_closed(*q, ts_.tbox, st.abox);
            if (holds) out.insert(st.id);
        }
        return out;
    }

    std::set<size_t> complement(const std::set<size_t>& s) {
        std::set<size_t> out;
        std::set_difference(all_.begin(), all_.end(), s.begin(), s.end(),
                            std::inserter(out, out.end()));
        return out;
    }

    const TransitionSystem& ts_;
    QueryMode mode_;
    std::vector<std::string> domain_;
    std::vector<std::set<std::string>> adoms_;
    std::set<size_t> all_;
    std::map<const MuFormula*, NodeInfo> info_;
    std::map<std::string, std::string> valuation_;
    std::map<std::string, std::set<size_t>> predval_;
    std::map<MemoKey, std::set<size_t>> memo_;
};

} // namespace

CheckResult model_check(const TransitionSystem& ts, const MuPtr& formula,
                        QueryMode mode) {
    if (!formula) throw SemanticError("model_check: null formula");
    std::set<std::string> iv = mu_free_ivars(formula);
    if (!iv.empty()) throw OpenFormula("free individual variable " + *iv.begin());
    std::set<std::string> pv = mu_free_predvars(formula);
    if (!pv.empty()) throw OpenFormula("free predicate variable " + *pv.begin());
    mu_check_monotone(formula);

    Evaluator ev(ts, mode);
    CheckResult r;
    r.extension = ev.eval(formula);
    r.verdict = r.extension.count(ts.initial) > 0;
    return r;
}

} // namespace kab
