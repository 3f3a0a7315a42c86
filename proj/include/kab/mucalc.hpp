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

// First-order mu-calculus over ABox-labeled transition systems. Formulas
// query states with epistemic queries, quantify over the constants of the
// current state's ABox, and close recursion with least and greatest
// fixpoints. Includes the paired-modality fragment test and the guard
// translation that relativizes a formula to violation-free repair states.

#ifndef KAB_MUCALC_HPP
#define KAB_MUCALC_HPP

#include <cstddef>
#include <memory>
#include <set>
#include <string>

#include "kab/ts.hpp"

namespace kab {

struct MuFormula;
using MuPtr = std::shared_ptr<const MuFormula>;

// Immutable AST. Or, Implies, Forall, Box and Nu are kept as first-class
// nodes rather than being desugared, so fragment tests and printing see the
// shape the user wrote. Unary nodes and fixpoint bodies use lhs.
struct MuFormula {
    enum class Kind {
        Query,    // epistemic query against the state's ABox
        Not,
        And,
        Or,
        Implies,
        Exists,   // var ranges over adom of the state's ABox
        Forall,
        Diamond,  // some successor
        Box,      // every successor
        PredVar,
        Mu,
        Nu
    };

    Kind kind = Kind::Query;
    EcqPtr ecq;       // Query
    std::string var;  // Exists/Forall: individual; PredVar/Mu/Nu: predicate
    MuPtr lhs, rhs;

    static MuPtr query(EcqPtr q);
    static MuPtr truth();  // query leaf that holds everywhere
    static MuPtr negation(MuPtr f);
    static MuPtr conj(MuPtr a, MuPtr b);
    static MuPtr disj(MuPtr a, MuPtr b);
    static MuPtr implies(MuPtr a, MuPtr b);
    static MuPtr exists(std::string v, MuPtr f);
    static MuPtr forall(std::string v, MuPtr f);
    static MuPtr diamond(MuPtr f);
    static MuPtr box(MuPtr f);
    static MuPtr predvar(std::string z);
    static MuPtr mu(std::string z, MuPtr f);
    static MuPtr nu(std::string z, MuPtr f);
};

bool mu_equal(const MuPtr& a, const MuPtr& b);

// Free individual variables: query-leaf variables minus enclosing
// Exists/Forall binders.
std::set<std::string> mu_free_ivars(const MuPtr& f);

// Free predicate variables: PredVar leaves minus enclosing Mu/Nu binders.
std::set<std::string> mu_free_predvars(const MuPtr& f);

bool mu_is_closed(const MuPtr& f);

// Throws NonMonotoneFixpoint if some Mu/Nu bound variable occurs under an
// odd number of negations in its body (the left arm of Implies counts as
// negated; Forall does not flip).
void mu_check_monotone(const MuPtr& f);

// True iff every modal operator in the surface syntax occurs as one of the
// four adjacent pairs <>[], [][], <><>, []<>.
bool is_it_fragment(const MuPtr& f);

// Relativizes a formula to the violation-free portion of a decorated
// two-phase system: <>F becomes <><>(guard & tau(F)) and []F becomes
// []<>(guard -> tau(F)), where the guard states that no Viol fact is
// present. The guard variable is chosen fresh for the whole formula. The
// result is always inside the paired-modality fragment.
MuPtr tau(const MuPtr& f);

struct CheckResult {
    bool verdict = false;          // initial state is in the extension
    std::set<size_t> extension;    // state ids satisfying the formula
};

// Bottom-up evaluation with naive Kleene iteration for fixpoints. The
// formula must be closed; query leaves evaluate with certain answers or,
// under QueryMode::Cqa, with consistent query answering. Throws OpenFormula
// and NonMonotoneFixpoint.
CheckResult model_check(const TransitionSystem& ts, const MuPtr& formula,
                        QueryMode mode = QueryMode::Certain);

} // namespace kab

#endif
