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

// Concrete syntax front end. A .kab document declares a knowledge and
// action base in named sections (TBOX, ABOX, CONSTANTS, ACTION, PROCESS);
// a .prop document declares named verification formulas. Identifiers in
// query and template positions denote constants exactly when they occur in
// the document's constant vocabulary (initial ABox individuals plus the
// CONSTANTS section), otherwise variables.

#ifndef KAB_PARSER_HPP
#define KAB_PARSER_HPP

#include <string>
#include <utility>
#include <vector>

#include "kab/model.hpp"
#include "kab/mucalc.hpp"

namespace kab {

struct ParseOptions {
    // The check subcommand parses first and reports consistency separately,
    // so it disables the built-in initial-state check.
    bool check_a0_consistency = true;
};

// Parses a .kab document. Constraint axioms receive auto-minted labels
// (@ax1, @ax2, ...) grouped as concept disjointness, role disjointness,
// then functionality, each group in declaration order. Throws ParseError
// for syntax problems, SemanticError for scoping or arity violations, and
// InconsistentInitialAbox when the initial state violates the constraints.
KabSpec parse_kab(const std::string& text, const ParseOptions& opts = {});

// Parses a single formula. The formula must be closed and syntactically
// monotone; violations raise OpenFormula or NonMonotoneFixpoint.
MuPtr parse_property(const std::string& text);

// Parses a .prop document of entries `name : formula ;`.
std::vector<std::pair<std::string, MuPtr>> parse_property_file(const std::string& text);

// Parses a bare list of ground assertions `atom ; ...` (the repairs
// subcommand's input format). Every argument is a constant.
ABox parse_abox(const std::string& text);

} // namespace kab

#endif
