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

// ABox repairs against a TBox: maximal consistent subsets (b-repairs), their
// intersection (c-repair), violation labels, and consistent query answering.

#ifndef KAB_REPAIR_HPP
#define KAB_REPAIR_HPP

#include <set>
#include <string>
#include <vector>

#include "kab/dllite.hpp"

namespace kab {

using RepairSet = std::set<ABox>;

// All maximal T-consistent subsets of A. If A is consistent this is {A}.
// Never empty: the empty ABox is always consistent.
RepairSet b_repairs(const TBox& t, const ABox& a);

// The intersection of all b-repairs.
ABox c_repair(const TBox& t, const ABox& a);

// Labels of the negative inclusions and functionality assertions of T that
// A violates. Empty iff A is T-consistent.
std::set<std::string> viol(const TBox& t, const ABox& a);

// Consistent query answering: tuples that are certain answers over every
// b-repair. Coincides with certain_answers when A is T-consistent.
TupleSet cqa_answers(const UCQ& q, const TBox& t, const ABox& a);

// Epistemic query evaluation with consistent-query-answering leaves.
TupleSet cqa_eval_ecq(const Ecq& q, const std::vector<std::string>& free_vars,
                      const TBox& t, const ABox& a);
bool cqa_eval_ecq_closed(const Ecq& q, const TBox& t, const ABox& a);

} // namespace kab

#endif
