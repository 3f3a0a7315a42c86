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

// Canonical printers for the concrete syntax. parse(print(x)) reproduces x,
// and printing is deterministic, so printed forms double as equality
// witnesses in tests.

#ifndef KAB_PRINTER_HPP
#define KAB_PRINTER_HPP

#include <string>

#include "kab/dllite.hpp"
#include "kab/model.hpp"
#include "kab/mucalc.hpp"

namespace kab {

std::string print_kab(const KabSpec& spec);

std::string print_ucq(const UCQ& q);
std::string print_ecq(const Ecq& e);
std::string print_mu(const MuFormula& f);

} // namespace kab

#endif
