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

// Serializers for built transition systems. Both are deterministic: equal
// systems yield byte-identical output.

#ifndef KAB_EXPORTS_HPP
#define KAB_EXPORTS_HPP

#include <string>

#include "kab/ts.hpp"

namespace kab {

std::string ts_to_json(const TransitionSystem& ts);
std::string ts_to_dot(const TransitionSystem& ts);

} // namespace kab

#endif
