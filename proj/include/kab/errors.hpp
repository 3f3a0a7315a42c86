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

#ifndef KAB_ERRORS_HPP
#define KAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kab {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

class SemanticError : public std::runtime_error {
public:
    explicit SemanticError(const std::string& msg)
        : std::runtime_error("semantic error: " + msg) {}
};

enum class LimitKind { States, RunDomain, Depth };

class LimitExceeded : public std::runtime_error {
public:
    LimitExceeded(LimitKind kind, const std::string& detail)
        : std::runtime_error("limit exceeded (" + name(kind) + "): " + detail),
          kind(kind) {}
    LimitKind kind;

    static std::string name(LimitKind k) {
        switch (k) {
            case LimitKind::States: return "max_states";
            case LimitKind::RunDomain: return "max_run_domain";
            case LimitKind::Depth: return "max_depth";
        }
        return "?";
    }
};

class InconsistentInitialAbox : public std::runtime_error {
public:
    InconsistentInitialAbox()
        : std::runtime_error("initial ABox is inconsistent with the TBox") {}
};

class MissingCallBinding : public std::runtime_error {
public:
    explicit MissingCallBinding(const std::string& call)
        : std::runtime_error("no binding for service call " + call) {}
};

class OpenFormula : public std::runtime_error {
public:
    explicit OpenFormula(const std::string& what)
        : std::runtime_error("formula is not closed: " + what) {}
};

class NonMonotoneFixpoint : public std::runtime_error {
public:
    explicit NonMonotoneFixpoint(const std::string& var)
        : std::runtime_error("fixpoint variable " + var +
                             " occurs under an odd number of negations") {}
};

// Oracle-side errors (test support).
class DepthInsufficient : public std::runtime_error {
public:
    explicit DepthInsufficient(const std::string& what)
        : std::runtime_error("chase depth insufficient: " + what) {}
};

class TooLarge : public std::runtime_error {
public:
    explicit TooLarge(const std::string& what)
        : std::runtime_error("input too large for exhaustive oracle: " + what) {}
};

} // namespace kab

#endif
