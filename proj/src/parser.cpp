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

#include "kab/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "kab/dllite.hpp"
#include "kab/errors.hpp"

namespace kab {
namespace {

enum class Tk {
    Ident,
    AtName,  // @name, allowed in .prop and bare ABox documents only
    LBrace, RBrace, LParen, RParen, LBracket, RBracket,
    Comma, Semi, Colon, Dot,
    Amp, Pipe, Bang,
    Arrow,        // ->
    EffectArrow,  // ~>
    Diamond,      // <>
    End
};

struct Token {
    Tk kind = Tk::End;
    std::string text;
    int line = 1;
    int col = 1;
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
    throw ParseError(msg, t.line, t.col);
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto bump = [&](size_t n) {
        col += static_cast<int>(n);
        i += n;
    };
    auto push = [&](Tk k, std::string s) {
        out.push_back({k, std::move(s), line, col});
        bump(out.back().text.size());
    };
    auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

    while (i < text.size()) {
        char ch = text[i];
        if (ch == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            bump(1);
            continue;
        }
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (is_ident_start(ch)) {
            size_t j = i;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            push(Tk::Ident, text.substr(i, j - i));
            continue;
        }
        if (ch == '@' && i + 1 < text.size() && is_ident_start(text[i + 1])) {
            size_t j = i + 1;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            push(Tk::AtName, text.substr(i, j - i));
            continue;
        }
        if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
            push(Tk::Arrow, "->");
            continue;
        }
        if (ch == '~' && i + 1 < text.size() && text[i + 1] == '>') {
            push(Tk::EffectArrow, "~>");
            continue;
        }
        if (ch == '<' && i + 1 < text.size() && text[i + 1] == '>') {
            push(Tk::Diamond, "<>");
            continue;
        }
        switch (ch) {
            case '{': push(Tk::LBrace, "{"); continue;
            case '}': push(Tk::RBrace, "}"); continue;
            case '(': push(Tk::LParen, "("); continue;
            case ')': push(Tk::RParen, ")"); continue;
            case '[': push(Tk::LBracket, "["); continue;
            case ']': push(Tk::RBracket, "]"); continue;
            case ',': push(Tk::Comma, ","); continue;
            case ';': push(Tk::Semi, ";"); continue;
            case ':': push(Tk::Colon, ":"); continue;
            case '.': push(Tk::Dot, "."); continue;
            case '&': push(Tk::Amp, "&"); continue;
            case '|': push(Tk::Pipe, "|"); continue;
            case '!': push(Tk::Bang, "!"); continue;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
        }
    }
    out.push_back({Tk::End, "", line, col});
    return out;
}

// View over a token range [pos, end). The token at `end` (a closing brace or
// the end-of-input marker) is what peek returns once the range is exhausted,
// so errors past the range point at the terminator.
class Cursor {
public:
    Cursor(const std::vector<Token>& toks, size_t pos, size_t end)
        : toks_(&toks), pos_(pos), end_(end) {}

    const Token& peek(size_t ahead = 0) const { return (*toks_)[std::min(pos_ + ahead, end_)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < end_) ++pos_;
        return t;
    }
    bool at_end() const { return pos_ >= end_; }
    // Never matches the terminator: a range that ran out matches nothing,
    // even though peek still reports the terminator for error positions.
    bool is(Tk k, size_t ahead = 0) const { return pos_ + ahead < end_ && peek(ahead).kind == k; }
    bool is_word(const char* w, size_t ahead = 0) const {
        return is(Tk::Ident, ahead) && peek(ahead).text == w;
    }
    bool consume(Tk k) {
        if (!is(k)) return false;
        next();
        return true;
    }
    const Token& expect(Tk k, const char* what) {
        if (!is(k)) fail(peek(), std::string("expected ") + what);
        return next();
    }
    void expect_word(const char* w) {
        if (!is_word(w)) fail(peek(), std::string("expected '") + w + "'");
        next();
    }
    size_t index() const { return pos_; }
    size_t end_index() const { return end_; }
    void seek(size_t pos) { pos_ = std::min(pos, end_); }
    const Token& at(size_t i) const { return (*toks_)[i]; }
    Cursor slice(size_t begin, size_t end) const { return Cursor(*toks_, begin, end); }

private:
    const std::vector<Token>* toks_;
    size_t pos_, end_;
};

bool kab_keyword(const std::string& s) {
    static const std::set<std::string> kws = {
        "isa", "disjoint", "roledisjoint", "funct", "exists", "forall", "inv",
        "and", "effect", "true",
        "TBOX", "ABOX", "CONSTANTS", "ACTION", "PROCESS"};
    return kws.count(s) > 0;
}

bool prop_keyword(const std::string& s) {
    static const std::set<std::string> kws = {"mu", "nu", "exists", "forall", "true", "false"};
    return kws.count(s) > 0;
}

bool reserved_name(const std::string& s) {
    return s == kStatePredicate || s == kViolPredicate || s == kTempConstant;
}

// Reads a declaration-position name in a .kab document.
std::string kab_name(Cursor& c, const char* what) {
    const Token& t = c.peek();
    if (t.kind == Tk::AtName) fail(t, "'" + t.text + "': label constants are reserved");
    if (t.kind != Tk::Ident) fail(t, std::string("expected ") + what);
    if (kab_keyword(t.text)) fail(t, "'" + t.text + "' is a keyword");
    if (reserved_name(t.text)) fail(t, "'" + t.text + "' is reserved");
    c.next();
    return t.text;
}

class Arities {
public:
    void note(const Token& at, const std::string& pred, int n) {
        auto [it, fresh] = seen_.emplace(pred, n);
        if (!fresh && it->second != n)
            fail(at, "predicate '" + pred + "' used with arity " + std::to_string(n) +
                         " but elsewhere with arity " + std::to_string(it->second));
    }

private:
    std::map<std::string, int> seen_;
};

// --- Queries and conditions ----------------------------------------------

// Variable scoping for query atoms. In .kab documents an identifier is a
// constant exactly when the document declares it; undeclared identifiers
// are variables, free when an enclosing scope (parameters, head variables,
// rule arguments, quantifiers) mentions them and existential otherwise. In
// .prop documents only quantifier-bound identifiers are variables.
struct QueryScope {
    const std::set<std::string>* vocab = nullptr;  // .kab constant vocabulary
    bool prop = false;
    const std::vector<std::string>* binders = nullptr;
    const std::set<std::string>* context = nullptr;
    std::set<std::string>* collect = nullptr;  // pre-pass: record outer variables
    Arities* arities = nullptr;

    bool bound(const std::string& v) const {
        return binders && std::find(binders->begin(), binders->end(), v) != binders->end();
    }
    bool scoped(const std::string& v) const {
        if (bound(v)) return true;
        if (collect) {
            collect->insert(v);
            return true;
        }
        return context && context->count(v) > 0;
    }
};

std::string read_pred_name(Cursor& c, const QueryScope& s) {
    const Token& t = c.peek();
    if (t.kind != Tk::Ident) fail(t, "expected a predicate name");
    if (s.prop) {
        if (prop_keyword(t.text)) fail(t, "'" + t.text + "' is a keyword");
    } else {
        if (kab_keyword(t.text)) fail(t, "'" + t.text + "' is a keyword");
        if (reserved_name(t.text)) fail(t, "'" + t.text + "' is reserved");
    }
    c.next();
    return t.text;
}

QueryTerm read_query_term(Cursor& c, const QueryScope& s, std::string* var_out) {
    const Token& t = c.peek();
    if (t.kind == Tk::AtName) {
        if (!s.prop) fail(t, "'" + t.text + "': label constants are reserved");
        c.next();
        return QueryTerm::constant(GroundTerm::constant(t.text));
    }
    if (t.kind != Tk::Ident) fail(t, "expected a term");
    if (s.prop) {
        if (prop_keyword(t.text)) fail(t, "'" + t.text + "' is a keyword");
        c.next();
        if (s.bound(t.text)) {
            *var_out = t.text;
            return QueryTerm::variable(t.text);
        }
        return QueryTerm::constant(GroundTerm::constant(t.text));
    }
    if (kab_keyword(t.text)) fail(t, "'" + t.text + "' is a keyword");
    if (reserved_name(t.text)) fail(t, "'" + t.text + "' is reserved");
    c.next();
    if (s.vocab->count(t.text)) return QueryTerm::constant(GroundTerm::constant(t.text));
    *var_out = t.text;
    return QueryTerm::variable(t.text);
}

struct ParsedUcq {
    UCQ q;
    std::vector<std::string> vars;  // every variable, first-occurrence order
};

// Parses `true` or disjuncts of &-joined atoms. Stops at the first token
// that cannot continue the query; the caller owns the terminator.
ParsedUcq parse_ucq_body(Cursor& c, const QueryScope& s) {
    ParsedUcq out;
    if (c.is_word("true")) {
        c.next();
        out.q = UCQ::trivial_true();
        return out;
    }
    struct RawDisjunct {
        ConjunctiveQuery cq;
        std::vector<std::string> vars;
        std::set<std::string> seen;
    };
    std::vector<RawDisjunct> disjuncts;
    std::set<std::string> seen_all;
    do {
        RawDisjunct d;
        do {
            const Token& pt = c.peek();
            std::string pred = read_pred_name(c, s);
            c.expect(Tk::LParen, "'('");
            std::vector<QueryTerm> terms;
            do {
                std::string var;
                QueryTerm t = read_query_term(c, s, &var);
                if (!var.empty()) {
                    if (d.seen.insert(var).second) d.vars.push_back(var);
                    if (seen_all.insert(var).second) out.vars.push_back(var);
                }
                terms.push_back(std::move(t));
            } while (c.consume(Tk::Comma));
            c.expect(Tk::RParen, "')'");
            if (terms.size() > 2) fail(pt, "atoms take one or two terms");
            if (s.arities) s.arities->note(pt, pred, static_cast<int>(terms.size()));
            d.cq.atoms.push_back(terms.size() == 1 ? QueryAtom(pred, terms[0])
                                                   : QueryAtom(pred, terms[0], terms[1]));
        } while (c.consume(Tk::Amp));
        disjuncts.push_back(std::move(d));
    } while (c.consume(Tk::Pipe));

    for (const auto& v : out.vars)
        if (s.scoped(v)) out.q.free_vars.push_back(v);
    for (auto& d : disjuncts) {
        d.cq.free_vars = out.q.free_vars;
        std::set<std::string> ex;
        for (const auto& v : d.vars)
            if (!s.scoped(v)) ex.insert(v);
        d.cq.existential_vars.assign(ex.begin(), ex.end());
        out.q.disjuncts.push_back(std::move(d.cq));
    }
    return out;
}

// --- Conditions (.kab epistemic formulas) ---------------------------------

struct EcqState {
    const std::set<std::string>& vocab;
    const std::set<std::string>& context;
    Arities* arities;
    std::set<std::string>* collect = nullptr;
    std::vector<std::string> binders;

    QueryScope scope() const {
        QueryScope s;
        s.vocab = &vocab;
        s.binders = &binders;
        s.context = &context;
        s.collect = collect;
        s.arities = arities;
        return s;
    }
};

EcqPtr parse_ecq_expr(Cursor& c, EcqState& st);

EcqPtr parse_ecq_primary(Cursor& c, EcqState& st) {
    if (c.is_word("true")) {
        c.next();
        return Ecq::truth();
    }
    if (c.consume(Tk::LParen)) {
        EcqPtr e = parse_ecq_expr(c, st);
        c.expect(Tk::RParen, "')'");
        return e;
    }
    if (c.consume(Tk::LBracket)) {
        ParsedUcq q = parse_ucq_body(c, st.scope());
        c.expect(Tk::RBracket, "']'");
        return Ecq::embedded(std::move(q.q));
    }
    fail(c.peek(), "expected a condition");
}

EcqPtr parse_ecq_unary(Cursor& c, EcqState& st) {
    if (c.consume(Tk::Bang)) return Ecq::negation(parse_ecq_unary(c, st));
    if (c.is_word("exists") || c.is_word("forall")) {
        bool ex = c.peek().text == "exists";
        c.next();
        const Token& vt = c.peek();
        std::string v = kab_name(c, "a variable name");
        if (st.vocab.count(v)) fail(vt, "bound variable '" + v + "' shadows a constant");
        if (st.context.count(v)) fail(vt, "bound variable '" + v + "' shadows an outer variable");
        if (std::find(st.binders.begin(), st.binders.end(), v) != st.binders.end())
            fail(vt, "bound variable '" + v + "' shadows an enclosing binder");
        c.expect(Tk::Dot, "'.'");
        st.binders.push_back(v);
        EcqPtr body = parse_ecq_unary(c, st);
        st.binders.pop_back();
        return ex ? Ecq::exists(v, body) : Ecq::forall(v, body);
    }
    return parse_ecq_primary(c, st);
}

EcqPtr parse_ecq_and(Cursor& c, EcqState& st) {
    EcqPtr e = parse_ecq_unary(c, st);
    while (c.consume(Tk::Amp)) e = Ecq::conj(e, parse_ecq_unary(c, st));
    return e;
}

EcqPtr parse_ecq_or(Cursor& c, EcqState& st) {
    EcqPtr e = parse_ecq_and(c, st);
    while (c.consume(Tk::Pipe)) e = Ecq::disj(e, parse_ecq_and(c, st));
    return e;
}

EcqPtr parse_ecq_expr(Cursor& c, EcqState& st) {
    EcqPtr l = parse_ecq_or(c, st);
    if (c.consume(Tk::Arrow)) return Ecq::implies(l, parse_ecq_expr(c, st));
    return l;
}

// Parses a whole token range as one condition.
EcqPtr parse_condition_span(Cursor span, const std::set<std::string>& vocab,
                            const std::set<std::string>& context, Arities* ar,
                            std::set<std::string>* collect) {
    EcqState st{vocab, context, ar, collect, {}};
    EcqPtr e = parse_ecq_expr(span, st);
    if (!span.at_end()) fail(span.peek(), "unexpected token in condition");
    return e;
}

// Outer variables of a condition: non-constant identifiers not bound by the
// condition's own quantifiers. Runs the parser in collect mode.
std::set<std::string> condition_outer_vars(Cursor span, const std::set<std::string>& vocab) {
    std::set<std::string> out;
    static const std::set<std::string> kNoContext;
    parse_condition_span(span, vocab, kNoContext, nullptr, &out);
    return out;
}

// --- .kab sections ---------------------------------------------------------

Role parse_role(Cursor& c, Arities& ar) {
    bool inv = false;
    if (c.is_word("inv")) {
        c.next();
        inv = true;
    }
    const Token& t = c.peek();
    std::string name = kab_name(c, "a role name");
    ar.note(t, name, 2);
    return Role(name, inv);
}

BasicConcept parse_basic(Cursor& c, Arities& ar) {
    if (c.is_word("exists")) {
        c.next();
        return BasicConcept::exists(parse_role(c, ar));
    }
    const Token& t = c.peek();
    std::string name = kab_name(c, "a concept name");
    ar.note(t, name, 1);
    return BasicConcept::named(name);
}

void parse_tbox_section(Cursor c, TBox& t, Arities& ar) {
    while (!c.at_end()) {
        if (c.is_word("funct")) {
            c.next();
            t.functionalities.push_back({parse_role(c, ar), ""});
            c.expect(Tk::Semi, "';'");
            continue;
        }
        // The connective decides whether the operands are concepts or roles;
        // an operand spans at most three tokens (exists inv R).
        std::string conn;
        for (size_t k = 0; k < 4 && conn.empty(); ++k) {
            if (c.is_word("isa", k) || c.is_word("disjoint", k) || c.is_word("roledisjoint", k))
                conn = c.peek(k).text;
        }
        if (conn.empty()) fail(c.peek(), "expected a TBox axiom");
        if (conn == "roledisjoint") {
            Role lhs = parse_role(c, ar);
            c.expect_word("roledisjoint");
            Role rhs = parse_role(c, ar);
            t.negative_roles.push_back({lhs, rhs, ""});
        } else {
            BasicConcept lhs = parse_basic(c, ar);
            c.expect_word(conn.c_str());
            BasicConcept rhs = parse_basic(c, ar);
            if (conn == "isa")
                t.positives.push_back({lhs, rhs});
            else
                t.negative_concepts.push_back({lhs, rhs, ""});
        }
        c.expect(Tk::Semi, "';'");
    }
}

void parse_abox_section(Cursor c, ABox& out, Arities& ar) {
    while (!c.at_end()) {
        const Token& pt = c.peek();
        std::string pred = kab_name(c, "a predicate name");
        c.expect(Tk::LParen, "'('");
        std::vector<GroundTerm> args;
        do {
            args.push_back(GroundTerm::constant(kab_name(c, "a constant")));
        } while (c.consume(Tk::Comma));
        c.expect(Tk::RParen, "')'");
        c.expect(Tk::Semi, "';'");
        if (args.size() > 2) fail(pt, "atoms take one or two terms");
        ar.note(pt, pred, static_cast<int>(args.size()));
        out.insert(args.size() == 1 ? Assertion(pred, args[0]) : Assertion(pred, args[0], args[1]));
    }
}

TermTemplate parse_head_term(Cursor& c, const std::set<std::string>& vocab,
                             std::vector<std::string>& head_vars, std::set<std::string>& seen) {
    const Token& t = c.peek();
    std::string name = kab_name(c, "a term");
    if (c.consume(Tk::LParen)) {
        std::vector<TermTemplate> args;
        do {
            const Token& at = c.peek();
            std::string an = kab_name(c, "a call argument");
            if (c.is(Tk::LParen)) fail(at, "service calls cannot be nested");
            if (vocab.count(an)) {
                args.push_back(TermTemplate::constant(GroundTerm::constant(an)));
            } else {
                if (seen.insert(an).second) head_vars.push_back(an);
                args.push_back(TermTemplate::variable(an));
            }
        } while (c.consume(Tk::Comma));
        c.expect(Tk::RParen, "')'");
        return TermTemplate::call(name, std::move(args));
    }
    (void)t;
    if (vocab.count(name)) return TermTemplate::constant(GroundTerm::constant(name));
    if (seen.insert(name).second) head_vars.push_back(name);
    return TermTemplate::variable(name);
}

AtomTemplate parse_head_atom(Cursor& c, const std::set<std::string>& vocab, Arities& ar,
                             std::vector<std::string>& head_vars, std::set<std::string>& seen) {
    const Token& pt = c.peek();
    std::string pred = kab_name(c, "a predicate name");
    c.expect(Tk::LParen, "'('");
    std::vector<TermTemplate> args;
    do {
        args.push_back(parse_head_term(c, vocab, head_vars, seen));
    } while (c.consume(Tk::Comma));
    c.expect(Tk::RParen, "')'");
    if (args.size() > 2) fail(pt, "atoms take one or two terms");
    ar.note(pt, pred, static_cast<int>(args.size()));
    return args.size() == 1 ? AtomTemplate(pred, args[0]) : AtomTemplate(pred, args[0], args[1]);
}

void parse_action_body(Cursor c, Action& act, const std::set<std::string>& vocab, Arities& ar) {
    std::set<std::string> params(act.params.begin(), act.params.end());
    while (!c.at_end()) {
        c.expect_word("effect");
        const Token& open = c.expect(Tk::LBracket, "'['");
        size_t qbegin = c.index();
        for (size_t depth = 1; depth > 0;) {
            if (c.at_end()) fail(open, "unterminated query bracket");
            Tk k = c.next().kind;
            if (k == Tk::LBracket) ++depth;
            if (k == Tk::RBracket) --depth;
        }
        size_t qend = c.index() - 1;

        bool has_filter = false;
        size_t fbegin = 0, fend = 0;
        if (c.is_word("and")) {
            c.next();
            has_filter = true;
            fbegin = c.index();
            const Token& fstart = c.peek();
            while (!c.at_end() && !c.is(Tk::EffectArrow)) c.next();
            if (c.at_end()) fail(fstart, "expected '~>' after the effect condition");
            fend = c.index();
        }
        c.expect(Tk::EffectArrow, "'~>'");
        c.expect(Tk::LBrace, "'{'");

        EffectSpec eff;
        std::vector<std::string> head_vars;
        std::set<std::string> head_seen;
        if (!c.is(Tk::RBrace)) {
            do {
                eff.head.push_back(parse_head_atom(c, vocab, ar, head_vars, head_seen));
            } while (c.consume(Tk::Comma));
        }
        c.expect(Tk::RBrace, "'}'");
        c.expect(Tk::Semi, "';'");

        // A condition variable is an answer variable when the head, the
        // parameters, or the filter mention it; filter variables correlate
        // with the condition exactly through the answer tuple.
        std::set<std::string> context = params;
        context.insert(head_seen.begin(), head_seen.end());
        if (has_filter) {
            std::set<std::string> outer = condition_outer_vars(c.slice(fbegin, fend), vocab);
            context.insert(outer.begin(), outer.end());
        }

        Cursor qc = c.slice(qbegin, qend);
        QueryScope qs;
        qs.vocab = &vocab;
        qs.context = &context;
        qs.arities = &ar;
        ParsedUcq raw = parse_ucq_body(qc, qs);
        if (!qc.at_end()) fail(qc.peek(), "unexpected token in query");
        eff.qplus = std::move(raw.q);

        std::set<std::string> cond_vars(raw.vars.begin(), raw.vars.end());
        for (const auto& v : head_vars)
            if (!params.count(v) && !cond_vars.count(v))
                throw SemanticError("effect head variable '" + v + "' of action '" + act.name +
                                    "' is neither a parameter nor bound by the effect condition");

        if (has_filter) {
            std::set<std::string> fctx = params;
            fctx.insert(eff.qplus.free_vars.begin(), eff.qplus.free_vars.end());
            eff.qminus = parse_condition_span(c.slice(fbegin, fend), vocab, fctx, &ar, nullptr);
        }
        act.effects.push_back(std::move(eff));
    }
}

void parse_process_section(Cursor c, KabSpec& spec, const std::set<std::string>& vocab,
                           Arities& ar) {
    while (!c.at_end()) {
        // The first top-level -> separates condition from action; implication
        // inside the condition must be parenthesized.
        size_t start = c.index();
        size_t arrow = 0;
        int depth = 0;
        for (size_t j = start;; ++j) {
            if (j >= c.end_index()) fail(c.at(start), "expected '->' in process rule");
            Tk k = c.at(j).kind;
            if (k == Tk::LParen || k == Tk::LBracket) ++depth;
            if (k == Tk::RParen || k == Tk::RBracket) --depth;
            if (k == Tk::Semi && depth == 0) fail(c.at(j), "expected '->' in process rule");
            if (k == Tk::Arrow && depth == 0) {
                arrow = j;
                break;
            }
        }
        c.seek(arrow + 1);
        const Token& nt = c.peek();
        std::string action = kab_name(c, "an action name");
        size_t idx = spec.actions.size();
        for (size_t i = 0; i < spec.actions.size(); ++i)
            if (spec.actions[i].name == action) idx = i;
        if (idx == spec.actions.size()) fail(nt, "unknown action '" + action + "'");

        c.expect(Tk::LParen, "'('");
        std::vector<std::string> args;
        if (!c.is(Tk::RParen)) {
            do {
                const Token& at = c.peek();
                std::string a = kab_name(c, "a rule argument");
                if (vocab.count(a)) fail(at, "rule argument '" + a + "' is a constant");
                args.push_back(a);
            } while (c.consume(Tk::Comma));
        }
        c.expect(Tk::RParen, "')'");
        c.expect(Tk::Semi, "';'");
        if (args.size() != spec.actions[idx].params.size())
            fail(nt, "action '" + action + "' takes " +
                         std::to_string(spec.actions[idx].params.size()) + " arguments, got " +
                         std::to_string(args.size()));

        Cursor span = c.slice(start, arrow);
        std::set<std::string> outer = condition_outer_vars(span, vocab);
        for (const auto& a : args)
            if (!outer.count(a))
                throw SemanticError("process rule argument '" + a +
                                    "' is not bound by its condition");
        std::set<std::string> context(args.begin(), args.end());
        EcqPtr cond = parse_condition_span(span, vocab, context, &ar, nullptr);
        spec.process.push_back({cond, args, action});
    }
}

} // namespace

KabSpec parse_kab(const std::string& text, const ParseOptions& opts) {
    std::vector<Token> toks = lex(text);
    Cursor top(toks, 0, toks.size() - 1);

    struct RawAction {
        Token name;
        std::vector<Token> params;
        size_t begin = 0, end = 0;
    };
    std::optional<std::pair<size_t, size_t>> tbox, abox, constants, process;
    std::vector<RawAction> actions;

    auto brace_span = [&](Cursor& c) {
        const Token& open = c.expect(Tk::LBrace, "'{'");
        size_t begin = c.index();
        for (size_t depth = 1; depth > 0;) {
            if (c.at_end()) fail(open, "unterminated section");
            Tk k = c.next().kind;
            if (k == Tk::LBrace) ++depth;
            if (k == Tk::RBrace) --depth;
        }
        return std::make_pair(begin, c.index() - 1);
    };
    auto named_section = [&](std::optional<std::pair<size_t, size_t>>& slot, const Token& head) {
        if (slot) fail(head, "duplicate " + head.text + " section");
        top.next();
        slot = brace_span(top);
    };

    while (!top.at_end()) {
        const Token& head = top.peek();
        if (head.kind != Tk::Ident) fail(head, "expected a section keyword");
        if (head.text == "TBOX") {
            named_section(tbox, head);
        } else if (head.text == "ABOX") {
            named_section(abox, head);
        } else if (head.text == "CONSTANTS") {
            named_section(constants, head);
        } else if (head.text == "PROCESS") {
            named_section(process, head);
        } else if (head.text == "ACTION") {
            top.next();
            RawAction ra;
            ra.name = top.peek();
            kab_name(top, "an action name");
            top.expect(Tk::LParen, "'('");
            std::set<std::string> seen;
            if (!top.is(Tk::RParen)) {
                do {
                    const Token& pt = top.peek();
                    std::string p = kab_name(top, "a parameter name");
                    if (!seen.insert(p).second) fail(pt, "duplicate parameter '" + p + "'");
                    ra.params.push_back(pt);
                } while (top.consume(Tk::Comma));
            }
            top.expect(Tk::RParen, "')'");
            auto span = brace_span(top);
            ra.begin = span.first;
            ra.end = span.second;
            actions.push_back(std::move(ra));
        } else {
            fail(head, "unknown section '" + head.text + "'");
        }
    }

    KabSpec spec;
    Arities ar;
    if (tbox) parse_tbox_section(top.slice(tbox->first, tbox->second), spec.tbox, ar);
    int axno = 0;
    auto mint = [&axno] { return kLabelPrefix + "ax" + std::to_string(++axno); };
    for (auto& ax : spec.tbox.negative_concepts) ax.label = mint();
    for (auto& ax : spec.tbox.negative_roles) ax.label = mint();
    for (auto& ax : spec.tbox.functionalities) ax.label = mint();

    if (abox) parse_abox_section(top.slice(abox->first, abox->second), spec.a0, ar);
    if (constants) {
        Cursor c = top.slice(constants->first, constants->second);
        while (!c.at_end()) {
            spec.declared_constants.insert(kab_name(c, "a constant name"));
            c.expect(Tk::Semi, "';'");
        }
    }

    // The initial individuals count as declared: they are distinguished
    // constants of the specification, not just incidental ABox content.
    for (const auto& c : adom_constants(spec.a0)) spec.declared_constants.insert(c);
    const std::set<std::string>& vocab = spec.declared_constants;

    for (const auto& ra : actions) {
        Action act;
        act.name = ra.name.text;
        for (const auto& other : spec.actions)
            if (other.name == act.name) fail(ra.name, "duplicate action '" + act.name + "'");
        for (const auto& pt : ra.params) {
            if (vocab.count(pt.text)) fail(pt, "parameter '" + pt.text + "' shadows a constant");
            act.params.push_back(pt.text);
        }
        parse_action_body(top.slice(ra.begin, ra.end), act, vocab, ar);
        spec.actions.push_back(std::move(act));
    }

    if (process) parse_process_section(top.slice(process->first, process->second), spec, vocab, ar);

    if (opts.check_a0_consistency && !is_consistent(spec.tbox, spec.a0))
        throw InconsistentInitialAbox();
    return spec;
}

ABox parse_abox(const std::string& text) {
    std::vector<Token> toks = lex(text);
    Cursor c(toks, 0, toks.size() - 1);
    ABox out;
    Arities ar;
    auto term = [&]() -> std::string {
        const Token& t = c.peek();
        if (t.kind != Tk::Ident && t.kind != Tk::AtName) fail(t, "expected a constant");
        c.next();
        return t.text;
    };
    while (!c.at_end()) {
        const Token& pt = c.peek();
        if (pt.kind != Tk::Ident) fail(pt, "expected a predicate name");
        std::string pred = c.next().text;
        c.expect(Tk::LParen, "'('");
        std::vector<GroundTerm> args;
        do {
            args.push_back(GroundTerm::constant(term()));
        } while (c.consume(Tk::Comma));
        c.expect(Tk::RParen, "')'");
        c.expect(Tk::Semi, "';'");
        if (args.size() > 2) fail(pt, "atoms take one or two terms");
        ar.note(pt, pred, static_cast<int>(args.size()));
        out.insert(args.size() == 1 ? Assertion(pred, args[0]) : Assertion(pred, args[0], args[1]));
    }
    return out;
}

// --- .prop formulas --------------------------------------------------------

namespace {

struct PropState {
    std::vector<std::string> ivars;
    std::vector<std::string> predvars;
    Arities* arities;
};

MuPtr parse_mu_expr(Cursor& c, PropState& st);

std::string prop_name(Cursor& c, const char* what) {
    const Token& t = c.peek();
    if (t.kind != Tk::Ident) fail(t, std::string("expected ") + what);
    if (prop_keyword(t.text)) fail(t, "'" + t.text + "' is a keyword");
    c.next();
    return t.text;
}

MuPtr parse_mu_primary(Cursor& c, PropState& st) {
    if (c.is_word("true")) {
        c.next();
        return MuFormula::truth();
    }
    if (c.is_word("false")) {
        c.next();
        return MuFormula::negation(MuFormula::truth());
    }
    if (c.consume(Tk::LParen)) {
        MuPtr f = parse_mu_expr(c, st);
        c.expect(Tk::RParen, "')'");
        return f;
    }
    if (c.consume(Tk::LBracket)) {
        QueryScope s;
        s.prop = true;
        s.binders = &st.ivars;
        s.arities = st.arities;
        ParsedUcq q = parse_ucq_body(c, s);
        c.expect(Tk::RBracket, "']'");
        return MuFormula::query(Ecq::embedded(std::move(q.q)));
    }
    if (c.is(Tk::Ident) && !prop_keyword(c.peek().text)) {
        return MuFormula::predvar(c.next().text);
    }
    fail(c.peek(), "expected a formula");
}

MuPtr parse_mu_unary(Cursor& c, PropState& st) {
    if (c.consume(Tk::Bang)) return MuFormula::negation(parse_mu_unary(c, st));
    if (c.consume(Tk::Diamond)) return MuFormula::diamond(parse_mu_unary(c, st));
    if (c.is(Tk::LBracket) && c.is(Tk::RBracket, 1)) {
        c.next();
        c.next();
        return MuFormula::box(parse_mu_unary(c, st));
    }
    if (c.is_word("mu") || c.is_word("nu")) {
        bool least = c.peek().text == "mu";
        c.next();
        const Token& vt = c.peek();
        std::string z = prop_name(c, "a fixpoint variable");
        if (std::find(st.predvars.begin(), st.predvars.end(), z) != st.predvars.end())
            fail(vt, "fixpoint variable '" + z + "' shadows an enclosing binder");
        c.expect(Tk::Dot, "'.'");
        st.predvars.push_back(z);
        MuPtr body = parse_mu_unary(c, st);
        st.predvars.pop_back();
        return least ? MuFormula::mu(z, body) : MuFormula::nu(z, body);
    }
    if (c.is_word("exists") || c.is_word("forall")) {
        bool ex = c.peek().text == "exists";
        c.next();
        const Token& vt = c.peek();
        std::string v = prop_name(c, "a variable name");
        if (std::find(st.ivars.begin(), st.ivars.end(), v) != st.ivars.end())
            fail(vt, "bound variable '" + v + "' shadows an enclosing binder");
        c.expect(Tk::Dot, "'.'");
        st.ivars.push_back(v);
        MuPtr body = parse_mu_unary(c, st);
        st.ivars.pop_back();
        return ex ? MuFormula::exists(v, body) : MuFormula::forall(v, body);
    }
    return parse_mu_primary(c, st);
}

MuPtr parse_mu_and(Cursor& c, PropState& st) {
    MuPtr f = parse_mu_unary(c, st);
    while (c.consume(Tk::Amp)) f = MuFormula::conj(f, parse_mu_unary(c, st));
    return f;
}

MuPtr parse_mu_or(Cursor& c, PropState& st) {
    MuPtr f = parse_mu_and(c, st);
    while (c.consume(Tk::Pipe)) f = MuFormula::disj(f, parse_mu_and(c, st));
    return f;
}

MuPtr parse_mu_expr(Cursor& c, PropState& st) {
    MuPtr l = parse_mu_or(c, st);
    if (c.consume(Tk::Arrow)) return MuFormula::implies(l, parse_mu_expr(c, st));
    return l;
}

void finalize_formula(const MuPtr& f) {
    if (!mu_is_closed(f)) {
        std::string names;
        for (const auto& v : mu_free_ivars(f)) names += (names.empty() ? "" : ", ") + v;
        for (const auto& z : mu_free_predvars(f)) names += (names.empty() ? "" : ", ") + z;
        throw OpenFormula("unbound " + names);
    }
    mu_check_monotone(f);
}

} // namespace

MuPtr parse_property(const std::string& text) {
    std::vector<Token> toks = lex(text);
    Cursor c(toks, 0, toks.size() - 1);
    Arities ar;
    PropState st{{}, {}, &ar};
    MuPtr f = parse_mu_expr(c, st);
    if (!c.at_end()) fail(c.peek(), "unexpected input after the formula");
    finalize_formula(f);
    return f;
}

std::vector<std::pair<std::string, MuPtr>> parse_property_file(const std::string& text) {
    std::vector<Token> toks = lex(text);
    Cursor c(toks, 0, toks.size() - 1);
    Arities ar;
    std::vector<std::pair<std::string, MuPtr>> out;
    std::set<std::string> names;
    while (!c.at_end()) {
        const Token& nt = c.peek();
        std::string name = prop_name(c, "a formula name");
        if (!names.insert(name).second) fail(nt, "duplicate formula name '" + name + "'");
        c.expect(Tk::Colon, "':'");
        PropState st{{}, {}, &ar};
        MuPtr f = parse_mu_expr(c, st);
        c.expect(Tk::Semi, "';'");
        finalize_formula(f);
        out.emplace_back(std::move(name), std::move(f));
    }
    return out;
}

} // namespace kab
