#pragma once

// Text format for forms, maps, metrics and torsion (".form" files).
//
//   doc      := decl* ;
//   decl     := vars | form | map | metric | torsion ;
//   vars     := "vars" "(" IDENT ("," IDENT)* ")" ";" ;
//   form     := "form" IDENT ":" INT "=" sum ";" ;
//   sum      := term (("+"|"-") term)* ;
//   term     := coeff? basis? ;                 at least one present
//   basis    := "d" IDENT ("^" "d" IDENT)* ;     "^" is the wedge
//   coeff    := product-level arithmetic over IDENT, INT, + - * / ( ) and
//               integer "**" powers
//   map      := "map" IDENT ":" "(" [IDENT ("," IDENT)*] ")" "->" "(" expr ("," expr)* ")" ";" ;
//   metric   := "metric" IDENT "=" ("+1"|"-1") ("," ("+1"|"-1"))* ";" ;
//   torsion  := "torsion" IDENT "[" IDENT "]" "=" sum ";" ;
//
// "#" starts a comment running to the end of the line. Forms and torsion use
// the most recent "vars" declaration; map components are written in the
// map's own source variables and target the most recent "vars" list.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "exform/error.hpp"
#include "exform/evolutionary.hpp"
#include "exform/form.hpp"
#include "exform/metric.hpp"

namespace exform::dsl {

struct VariablesDecl {
    Variables names;
    bool operator==(const VariablesDecl&) const = default;
};

struct FormDecl {
    std::string name;
    DifferentialForm form;
    friend bool operator==(const FormDecl& a, const FormDecl& b) { return a.name == b.name && a.form == b.form; }
};

struct MapDecl {
    std::string name;
    RationalMap map;
    friend bool operator==(const MapDecl& a, const MapDecl& b) {
        return a.name == b.name && a.map.source == b.map.source && a.map.target == b.map.target &&
               a.map.components == b.map.components;
    }
};

struct MetricDecl {
    std::string name;
    DiagonalMetric metric;
    bool operator==(const MetricDecl&) const = default;
};

struct TorsionDecl {
    std::string name;
    std::string index;
    DifferentialForm form;
    friend bool operator==(const TorsionDecl& a, const TorsionDecl& b) {
        return a.name == b.name && a.index == b.index && a.form == b.form;
    }
};

using Declaration = std::variant<VariablesDecl, FormDecl, MapDecl, MetricDecl, TorsionDecl>;

struct Warning {
    SourceLocation location;
    std::string message;
};

struct Document {
    std::vector<Declaration> declarations;
    std::vector<Warning> warnings;

    std::vector<const FormDecl*> forms() const {
        std::vector<const FormDecl*> out;
        for (const auto& d : declarations)
            if (const auto* f = std::get_if<FormDecl>(&d)) out.push_back(f);
        return out;
    }

    const FormDecl* find_form(std::string_view name) const { return find<FormDecl>(name); }
    const MapDecl* find_map(std::string_view name) const { return find<MapDecl>(name); }
    const MetricDecl* find_metric(std::string_view name) const { return find<MetricDecl>(name); }

    /// Torsion entries declared under `name`, or nullopt if there are none.
    std::optional<StructureCoefficients> torsion(std::string_view name) const {
        std::optional<StructureCoefficients> out;
        for (const auto& d : declarations) {
            if (const auto* t = std::get_if<TorsionDecl>(&d); t && t->name == name) {
                if (!out) out.emplace();
                out->torsion.emplace(t->index, t->form);
            }
        }
        return out;
    }

    friend bool operator==(const Document& a, const Document& b) { return a.declarations == b.declarations; }

private:
    template <typename T>
    const T* find(std::string_view name) const {
        for (const auto& d : declarations)
            if (const auto* x = std::get_if<T>(&d); x && x->name == name) return x;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

enum class Tok { ident, integer, punct, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceLocation loc;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        SourceLocation loc{line, col};
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
            out.push_back({Tok::ident, std::string(src.substr(i, j - i)), loc});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '.'))
                throw ParseError(std::string("malformed number near '") + src[j] + "'", SourceLocation{line, col + (j - i)});
            out.push_back({Tok::integer, std::string(src.substr(i, j - i)), loc});
            advance(j - i);
            continue;
        }
        if (src.substr(i, 2) == "**" || src.substr(i, 2) == "->") {
            out.push_back({Tok::punct, std::string(src.substr(i, 2)), loc});
            advance(2);
            continue;
        }
        static constexpr std::string_view singles = ";,():=[]+-*/^";
        if (singles.find(c) != std::string_view::npos) {
            out.push_back({Tok::punct, std::string(1, c), loc});
            advance(1);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", loc);
    }
    out.push_back({Tok::end, "", SourceLocation{line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

    Document parse() {
        while (peek().kind != Tok::end) {
            const Token& kw = peek();
            if (kw.kind != Tok::ident) fail("expected a declaration");
            if (kw.text == "vars") {
                parse_vars();
            } else if (kw.text == "form") {
                parse_form();
            } else if (kw.text == "map") {
                parse_map();
            } else if (kw.text == "metric") {
                parse_metric();
            } else if (kw.text == "torsion") {
                parse_torsion();
            } else {
                fail("unknown declaration '" + kw.text + "'");
            }
        }
        return std::move(doc_);
    }

private:
    // -- token helpers ------------------------------------------------------

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool is_punct(std::string_view p, std::size_t ahead = 0) const {
        const Token& t = peek(ahead);
        return t.kind == Tok::punct && t.text == p;
    }
    bool accept(std::string_view p) {
        if (!is_punct(p)) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::end ? "end of input" : "'" + t.text + "'";
        throw ParseError(what + ", found " + found, t.loc);
    }
    void expect(std::string_view p) {
        if (!accept(p)) fail("expected '" + std::string(p) + "'");
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != Tok::ident) fail(std::string("expected ") + what);
        return next().text;
    }
    void claim_name(const std::string& name, const SourceLocation& loc, const char* kind) {
        auto [it, inserted] = names_.emplace(name, kind);
        if (!inserted && !(it->second == std::string("torsion") && std::string(kind) == "torsion"))
            throw ParseError("name '" + name + "' is already declared", loc);
    }
    const Variables& current_vars(const SourceLocation& loc) const {
        if (!vars_) throw VariableMismatch("no 'vars' declaration precedes this use", loc);
        return *vars_;
    }

    // -- declarations -------------------------------------------------------

    void parse_vars() {
        next();
        expect("(");
        Variables names;
        std::vector<SourceLocation> locs;
        do {
            locs.push_back(peek().loc);
            names.push_back(expect_ident("a variable name"));
        } while (accept(","));
        expect(")");
        expect(";");
        std::set<std::string> seen(names.begin(), names.end());
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (std::count(names.begin(), names.end(), names[i]) > 1)
                throw VariableMismatch("variable '" + names[i] + "' listed twice", locs[i]);
            if (names[i].size() > 1 && names[i][0] == 'd' && seen.count(names[i].substr(1)))
                throw VariableMismatch("variable '" + names[i] + "' would collide with the differential of '" +
                                       names[i].substr(1) + "'", locs[i]);
        }
        vars_ = names;
        doc_.declarations.emplace_back(VariablesDecl{std::move(names)});
    }

    std::size_t parse_degree() {
        if (peek().kind != Tok::integer) fail("expected the form degree");
        const Token& t = next();
        if (t.text.size() > 3) throw DegreeError("form degree too large", t.loc);
        return std::stoul(t.text);
    }

    void parse_form() {
        next();
        const SourceLocation loc = peek().loc;
        std::string name = expect_ident("a form name");
        expect(":");
        std::size_t degree = parse_degree();
        expect("=");
        const Variables& vars = current_vars(loc);
        scope_ = &vars;
        DifferentialForm w = parse_sum(vars, degree);
        scope_ = nullptr;
        expect(";");
        claim_name(name, loc, "form");
        doc_.declarations.emplace_back(FormDecl{std::move(name), std::move(w)});
    }

    void parse_map() {
        next();
        const SourceLocation loc = peek().loc;
        std::string name = expect_ident("a map name");
        expect(":");
        expect("(");
        Variables source;
        if (!is_punct(")")) {
            do {
                const SourceLocation vloc = peek().loc;
                source.push_back(expect_ident("a source variable"));
                if (std::count(source.begin(), source.end(), source.back()) > 1)
                    throw VariableMismatch("source variable '" + source.back() + "' listed twice", vloc);
            } while (accept(","));
        }
        expect(")");
        expect("->");
        const SourceLocation tloc = peek().loc;
        expect("(");
        scope_ = &source;
        std::vector<RationalFunction> comps;
        do {
            comps.push_back(parse_expr(1));
        } while (accept(","));
        expect(")");
        scope_ = nullptr;
        expect(";");
        const Variables& target = current_vars(loc);
        if (comps.size() != target.size())
            throw VariableMismatch("map has " + std::to_string(comps.size()) + " components but the variable list has " +
                                   std::to_string(target.size()), tloc);
        claim_name(name, loc, "map");
        doc_.declarations.emplace_back(MapDecl{std::move(name), RationalMap{std::move(source), target, std::move(comps)}});
    }

    void parse_metric() {
        next();
        const SourceLocation loc = peek().loc;
        std::string name = expect_ident("a metric name");
        expect("=");
        std::vector<int> sig;
        do {
            int s = 0;
            if (accept("+")) {
                s = 1;
            } else if (accept("-")) {
                s = -1;
            } else {
                fail("expected '+1' or '-1'");
            }
            if (peek().kind != Tok::integer || peek().text != "1") fail("expected '+1' or '-1'");
            next();
            sig.push_back(s);
        } while (accept(","));
        expect(";");
        claim_name(name, loc, "metric");
        doc_.declarations.emplace_back(MetricDecl{std::move(name), DiagonalMetric(std::move(sig))});
    }

    void parse_torsion() {
        next();
        const SourceLocation loc = peek().loc;
        std::string name = expect_ident("a torsion name");
        expect("[");
        const SourceLocation iloc = peek().loc;
        std::string index = expect_ident("a variable");
        expect("]");
        expect("=");
        const Variables& vars = current_vars(loc);
        if (std::find(vars.begin(), vars.end(), index) == vars.end())
            throw UnknownVariable("unknown variable '" + index + "'", iloc);
        scope_ = &vars;
        DifferentialForm t = parse_sum(vars, 2);
        scope_ = nullptr;
        expect(";");
        claim_name(name, loc, "torsion");
        for (const auto& d : doc_.declarations)
            if (const auto* prev = std::get_if<TorsionDecl>(&d); prev && prev->name == name && prev->index == index)
                throw ParseError("torsion '" + name + "[" + index + "]' is already declared", loc);
        doc_.declarations.emplace_back(TorsionDecl{std::move(name), std::move(index), std::move(t)});
    }

    // -- forms --------------------------------------------------------------

    bool is_differential(const Token& t) const {
        if (t.kind != Tok::ident || t.text.size() < 2 || t.text[0] != 'd' || !scope_) return false;
        return std::find(scope_->begin(), scope_->end(), std::string_view(t.text).substr(1)) != scope_->end();
    }

    DifferentialForm parse_sum(const Variables& vars, std::size_t degree) {
        DifferentialForm w(vars, degree);
        bool first = true;
        while (true) {
            bool negative = false;
            if (!first) {
                if (is_punct("+")) {
                    next();
                } else if (is_punct("-")) {
                    next();
                    negative = true;
                } else {
                    break;
                }
            }
            while (is_punct("+") || is_punct("-")) negative ^= (next().text == "-");
            parse_term(w, negative);
            first = false;
        }
        return w;
    }

    void parse_term(DifferentialForm& w, bool negative) {
        const SourceLocation loc = peek().loc;
        RationalFunction coeff(1);
        bool has_coeff = false;
        if (!is_differential(peek())) {
            coeff = parse_expr(2);
            has_coeff = true;
        }
        std::vector<std::size_t> basis;
        std::vector<SourceLocation> basis_locs;
        if (is_differential(peek())) {
            while (true) {
                if (!is_differential(peek())) fail("expected a differential");
                basis_locs.push_back(peek().loc);
                basis.push_back(w.position(std::string_view(next().text).substr(1)));
                if (!accept("^")) break;
            }
        } else if (!has_coeff) {
            fail("expected a term");
        }
        if (negative) coeff = -coeff;
        if (basis.size() != w.degree()) {
            if (basis.empty() && coeff.is_zero()) return;
            throw DegreeError("term has " + std::to_string(basis.size()) + " differentials in a form of degree " +
                              std::to_string(w.degree()), loc);
        }
        std::set<std::size_t> distinct(basis.begin(), basis.end());
        if (distinct.size() != basis.size()) {
            doc_.warnings.push_back({loc, "repeated differential in a wedge product; the term is zero"});
            return;
        }
        w.add_term(std::move(basis), coeff);
    }

    // -- coefficient arithmetic (precedence climbing) -------------------------

    static int binary_precedence(const Token& t) {
        if (t.kind != Tok::punct) return 0;
        if (t.text == "+" || t.text == "-") return 1;
        if (t.text == "*" || t.text == "/") return 2;
        return 0;
    }

    RationalFunction parse_expr(int min_prec) {
        RationalFunction lhs = parse_unary();
        while (true) {
            const Token& op = peek();
            const int prec = binary_precedence(op);
            if (prec == 0 || prec < min_prec) break;
            const std::string sym = op.text;
            const SourceLocation loc = op.loc;
            next();
            RationalFunction rhs = parse_expr(prec + 1);
            if (sym == "+") {
                lhs += rhs;
            } else if (sym == "-") {
                lhs -= rhs;
            } else if (sym == "*") {
                lhs *= rhs;
            } else {
                if (rhs.is_zero()) throw DivisionByZero("division by zero", loc);
                lhs /= rhs;
            }
        }
        return lhs;
    }

    RationalFunction parse_unary() {
        if (accept("-")) return -parse_unary();
        if (accept("+")) return parse_unary();
        return parse_power();
    }

    RationalFunction parse_power() {
        RationalFunction base = parse_atom();
        if (is_punct("**")) {
            const SourceLocation loc = next().loc;
            bool neg = accept("-");
            if (peek().kind != Tok::integer) fail("expected an integer exponent");
            const Token& e = next();
            if (e.text.size() > 4) throw ParseError("exponent too large", e.loc);
            long exponent = std::stol(e.text);
            if (neg && base.is_zero()) throw DivisionByZero("negative power of zero", loc);
            return base.pow(neg ? -exponent : exponent);
        }
        return base;
    }

    RationalFunction parse_atom() {
        const Token& t = peek();
        if (t.kind == Tok::integer) {
            next();
            return RationalFunction(Rational(mpz_class(t.text)));
        }
        if (t.kind == Tok::ident) {
            if (is_differential(t)) fail("differential not allowed inside a coefficient");
            if (!scope_ || std::find(scope_->begin(), scope_->end(), t.text) == scope_->end())
                throw UnknownVariable("unknown variable '" + t.text + "'", t.loc);
            next();
            return RationalFunction::variable(t.text);
        }
        if (accept("(")) {
            RationalFunction inner = parse_expr(1);
            expect(")");
            return inner;
        }
        fail("expected a number, variable or '('");
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    Document doc_;
    std::optional<Variables> vars_;
    const Variables* scope_ = nullptr;
    std::map<std::string, std::string> names_;
};

}  // namespace detail

/// Parses a .form document. Syntax errors raise ParseError; semantic errors
/// (unknown variable, degree mismatch, ...) raise the matching error type.
/// Both carry a line:column location.
inline Document parse(std::string_view text) { return detail::Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_coefficient(const RationalFunction& c) { return c.is_sum() ? "(" + c.str() + ")" : c.str(); }

/// Right-hand side of a form declaration: terms in multi-index order joined by
/// " + ", every coefficient written out ("-1 dx^dy"), "0" for the zero form.
inline std::string render_terms(const DifferentialForm& w) {
    if (w.is_zero()) return "0";
    if (w.degree() == 0) return w.scalar_value().str();
    std::string out;
    for (const auto& [I, c] : w.coefficients()) {
        if (!out.empty()) out += " + ";
        out += render_coefficient(c) + " " + w.basis_str(I);
    }
    return out;
}

inline std::string render(const DifferentialForm& w, std::string_view name) {
    return "form " + std::string(name) + " : " + std::to_string(w.degree()) + " = " + render_terms(w) + ";";
}

inline std::string render_vars(const Variables& vars) {
    std::string out = "vars(";
    for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? ", " : "") + vars[i];
    return out + ");";
}

inline std::string render(const MapDecl& m) {
    std::string out = "map " + m.name + " : (";
    for (std::size_t i = 0; i < m.map.source.size(); ++i) out += (i ? ", " : "") + m.map.source[i];
    out += ") -> (";
    for (std::size_t i = 0; i < m.map.components.size(); ++i) out += (i ? ", " : "") + m.map.components[i].str();
    return out + ");";
}

inline std::string render(const MetricDecl& m) {
    std::string out = "metric " + m.name + " = ";
    for (std::size_t i = 0; i < m.metric.dimension(); ++i) out += std::string(i ? ", " : "") + (m.metric[i] > 0 ? "+1" : "-1");
    return out + ";";
}

inline std::string render(const TorsionDecl& t) {
    return "torsion " + t.name + "[" + t.index + "] = " + render_terms(t.form) + ";";
}

/// Canonical text of a whole document, one declaration per line.
inline std::string render(const Document& doc) {
    std::string out;
    for (const auto& d : doc.declarations) {
        std::visit(
            [&](const auto& decl) {
                using T = std::decay_t<decltype(decl)>;
                if constexpr (std::is_same_v<T, VariablesDecl>) {
                    out += render_vars(decl.names);
                } else if constexpr (std::is_same_v<T, FormDecl>) {
                    out += render(decl.form, decl.name);
                } else {
                    out += render(decl);
                }
            },
            d);
        out += "\n";
    }
    return out;
}

}  // namespace exform::dsl
