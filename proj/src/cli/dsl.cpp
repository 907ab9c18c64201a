#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "ccw/cli.hpp"
#include "ccw/kform.hpp"

namespace ccw::cli {

namespace {

std::string position_text(std::size_t line, std::size_t col, const std::string& expected, const std::string& found) {
    std::string s = "line " + std::to_string(line) + ", column " + std::to_string(col) + ": expected " + expected;
    if (!found.empty()) s += ", found " + found;
    return s;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::string expected, const std::string& found)
    : Error(position_text(line, column, expected, found)), line_(line), column_(column), expected_(std::move(expected)) {}

std::size_t Session::command_count() const {
    std::size_t n = 0;
    for (const auto& st : statements) n += st.kind == Statement::Kind::Command;
    return n;
}

Rational parse_number(std::string_view text) {
    std::string s(text);
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational::parse(s);
    std::string frac = s.substr(dot + 1);
    if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos || s.find('/') != std::string::npos)
        throw InvalidArgument("malformed number '" + s + "'");
    std::string whole = s.substr(0, dot);
    bool neg = !whole.empty() && whole[0] == '-';
    if (neg || (!whole.empty() && whole[0] == '+')) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    Rational r = Rational::parse(whole + frac) / Rational::parse("1" + std::string(frac.size(), '0'));
    return neg ? -r : r;
}

namespace {

enum class Tok { Ident, Number, FieldBasis, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Colon, Arrow, Equals,
                 End, Other };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 0, column = 0;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of statement";
        case Tok::Ident: return "name '" + t.text + "'";
        case Tok::Number: return "number " + t.text;
        default: return "'" + t.text + "'";
    }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Scanner {
public:
    explicit Scanner(std::string_view text) : src_(text) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }
    bool at_end() const { return pos_ >= src_.size(); }
    char peek_char() const { return at_end() ? '\0' : src_[pos_]; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    /// Skips blanks, comments and (optionally) newlines and separators.
    void skip(bool newlines) {
        while (!at_end()) {
            char c = src_[pos_];
            if (c == '#') {
                while (!at_end() && src_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || (newlines && (c == '\n' || c == ';'))) {
                advance();
            } else {
                break;
            }
        }
    }

    bool at_statement_end() {
        skip(false);
        return at_end() || peek_char() == '\n' || peek_char() == ';';
    }

    /// Next expression token; stops (End) at a newline or ';' unless `newlines`.
    Token next(bool newlines) {
        skip(newlines);
        Token t;
        t.line = line_;
        t.column = col_;
        if (at_end() || peek_char() == '\n' || peek_char() == ';') {
            t.kind = Tok::End;
            return t;
        }
        char c = src_[pos_];
        if (ident_start(c)) {
            std::size_t start = pos_;
            while (!at_end() && ident_char(src_[pos_])) advance();
            t.text = std::string(src_.substr(start, pos_ - start));
            // d/dNAME is a single token.
            if (t.text == "d" && pos_ + 2 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == 'd' &&
                ident_start(src_[pos_ + 2])) {
                advance();
                advance();
                std::size_t s2 = pos_;
                while (!at_end() && ident_char(src_[pos_])) advance();
                t.kind = Tok::FieldBasis;
                t.text = std::string(src_.substr(s2, pos_ - s2));
                return t;
            }
            t.kind = Tok::Ident;
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
            if (!at_end() && src_[pos_] == '.' && pos_ + 1 < src_.size() &&
                std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                advance();
                while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
            }
            t.kind = Tok::Number;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        advance();
        t.text = std::string(1, c);
        switch (c) {
            case '+': t.kind = Tok::Plus; break;
            case '-':
                if (peek_char() == '>') {
                    advance();
                    t.kind = Tok::Arrow;
                    t.text = "->";
                } else {
                    t.kind = Tok::Minus;
                }
                break;
            case '*': t.kind = Tok::Star; break;
            case '/': t.kind = Tok::Slash; break;
            case '^': t.kind = Tok::Caret; break;
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case ',': t.kind = Tok::Comma; break;
            case ':': t.kind = Tok::Colon; break;
            case '=': t.kind = Tok::Equals; break;
            default: t.kind = Tok::Other; break;
        }
        return t;
    }

    /// Statement keyword; command names may contain '-'.
    Token keyword() {
        Token t = next(false);
        if (t.kind != Tok::Ident) return t;
        while (peek_char() == '-' && pos_ + 1 < src_.size() && ident_start(src_[pos_ + 1])) {
            advance();
            std::size_t start = pos_;
            while (!at_end() && ident_char(src_[pos_])) advance();
            t.text += "-" + std::string(src_.substr(start, pos_ - start));
        }
        return t;
    }

    /// Rest of the line split on whitespace; double quotes group a word.
    std::vector<Word> words() {
        std::vector<Word> out;
        while (true) {
            skip(false);
            if (at_end() || peek_char() == '\n' || peek_char() == ';') return out;
            Word w{{}, line_, col_};
            if (peek_char() == '"') {
                advance();
                while (!at_end() && peek_char() != '"' && peek_char() != '\n') {
                    w.text += peek_char();
                    advance();
                }
                if (peek_char() != '"') throw ParseError(line_, col_, "closing '\"'");
                advance();
            } else {
                while (!at_end()) {
                    char c = peek_char();
                    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';' || c == '#') break;
                    w.text += c;
                    advance();
                }
            }
            out.push_back(std::move(w));
        }
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, col_ = 1;
};

struct Value {
    enum class Kind { Scalar, Form, Field };
    Kind kind = Kind::Scalar;
    RationalFunction s;
    KForm f;
    VectorField v;
};

const char* kind_name(Value::Kind k) {
    switch (k) {
        case Value::Kind::Scalar: return "scalar";
        case Value::Kind::Form: return "form";
        case Value::Kind::Field: return "field";
    }
    return "";
}

class ExprParser {
public:
    ExprParser(Scanner& sc, const Session& s, const Chart& chart) : sc_(sc), s_(s), chart_(chart) { cur_ = sc_.next(false); }

    Value parse() { return sum(false); }

    const Token& current() const { return cur_; }
    void advance(bool newlines) { cur_ = sc_.next(newlines); }

private:
    [[noreturn]] void fail(const Token& at, const std::string& expected) const {
        throw ParseError(at.line, at.column, expected, describe(at));
    }

    Value scalar(RationalFunction r) const { return Value{Value::Kind::Scalar, std::move(r), {}, {}}; }
    Value form(KForm k) const { return Value{Value::Kind::Form, {}, std::move(k), {}}; }
    Value field(VectorField x) const { return Value{Value::Kind::Field, {}, {}, std::move(x)}; }

    Value add(Value a, Value b, bool minus, const Token& op) const {
        if (a.kind == Value::Kind::Scalar && b.kind != Value::Kind::Scalar && a.s.is_zero()) a = zero_like(b);
        if (b.kind == Value::Kind::Scalar && a.kind != Value::Kind::Scalar && b.s.is_zero()) b = zero_like(a);
        if (a.kind == Value::Kind::Form && b.kind == Value::Kind::Scalar && a.f.grade() == 0) b = form(KForm::scalar(b.s));
        if (b.kind == Value::Kind::Form && a.kind == Value::Kind::Scalar && b.f.grade() == 0) a = form(KForm::scalar(a.s));
        if (a.kind != b.kind)
            throw ParseError(op.line, op.column, std::string("matching operands for '") + op.text + "'",
                             std::string(kind_name(a.kind)) + " and " + kind_name(b.kind));
        switch (a.kind) {
            case Value::Kind::Scalar: return scalar(minus ? a.s - b.s : a.s + b.s);
            case Value::Kind::Form:
                if (!a.f.is_zero() && !b.f.is_zero() && a.f.grade() != b.f.grade())
                    throw ParseError(op.line, op.column, "forms of equal grade");
                return form(minus ? a.f - b.f : a.f + b.f);
            case Value::Kind::Field: return field(minus ? a.v - b.v : a.v + b.v);
        }
        return a;
    }

    Value zero_like(const Value& v) const {
        if (v.kind == Value::Kind::Form) return form(KForm(chart_, v.f.grade()));
        return field(VectorField(chart_));
    }

    Value multiply(Value a, Value b, const Token& op) const {
        if (a.kind != Value::Kind::Scalar) std::swap(a, b);
        if (a.kind != Value::Kind::Scalar)
            throw ParseError(op.line, op.column, "a scalar factor ('^' wedges forms)",
                             std::string(kind_name(a.kind)) + " and " + kind_name(b.kind));
        switch (b.kind) {
            case Value::Kind::Scalar: return scalar(a.s * b.s);
            case Value::Kind::Form: return form(a.s * b.f);
            case Value::Kind::Field: return field(a.s * b.v);
        }
        return a;
    }

    Value sum(bool newlines) {
        Value v = term(newlines);
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            Token op = cur_;
            advance(true);
            Value r = term(true, op);
            v = add(std::move(v), std::move(r), op.kind == Tok::Minus, op);
        }
        return v;
    }

    Value term(bool newlines, const std::optional<Token>& after = std::nullopt) {
        Value v = unary(newlines, after);
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            Token op = cur_;
            advance(true);
            Value r = unary(true, op);
            if (op.kind == Tok::Star) {
                v = multiply(std::move(v), std::move(r), op);
            } else {
                if (r.kind != Value::Kind::Scalar) throw ParseError(op.line, op.column, "scalar divisor");
                if (r.s.is_zero()) throw ParseError(op.line, op.column, "nonzero divisor");
                RationalFunction inv = RationalFunction(chart_, Rational(1)) / r.s;
                v = multiply(scalar(inv), std::move(v), op);
            }
        }
        return v;
    }

    Value unary(bool newlines, const std::optional<Token>& after) {
        if (cur_.kind == Tok::Minus) {
            Token op = cur_;
            advance(true);
            Value v = unary(true, op);
            return multiply(scalar(RationalFunction(chart_, Rational(-1))), std::move(v), op);
        }
        if (cur_.kind == Tok::Plus) {
            Token op = cur_;
            advance(true);
            return unary(true, op);
        }
        return power(newlines, after);
    }

    Value power(bool newlines, const std::optional<Token>& after) {
        Value v = atom(newlines, after);
        while (cur_.kind == Tok::Caret) {
            Token op = cur_;
            advance(true);
            if (v.kind == Value::Kind::Scalar) {
                if (cur_.kind != Tok::Number || cur_.text.find('.') != std::string::npos)
                    fail(cur_, "integer exponent");
                unsigned long e = std::stoul(cur_.text);
                if (e > 1000) fail(cur_, "exponent at most 1000");
                advance(false);
                v = scalar(v.s.pow(static_cast<unsigned>(e)));
            } else if (v.kind == Value::Kind::Form) {
                Value r = atom(true, op);
                if (r.kind == Value::Kind::Scalar) {
                    v = form(r.s * v.f);
                } else if (r.kind == Value::Kind::Form) {
                    v = form(wedge(v.f, r.f));
                } else {
                    throw ParseError(op.line, op.column, "form operand of '^'", "field");
                }
            } else {
                throw ParseError(op.line, op.column, "scalar or form before '^'", "field");
            }
        }
        return v;
    }

    Value differential(const Value& v, const Token& at) const {
        if (v.kind == Value::Kind::Scalar) return form(ccw::differential(v.s));
        if (v.kind == Value::Kind::Form) return form(ext_d(v.f));
        throw ParseError(at.line, at.column, "scalar or form under d");
    }

    Value name(const Token& t) {
        const std::string& n = t.text;
        if (auto i = chart_.index_of(n)) return scalar(RationalFunction(Polynomial::variable(chart_, *i)));
        if (auto it = s_.scalars.find(n); it != s_.scalars.end()) return on_chart(t, scalar(it->second), it->second.chart());
        if (auto it = s_.forms.find(n); it != s_.forms.end()) return on_chart(t, form(it->second), it->second.chart());
        if (auto it = s_.fields.find(n); it != s_.fields.end()) return on_chart(t, field(it->second), it->second.chart());
        if (n.size() > 1 && n[0] == 'd') {
            std::string rest = n.substr(1);
            if (auto i = chart_.index_of(rest)) return form(KForm::basis(chart_, *i));
            Token inner = t;
            inner.text = rest;
            if (s_.scalars.count(rest) || s_.forms.count(rest)) return differential(name(inner), t);
        }
        fail(t, "coordinate or bound name");
    }

    Value on_chart(const Token& t, Value v, const Chart& c) const {
        if (!(c == chart_)) fail(t, "name defined on the active chart");
        return v;
    }

    Value atom(bool newlines, const std::optional<Token>& after) {
        if (newlines && cur_.kind == Tok::End) advance(true);
        Token t = cur_;
        switch (t.kind) {
            case Tok::Number: {
                advance(false);
                return scalar(RationalFunction(chart_, parse_number(t.text)));
            }
            case Tok::FieldBasis: {
                advance(false);
                auto i = chart_.index_of(t.text);
                if (!i) fail(t, "coordinate after d/d");
                return field(VectorField::coordinate(chart_, *i));
            }
            case Tok::Ident: {
                advance(false);
                if (t.text == "d" && cur_.kind == Tok::LParen) {
                    Token lp = cur_;
                    advance(true);
                    Value inner = sum(true);
                    if (cur_.kind != Tok::RParen) fail(cur_, "')'");
                    advance(false);
                    return differential(inner, lp);
                }
                return name(t);
            }
            case Tok::LParen: {
                advance(true);
                Value inner = sum(true);
                if (cur_.kind != Tok::RParen) fail(cur_, "')'");
                advance(false);
                return inner;
            }
            default:
                // A missing operand at the end of input is reported at its operator.
                if (t.kind == Tok::End && after)
                    throw ParseError(after->line, after->column, "operand after '" + after->text + "'", "end of statement");
                fail(t, "operand");
        }
    }

    Scanner& sc_;
    const Session& s_;
    const Chart& chart_;
    Token cur_;
};

const std::set<std::string>& keywords() {
    static const std::set<std::string> k{"chart", "use", "scalar", "form", "field", "point", "map", "bundle"};
    return k;
}

class SessionParser {
public:
    SessionParser(std::string_view text, const std::filesystem::path& base) : sc_(text) { s_.base_dir = base; }

    Session run() {
        while (true) {
            sc_.skip(true);
            if (sc_.at_end()) break;
            statement();
        }
        return std::move(s_);
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& expected) const {
        throw ParseError(at.line, at.column, expected, describe(at));
    }

    Token expect(Tok kind, const std::string& what) {
        Token t = sc_.next(false);
        if (t.kind != kind) fail(t, what);
        return t;
    }

    void end_of_statement() {
        if (!sc_.at_statement_end()) {
            Token t = sc_.next(false);
            fail(t, "end of statement");
        }
    }

    bool name_taken(const std::string& n) const {
        return s_.scalars.count(n) || s_.forms.count(n) || s_.fields.count(n) || s_.points.count(n) ||
               s_.maps.count(n) || s_.bundles.count(n);
    }

    Token new_name(const char* what) {
        Token t = expect(Tok::Ident, std::string(what) + " name");
        if (keywords().count(t.text) || is_command(t.text)) fail(t, std::string(what) + " name (not a keyword)");
        if (name_taken(t.text)) fail(t, "unused name");
        if (active_.valid() && active_.index_of(t.text)) fail(t, "name distinct from the coordinates");
        return t;
    }

    const Chart& active(const Token& at) {
        if (!active_.valid()) fail(at, "a chart declaration first");
        return active_;
    }

    Value expression(const Token& at) {
        ExprParser ep(sc_, s_, active(at));
        Value v = ep.parse();
        if (ep.current().kind != Tok::End) fail(ep.current(), "operator or end of statement");
        return v;
    }

    void statement() {
        Token kw = sc_.keyword();
        if (kw.kind != Tok::Ident) fail(kw, "statement");
        Statement st;
        st.line = kw.line;
        if (kw.text == "chart") {
            chart_decl(st);
        } else if (kw.text == "use") {
            st.kind = Statement::Kind::Use;
            Token n = expect(Tok::Ident, "chart name");
            auto it = s_.charts.find(n.text);
            if (it == s_.charts.end()) fail(n, "declared chart");
            st.name = n.text;
            active_ = it->second;
            end_of_statement();
        } else if (kw.text == "scalar" || kw.text == "form" || kw.text == "field") {
            binding(st, kw);
        } else if (kw.text == "point") {
            point_decl(st, kw);
        } else if (kw.text == "map") {
            map_decl(st);
        } else if (kw.text == "bundle") {
            bundle_decl(st);
        } else if (is_command(kw.text)) {
            st.kind = Statement::Kind::Command;
            st.words.push_back(Word{kw.text, kw.line, kw.column});
            for (auto& w : sc_.words()) st.words.push_back(std::move(w));
            validate_command(st, s_);
        } else {
            fail(kw, "statement or command");
        }
        s_.statements.push_back(std::move(st));
    }

    void chart_decl(Statement& st) {
        st.kind = Statement::Kind::Chart;
        Token n = expect(Tok::Ident, "chart name");
        if (s_.charts.count(n.text)) fail(n, "new chart name");
        expect(Tok::LParen, "'('");
        std::vector<std::string> names;
        while (true) {
            Token c = expect(Tok::Ident, "coordinate name");
            if (std::find(names.begin(), names.end(), c.text) != names.end()) fail(c, "distinct coordinate");
            names.push_back(c.text);
            Token sep = sc_.next(true);
            if (sep.kind == Tok::RParen) break;
            if (sep.kind != Tok::Comma) fail(sep, "',' or ')'");
        }
        for (const auto& a : names)
            for (const auto& b : names)
                if (a == "d" + b) throw ParseError(n.line, n.column, "coordinates not of the form d<coordinate>", a);
        st.name = n.text;
        Chart c(names);
        s_.charts.emplace(n.text, c);
        active_ = c;
        end_of_statement();
    }

    void binding(Statement& st, const Token& kw) {
        Token n = new_name(kw.text.c_str());
        Token eq = expect(Tok::Equals, "'='");
        Value v = expression(eq);
        st.name = n.text;
        if (kw.text == "scalar") {
            st.kind = Statement::Kind::Scalar;
            if (v.kind != Value::Kind::Scalar) fail(eq, "scalar expression");
            s_.scalars.emplace(n.text, v.s);
        } else if (kw.text == "form") {
            st.kind = Statement::Kind::Form;
            if (v.kind == Value::Kind::Scalar) v = Value{Value::Kind::Form, {}, KForm::scalar(v.s), {}};
            if (v.kind != Value::Kind::Form) fail(eq, "form expression");
            s_.forms.emplace(n.text, v.f);
        } else {
            st.kind = Statement::Kind::Field;
            if (v.kind == Value::Kind::Scalar && v.s.is_zero()) v = Value{Value::Kind::Field, {}, {}, VectorField(active_)};
            if (v.kind != Value::Kind::Field) fail(eq, "field expression");
            s_.fields.emplace(n.text, v.v);
        }
    }

    /// Parenthesized comma list of expressions on `chart`.
    std::vector<RationalFunction> tuple(const Chart& chart, const Token& at) {
        expect(Tok::LParen, "'('");
        std::vector<RationalFunction> out;
        Chart saved = active_;
        active_ = chart;
        while (true) {
            ExprParser ep(sc_, s_, active(at));
            Value v = ep.parse();
            if (v.kind != Value::Kind::Scalar) throw ParseError(at.line, at.column, "scalar entries");
            out.push_back(v.s);
            if (ep.current().kind == Tok::RParen) break;
            if (ep.current().kind != Tok::Comma) fail(ep.current(), "',' or ')'");
        }
        active_ = saved;
        return out;
    }

    void point_decl(Statement& st, const Token& kw) {
        st.kind = Statement::Kind::Point;
        Token n = new_name("point");
        Token eq = expect(Tok::Equals, "'='");
        auto entries = tuple(active(kw), eq);
        std::vector<Rational> coords;
        for (const auto& e : entries) {
            if (!e.is_constant()) throw ParseError(eq.line, eq.column, "constant coordinates", e.to_string());
            coords.push_back(e.constant_value());
        }
        if (coords.size() != active_.dim())
            throw ParseError(eq.line, eq.column, std::to_string(active_.dim()) + " coordinates",
                             std::to_string(coords.size()));
        st.name = n.text;
        s_.points.emplace(n.text, PointQ(active_, coords));
        end_of_statement();
    }

    const Chart& chart_named(const Token& t) {
        auto it = s_.charts.find(t.text);
        if (it == s_.charts.end()) fail(t, "declared chart");
        return it->second;
    }

    void map_decl(Statement& st) {
        st.kind = Statement::Kind::Map;
        Token n = new_name("map");
        expect(Tok::Colon, "':'");
        Token src = expect(Tok::Ident, "source chart");
        Chart source = chart_named(src);
        expect(Tok::Arrow, "'->'");
        Token tgt = expect(Tok::Ident, "target chart");
        Chart target = chart_named(tgt);
        Token eq = expect(Tok::Equals, "'='");
        auto exprs = tuple(source, eq);
        if (exprs.size() != target.dim())
            throw ParseError(eq.line, eq.column, std::to_string(target.dim()) + " components",
                             std::to_string(exprs.size()));
        ParamEmbedding e{PolyMap(source, target, exprs), std::nullopt};
        if (!sc_.at_statement_end()) {
            Token w = sc_.next(false);
            if (w.kind != Tok::Ident || w.text != "where") fail(w, "'where' or end of statement");
            Chart saved = active_;
            active_ = source;
            Value g = expression(w);
            active_ = saved;
            if (g.kind != Value::Kind::Scalar || !g.s.is_polynomial())
                throw ParseError(w.line, w.column, "polynomial constraint");
            e.constraint = g.s.num();
        }
        st.name = n.text;
        s_.maps.emplace(n.text, NamedMap{src.text, tgt.text, std::move(e)});
    }

    void bundle_decl(Statement& st);

    Scanner sc_;
    Session s_;
    Chart active_;
};

}  // namespace

// Defined with the command table.
ContactBundle build_bundle(const Statement& st, const Session& s);

namespace {

void SessionParser::bundle_decl(Statement& st) {
    st.kind = Statement::Kind::Bundle;
    Token n = new_name("bundle");
    expect(Tok::Equals, "'='");
    st.name = n.text;
    st.words = sc_.words();
    if (st.words.empty()) throw ParseError(n.line, n.column, "bundle specification");
    ContactBundle b = build_bundle(st, s_);
    s_.bundles.emplace(n.text, b);
    if (!s_.charts.count(n.text)) {
        bool known = false;
        for (const auto& [k, c] : s_.charts) known = known || c == b.chart;
        if (!known) s_.charts.emplace(n.text, b.chart);
    }
    active_ = b.chart;
}

std::string quote_word(const std::string& w) {
    if (w.empty() || w.find_first_of(" \t#;") != std::string::npos) return "\"" + w + "\"";
    return w;
}

std::string join_words(const std::vector<Word>& ws) {
    std::string s;
    for (const auto& w : ws) {
        if (!s.empty()) s += " ";
        s += quote_word(w.text);
    }
    return s;
}

}  // namespace

Session parse_session(std::string_view text, const std::filesystem::path& base_dir) {
    return SessionParser(text, base_dir).run();
}

std::string print_session(const Session& s) {
    std::ostringstream os;
    for (const auto& st : s.statements) {
        switch (st.kind) {
            case Statement::Kind::Chart: {
                os << "chart " << st.name << " (";
                const Chart& c = s.charts.at(st.name);
                for (std::size_t i = 0; i < c.dim(); ++i) os << (i ? ", " : "") << c.name(i);
                os << ")";
                break;
            }
            case Statement::Kind::Use: os << "use " << st.name; break;
            case Statement::Kind::Scalar: os << "scalar " << st.name << " = " << s.scalars.at(st.name).to_string(); break;
            case Statement::Kind::Form: os << "form " << st.name << " = " << s.forms.at(st.name).to_string(); break;
            case Statement::Kind::Field: os << "field " << st.name << " = " << s.fields.at(st.name).to_string(); break;
            case Statement::Kind::Point: {
                const PointQ& p = s.points.at(st.name);
                os << "point " << st.name << " = (";
                for (std::size_t i = 0; i < p.coords.size(); ++i) os << (i ? ", " : "") << p.coords[i].to_string();
                os << ")";
                break;
            }
            case Statement::Kind::Map: {
                const NamedMap& m = s.maps.at(st.name);
                os << "map " << st.name << " : " << m.source << " -> " << m.target << " = (";
                const auto& ex = m.embedding.map.exprs();
                for (std::size_t i = 0; i < ex.size(); ++i) os << (i ? ", " : "") << ex[i].to_string();
                os << ")";
                if (m.embedding.constraint) os << " where " << m.embedding.constraint->to_string();
                break;
            }
            case Statement::Kind::Bundle: os << "bundle " << st.name << " = " << join_words(st.words); break;
            case Statement::Kind::Command: os << join_words(st.words); break;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace ccw::cli
