#include "gfa/parser.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gfa/bump.hpp"

namespace gfa {

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, End };
    Kind kind = Kind::End;
    double number = 0.0;
    std::string ident;
    char op = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(tok_, msg); }
    [[noreturn]] static void fail_at(const Token& t, const std::string& msg) {
        throw Error(Error::Kind::Syntax, "line " + std::to_string(t.line) + " col " +
                                             std::to_string(t.col) + ": " + msg);
    }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            bump_pos();
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
                bump_pos();
            }
            if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                size_t mark = pos_;
                bump_pos();
                if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) bump_pos();
                if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    while (pos_ < text_.size() &&
                           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                        bump_pos();
                    }
                } else {
                    // Not an exponent suffix (e.g. "2*eps" written "2eps" is
                    // still an error, but "2e" starting an ident is not ours).
                    rewind_to(mark);
                }
            }
            std::string_view s = text_.substr(start, pos_ - start);
            double v = 0.0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size()) {
                fail_at(tok_, "malformed number '" + std::string(s) + "'");
            }
            tok_.kind = Token::Kind::Number;
            tok_.number = v;
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                bump_pos();
            }
            tok_.kind = Token::Kind::Ident;
            tok_.ident = std::string(text_.substr(start, pos_ - start));
            return;
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            tok_.kind = Token::Kind::Op;
            tok_.op = c;
            bump_pos();
            return;
        }
        fail_at(tok_, std::string("unexpected character '") + c + "'");
    }

    void bump_pos() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void rewind_to(size_t mark) {
        // Only used to un-read a lookahead within one line.
        col_ -= static_cast<int>(pos_ - mark);
        pos_ = mark;
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

ExprPtr with_location(ExprPtr e, const Token& t) {
    Expr copy = *e;
    copy.line = t.line;
    copy.col = t.col;
    return std::make_shared<const Expr>(std::move(copy));
}

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    ExprPtr run() {
        ExprPtr e = parse_expr();
        if (lex_.peek().kind != Token::Kind::End) {
            lex_.fail("unexpected trailing input");
        }
        return e;
    }

private:
    bool at_op(char c) const {
        return lex_.peek().kind == Token::Kind::Op && lex_.peek().op == c;
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (at_op('+') || at_op('-')) {
            char op = lex_.take().op;
            ExprPtr r = parse_term();
            e = op == '+' ? add(e, r) : sub(e, r);
        }
        return e;
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (at_op('*') || at_op('/')) {
            char op = lex_.take().op;
            ExprPtr r = parse_unary();
            e = op == '*' ? mul(e, r) : div(e, r);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (at_op('-')) {
            lex_.take();
            return mul(num(-1.0), parse_unary());
        }
        return parse_factor();
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_base();
        if (!at_op('^')) return base;
        Token caret = lex_.take();
        double sign = 1.0;
        if (at_op('-')) {
            lex_.take();
            sign = -1.0;
        }
        if (lex_.peek().kind == Token::Kind::Number) {
            double q = sign * lex_.take().number;
            return pow(base, q);
        }
        if (at_op('(')) {
            ExprPtr e = parse_parenthesized();
            if (sign < 0) e = mul(num(-1.0), e);
            if (is_constant(*e)) {
                return pow(base, eval(e, 0.5, {}).real());
            }
            // General exponent: b^e = exp(e * log b).
            return call(Builtin::Exp, mul(e, call(Builtin::Log, base)));
        }
        Lexer::fail_at(caret, "exponent must be a number or a parenthesized expression");
    }

    ExprPtr parse_parenthesized() {
        lex_.take();  // '('
        ExprPtr e = parse_expr();
        if (!at_op(')')) lex_.fail("expected ')'");
        lex_.take();
        return e;
    }

    ExprPtr parse_base() {
        const Token& t = lex_.peek();
        switch (t.kind) {
            case Token::Kind::Number: {
                Token n = lex_.take();
                return with_location(num(n.number), n);
            }
            case Token::Kind::Ident: {
                Token id = lex_.take();
                if (id.ident == "eps") return with_location(var(-1), id);
                if (id.ident.size() >= 2 && id.ident[0] == 'x' &&
                    std::isdigit(static_cast<unsigned char>(id.ident[1]))) {
                    int idx = 0;
                    auto [p, ec] = std::from_chars(id.ident.data() + 1,
                                                   id.ident.data() + id.ident.size(), idx);
                    if (ec == std::errc() && p == id.ident.data() + id.ident.size() && idx >= 1) {
                        return with_location(var(idx - 1), id);
                    }
                }
                Builtin fn;
                int order = 0;
                if (!lookup_builtin(id.ident, fn, order)) {
                    Lexer::fail_at(id, "unknown identifier '" + id.ident + "'");
                }
                if (!at_op('(')) Lexer::fail_at(id, "'" + id.ident + "' expects an argument list");
                lex_.take();
                ExprPtr arg = parse_expr();
                if (at_op(',')) {
                    Lexer::fail_at(lex_.peek(), "'" + id.ident + "' takes exactly one argument");
                }
                if (!at_op(')')) lex_.fail("expected ')'");
                lex_.take();
                return with_location(call(fn, arg, order), id);
            }
            case Token::Kind::Op:
                if (t.op == '(') return parse_parenthesized();
                lex_.fail(std::string("unexpected '") + t.op + "'");
            default: lex_.fail("unexpected end of input");
        }
    }

    static bool lookup_builtin(const std::string& name, Builtin& fn, int& order) {
        order = 0;
        if (name == "exp") fn = Builtin::Exp;
        else if (name == "sin") fn = Builtin::Sin;
        else if (name == "cos") fn = Builtin::Cos;
        else if (name == "log") fn = Builtin::Log;
        else if (name == "sqrt") fn = Builtin::Sqrt;
        else if (name == "bump") fn = Builtin::Bump;
        else if (name == "gauss") fn = Builtin::Gauss;
        else if (name.size() > 5 && name.rfind("bumpd", 0) == 0) {
            int k = 0;
            auto [p, ec] = std::from_chars(name.data() + 5, name.data() + name.size(), k);
            if (ec != std::errc() || p != name.data() + name.size() || k < 1 ||
                k > BumpKernel::kMaxOrder) {
                return false;
            }
            fn = Builtin::BumpDeriv;
            order = k;
        } else {
            return false;
        }
        return true;
    }

    Lexer lex_;
};

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(text).run(); }

FamilyFile parse_family_file(std::string_view text) {
    FamilyFile out;
    bool have_u = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Error::Kind::Syntax,
                        "line " + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = line.substr(start, eq - start);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::string value = line.substr(eq + 1);
        size_t vs = value.find_first_not_of(" \t");
        value = vs == std::string::npos ? "" : value.substr(vs);
        if (!value.empty()) value.erase(value.find_last_not_of(" \t\r") + 1);
        if (key == "dim") {
            int d = 0;
            auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
            if (ec != std::errc() || p != value.data() + value.size() || d < 1) {
                throw Error(Error::Kind::Syntax,
                            "line " + std::to_string(lineno) + ": bad dim value");
            }
            out.dim = d;
        } else if (key == "name") {
            out.name = value;
        } else if (key == "u") {
            out.u = parse(value);
            have_u = true;
        } else {
            throw Error(Error::Kind::Syntax,
                        "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    if (!have_u) throw Error(Error::Kind::Syntax, "family file has no 'u =' line");
    int maxvar = max_var_index(*out.u);
    if (maxvar >= out.dim) {
        throw Error(Error::Kind::Syntax, "expression uses x" + std::to_string(maxvar + 1) +
                                             " but dim = " + std::to_string(out.dim));
    }
    return out;
}

FamilyFile load_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::InvalidInput, "cannot open family file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_family_file(ss.str());
}

}  // namespace gfa
