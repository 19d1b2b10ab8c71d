#include "covertt/syntax.hpp"

#include <cctype>

namespace covertt {

namespace {

struct Token {
    enum class Kind { Ident, Sym, End } kind;
    std::string text;
    Span span;
    bool spaced = false;  // preceded by whitespace or a comment
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    bool spaced = true;
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            spaced = true;
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') ++i;
            spaced = true;
            continue;
        }
        Token t;
        t.spaced = spaced;
        spaced = false;
        const std::size_t start = i;
        if (ident_start(c)) {
            while (i < src.size() && ident_char(src[i])) ++i;
            t.kind = Token::Kind::Ident;
        } else {
            static const char* two[] = {"=>", ":=", "->"};
            bool matched = false;
            for (const char* s : two) {
                if (src.substr(i, 2) == s) {
                    i += 2;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                if (std::string_view("(){},:;.|\\").find(c) == std::string_view::npos)
                    throw SyntaxError({i, i + 1}, std::string("unexpected character '") + c + "'");
                ++i;
            }
            t.kind = Token::Kind::Sym;
        }
        t.text = std::string(src.substr(start, i - start));
        t.span = {start, i};
        out.push_back(std::move(t));
    }
    out.push_back({Token::Kind::End, "", {src.size(), src.size()}, true});
    return out;
}

bool is_keyword(const std::string& s) {
    return s == "data" || s == "def" || s == "match" || s == "to" || s == "Pi" || s == "Type" ||
           s == "Eq" || s == "refl";
}

class Parser {
public:
    explicit Parser(std::string_view src) : toks_(lex(src)) {}

    SourceFile file() {
        SourceFile f;
        while (!at_end()) {
            if (peek_ident("data"))
                f.decls.push_back(data());
            else if (peek_ident("def"))
                f.decls.push_back(def());
            else
                fail("expected 'data' or 'def'");
        }
        return f;
    }

    SPtr lone_term() {
        SPtr t = term();
        if (!at_end()) fail("unexpected input after term");
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    bool peek_sym(const char* s, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
    }
    bool peek_ident(const char* s) const {
        return peek().kind == Token::Kind::Ident && peek().text == s;
    }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw SyntaxError(t.span, msg + (t.kind == Token::Kind::End ? " at end of input"
                                                                     : ", found '" + t.text + "'"));
    }

    Span expect(const char* sym) {
        if (!peek_sym(sym)) fail(std::string("expected '") + sym + "'");
        return next().span;
    }

    // Closes a bracket; at end of input the error points at the opener.
    Span close(const char* sym, Span open) {
        if (at_end()) throw SyntaxError(open, std::string("unclosed bracket, expected '") + sym + "'");
        return expect(sym);
    }

    Token ident() {
        if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) fail("expected a name");
        return next();
    }

    std::vector<SBinder> binder_list(const char* closer, Span open) {
        std::vector<SBinder> out;
        if (peek_sym(closer)) return out;
        for (;;) {
            if (at_end()) throw SyntaxError(open, std::string("unclosed bracket, expected '") + closer + "'");
            Token n = ident();
            expect(":");
            SPtr ty = term();
            out.push_back({n.text, ty, {n.span.begin, ty->span.end}});
            if (!peek_sym(",")) break;
            next();
        }
        if (at_end()) throw SyntaxError(open, std::string("unclosed bracket, expected '") + closer + "'");
        return out;
    }

    std::vector<SBinder> paren_binders() {
        Span open = expect("(");
        auto out = binder_list(")", open);
        close(")", open);
        return out;
    }

    std::vector<SPtr> term_list(Span open) {
        std::vector<SPtr> out;
        if (peek_sym(")")) return out;
        for (;;) {
            if (at_end()) throw SyntaxError(open, "unclosed bracket, expected ')'");
            out.push_back(term());
            if (!peek_sym(",")) break;
            next();
        }
        if (at_end()) throw SyntaxError(open, "unclosed bracket, expected ')'");
        return out;
    }

    SData data() {
        Span start = next().span;
        SData d;
        d.name = ident().text;
        d.params = paren_binders();
        Span open = expect("{");
        while (!peek_sym("}")) {
            if (at_end()) throw SyntaxError(open, "unclosed bracket, expected '}'");
            Token n = ident();
            SCon c;
            c.name = n.text;
            c.fields = paren_binders();
            c.span = {n.span.begin, toks_[pos_ - 1].span.end};
            d.cons.push_back(std::move(c));
            if (peek_sym(";")) next();
            else if (!peek_sym("}")) fail("expected ';' or '}'");
        }
        Span end = next().span;
        d.span = {start.begin, end.end};
        return d;
    }

    SDef def() {
        Span start = next().span;
        SDef d;
        d.name = ident().text;
        expect(":");
        d.type = term();
        expect(":=");
        d.body = term();
        d.span = {start.begin, d.body->span.end};
        return d;
    }

    static SPtr node(SExpr e) { return std::make_shared<const SExpr>(std::move(e)); }

    SPtr term() {
        const Span start = peek().span;
        if (peek_ident("Pi")) {
            next();
            std::vector<SBinder> bs;
            do {
                auto group = paren_binders();
                bs.insert(bs.end(), group.begin(), group.end());
            } while (peek_sym("("));
            if (bs.empty()) fail("expected a binder");
            expect(".");
            SPtr body = term();
            for (auto it = bs.rbegin(); it != bs.rend(); ++it)
                body = node({SExpr::Kind::Pi, {start.begin, body->span.end}, it->name, {it->type, body}});
            return body;
        }
        if (peek_sym("\\")) {
            next();
            std::vector<Token> names;
            do names.push_back(ident());
            while (peek().kind == Token::Kind::Ident);
            expect(".");
            SPtr body = term();
            for (auto it = names.rbegin(); it != names.rend(); ++it)
                body = node({SExpr::Kind::Lam, {start.begin, body->span.end}, it->text, {body}});
            return body;
        }
        if (peek_ident("match")) return match_expr();
        SPtr lhs = application();
        if (peek_sym("->")) {
            next();
            SPtr rhs = term();
            return node({SExpr::Kind::Pi, {lhs->span.begin, rhs->span.end}, "_", {lhs, rhs}});
        }
        return lhs;
    }

    SPtr match_expr() {
        Span start = next().span;
        SExpr m{SExpr::Kind::Match, {}, "", {}};
        Span open = expect("(");
        m.args = term_list(open);
        close(")", open);
        expect(":");
        m.tel = paren_binders();
        if (!peek_ident("to")) fail("expected 'to'");
        next();
        SPtr motive = term();
        Span brace = expect("{");
        while (peek_sym("|")) {
            Span bar = next().span;
            SBranch b;
            b.tel = paren_binders();
            expect(".");
            Span popen = expect("(");
            b.pattern = term_list(popen);
            close(")", popen);
            expect("=>");
            b.body = term();
            b.span = {bar.begin, b.body->span.end};
            m.branches.push_back(std::move(b));
        }
        Span end = close("}", brace);
        m.args.push_back(motive);  // the motive rides last
        m.span = {start.begin, end.end};
        return node(std::move(m));
    }

    bool atom_start() const {
        const Token& t = peek();
        if (t.kind == Token::Kind::Ident)
            return !(t.text == "data" || t.text == "def" || t.text == "match" || t.text == "to" ||
                     t.text == "Pi");
        return t.kind == Token::Kind::Sym && (t.text == "(" || t.text == ".");
    }

    SPtr application() {
        if (!atom_start()) fail("expected a term");
        SPtr f = atom();
        while (atom_start()) {
            SPtr a = atom();
            f = node({SExpr::Kind::App, {f->span.begin, a->span.end}, "", {f, a}});
        }
        return f;
    }

    SPtr atom() {
        if (peek_sym(".")) {
            Span dot = next().span;
            if (!atom_start()) fail("expected a term after '.'");
            SPtr inner = atom();
            return node({SExpr::Kind::Dot, {dot.begin, inner->span.end}, "", {inner}});
        }
        if (peek_sym("(")) {
            Span open = next().span;
            SPtr inner = term();
            Span end = close(")", open);
            SExpr copy = *inner;
            copy.span = {open.begin, end.end};
            return node(std::move(copy));
        }
        Token n = next();
        if (n.text == "Type") return node({SExpr::Kind::Type, n.span, "", {}});
        const bool call = peek_sym("(") && !peek().spaced;
        if (n.text == "Eq" || n.text == "refl") {
            if (!call) fail("expected '(' directly after " + n.text);
            Span open = next().span;
            auto args = term_list(open);
            Span end = close(")", open);
            const std::size_t want = n.text == "Eq" ? 3 : 1;
            if (args.size() != want)
                throw SyntaxError({n.span.begin, end.end},
                                  n.text + " takes " + std::to_string(want) + " argument(s)");
            return node({n.text == "Eq" ? SExpr::Kind::Eq : SExpr::Kind::Refl, {n.span.begin, end.end},
                         "", std::move(args)});
        }
        if (call) {
            Span open = next().span;
            auto args = term_list(open);
            Span end = close(")", open);
            return node({SExpr::Kind::Call, {n.span.begin, end.end}, n.text, std::move(args)});
        }
        return node({SExpr::Kind::Name, n.span, n.text, {}});
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

SourceFile parse(std::string_view text) { return Parser(text).file(); }

SPtr parse_term(std::string_view text) { return Parser(text).lone_term(); }

}  // namespace covertt
