#include "phorslab/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace phorslab {

namespace {

enum class Tok { Ident, Number, Pi, Punct, Arrow, End };

struct Token {
    Tok kind;
    std::string text;
    unsigned line, col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::vector<Token> lex(std::string_view src)
{
    std::vector<Token> out;
    unsigned line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        unsigned l = line, cl = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string word(src.substr(i, j - i));
            Tok kind = Tok::Ident;
            if (word.size() > 3 && word.compare(0, 3, "pi_") == 0 &&
                word.find_first_not_of("0123456789", 3) == std::string::npos)
                kind = Tok::Pi;
            out.push_back({kind, word, l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                ++j;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            }
            out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, cl});
            advance(j - i);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == 'o') {
            out.push_back({Tok::Arrow, "-o", l, cl});
            advance(2);
            continue;
        }
        if (std::string_view(":;=()<>,[]/!^").find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), l, cl});
            advance(1);
            continue;
        }
        throw ParseError(l, cl, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

const std::set<std::string> kReserved = {"param", "start", "e", "Omega"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Scheme parse_scheme();
    Type parse_type_only()
    {
        Type t = type();
        expect_end();
        return t;
    }

private:
    struct PendingRule {
        std::string name;
        std::vector<std::string> params;
        std::size_t body_begin, body_end;
        Token at;
    };

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    bool is_punct(const char* p, std::size_t k = 0) const { return peek(k).kind == Tok::Punct && peek(k).text == p; }
    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }
    void expect_punct(const char* p)
    {
        if (!is_punct(p)) fail(peek(), std::string("expected '") + p + "'" + found());
        next();
    }
    std::string found() const
    {
        const Token& t = peek();
        return t.kind == Tok::End ? " but reached end of input" : " but found '" + t.text + "'";
    }
    void expect_end()
    {
        if (peek().kind != Tok::End) fail(peek(), "trailing input");
    }
    std::string ident(const char* what)
    {
        if (peek().kind != Tok::Ident) fail(peek(), std::string("expected ") + what + found());
        return next().text;
    }

    Grade grade();
    Type type();
    Type atype();

    Term term();
    Term application();
    bool atom_start() const;
    Term atom();
    Rat bias();

    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    // Name resolution context for the body being parsed.
    const std::set<std::string>* locals_ = nullptr;
    std::set<std::string> nonterms_;
    std::set<std::string> params_;
};

Grade Parser::grade()
{
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "inf") {
        next();
        return Grade::inf();
    }
    if (t.kind == Tok::Number && t.text.find('.') == std::string::npos) {
        next();
        return Grade(static_cast<unsigned>(std::stoul(t.text)));
    }
    fail(t, "expected a grade (natural number or 'inf')" + found());
}

Type Parser::type()
{
    if (is_punct("!")) {
        next();
        Grade g = grade();
        Type a = atype();
        if (peek().kind != Tok::Arrow) fail(peek(), "expected '-o' after graded argument type" + found());
        next();
        Type r = type();
        return Type::arrow(g, a, r);
    }
    Type a = atype();
    if (peek().kind == Tok::Arrow) {
        // Ungraded argument: affine use.
        next();
        Type r = type();
        return Type::arrow(Grade(1), a, r);
    }
    return a;
}

Type Parser::atype()
{
    if (is_punct("(")) {
        next();
        Type t = type();
        expect_punct(")");
        return t;
    }
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "o") {
        next();
        if (is_punct("^")) {
            next();
            const Token& n = peek();
            if (n.kind != Tok::Number || n.text.find('.') != std::string::npos) fail(n, "expected width after '^'");
            next();
            unsigned w = static_cast<unsigned>(std::stoul(n.text));
            if (w == 0) fail(n, "ground type width must be at least 1");
            return Type::ground(w);
        }
        return Type::ground(1);
    }
    fail(t, "expected a type" + found());
}

Rat Parser::bias()
{
    const Token& t = peek();
    if (t.kind != Tok::Number) fail(t, "expected a probability" + found());
    next();
    std::string text = t.text;
    if (is_punct("/")) {
        next();
        const Token& d = peek();
        if (d.kind != Tok::Number || d.text.find('.') != std::string::npos) fail(d, "expected denominator");
        next();
        text += "/" + d.text;
    }
    Rat q;
    try {
        q = parse_rat(text);
    } catch (const std::invalid_argument& e) {
        fail(t, e.what());
    }
    if (q < 0 || q > 1) fail(t, "bias " + to_string(q) + " outside [0,1]");
    return q;
}

Term Parser::term()
{
    Term t = application();
    while (is_punct("[")) {
        next();
        Rat p = bias();
        expect_punct("]");
        Term u = application();
        t = Term::choice(t, p, u);
    }
    return t;
}

bool Parser::atom_start() const
{
    const Token& t = peek();
    if (t.kind == Tok::Ident || t.kind == Tok::Pi) return true;
    return is_punct("(") || is_punct("<");
}

Term Parser::application()
{
    if (!atom_start()) fail(peek(), "expected a term" + found());
    Term t = atom();
    while (atom_start()) t = Term::app(t, atom());
    return t;
}

Term Parser::atom()
{
    const Token& t = next();
    if (t.kind == Tok::Pi) {
        unsigned idx = static_cast<unsigned>(std::stoul(t.text.substr(3)));
        if (idx == 0) fail(t, "projection indices start at 1");
        if (!atom_start()) fail(peek(), "expected a term after '" + t.text + "'");
        return Term::proj(idx, atom());
    }
    if (t.kind == Tok::Ident) {
        if (t.text == "e") return Term::unit();
        if (t.text == "Omega") return Term::omega();
        if (locals_ && locals_->count(t.text)) return Term::var(t.text);
        if (nonterms_.count(t.text)) return Term::nonterm(t.text);
        if (params_.count(t.text)) return Term::param(t.text);
        fail(t, "unknown identifier '" + t.text + "'");
    }
    if (t.kind == Tok::Punct && t.text == "(") {
        Term inner = term();
        expect_punct(")");
        return inner;
    }
    if (t.kind == Tok::Punct && t.text == "<") {
        std::vector<Term> items{term()};
        while (is_punct(",")) {
            next();
            items.push_back(term());
        }
        expect_punct(">");
        return Term::tuple(std::move(items));
    }
    fail(t, "expected a term but found '" + t.text + "'");
}

Scheme Parser::parse_scheme()
{
    Scheme s;
    std::vector<std::string> order;
    std::map<std::string, std::pair<Type, Token>> decls;
    std::map<std::string, PendingRule> rules;
    std::optional<Token> start_tok;
    bool start_given = false;

    auto check_name = [&](const Token& t) {
        if (kReserved.count(t.text) || t.kind != Tok::Ident) fail(t, "'" + t.text + "' cannot be used as a name");
    };
    auto note = [&](const std::string& n) {
        if (std::find(order.begin(), order.end(), n) == order.end()) order.push_back(n);
    };

    while (peek().kind != Tok::End) {
        const Token head = peek();
        if (head.kind != Tok::Ident) fail(head, "expected a declaration or rule" + found());
        if (head.text == "param") {
            next();
            const Token nt = peek();
            std::string name = ident("parameter name");
            check_name(nt);
            expect_punct(":");
            Type t = type();
            expect_punct(";");
            for (const auto& [n, _] : s.params)
                if (n == name) fail(nt, "duplicate parameter '" + name + "'");
            s.params.emplace_back(name, t);
            params_.insert(name);
            continue;
        }
        if (head.text == "start") {
            next();
            start_tok = peek();
            s.start = ident("start symbol");
            start_given = true;
            expect_punct(";");
            continue;
        }
        check_name(head);
        next();
        if (is_punct(":")) {
            next();
            Type t = type();
            expect_punct(";");
            if (decls.count(head.text)) fail(head, "duplicate declaration of '" + head.text + "'");
            decls.emplace(head.text, std::make_pair(t, head));
            note(head.text);
            continue;
        }
        PendingRule r{head.text, {}, 0, 0, head};
        while (peek().kind == Tok::Ident) {
            const Token pt = peek();
            check_name(pt);
            std::string p = next().text;
            if (std::find(r.params.begin(), r.params.end(), p) != r.params.end())
                fail(pt, "duplicate parameter '" + p + "' in rule for '" + head.text + "'");
            r.params.push_back(p);
        }
        expect_punct("=");
        r.body_begin = pos_;
        int depth = 0;
        while (peek().kind != Tok::End && !(depth == 0 && is_punct(";"))) {
            if (is_punct("(") || is_punct("<") || is_punct("[")) ++depth;
            if (is_punct(")") || is_punct(">") || is_punct("]")) --depth;
            next();
        }
        r.body_end = pos_;
        expect_punct(";");
        if (rules.count(head.text)) fail(head, "duplicate non-terminal '" + head.text + "'");
        rules.emplace(head.text, r);
        note(head.text);
    }

    for (const auto& n : order) {
        if (!rules.count(n)) fail(decls.at(n).second, "non-terminal '" + n + "' is declared but has no rule");
        if (!decls.count(n)) fail(rules.at(n).at, "non-terminal '" + n + "' has no type declaration");
        if (params_.count(n)) fail(rules.at(n).at, "'" + n + "' is both a parameter and a non-terminal");
        nonterms_.insert(n);
    }

    for (const auto& n : order) {
        const PendingRule& pr = rules.at(n);
        std::set<std::string> locals(pr.params.begin(), pr.params.end());
        for (const auto& p : pr.params)
            if (nonterms_.count(p) || params_.count(p))
                fail(pr.at, "rule parameter '" + p + "' of '" + n + "' shadows a global name");
        locals_ = &locals;
        std::vector<Token> sub(toks_.begin() + static_cast<long>(pr.body_begin),
                               toks_.begin() + static_cast<long>(pr.body_end));
        const Token& end_tok = toks_[pr.body_end];
        sub.push_back({Tok::End, "", end_tok.line, end_tok.col});
        Parser bodyp(std::move(sub));
        bodyp.nonterms_ = nonterms_;
        bodyp.params_ = params_;
        bodyp.locals_ = &locals;
        Term body = bodyp.term();
        if (bodyp.peek().kind != Tok::End) bodyp.fail(bodyp.peek(), "unexpected '" + bodyp.peek().text + "' in body");
        s.rules.push_back(Rule{n, decls.at(n).first, pr.params, body});
    }
    locals_ = nullptr;

    const Rule* st = s.find(s.start);
    if (!st) {
        if (start_given) fail(*start_tok, "start symbol '" + s.start + "' is not defined");
        const Token& e = toks_.back();
        fail(e, "missing start symbol '" + s.start + "'");
    }
    if (!(st->type == Type::ground(1))) {
        const Token& at = start_given ? *start_tok : decls.at(s.start).second;
        fail(at, "start symbol '" + s.start + "' must have type o");
    }
    return s;
}

}  // namespace

Scheme parse(std::string_view source)
{
    Parser p(lex(source));
    return p.parse_scheme();
}

Scheme parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(0, 0, "cannot open file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(e.line, e.col, e.message, path);
    }
}

Type parse_type(std::string_view source)
{
    Parser p(lex(source));
    return p.parse_type_only();
}

}  // namespace phorslab
