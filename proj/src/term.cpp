#include "groveq/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace groveq {

namespace {

bool reserved_name(const std::string& name) {
    if (name == "#" || name == "$") return true;
    // x followed by digits only: clashes with exit markers in word output.
    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(),
                    [](unsigned char c) { return std::isdigit(c); }))
        return true;
    return false;
}

Term node(TermNode n) { return std::make_shared<const TermNode>(std::move(n)); }

}  // namespace

void Signature::add_letter(const std::string& name, int rank) {
    if (rank < 0) throw sort_error("letter " + name + " has negative rank");
    if (reserved_name(name)) throw sort_error("reserved name: " + name);
    if (has(name)) throw sort_error("duplicate name: " + name);
    letters.emplace(name, rank);
}

void Signature::add_variable(const std::string& name, Sort sort) {
    if (sort.source < 0 || sort.target < 0)
        throw sort_error("variable " + name + " has negative sort");
    if (reserved_name(name)) throw sort_error("reserved name: " + name);
    if (has(name)) throw sort_error("duplicate name: " + name);
    variables.emplace(name, sort);
}

Term mk_var(std::string name) {
    return node({TermKind::var, std::move(name), 0, 0, {}, std::nullopt});
}
Term mk_letter(std::string name) {
    return node({TermKind::letter, std::move(name), 0, 0, {}, std::nullopt});
}
Term mk_id(int n) { return node({TermKind::id, "", n, 0, {}, std::nullopt}); }
Term mk_dist(int i, int n) {
    return node({TermKind::dist, "", i, n, {}, std::nullopt});
}
Term mk_zero(int n, int p) {
    return node({TermKind::zero, "", n, p, {}, std::nullopt});
}
Term mk_comp(Term f, Term g) {
    return node({TermKind::comp, "", 0, 0, {std::move(f), std::move(g)}, std::nullopt});
}
Term mk_tuple(std::vector<Term> components) {
    if (components.empty()) throw sort_error("tupling of zero components");
    // <f> = f; the surface grammar has no one-component tupling either.
    if (components.size() == 1) return components[0];
    return node({TermKind::tuple, "", 0, 0, std::move(components), std::nullopt});
}
Term mk_pair(Term f, Term g) { return mk_tuple({std::move(f), std::move(g)}); }
Term mk_sum(Term f, Term g) {
    return node({TermKind::sum, "", 0, 0, {std::move(f), std::move(g)}, std::nullopt});
}
Term mk_dagger(Term f) {
    return node({TermKind::dagger, "", 0, 0, {std::move(f)}, std::nullopt});
}
Term mk_oplus(Term f, Term g) {
    return node({TermKind::oplus, "", 0, 0, {std::move(f), std::move(g)}, std::nullopt});
}
Term mk_star(Term f) {
    return node({TermKind::star, "", 0, 0, {std::move(f)}, std::nullopt});
}

bool term_equal(const Term& s, const Term& t) {
    if (s == t) return true;
    if (s->kind != t->kind || s->name != t->name || s->a != t->a ||
        s->b != t->b || s->children.size() != t->children.size())
        return false;
    for (std::size_t i = 0; i < s->children.size(); ++i)
        if (!term_equal(s->children[i], t->children[i])) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Sort inference

namespace {

Sort infer_at(const Term& t, const Signature& sig, const std::string& path) {
    auto fail = [&](const std::string& msg) -> Sort {
        throw sort_error("sort mismatch at " + (path.empty() ? "<root>" : path) +
                         ": " + msg);
    };
    Sort result;
    switch (t->kind) {
        case TermKind::var: {
            auto it = sig.variables.find(t->name);
            if (it == sig.variables.end())
                return fail("unknown variable " + t->name);
            result = it->second;
            break;
        }
        case TermKind::letter: {
            auto it = sig.letters.find(t->name);
            if (it == sig.letters.end()) return fail("unknown letter " + t->name);
            result = {1, it->second};
            break;
        }
        case TermKind::id:
            if (t->a < 0) return fail("id needs n >= 0");
            result = {t->a, t->a};
            break;
        case TermKind::dist:
            if (t->a < 1 || t->a > t->b)
                return fail("pi(" + std::to_string(t->a) + "," +
                            std::to_string(t->b) + ") needs 1 <= i <= n");
            result = {1, t->b};
            break;
        case TermKind::zero:
            if (t->a < 0 || t->b < 0) return fail("zero needs n,p >= 0");
            result = {t->a, t->b};
            break;
        case TermKind::comp: {
            Sort f = infer_at(t->children[0], sig, path + ".1");
            Sort g = infer_at(t->children[1], sig, path + ".2");
            if (f.target != g.source)
                return fail("composition of " + to_string(f) + " with " +
                            to_string(g));
            result = {f.source, g.target};
            break;
        }
        case TermKind::tuple: {
            if (t->children.empty())
                return fail("tupling of no components has no unique target");
            int source = 0;
            int target = -1;
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                Sort c = infer_at(t->children[i], sig,
                                  path + "." + std::to_string(i + 1));
                if (target >= 0 && c.target != target)
                    return fail("tupling components with targets " +
                                std::to_string(target) + " and " +
                                std::to_string(c.target));
                target = c.target;
                source += c.source;
            }
            result = {source, target};
            break;
        }
        case TermKind::sum: {
            Sort f = infer_at(t->children[0], sig, path + ".1");
            Sort g = infer_at(t->children[1], sig, path + ".2");
            if (f != g)
                return fail("sum of " + to_string(f) + " and " + to_string(g));
            result = f;
            break;
        }
        case TermKind::dagger: {
            Sort f = infer_at(t->children[0], sig, path + ".1");
            if (f.target < f.source)
                return fail("dagger needs target >= source, got " + to_string(f));
            result = {f.source, f.target - f.source};
            break;
        }
        case TermKind::oplus: {
            Sort f = infer_at(t->children[0], sig, path + ".1");
            Sort g = infer_at(t->children[1], sig, path + ".2");
            result = {f.source + g.source, f.target + g.target};
            break;
        }
        case TermKind::star: {
            Sort f = infer_at(t->children[0], sig, path + ".1");
            if (f.target < f.source)
                return fail("star needs target >= source, got " + to_string(f));
            result = f;
            break;
        }
    }
    const_cast<TermNode*>(t.get())->sort = result;
    return result;
}

}  // namespace

Sort infer_sort(const Term& t, const Signature& sig) {
    return infer_at(t, sig, "");
}

// ---------------------------------------------------------------------------
// Desugaring

namespace {

Sort sort_of(const Term& t, const Signature& sig) {
    if (t->sort) return *t->sort;
    return infer_sort(t, sig);
}

// Rows of h : k -> p as k terms of sort 1 -> p.
void append_rows(const Term& h, Sort hs, std::vector<Term>* rows) {
    if (hs.source == 1) {
        rows->push_back(h);
        return;
    }
    for (int i = 1; i <= hs.source; ++i)
        rows->push_back(mk_comp(mk_dist(i, hs.source), h));
}

Term tuple_of_rows(std::vector<Term> rows, int target) {
    if (rows.empty()) return mk_zero(0, target);
    if (rows.size() == 1) return rows[0];
    return mk_tuple(std::move(rows));
}

Term desugar_rec(const Term& t, const Signature& sig);

// f . <injection>, collapsed when the injection is the full identity.
Term into_block(const Term& f, Sort fs, int offset, int total) {
    if (offset == 0 && fs.target == total) return f;
    if (fs.source == 0) return mk_zero(0, total);
    return mk_comp(f, BaseMorphism::block(offset, fs.target, total).to_term());
}

Term desugar_rec(const Term& t, const Signature& sig) {
    switch (t->kind) {
        case TermKind::var:
        case TermKind::letter:
        case TermKind::id:
        case TermKind::dist:
        case TermKind::zero:
            return t;
        case TermKind::comp:
            return mk_comp(desugar_rec(t->children[0], sig),
                           desugar_rec(t->children[1], sig));
        case TermKind::sum:
            return mk_sum(desugar_rec(t->children[0], sig),
                          desugar_rec(t->children[1], sig));
        case TermKind::dagger:
            return mk_dagger(desugar_rec(t->children[0], sig));
        case TermKind::tuple: {
            Sort ts = sort_of(t, sig);
            std::vector<Term> rows;
            bool already_rows = true;
            for (const Term& c : t->children)
                if (sort_of(c, sig).source != 1) already_rows = false;
            if (already_rows && t->children.size() >= 2) {
                for (const Term& c : t->children)
                    rows.push_back(desugar_rec(c, sig));
                return mk_tuple(std::move(rows));
            }
            for (const Term& c : t->children) {
                Term d = desugar_rec(c, sig);
                append_rows(d, sort_of(c, sig), &rows);
            }
            return tuple_of_rows(std::move(rows), ts.target);
        }
        case TermKind::oplus: {
            Sort fs = sort_of(t->children[0], sig);
            Sort gs = sort_of(t->children[1], sig);
            int total = fs.target + gs.target;
            Term f = into_block(desugar_rec(t->children[0], sig), fs, 0, total);
            Term g = into_block(desugar_rec(t->children[1], sig), gs, fs.target,
                                total);
            std::vector<Term> rows;
            append_rows(f, {fs.source, total}, &rows);
            append_rows(g, {gs.source, total}, &rows);
            return tuple_of_rows(std::move(rows), total);
        }
        case TermKind::star: {
            // f* = (f . (1_n (+) 0_n (+) 1_p) + (0_n (+) 1_n (+) 0_p)) dagger,
            // with 0_k the empty tupling 0 -> k.
            Sort fs = sort_of(t->children[0], sig);
            int n = fs.source;
            int p = fs.target - n;
            Term widen = mk_oplus(mk_id(n), mk_oplus(mk_zero(0, n), mk_id(p)));
            Term seed = mk_oplus(mk_zero(0, n), mk_oplus(mk_id(n), mk_zero(0, p)));
            Term body = mk_sum(mk_comp(t->children[0], widen), seed);
            infer_sort(body, sig);
            return desugar_rec(mk_dagger(body), sig);
        }
    }
    throw std::logic_error("unreachable term kind");
}

}  // namespace

Term desugar(const Term& t, const Signature& sig) {
    sort_of(t, sig);
    Term d = desugar_rec(t, sig);
    infer_sort(d, sig);
    return d;
}

std::map<std::string, Sort> free_vars(const Term& t, const Signature& sig) {
    std::map<std::string, Sort> out;
    std::vector<Term> stack{t};
    while (!stack.empty()) {
        Term cur = stack.back();
        stack.pop_back();
        if (cur->kind == TermKind::var)
            out.emplace(cur->name, sig.variables.at(cur->name));
        for (const Term& c : cur->children) stack.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pretty printing. Precedence: atoms (3) > composition (2) > oplus (1) > sum (0).

namespace {

int precedence(TermKind k) {
    switch (k) {
        case TermKind::sum: return 0;
        case TermKind::oplus: return 1;
        case TermKind::comp: return 2;
        default: return 3;
    }
}

void print_rec(const Term& t, int context, bool right_operand,
               std::ostream& os) {
    int prec = precedence(t->kind);
    bool parens =
        prec < context || (prec == context && right_operand && prec < 3);
    if (parens) os << '(';
    switch (t->kind) {
        case TermKind::var:
        case TermKind::letter:
            os << t->name;
            break;
        case TermKind::id:
            os << "id(" << t->a << ")";
            break;
        case TermKind::dist:
            os << "pi(" << t->a << "," << t->b << ")";
            break;
        case TermKind::zero:
            os << "zero(" << t->a << "," << t->b << ")";
            break;
        case TermKind::comp:
            print_rec(t->children[0], 2, false, os);
            os << " . ";
            print_rec(t->children[1], 2, true, os);
            break;
        case TermKind::tuple: {
            os << '<';
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                if (i) os << ", ";
                print_rec(t->children[i], 0, false, os);
            }
            os << '>';
            break;
        }
        case TermKind::sum:
            print_rec(t->children[0], 0, false, os);
            os << " + ";
            print_rec(t->children[1], 0, true, os);
            break;
        case TermKind::dagger:
            os << "dg(";
            print_rec(t->children[0], 0, false, os);
            os << ")";
            break;
        case TermKind::oplus:
            print_rec(t->children[0], 1, false, os);
            os << " (+) ";
            print_rec(t->children[1], 1, true, os);
            break;
        case TermKind::star:
            os << "st(";
            print_rec(t->children[0], 0, false, os);
            os << ")";
            break;
    }
    if (parens) os << ')';
}

}  // namespace

std::string pretty_print(const Term& t) {
    std::ostringstream os;
    print_rec(t, 0, false, os);
    return os.str();
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser

namespace {

enum class Tok {
    name,
    number,
    lbrace,
    rbrace,
    lparen,
    rparen,
    langle,
    rangle,
    comma,
    semi,
    colon,
    dot,
    plus,
    oplus,
    arrow,
    equals,
    end,
};

struct Token {
    Tok kind;
    std::string text;
    long value = 0;
    int line = 1;
    int column = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_space();
        current_ = {Tok::end, "", 0, line_, col_};
        if (pos_ >= text_.size()) return;
        int line = line_, col = col_;
        char c = text_[pos_];
        auto simple = [&](Tok k, const char* s) {
            step();
            current_ = {k, s, 0, line, col};
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_')) {
                name += text_[pos_];
                step();
            }
            current_ = {Tok::name, name, 0, line, col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long v = 0;
            std::string digits;
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits += text_[pos_];
                v = v * 10 + (text_[pos_] - '0');
                if (v > 1'000'000) throw parse_error("number too large", line, col);
                step();
            }
            current_ = {Tok::number, digits, v, line, col};
            return;
        }
        switch (c) {
            case '{': simple(Tok::lbrace, "{"); return;
            case '}': simple(Tok::rbrace, "}"); return;
            case '(':
                if (pos_ + 2 < text_.size() && text_[pos_ + 1] == '+' &&
                    text_[pos_ + 2] == ')') {
                    step(); step(); step();
                    current_ = {Tok::oplus, "(+)", 0, line, col};
                    return;
                }
                simple(Tok::lparen, "(");
                return;
            case ')': simple(Tok::rparen, ")"); return;
            case '<': simple(Tok::langle, "<"); return;
            case '>': simple(Tok::rangle, ">"); return;
            case ',': simple(Tok::comma, ","); return;
            case ';': simple(Tok::semi, ";"); return;
            case ':': simple(Tok::colon, ":"); return;
            case '.': simple(Tok::dot, "."); return;
            case '+': simple(Tok::plus, "+"); return;
            case '=': simple(Tok::equals, "="); return;
            case '-':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
                    step(); step();
                    current_ = {Tok::arrow, "->", 0, line, col};
                    return;
                }
                throw parse_error("stray '-'", line, col);
            default:
                throw parse_error(std::string("unexpected character '") + c + "'",
                                  line, col);
        }
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
                while (pos_ < text_.size() && text_[pos_] != '\n') step();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                step();
            } else {
                break;
            }
        }
    }

    void step() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token current_;
};

class Parser {
  public:
    Parser(const std::string& text, const Signature* sig)
        : lex_(text), sig_(sig) {}

    Term parse_term_only() {
        Term t = term();
        expect(Tok::end, "end of input");
        return t;
    }

    ParsedFile parse_whole_file() {
        ParsedFile out;
        sig_ = &out.signature;
        while (lex_.peek().kind != Tok::end) {
            Token head = expect(Tok::name, "'alphabet', 'vars' or 'def'");
            if (head.text == "alphabet") {
                alphabet_block(&out.signature, head);
            } else if (head.text == "vars") {
                vars_block(&out.signature, head);
            } else if (head.text == "def") {
                Token name = expect(Tok::name, "definition name");
                for (const auto& d : out.definitions)
                    if (d.first == name.text)
                        throw parse_error("duplicate definition " + name.text,
                                          name.line, name.column);
                expect(Tok::equals, "'='");
                Term t = term();
                expect(Tok::semi, "';'");
                out.definitions.emplace_back(name.text, t);
            } else {
                throw parse_error("expected 'alphabet', 'vars' or 'def', got '" +
                                      head.text + "'",
                                  head.line, head.column);
            }
        }
        return out;
    }

  private:
    Token expect(Tok kind, const std::string& what) {
        Token t = lex_.take();
        if (t.kind != kind)
            throw parse_error("expected " + what + ", got '" +
                                  (t.kind == Tok::end ? "<end>" : t.text) + "'",
                              t.line, t.column);
        return t;
    }

    int expect_nat(const std::string& what) {
        Token t = expect(Tok::number, what);
        return static_cast<int>(t.value);
    }

    void alphabet_block(Signature* sig, const Token& head) {
        expect(Tok::lbrace, "'{'");
        if (lex_.peek().kind == Tok::rbrace) {
            lex_.take();
            return;
        }
        while (true) {
            Token name = expect(Tok::name, "letter name");
            expect(Tok::colon, "':'");
            int rank = expect_nat("rank");
            try {
                sig->add_letter(name.text, rank);
            } catch (const sort_error& e) {
                throw parse_error(e.what(), name.line, name.column);
            }
            Token sep = lex_.take();
            if (sep.kind == Tok::rbrace) return;
            if (sep.kind != Tok::comma)
                throw parse_error("expected ',' or '}'", sep.line, sep.column);
        }
        (void)head;
    }

    void vars_block(Signature* sig, const Token& head) {
        expect(Tok::lbrace, "'{'");
        if (lex_.peek().kind == Tok::rbrace) {
            lex_.take();
            return;
        }
        while (true) {
            Token name = expect(Tok::name, "variable name");
            expect(Tok::colon, "':'");
            int source = expect_nat("source");
            expect(Tok::arrow, "'->'");
            int target = expect_nat("target");
            try {
                sig->add_variable(name.text, {source, target});
            } catch (const sort_error& e) {
                throw parse_error(e.what(), name.line, name.column);
            }
            Token sep = lex_.take();
            if (sep.kind == Tok::rbrace) return;
            if (sep.kind != Tok::comma)
                throw parse_error("expected ',' or '}'", sep.line, sep.column);
        }
        (void)head;
    }

    // term := oplus-chain ('+' oplus-chain)*
    Term term() {
        Term t = oplus_chain();
        while (lex_.peek().kind == Tok::plus) {
            lex_.take();
            t = mk_sum(t, oplus_chain());
        }
        return t;
    }

    Term oplus_chain() {
        Term t = comp_chain();
        while (lex_.peek().kind == Tok::oplus) {
            lex_.take();
            t = mk_oplus(t, comp_chain());
        }
        return t;
    }

    Term comp_chain() {
        Term t = atom();
        while (lex_.peek().kind == Tok::dot) {
            lex_.take();
            t = mk_comp(t, atom());
        }
        return t;
    }

    Term atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::name: {
                if (t.text == "id") {
                    expect(Tok::lparen, "'('");
                    int n = expect_nat("arity");
                    expect(Tok::rparen, "')'");
                    return mk_id(n);
                }
                if (t.text == "pi") {
                    expect(Tok::lparen, "'('");
                    int i = expect_nat("index");
                    expect(Tok::comma, "','");
                    int n = expect_nat("arity");
                    expect(Tok::rparen, "')'");
                    if (i < 1 || i > n)
                        throw parse_error("pi(" + std::to_string(i) + "," +
                                              std::to_string(n) +
                                              ") needs 1 <= i <= n",
                                          t.line, t.column);
                    return mk_dist(i, n);
                }
                if (t.text == "zero") {
                    expect(Tok::lparen, "'('");
                    int n = expect_nat("source");
                    expect(Tok::comma, "','");
                    int p = expect_nat("target");
                    expect(Tok::rparen, "')'");
                    return mk_zero(n, p);
                }
                if (t.text == "dg" || t.text == "st") {
                    expect(Tok::lparen, "'('");
                    Term inner = term();
                    expect(Tok::rparen, "')'");
                    return t.text == "dg" ? mk_dagger(inner) : mk_star(inner);
                }
                if (!sig_)
                    throw parse_error("unknown identifier " + t.text, t.line,
                                      t.column);
                if (sig_->letters.count(t.text)) return mk_letter(t.text);
                if (sig_->variables.count(t.text)) return mk_var(t.text);
                throw parse_error("unknown identifier " + t.text, t.line,
                                  t.column);
            }
            case Tok::lparen: {
                Term inner = term();
                expect(Tok::rparen, "')'");
                return inner;
            }
            case Tok::langle: {
                std::vector<Term> components;
                components.push_back(term());
                expect(Tok::comma, "','");
                components.push_back(term());
                while (lex_.peek().kind == Tok::comma) {
                    lex_.take();
                    components.push_back(term());
                }
                expect(Tok::rangle, "'>'");
                return mk_tuple(std::move(components));
            }
            default:
                throw parse_error("expected a term, got '" +
                                      (t.kind == Tok::end ? "<end>" : t.text) +
                                      "'",
                                  t.line, t.column);
        }
    }

    Lexer lex_;
    const Signature* sig_;
};

}  // namespace

Term parse_term(const std::string& text, const Signature& sig) {
    Parser p(text, &sig);
    return p.parse_term_only();
}

ParsedFile parse_file(const std::string& text) {
    Parser p(text, nullptr);
    return p.parse_whole_file();
}

const Term& ParsedFile::definition(const std::string& name) const {
    for (const auto& d : definitions)
        if (d.first == name) return d.second;
    throw domain_error("no definition named " + name);
}

// ---------------------------------------------------------------------------
// Base morphisms

BaseMorphism BaseMorphism::identity(int n) {
    BaseMorphism m;
    m.target = n;
    m.images.resize(n);
    for (int i = 0; i < n; ++i) m.images[i] = i + 1;
    return m;
}

BaseMorphism BaseMorphism::then(const BaseMorphism& g) const {
    if (target != g.source())
        throw sort_error("base morphism composition mismatch");
    BaseMorphism m;
    m.target = g.target;
    m.images.reserve(images.size());
    for (int i : images) m.images.push_back(g.images[i - 1]);
    return m;
}

BaseMorphism BaseMorphism::block(int offset, int count, int total) {
    BaseMorphism m;
    m.target = total;
    m.images.resize(count);
    for (int i = 0; i < count; ++i) m.images[i] = offset + i + 1;
    return m;
}

Term BaseMorphism::to_term() const {
    if (images.empty()) return mk_zero(0, target);
    if (images.size() == 1) return mk_dist(images[0], target);
    std::vector<Term> components;
    components.reserve(images.size());
    for (int i : images) components.push_back(mk_dist(i, target));
    return mk_tuple(std::move(components));
}

}  // namespace groveq
