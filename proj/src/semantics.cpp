#include "groveq/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace groveq {

WordToken letter_token(std::string name) { return {0, std::move(name)}; }
WordToken var_token(int j) { return {j, ""}; }

bool operator==(const TreeObj& a, const TreeObj& b) {
    return a.var == b.var && a.label == b.label && a.children == b.children;
}

bool operator<(const TreeObj& a, const TreeObj& b) {
    if (a.var != b.var) return a.var < b.var;
    if (a.label != b.label) return a.label < b.label;
    return a.children < b.children;
}

int measure(const Word& w) { return static_cast<int>(w.size()); }

int measure(const TreeObj& t) {
    int total = 1;
    for (const TreeObj& c : t.children) total += measure(c);
    return total;
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

// All bound-respecting results of replacing each variable occurrence of u
// independently by a member of the matching component of k. Prunes against
// the cheapest possible completion of the remaining suffix, so dead ends die
// before their prefix products are enumerated.
std::set<Word> substitute(const Word& u, const std::vector<std::set<Word>>& k,
                          int bound) {
    std::vector<int> comp_min(k.size(), 0);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i].empty()) {
            comp_min[i] = -1;
            continue;
        }
        int m = bound + 1;
        for (const Word& w : k[i])
            m = std::min(m, static_cast<int>(w.size()));
        comp_min[i] = m;
    }
    std::vector<int> suffix_min(u.size() + 1, 0);
    for (std::size_t j = u.size(); j-- > 0;) {
        if (u[j].var == 0) {
            suffix_min[j] = suffix_min[j + 1] + 1;
        } else {
            if (u[j].var > static_cast<int>(k.size()))
                throw sort_error("word mentions x" + std::to_string(u[j].var) +
                                 " beyond the substitution's source");
            int cm = comp_min[u[j].var - 1];
            if (cm < 0) return {};  // an occurrence of an empty component
            suffix_min[j] = suffix_min[j + 1] + cm;
        }
    }
    if (suffix_min[0] > bound) return {};

    std::set<Word> partials{Word{}};
    for (std::size_t j = 0; j < u.size(); ++j) {
        const WordToken& tok = u[j];
        int room = bound - suffix_min[j + 1];
        std::set<Word> next;
        if (tok.var == 0) {
            for (const Word& partial : partials) {
                if (static_cast<int>(partial.size()) + 1 > room) continue;
                Word w = partial;
                w.push_back(tok);
                next.insert(std::move(w));
            }
        } else {
            for (const Word& partial : partials)
                for (const Word& choice : k[tok.var - 1]) {
                    if (static_cast<int>(partial.size() + choice.size()) >
                        room)
                        continue;
                    Word w = partial;
                    w.insert(w.end(), choice.begin(), choice.end());
                    next.insert(std::move(w));
                }
        }
        partials = std::move(next);
        if (partials.empty()) break;
    }
    return partials;
}

// Cheapest possible size of substitute(u, k, ...); -1 when some occurrence
// points at an empty component and no result exists at all.
int min_substituted_measure(const TreeObj& u,
                            const std::vector<int>& comp_min) {
    if (u.var > 0) {
        if (u.var > static_cast<int>(comp_min.size()))
            throw sort_error("tree mentions x" + std::to_string(u.var) +
                             " beyond the substitution's source");
        return comp_min[u.var - 1];
    }
    int total = 1;
    for (const TreeObj& child : u.children) {
        int m = min_substituted_measure(child, comp_min);
        if (m < 0) return -1;
        total += m;
    }
    return total;
}

std::set<TreeObj> substitute_rec(const TreeObj& u,
                                 const std::vector<std::set<TreeObj>>& k,
                                 const std::vector<int>& comp_min, int bound) {
    std::set<TreeObj> out;
    if (u.var > 0) {
        for (const TreeObj& choice : k[u.var - 1])
            if (measure(choice) <= bound) out.insert(choice);
        return out;
    }
    // Letter node: one unit for the node itself, children combined with
    // pruning against the cheapest completion of the remaining siblings.
    std::vector<int> rest_min(u.children.size() + 1, 0);
    for (std::size_t j = u.children.size(); j-- > 0;)
        rest_min[j] =
            rest_min[j + 1] + min_substituted_measure(u.children[j], comp_min);

    std::vector<std::pair<std::vector<TreeObj>, int>> partials{{{}, 1}};
    for (std::size_t j = 0; j < u.children.size(); ++j) {
        int room = bound - rest_min[j + 1];
        std::set<TreeObj> options =
            substitute_rec(u.children[j], k, comp_min, room - 1);
        std::vector<std::pair<std::vector<TreeObj>, int>> next;
        for (const auto& [chosen, size] : partials)
            for (const TreeObj& option : options) {
                int total = size + measure(option);
                if (total > room) continue;
                auto extended = chosen;
                extended.push_back(option);
                next.emplace_back(std::move(extended), total);
            }
        partials = std::move(next);
        if (partials.empty()) break;
    }
    for (auto& [children, size] : partials)
        out.insert(TreeObj{0, u.label, std::move(children)});
    return out;
}

std::set<TreeObj> substitute(const TreeObj& u,
                             const std::vector<std::set<TreeObj>>& k,
                             int bound) {
    std::vector<int> comp_min(k.size(), 0);
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i].empty()) {
            comp_min[i] = -1;
            continue;
        }
        int m = bound + 1;
        for (const TreeObj& t : k[i]) m = std::min(m, measure(t));
        comp_min[i] = m;
    }
    if (min_substituted_measure(u, comp_min) < 0) return {};
    return substitute_rec(u, k, comp_min, bound);
}

template <class Obj>
LanguageMorphism<Obj> compose_impl(const LanguageMorphism<Obj>& l,
                                   const LanguageMorphism<Obj>& k, Bound b) {
    if (l.sort.target != k.sort.source)
        throw sort_error("composition of " + to_string(l.sort) + " with " +
                         to_string(k.sort));
    LanguageMorphism<Obj> out;
    out.sort = {l.sort.source, k.sort.target};
    out.components.resize(l.components.size());
    for (std::size_t i = 0; i < l.components.size(); ++i)
        for (const Obj& u : l.components[i]) {
            auto results = substitute(u, k.components, b.max_size);
            out.components[i].insert(results.begin(), results.end());
        }
    return out;
}

template <class Obj>
LanguageMorphism<Obj> sum_impl(const LanguageMorphism<Obj>& l,
                               const LanguageMorphism<Obj>& k) {
    if (l.sort != k.sort)
        throw sort_error("sum of " + to_string(l.sort) + " with " +
                         to_string(k.sort));
    LanguageMorphism<Obj> out = l;
    for (std::size_t i = 0; i < out.components.size(); ++i)
        out.components[i].insert(k.components[i].begin(),
                                 k.components[i].end());
    return out;
}

template <class Obj>
LanguageMorphism<Obj> identity_lang(int p) {
    LanguageMorphism<Obj> out;
    out.sort = {p, p};
    out.components.resize(p);
    for (int j = 1; j <= p; ++j) {
        if constexpr (std::is_same_v<Obj, Word>) {
            out.components[j - 1].insert(Word{var_token(j)});
        } else {
            out.components[j - 1].insert(TreeObj{j, "", {}});
        }
    }
    return out;
}

template <class Obj>
LanguageMorphism<Obj> dagger_impl(const LanguageMorphism<Obj>& l, Bound b) {
    int n = l.sort.source;
    if (l.sort.target < n)
        throw sort_error("dagger needs target >= source, got " +
                         to_string(l.sort));
    int p = l.sort.target - n;
    LanguageMorphism<Obj> s;
    s.sort = {n, p};
    s.components.resize(n);
    while (true) {
        // <s, identity_p> : n+p -> p
        LanguageMorphism<Obj> paired = s;
        LanguageMorphism<Obj> idp = identity_lang<Obj>(p);
        paired.sort = {n + p, p};
        for (auto& c : idp.components)
            paired.components.push_back(std::move(c));
        LanguageMorphism<Obj> next = compose_impl(l, paired, b);
        if (next.components == s.components) return s;
        s = std::move(next);
    }
}

}  // namespace

WordLang ps_compose(const WordLang& l, const WordLang& k, Bound b) {
    return compose_impl(l, k, b);
}
TreeLang ps_compose(const TreeLang& l, const TreeLang& k, Bound b) {
    return compose_impl(l, k, b);
}
WordLang ps_sum(const WordLang& l, const WordLang& k) { return sum_impl(l, k); }
TreeLang ps_sum(const TreeLang& l, const TreeLang& k) { return sum_impl(l, k); }
WordLang ps_dagger(const WordLang& l, Bound b) { return dagger_impl(l, b); }
TreeLang ps_dagger(const TreeLang& l, Bound b) { return dagger_impl(l, b); }

// ---------------------------------------------------------------------------
// Term evaluation

namespace {

template <class Obj>
LanguageMorphism<Obj> letter_lang(const std::string& name, int rank, Bound b);

template <>
WordLang letter_lang<Word>(const std::string& name, int rank, Bound b) {
    WordLang out;
    out.sort = {1, rank};
    out.components.resize(1);
    if (rank == 0) {
        if (b.max_size >= 1) out.components[0].insert(Word{letter_token(name)});
        return out;
    }
    if (rank == 1) {
        if (b.max_size >= 2)
            out.components[0].insert(Word{letter_token(name), var_token(1)});
        return out;
    }
    throw sort_error("letter " + name + " of rank " + std::to_string(rank) +
                     " has no canonical word interpretation");
}

template <>
TreeLang letter_lang<TreeObj>(const std::string& name, int rank, Bound b) {
    TreeLang out;
    out.sort = {1, rank};
    out.components.resize(1);
    TreeObj t{0, name, {}};
    for (int j = 1; j <= rank; ++j) t.children.push_back(TreeObj{j, "", {}});
    if (measure(t) <= b.max_size) out.components[0].insert(std::move(t));
    return out;
}

template <class Obj>
LanguageMorphism<Obj> truncate(LanguageMorphism<Obj> l, Bound b) {
    for (auto& component : l.components)
        for (auto it = component.begin(); it != component.end();)
            it = measure(*it) > b.max_size ? component.erase(it) : ++it;
    return l;
}

template <class Obj>
LanguageMorphism<Obj> eval_impl(
    const Term& t, const Signature& sig,
    const std::map<std::string, LanguageMorphism<Obj>>& interp, Bound b) {
    switch (t->kind) {
        case TermKind::var: {
            auto it = interp.find(t->name);
            if (it == interp.end())
                throw sort_error("missing interpretation for " + t->name);
            Sort declared = sig.variables.at(t->name);
            if (it->second.sort != declared ||
                static_cast<int>(it->second.components.size()) !=
                    declared.source)
                throw sort_error("interpretation of " + t->name +
                                 " has sort " + to_string(it->second.sort) +
                                 ", declared " + to_string(declared));
            return truncate(it->second, b);
        }
        case TermKind::letter: {
            auto it = interp.find(t->name);
            if (it != interp.end()) return truncate(it->second, b);
            return letter_lang<Obj>(t->name, sig.letters.at(t->name), b);
        }
        case TermKind::id: {
            return identity_lang<Obj>(t->a);
        }
        case TermKind::dist: {
            LanguageMorphism<Obj> id = identity_lang<Obj>(t->b);
            LanguageMorphism<Obj> out;
            out.sort = {1, t->b};
            out.components.push_back(id.components[t->a - 1]);
            return out;
        }
        case TermKind::zero: {
            LanguageMorphism<Obj> out;
            out.sort = {t->a, t->b};
            out.components.resize(t->a);
            return out;
        }
        case TermKind::comp:
            return compose_impl(eval_impl(t->children[0], sig, interp, b),
                                eval_impl(t->children[1], sig, interp, b), b);
        case TermKind::tuple: {
            LanguageMorphism<Obj> out;
            out.sort = {0, -1};
            for (const Term& c : t->children) {
                LanguageMorphism<Obj> part = eval_impl(c, sig, interp, b);
                out.sort.source += part.sort.source;
                out.sort.target = part.sort.target;
                for (auto& comp : part.components)
                    out.components.push_back(std::move(comp));
            }
            return out;
        }
        case TermKind::sum:
            return sum_impl(eval_impl(t->children[0], sig, interp, b),
                            eval_impl(t->children[1], sig, interp, b));
        case TermKind::dagger:
            return dagger_impl(eval_impl(t->children[0], sig, interp, b), b);
        case TermKind::oplus:
        case TermKind::star:
            throw sort_error("evaluation expects a desugared term");
    }
    throw std::logic_error("unreachable term kind");
}

}  // namespace

WordLang eval_term(const Term& t, const Signature& sig,
                   const std::map<std::string, WordLang>& interp, Bound b) {
    return eval_impl(t, sig, interp, b);
}

TreeLang eval_term(const Term& t, const Signature& sig,
                   const std::map<std::string, TreeLang>& interp, Bound b) {
    return eval_impl(t, sig, interp, b);
}

Word frontier(const TreeObj& t) {
    if (t.var > 0) return {var_token(t.var)};
    if (t.children.empty()) return {letter_token(t.label)};
    Word out;
    for (const TreeObj& c : t.children) {
        Word part = frontier(c);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Text forms

namespace {

bool is_var_text(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return false;
    return std::all_of(s.begin() + 1, s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Word parse_word(const std::string& text) {
    Word out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (is_var_text(tok))
            out.push_back(var_token(std::stoi(tok.substr(1))));
        else
            out.push_back(letter_token(tok));
    }
    return out;
}

namespace {

TreeObj parse_tree_at(const std::string& text, std::size_t* pos) {
    auto skip = [&] {
        while (*pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[*pos])))
            ++*pos;
    };
    skip();
    std::string name;
    while (*pos < text.size() && text[*pos] != '(' && text[*pos] != ')' &&
           text[*pos] != ',' &&
           !std::isspace(static_cast<unsigned char>(text[*pos])))
        name += text[(*pos)++];
    if (name.empty())
        throw parse_error("expected a tree label", 1,
                          static_cast<int>(*pos) + 1);
    TreeObj node;
    if (is_var_text(name)) {
        node.var = std::stoi(name.substr(1));
    } else {
        node.label = name;
    }
    skip();
    if (*pos < text.size() && text[*pos] == '(') {
        if (node.var > 0)
            throw parse_error("variable leaf cannot have children", 1,
                              static_cast<int>(*pos) + 1);
        ++*pos;
        skip();
        if (*pos < text.size() && text[*pos] == ')') {
            ++*pos;
            return node;
        }
        while (true) {
            node.children.push_back(parse_tree_at(text, pos));
            skip();
            if (*pos >= text.size())
                throw parse_error("unterminated tree", 1,
                                  static_cast<int>(*pos) + 1);
            char c = text[(*pos)++];
            if (c == ')') break;
            if (c != ',')
                throw parse_error("expected ',' or ')' in tree", 1,
                                  static_cast<int>(*pos));
        }
    }
    return node;
}

}  // namespace

TreeObj parse_tree(const std::string& text) {
    std::size_t pos = 0;
    TreeObj t = parse_tree_at(text, &pos);
    while (pos < text.size()) {
        if (!std::isspace(static_cast<unsigned char>(text[pos])))
            throw parse_error("trailing input after tree", 1,
                              static_cast<int>(pos) + 1);
        ++pos;
    }
    return t;
}

std::string to_string(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        out += w[i].var > 0 ? "x" + std::to_string(w[i].var) : w[i].letter;
    }
    return out;
}

std::string to_string(const TreeObj& t) {
    if (t.var > 0) return "x" + std::to_string(t.var);
    std::string out = t.label;
    if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i) out += ", ";
            out += to_string(t.children[i]);
        }
        out += ')';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interpretation files

namespace {

struct InterpEntry {
    std::string name;
    std::vector<std::vector<std::string>> component_strings;
};

// interp { name = { "...", ... } , name = [ { ... }, { ... } ] }
std::vector<InterpEntry> parse_interp_entries(const std::string& text) {
    std::size_t pos = 0;
    int line = 1, col = 1;
    auto step = [&] {
        if (text[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    };
    auto skip = [&] {
        while (pos < text.size()) {
            if (text[pos] == '-' && pos + 1 < text.size() &&
                text[pos + 1] == '-') {
                while (pos < text.size() && text[pos] != '\n') step();
            } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
                step();
            } else {
                break;
            }
        }
    };
    auto fail = [&](const std::string& msg) -> char {
        throw parse_error(msg, line, col);
    };
    auto expect = [&](char c) {
        skip();
        if (pos >= text.size() || text[pos] != c)
            fail(std::string("expected '") + c + "'");
        step();
    };
    auto word_chunk = [&]() -> std::string {
        skip();
        if (pos >= text.size() || text[pos] != '"') fail("expected '\"'");
        step();
        std::string out;
        while (pos < text.size() && text[pos] != '"') {
            out += text[pos];
            step();
        }
        if (pos >= text.size()) fail("unterminated string");
        step();
        return out;
    };
    auto brace_set = [&]() -> std::vector<std::string> {
        expect('{');
        std::vector<std::string> out;
        skip();
        if (pos < text.size() && text[pos] == '}') {
            step();
            return out;
        }
        while (true) {
            out.push_back(word_chunk());
            skip();
            if (pos >= text.size()) fail("unterminated '{'");
            char c = text[pos];
            step();
            if (c == '}') return out;
            if (c != ',') fail("expected ',' or '}'");
        }
    };
    auto name_tok = [&]() -> std::string {
        skip();
        std::string out;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '_')) {
            out += text[pos];
            step();
        }
        if (out.empty()) fail("expected a name");
        return out;
    };

    if (name_tok() != "interp")
        throw parse_error("interpretation file must start with 'interp'", 1, 1);
    expect('{');
    std::vector<InterpEntry> entries;
    skip();
    if (pos < text.size() && text[pos] == '}') {
        step();
        return entries;
    }
    while (true) {
        InterpEntry entry;
        entry.name = name_tok();
        expect('=');
        skip();
        if (pos < text.size() && text[pos] == '[') {
            step();
            while (true) {
                entry.component_strings.push_back(brace_set());
                skip();
                if (pos >= text.size()) fail("unterminated '['");
                char c = text[pos];
                step();
                if (c == ']') break;
                if (c != ',') fail("expected ',' or ']'");
            }
        } else {
            entry.component_strings.push_back(brace_set());
        }
        entries.push_back(std::move(entry));
        skip();
        if (pos >= text.size()) fail("unterminated interp block");
        char c = text[pos];
        step();
        if (c == '}') break;
        if (c != ',') fail("expected ',' or '}'");
    }
    return entries;
}

}  // namespace

bool interp_file_is_trees(const std::string& text) {
    for (const InterpEntry& e : parse_interp_entries(text))
        for (const auto& component : e.component_strings)
            for (const std::string& s : component)
                if (s.find('(') != std::string::npos) return true;
    return false;
}

std::map<std::string, WordLang> parse_word_interp(const std::string& text,
                                                  const Signature& sig) {
    std::map<std::string, WordLang> out;
    for (const InterpEntry& e : parse_interp_entries(text)) {
        Sort sort;
        if (sig.variables.count(e.name)) {
            sort = sig.variables.at(e.name);
        } else if (sig.letters.count(e.name)) {
            sort = {1, sig.letters.at(e.name)};
        } else {
            throw sort_error("interpretation for undeclared name " + e.name);
        }
        if (static_cast<int>(e.component_strings.size()) != sort.source)
            throw sort_error("interpretation of " + e.name + " needs " +
                             std::to_string(sort.source) + " component sets");
        WordLang lang;
        lang.sort = sort;
        lang.components.resize(sort.source);
        for (int i = 0; i < sort.source; ++i)
            for (const std::string& s : e.component_strings[i]) {
                Word w = parse_word(s);
                for (const WordToken& tok : w)
                    if (tok.var > sort.target)
                        throw sort_error("interpretation of " + e.name +
                                         " mentions x" +
                                         std::to_string(tok.var));
                lang.components[i].insert(std::move(w));
            }
        out.emplace(e.name, std::move(lang));
    }
    return out;
}

std::map<std::string, TreeLang> parse_tree_interp(const std::string& text,
                                                  const Signature& sig) {
    std::map<std::string, TreeLang> out;
    for (const InterpEntry& e : parse_interp_entries(text)) {
        Sort sort;
        if (sig.variables.count(e.name)) {
            sort = sig.variables.at(e.name);
        } else if (sig.letters.count(e.name)) {
            sort = {1, sig.letters.at(e.name)};
        } else {
            throw sort_error("interpretation for undeclared name " + e.name);
        }
        if (static_cast<int>(e.component_strings.size()) != sort.source)
            throw sort_error("interpretation of " + e.name + " needs " +
                             std::to_string(sort.source) + " component sets");
        TreeLang lang;
        lang.sort = sort;
        lang.components.resize(sort.source);
        for (int i = 0; i < sort.source; ++i)
            for (const std::string& s : e.component_strings[i])
                lang.components[i].insert(parse_tree(s));
        out.emplace(e.name, std::move(lang));
    }
    return out;
}

}  // namespace groveq
