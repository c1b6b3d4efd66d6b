#include "groveq/encode.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "groveq/simulation.hpp"

namespace groveq {

namespace {

constexpr int kInf = 1 << 29;

bool is_var_symbol(const std::string& s) {
    if (s.size() < 2 || s[0] != 'x') return false;
    return std::all_of(s.begin() + 1, s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

WordToken token_of(const std::string& s) {
    if (is_var_symbol(s)) return var_token(std::stoi(s.substr(1)));
    return letter_token(s);
}

std::string display(const WordToken& t) {
    return t.var > 0 ? "x" + std::to_string(t.var) : t.letter;
}

}  // namespace

void cfg_validate(const Cfg& g) {
    for (const std::string& nt : g.nonterminals)
        if (g.terminals.count(nt))
            throw domain_error("grammar symbol is both a terminal and a "
                               "nonterminal: " +
                               nt);
    for (const std::string& s : g.starts)
        if (!g.nonterminals.count(s))
            throw domain_error("start symbol " + s + " is not a nonterminal");
    for (const auto& [lhs, bodies] : g.productions) {
        if (!g.nonterminals.count(lhs))
            throw domain_error("production head " + lhs +
                               " is not a nonterminal");
        for (const auto& body : bodies)
            for (const std::string& tok : body)
                if (!g.terminals.count(tok) && !g.nonterminals.count(tok) &&
                    !is_var_symbol(tok))
                    throw domain_error("undeclared grammar symbol: " + tok);
    }
}

ProcessGraph encode_unary(const ProcessGraph& g, const RankedAlphabet& sigma,
                          RankedAlphabet* sigma_out) {
    if (sigma.has("#") || sigma.has("$"))
        throw domain_error("alphabet already uses a reserved marker letter");
    RankedAlphabet unary;
    for (const auto& [name, rank] : sigma.letters) {
        (void)rank;
        unary.add(name, 1);
    }
    unary.add("#", 1);
    if (sigma_out) *sigma_out = unary;

    ProcessGraph out;
    out.sort = g.sort;
    out.num_states = g.num_states;
    out.roots = g.roots;
    out.out.resize(g.num_states);
    int dead = -1;
    auto fresh = [&out] {
        out.out.emplace_back();
        return out.num_states++;
    };
    for (StateId v = 0; v < g.num_states; ++v)
        for (const Edge& e : g.out[v]) {
            if (e.label.is_exit()) {
                out.out[v].push_back(e);
                continue;
            }
            int n = static_cast<int>(e.targets.size());
            if (n == 0) {
                if (dead < 0) dead = fresh();
                out.out[v].push_back(
                    {EdgeLabel::action(e.label.name), {dead}});
                continue;
            }
            StateId branch = fresh();
            out.out[v].push_back({EdgeLabel::action(e.label.name), {branch}});
            // Target i hangs off the branch behind i marker edges, so the
            // child position is recoverable from the marker count alone.
            for (int i = 1; i <= n; ++i) {
                StateId cur = branch;
                for (int j = 1; j < i; ++j) {
                    StateId c = fresh();
                    out.out[cur].push_back({EdgeLabel::action("#"), {c}});
                    cur = c;
                }
                out.out[cur].push_back(
                    {EdgeLabel::action("#"), {e.targets[i - 1]}});
            }
        }
    return normalize(out);
}

Cfg encode_cfg(const ProcessGraph& g, const RankedAlphabet& sigma) {
    Cfg cfg;
    for (const auto& [name, rank] : sigma.letters) {
        if (rank >= 2)
            throw domain_error("letter " + name + " has rank " +
                               std::to_string(rank) +
                               "; the grammar encoding needs a unary "
                               "alphabet");
        cfg.terminals.insert(name);
    }
    cfg.terminals.insert("#");
    cfg.terminals.insert("$");

    // State nonterminals are N_<v>, block nonterminals R_<v>_<w>; prepend
    // underscores if a terminal happens to collide.
    std::string prefix;
    for (bool clash = true; clash; ) {
        clash = false;
        for (const std::string& t : cfg.terminals)
            if (t.rfind(prefix + "N_", 0) == 0 ||
                t.rfind(prefix + "R_", 0) == 0)
                clash = true;
        if (clash) prefix += "_";
    }
    auto n_name = [&prefix](StateId v) {
        return prefix + "N_" + std::to_string(v);
    };
    auto r_name = [&prefix](StateId v, StateId w) {
        return prefix + "R_" + std::to_string(v) + "_" + std::to_string(w);
    };

    for (StateId v = 0; v < g.num_states; ++v) {
        cfg.nonterminals.insert(n_name(v));
        cfg.productions[n_name(v)];
        for (const Edge& e : g.out[v]) {
            if (e.label.is_exit()) {
                cfg.productions[n_name(v)].push_back(
                    {"x" + std::to_string(e.label.index)});
                continue;
            }
            if (!sigma.has(e.label.name))
                throw domain_error("edge letter " + e.label.name +
                                   " is not in the alphabet");
            if (e.targets.size() >= 2)
                throw domain_error("letter " + e.label.name +
                                   " is not unary");
            if (e.targets.empty()) {
                cfg.productions[n_name(v)].push_back({e.label.name});
                continue;
            }
            StateId w = e.targets[0];
            std::string r = r_name(v, w);
            cfg.productions[n_name(v)].push_back({e.label.name, r});
            if (!cfg.nonterminals.count(r)) {
                cfg.nonterminals.insert(r);
                cfg.productions[r].push_back({});
                cfg.productions[r].push_back({r, "#", n_name(w), "$"});
            }
        }
    }
    for (auto& [lhs, bodies] : cfg.productions) {
        std::sort(bodies.begin(), bodies.end());
        bodies.erase(std::unique(bodies.begin(), bodies.end()), bodies.end());
    }
    for (StateId r : g.roots) cfg.starts.push_back(n_name(r));
    cfg_validate(cfg);
    return cfg;
}

// ---------------------------------------------------------------------------
// Enumeration: length-stratified least fixed point. Every sub-derivation of a
// word of length <= m yields a contiguous subword, so pruning at m is exact.

namespace {

std::map<std::string, int> min_lengths(const Cfg& g) {
    std::map<std::string, int> out;
    for (const std::string& nt : g.nonterminals) out[nt] = kInf;
    for (bool changed = true; changed; ) {
        changed = false;
        for (const auto& [lhs, bodies] : g.productions)
            for (const auto& body : bodies) {
                int total = 0;
                for (const std::string& tok : body) {
                    int c = g.nonterminals.count(tok) ? out[tok] : 1;
                    total = std::min(kInf, total + c);
                }
                if (total < out[lhs]) {
                    out[lhs] = total;
                    changed = true;
                }
            }
    }
    return out;
}

struct Enumerator {
    const Cfg& g;
    std::map<std::string, int> min_len;
    // buckets[nt][len]: derivable words of exactly that length
    std::map<std::string, std::vector<std::set<Word>>> buckets;
    int max_len;
    bool changed = false;

    Enumerator(const Cfg& cfg, int m) : g(cfg), max_len(m) {
        min_len = min_lengths(g);
        for (const std::string& nt : g.nonterminals)
            buckets[nt].resize(max_len + 1);
    }

    void combine(const std::string& lhs, const std::vector<std::string>& body,
                 const std::vector<int>& suffix_min, std::size_t i,
                 int remaining, Word& current) {
        if (i == body.size()) {
            if (remaining == 0) {
                int len = static_cast<int>(current.size());
                if (buckets[lhs][len].insert(current).second) changed = true;
            }
            return;
        }
        const std::string& tok = body[i];
        if (!g.nonterminals.count(tok)) {
            if (remaining - 1 < suffix_min[i + 1]) return;
            current.push_back(token_of(tok));
            combine(lhs, body, suffix_min, i + 1, remaining - 1, current);
            current.pop_back();
            return;
        }
        const auto& bs = buckets[tok];
        int upper = remaining - suffix_min[i + 1];
        for (int len = 0; len <= upper; ++len)
            for (const Word& w : bs[len]) {
                current.insert(current.end(), w.begin(), w.end());
                combine(lhs, body, suffix_min, i + 1, remaining - len,
                        current);
                current.resize(current.size() - w.size());
            }
    }

    void run() {
        for (int len = 0; len <= max_len; ++len) {
            do {
                changed = false;
                for (const auto& [lhs, bodies] : g.productions)
                    for (const auto& body : bodies) {
                        std::vector<int> suffix_min(body.size() + 1, 0);
                        for (int i = static_cast<int>(body.size()) - 1;
                             i >= 0; --i) {
                            int c = g.nonterminals.count(body[i])
                                        ? min_len[body[i]]
                                        : 1;
                            suffix_min[i] =
                                std::min(kInf, suffix_min[i + 1] + c);
                        }
                        if (suffix_min[0] > len) continue;
                        Word current;
                        combine(lhs, body, suffix_min, 0, len, current);
                    }
            } while (changed);
        }
    }
};

bool word_order(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

}  // namespace

std::vector<std::vector<Word>> cfg_enumerate(const Cfg& g, int max_len) {
    cfg_validate(g);
    if (max_len < 0) throw domain_error("negative enumeration bound");
    Enumerator en(g, max_len);
    en.run();
    std::vector<std::vector<Word>> out;
    for (const std::string& s : g.starts) {
        std::vector<Word> words;
        for (const auto& bucket : en.buckets[s])
            words.insert(words.end(), bucket.begin(), bucket.end());
        std::sort(words.begin(), words.end(), word_order);
        out.push_back(std::move(words));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Membership: Earley with precomputed nullables.

namespace {

struct EarleyRule {
    std::string lhs;
    const std::vector<std::string>* body;
};

struct EarleyItem {
    int rule;
    int dot;
    int origin;
    bool operator==(const EarleyItem&) const = default;
};

struct ItemHash {
    std::size_t operator()(const EarleyItem& it) const {
        return (static_cast<std::size_t>(it.rule) * 1315423911u) ^
               (static_cast<std::size_t>(it.dot) << 20) ^
               static_cast<std::size_t>(it.origin);
    }
};

}  // namespace

bool cfg_member(const Cfg& g, int start, const Word& w) {
    if (start < 0 || start >= static_cast<int>(g.starts.size()))
        throw domain_error("start index out of range");
    const std::string& goal = g.starts[start];

    std::vector<EarleyRule> rules;
    std::map<std::string, std::vector<int>> by_lhs;
    for (const auto& [lhs, bodies] : g.productions)
        for (const auto& body : bodies) {
            by_lhs[lhs].push_back(static_cast<int>(rules.size()));
            rules.push_back({lhs, &body});
        }

    std::set<std::string> nullable;
    for (bool chg = true; chg; ) {
        chg = false;
        for (const EarleyRule& r : rules) {
            if (nullable.count(r.lhs)) continue;
            bool all = true;
            for (const std::string& tok : *r.body)
                if (!nullable.count(tok)) {
                    all = false;
                    break;
                }
            if (all) {
                nullable.insert(r.lhs);
                chg = true;
            }
        }
    }

    int n = static_cast<int>(w.size());
    std::vector<std::vector<EarleyItem>> chart(n + 1);
    std::vector<std::unordered_set<EarleyItem, ItemHash>> seen(n + 1);
    auto add = [&](int pos, EarleyItem it) {
        if (seen[pos].insert(it).second) chart[pos].push_back(it);
    };
    auto it_lhs = by_lhs.find(goal);
    if (it_lhs == by_lhs.end()) return false;
    for (int r : it_lhs->second) add(0, {r, 0, 0});

    for (int pos = 0; pos <= n; ++pos) {
        for (std::size_t idx = 0; idx < chart[pos].size(); ++idx) {
            EarleyItem it = chart[pos][idx];
            const EarleyRule& rule = rules[it.rule];
            if (it.dot == static_cast<int>(rule.body->size())) {
                // completion; chart[it.origin] may alias chart[pos] and grow, so index by hand
                for (std::size_t b = 0; b < chart[it.origin].size(); ++b) {
                    EarleyItem back = chart[it.origin][b];
                    const EarleyRule& br = rules[back.rule];
                    if (back.dot < static_cast<int>(br.body->size()) &&
                        (*br.body)[back.dot] == rule.lhs)
                        add(pos, {back.rule, back.dot + 1, back.origin});
                }
                continue;
            }
            const std::string& next = (*rule.body)[it.dot];
            auto nx = by_lhs.find(next);
            bool is_nt = g.nonterminals.count(next) != 0;
            if (is_nt) {
                if (nx != by_lhs.end())
                    for (int r : nx->second) add(pos, {r, 0, pos});
                if (nullable.count(next))
                    add(pos, {it.rule, it.dot + 1, it.origin});
            } else if (pos < n && display(w[pos]) == next) {
                add(pos + 1, {it.rule, it.dot + 1, it.origin});
            }
        }
    }
    for (const EarleyItem& it : chart[n]) {
        const EarleyRule& rule = rules[it.rule];
        if (rule.lhs == goal && it.origin == 0 &&
            it.dot == static_cast<int>(rule.body->size()))
            return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Distinguishing words from the simulation game.

namespace {

struct WordGame {
    const ProcessGraph& g;
    const ProcessGraph& h;
    const SimRelation& rel;

    // A word derivable from u but not from v, found by following a move of u
    // whose every response was deleted at a strictly smaller round.
    Word build(StateId u, StateId v) const {
        int round = rel.deletion_round(u, v);
        if (round <= 0)
            throw std::logic_error(
                "internal error: word requested for a simulating pair");
        for (const Edge& e : g.out[u]) {
            if (e.label.is_exit()) {
                bool matched = false;
                for (const Edge& f : h.out[v])
                    if (f.label == e.label) matched = true;
                if (!matched) return {var_token(e.label.index)};
                continue;
            }
            std::set<StateId> responses;
            bool blank_response = false;
            for (const Edge& f : h.out[v]) {
                if (f.label != e.label) continue;
                if (f.targets.empty())
                    blank_response = true;
                else
                    responses.insert(f.targets[0]);
            }
            if (blank_response) continue;
            if (e.targets.empty()) {
                if (responses.empty()) return {letter_token(e.label.name)};
                continue;
            }
            StateId next = e.targets[0];
            bool winning = true;
            for (StateId s : responses) {
                int r = rel.deletion_round(next, s);
                if (r <= 0 || r >= round) {
                    winning = false;
                    break;
                }
            }
            if (!winning) continue;
            Word out{letter_token(e.label.name)};
            for (StateId s : responses) {
                out.push_back(letter_token("#"));
                Word sub = build(next, s);
                out.insert(out.end(), sub.begin(), sub.end());
                out.push_back(letter_token("$"));
            }
            return out;
        }
        throw std::logic_error(
            "internal error: deleted pair has no winning move");
    }
};

}  // namespace

Word distinguishing_word(const ProcessGraph& g, const ProcessGraph& h,
                         const RankedAlphabet& sigma) {
    if (g.sort.source != 1 || h.sort != g.sort)
        throw domain_error("distinguishing words need two graphs of equal "
                           "sort 1 -> p");
    for (const ProcessGraph* gr : {&g, &h})
        for (const auto& edges : gr->out)
            for (const Edge& e : edges)
                if (!e.label.is_exit() && e.targets.size() >= 2)
                    throw domain_error("unary alphabet required");
    SimRelation rel = sim_preorder(g, h);
    if (rel.related(g.roots[0], h.roots[0]))
        throw domain_error("left graph is simulated by the right graph; "
                           "nothing to distinguish");
    Word w = WordGame{g, h, rel}.build(g.roots[0], h.roots[0]);
    Cfg cg = encode_cfg(g, sigma);
    Cfg ch = encode_cfg(h, sigma);
    if (!cfg_member(cg, 0, w) || cfg_member(ch, 0, w))
        throw std::logic_error(
            "internal error: game word failed grammar verification");
    return w;
}

std::vector<TreeObj> emb2_generator(const std::string& letter, int k) {
    if (k < 0) throw domain_error("negative tree count");
    std::vector<TreeObj> out;
    for (int i = 0; i <= k; ++i) {
        std::vector<TreeObj> leaves{TreeObj{0, letter, {}}};
        for (int j = 0; j < i; ++j) {
            leaves.push_back(TreeObj{0, "#", {}});
            leaves.push_back(TreeObj{1, "", {}});
            leaves.push_back(TreeObj{0, "$", {}});
        }
        TreeObj t = leaves.back();
        for (int j = static_cast<int>(leaves.size()) - 2; j >= 0; --j)
            t = TreeObj{0, "cat", {leaves[j], t}};
        out.push_back(std::move(t));
    }
    return out;
}

std::string to_string(const Cfg& g) {
    std::string out = "start";
    for (const std::string& s : g.starts) out += " " + s;
    out += " ;\n";
    for (const auto& [lhs, bodies] : g.productions)
        for (const auto& body : bodies) {
            out += lhs + " ->";
            if (body.empty()) {
                out += " _eps_";
            } else {
                for (const std::string& tok : body) out += " " + tok;
            }
            out += " ;\n";
        }
    return out;
}

}  // namespace groveq
