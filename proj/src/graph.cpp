#include "groveq/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "groveq/simulation.hpp"

namespace groveq {

bool RankedAlphabet::has(const std::string& name) const {
    for (const auto& l : letters)
        if (l.first == name) return true;
    return false;
}

int RankedAlphabet::rank(const std::string& name) const {
    for (const auto& l : letters)
        if (l.first == name) return l.second;
    throw domain_error("unknown letter " + name);
}

void RankedAlphabet::add(const std::string& name, int rank) {
    if (has(name)) throw domain_error("duplicate letter " + name);
    letters.emplace_back(name, rank);
}

std::string to_string(const EdgeLabel& l) {
    if (l.is_exit()) return "ex_" + std::to_string(l.index);
    return l.name;
}

namespace {

void check_well_formed(const ProcessGraph& g) {
    if (static_cast<int>(g.roots.size()) != g.sort.source)
        throw domain_error("root count does not match sort");
    std::map<std::string, std::size_t> arity;
    for (StateId v = 0; v < g.num_states; ++v) {
        for (const Edge& e : g.out[v]) {
            if (e.label.is_exit()) {
                if (!e.targets.empty())
                    throw domain_error("exit edge with targets");
                if (e.label.index < 1 || e.label.index > g.sort.target)
                    throw domain_error("exit index out of range: ex_" +
                                       std::to_string(e.label.index));
            } else {
                auto [it, fresh] = arity.emplace(e.label.name, e.targets.size());
                if (!fresh && it->second != e.targets.size())
                    throw domain_error("letter " + e.label.name +
                                       " used at two arities");
            }
            for (StateId t : e.targets)
                if (t < 0 || t >= g.num_states)
                    throw domain_error("edge target out of range");
        }
    }
    for (StateId r : g.roots)
        if (r < 0 || r >= g.num_states)
            throw domain_error("root out of range");
}

}  // namespace

ProcessGraph normalize(ProcessGraph g) {
    check_well_formed(g);
    // Reachability from the roots.
    std::vector<bool> seen(g.num_states, false);
    std::deque<StateId> work(g.roots.begin(), g.roots.end());
    for (StateId r : g.roots) seen[r] = true;
    while (!work.empty()) {
        StateId v = work.front();
        work.pop_front();
        for (const Edge& e : g.out[v])
            for (StateId t : e.targets)
                if (!seen[t]) {
                    seen[t] = true;
                    work.push_back(t);
                }
    }
    std::vector<StateId> remap(g.num_states, -1);
    int next = 0;
    for (StateId v = 0; v < g.num_states; ++v)
        if (seen[v]) remap[v] = next++;
    ProcessGraph out;
    out.sort = g.sort;
    out.num_states = next;
    out.out.resize(next);
    for (StateId v = 0; v < g.num_states; ++v) {
        if (!seen[v]) continue;
        std::vector<Edge>& dst = out.out[remap[v]];
        for (Edge e : g.out[v]) {
            for (StateId& t : e.targets) t = remap[t];
            dst.push_back(std::move(e));
        }
        std::sort(dst.begin(), dst.end());
        dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
    }
    out.roots.reserve(g.roots.size());
    for (StateId r : g.roots) out.roots.push_back(remap[r]);
    return out;
}

ProcessGraph g_dist(int i, int n) {
    if (i < 1 || i > n)
        throw domain_error("distinguished morphism index out of range");
    ProcessGraph g;
    g.sort = {1, n};
    g.num_states = 1;
    g.roots = {0};
    g.out.resize(1);
    g.out[0].push_back({EdgeLabel::exit(i), {}});
    return g;
}

ProcessGraph g_zero(int n, int p) {
    if (n < 0 || p < 0) throw domain_error("negative sort");
    ProcessGraph g;
    g.sort = {n, p};
    g.num_states = n;
    g.out.resize(n);
    for (int i = 0; i < n; ++i) g.roots.push_back(i);
    return g;
}

ProcessGraph g_identity(int n) {
    std::vector<ProcessGraph> components;
    components.reserve(n);
    for (int i = 1; i <= n; ++i) components.push_back(g_dist(i, n));
    if (n == 0) return g_zero(0, 0);
    return g_tuple(components);
}

ProcessGraph g_letter(const std::string& name, int rank) {
    if (rank < 0) throw domain_error("negative rank");
    ProcessGraph g;
    g.sort = {1, rank};
    g.num_states = 1 + rank;
    g.roots = {0};
    g.out.resize(g.num_states);
    Edge e{EdgeLabel::action(name), {}};
    for (int i = 1; i <= rank; ++i) {
        e.targets.push_back(i);
        g.out[i].push_back({EdgeLabel::exit(i), {}});
    }
    g.out[0].push_back(std::move(e));
    return g;
}

namespace {

// Copies h's states into g with an offset; returns the offset.
int append_states(ProcessGraph* g, const ProcessGraph& h) {
    int offset = g->num_states;
    g->num_states += h.num_states;
    g->out.resize(g->num_states);
    for (StateId v = 0; v < h.num_states; ++v) {
        for (Edge e : h.out[v]) {
            for (StateId& t : e.targets) t += offset;
            g->out[offset + v].push_back(std::move(e));
        }
    }
    return offset;
}

}  // namespace

ProcessGraph g_compose(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort.target != h.sort.source)
        throw sort_error("composition of " + to_string(g.sort) + " with " +
                         to_string(h.sort));
    ProcessGraph out;
    out.sort = {g.sort.source, h.sort.target};
    out.num_states = g.num_states;
    out.out.resize(g.num_states);
    out.roots = g.roots;
    int offset = append_states(&out, h);
    // Exit edges of g become copies of the corresponding h root's out-edges;
    // h's own exits already point at the final target sort.
    for (StateId v = 0; v < g.num_states; ++v) {
        for (const Edge& e : g.out[v]) {
            if (!e.label.is_exit()) {
                out.out[v].push_back(e);
                continue;
            }
            StateId hroot = h.roots[e.label.index - 1] + offset;
            for (const Edge& he : out.out[hroot]) {
                Edge copy = he;
                out.out[v].push_back(std::move(copy));
            }
        }
    }
    return normalize(std::move(out));
}

ProcessGraph g_pair(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort.target != h.sort.target)
        throw sort_error("pairing of " + to_string(g.sort) + " with " +
                         to_string(h.sort));
    ProcessGraph out;
    out.sort = {g.sort.source + h.sort.source, g.sort.target};
    out.num_states = 0;
    int goff = append_states(&out, g);
    int hoff = append_states(&out, h);
    for (StateId r : g.roots) out.roots.push_back(r + goff);
    for (StateId r : h.roots) out.roots.push_back(r + hoff);
    return normalize(std::move(out));
}

ProcessGraph g_tuple(const std::vector<ProcessGraph>& components) {
    if (components.empty()) throw domain_error("tupling of zero components");
    ProcessGraph acc = components[0];
    for (std::size_t i = 1; i < components.size(); ++i)
        acc = g_pair(acc, components[i]);
    return normalize(std::move(acc));
}

ProcessGraph g_sum(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort != h.sort)
        throw sort_error("sum of " + to_string(g.sort) + " with " +
                         to_string(h.sort));
    int n = g.sort.source;
    ProcessGraph out;
    out.sort = g.sort;
    out.num_states = n;  // fresh roots first
    out.out.resize(n);
    int goff = append_states(&out, g);
    int hoff = append_states(&out, h);
    for (int i = 0; i < n; ++i) {
        out.roots.push_back(i);
        for (const Edge& e : out.out[g.roots[i] + goff]) out.out[i].push_back(e);
        for (const Edge& e : out.out[h.roots[i] + hoff]) out.out[i].push_back(e);
    }
    return normalize(std::move(out));
}

ProcessGraph g_dagger(const ProcessGraph& g) {
    int n = g.sort.source;
    if (g.sort.target < n)
        throw sort_error("dagger needs target >= source, got " +
                         to_string(g.sort));
    int p = g.sort.target - n;
    // Link(v): roots reachable from v through chains of exit(<= n) edges.
    auto link = [&](StateId v) {
        std::vector<bool> seen(g.num_states, false);
        std::vector<StateId> order;
        std::deque<StateId> work{v};
        while (!work.empty()) {
            StateId u = work.front();
            work.pop_front();
            for (const Edge& e : g.out[u]) {
                if (!e.label.is_exit() || e.label.index > n) continue;
                StateId r = g.roots[e.label.index - 1];
                if (!seen[r]) {
                    seen[r] = true;
                    order.push_back(r);
                    work.push_back(r);
                }
            }
        }
        return order;
    };
    ProcessGraph out;
    out.sort = {n, p};
    out.num_states = g.num_states;
    out.out.resize(g.num_states);
    out.roots = g.roots;
    auto push_non_loop = [&](StateId src, StateId from) {
        for (const Edge& e : g.out[from]) {
            if (e.label.is_exit() && e.label.index <= n) continue;
            Edge copy = e;
            if (copy.label.is_exit()) copy.label.index -= n;
            out.out[src].push_back(std::move(copy));
        }
    };
    for (StateId v = 0; v < g.num_states; ++v) {
        push_non_loop(v, v);
        for (StateId r : link(v)) push_non_loop(v, r);
    }
    return normalize(std::move(out));
}

ProcessGraph g_component(const ProcessGraph& g, int i) {
    if (i < 1 || i > g.sort.source)
        throw domain_error("component index out of range");
    ProcessGraph out = g;
    out.sort.source = 1;
    out.roots = {g.roots[i - 1]};
    return normalize(std::move(out));
}

namespace {

void unfold_rec(const ProcessGraph& g, StateId v, int remaining,
                ProcessGraph* out, StateId copy) {
    for (const Edge& e : g.out[v]) {
        if (e.targets.empty()) {
            out->out[copy].push_back(e);
            continue;
        }
        if (remaining == 0) continue;
        Edge copy_edge{e.label, {}};
        for (StateId t : e.targets) {
            StateId fresh = out->num_states++;
            out->out.emplace_back();
            copy_edge.targets.push_back(fresh);
            unfold_rec(g, t, remaining - 1, out, fresh);
        }
        out->out[copy].push_back(std::move(copy_edge));
    }
}

}  // namespace

ProcessGraph unfold(const ProcessGraph& g, int depth) {
    if (depth < 0) throw domain_error("negative unfold depth");
    ProcessGraph out;
    out.sort = g.sort;
    for (StateId r : g.roots) {
        StateId fresh = out.num_states++;
        out.out.emplace_back();
        out.roots.push_back(fresh);
        unfold_rec(g, r, depth, &out, fresh);
    }
    return normalize(std::move(out));
}

ProcessGraph truncate(const ProcessGraph& g, int depth) {
    if (depth < 0) throw domain_error("negative truncation depth");
    ProcessGraph out;
    out.sort = g.sort;
    // State (v, k) of the output behaves like v with k depth units left.
    out.num_states = g.num_states * (depth + 1);
    out.out.resize(out.num_states);
    auto at = [&](StateId v, int k) { return v * (depth + 1) + k; };
    for (StateId v = 0; v < g.num_states; ++v) {
        for (int k = 0; k <= depth; ++k) {
            for (const Edge& e : g.out[v]) {
                if (e.targets.empty()) {
                    out.out[at(v, k)].push_back(e);
                    continue;
                }
                if (k == 0) continue;
                Edge copy{e.label, {}};
                for (StateId t : e.targets)
                    copy.targets.push_back(at(t, k - 1));
                out.out[at(v, k)].push_back(std::move(copy));
            }
        }
    }
    for (StateId r : g.roots) out.roots.push_back(at(r, depth));
    return normalize(std::move(out));
}

bool is_acyclic(const ProcessGraph& g) {
    std::vector<int> mark(g.num_states, 0);  // 0 fresh, 1 open, 2 done
    // Each frame holds a flat index into the state's concatenated target list.
    std::vector<std::pair<StateId, std::size_t>> stack;
    auto target_at = [&](StateId v, std::size_t idx, StateId* t) {
        std::size_t c = 0;
        for (const Edge& e : g.out[v])
            for (StateId u : e.targets) {
                if (c++ == idx) {
                    *t = u;
                    return true;
                }
            }
        return false;
    };
    for (StateId start = 0; start < g.num_states; ++start) {
        if (mark[start]) continue;
        mark[start] = 1;
        stack.emplace_back(start, 0);
        while (!stack.empty()) {
            StateId v = stack.back().first;
            StateId t = 0;
            if (!target_at(v, stack.back().second, &t)) {
                mark[v] = 2;
                stack.pop_back();
                continue;
            }
            ++stack.back().second;
            if (mark[t] == 1) return false;
            if (mark[t] == 0) {
                mark[t] = 1;
                stack.emplace_back(t, 0);
            }
        }
    }
    return true;
}

namespace {

std::string code_rec(const ProcessGraph& g, StateId v,
                     std::map<StateId, std::string>* memo) {
    auto it = memo->find(v);
    if (it != memo->end()) return it->second;
    std::vector<std::string> edge_codes;
    for (const Edge& e : g.out[v]) {
        std::string c = to_string(e.label);
        c += '(';
        for (std::size_t i = 0; i < e.targets.size(); ++i) {
            if (i) c += ',';
            c += code_rec(g, e.targets[i], memo);
        }
        c += ')';
        edge_codes.push_back(std::move(c));
    }
    std::sort(edge_codes.begin(), edge_codes.end());
    std::string code = "{";
    for (std::size_t i = 0; i < edge_codes.size(); ++i) {
        if (i) code += '+';
        code += edge_codes[i];
    }
    code += '}';
    memo->emplace(v, code);
    return code;
}

}  // namespace

std::string tree_code(const ProcessGraph& g, int i) {
    if (!is_acyclic(g)) throw domain_error("tree code of a cyclic graph");
    std::map<StateId, std::string> memo;
    return code_rec(g, g.roots.at(i - 1), &memo);
}

bool tree_iso(const ProcessGraph& g, const ProcessGraph& h) {
    if (g.sort != h.sort) return false;
    if (!is_acyclic(g) || !is_acyclic(h))
        throw domain_error("tree_iso needs acyclic graphs");
    std::map<StateId, std::string> mg, mh;
    for (int i = 0; i < g.sort.source; ++i)
        if (code_rec(g, g.roots[i], &mg) != code_rec(h, h.roots[i], &mh))
            return false;
    return true;
}

ProcessGraph reduce(const ProcessGraph& g) {
    ProcessGraph cur = normalize(g);
    bool acyclic = is_acyclic(cur);
    while (true) {
        SimRelation rel = sim_preorder(cur, cur);
        std::map<StateId, std::string> codes;
        bool changed = false;
        ProcessGraph next = cur;
        for (StateId v = 0; v < cur.num_states; ++v) {
            const std::vector<Edge>& edges = cur.out[v];
            std::size_t m = edges.size();
            if (m < 2) continue;
            auto below = [&](std::size_t a, std::size_t b) {
                if (edges[a].label != edges[b].label) return false;
                for (std::size_t i = 0; i < edges[a].targets.size(); ++i)
                    if (!rel.related(edges[a].targets[i], edges[b].targets[i]))
                        return false;
                return true;
            };
            // Keep one representative of each maximal equivalence class.
            std::vector<bool> keep(m, true);
            for (std::size_t a = 0; a < m; ++a) {
                for (std::size_t b = 0; b < m && keep[a]; ++b) {
                    if (a == b || !keep[b]) continue;
                    if (!below(a, b)) continue;
                    if (!below(b, a)) {
                        keep[a] = false;  // strictly dominated
                    } else {
                        // Equivalent pair: keep the canonical representative.
                        bool drop_a;
                        if (acyclic) {
                            auto code_of = [&](const Edge& e) {
                                std::string c = to_string(e.label) + "(";
                                for (StateId t : e.targets)
                                    c += code_rec(cur, t, &codes) + ",";
                                return c + ")";
                            };
                            std::string ca = code_of(edges[a]);
                            std::string cb = code_of(edges[b]);
                            drop_a = cb < ca || (cb == ca && b < a);
                        } else {
                            drop_a = b < a;
                        }
                        if (drop_a) keep[a] = false;
                    }
                }
            }
            std::vector<Edge> kept;
            for (std::size_t a = 0; a < m; ++a)
                if (keep[a]) kept.push_back(edges[a]);
            if (kept.size() != m) {
                next.out[v] = std::move(kept);
                changed = true;
            }
        }
        if (!changed) return cur;
        cur = normalize(std::move(next));
    }
}

std::string to_dot(const ProcessGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    os << "  rankdir=TB;\n";
    std::map<StateId, int> root_number;
    for (std::size_t i = 0; i < g.roots.size(); ++i)
        root_number.emplace(g.roots[i], static_cast<int>(i) + 1);
    for (StateId v = 0; v < g.num_states; ++v) {
        os << "  s" << v << " [shape=circle, label=\"" << v << "\"";
        auto it = root_number.find(v);
        if (it != root_number.end())
            os << ", style=bold, xlabel=\"" << it->second << "\"";
        os << "];\n";
    }
    int aux = 0;
    for (StateId v = 0; v < g.num_states; ++v) {
        for (const Edge& e : g.out[v]) {
            if (e.label.is_exit()) {
                os << "  x" << aux << " [shape=doublecircle, label=\"ex_"
                   << e.label.index << "\"];\n";
                os << "  s" << v << " -> x" << aux << ";\n";
            } else {
                os << "  e" << aux << " [shape=diamond, label=\"" << e.label.name
                   << "\"];\n";
                os << "  s" << v << " -> e" << aux << ";\n";
                for (std::size_t i = 0; i < e.targets.size(); ++i)
                    os << "  e" << aux << " -> s" << e.targets[i]
                       << " [label=\"" << i + 1 << "\"];\n";
            }
            ++aux;
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace groveq
