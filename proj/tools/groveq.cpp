#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "groveq/decide.hpp"
#include "groveq/encode.hpp"
#include "groveq/graph.hpp"
#include "groveq/semantics.hpp"
#include "groveq/simulation.hpp"
#include "groveq/term.hpp"

namespace {

using namespace groveq;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw domain_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw domain_error("cannot write " + path);
    out << content;
}

struct Options {
    std::string file;
    std::string lhs, rhs, term;
    std::string interp_path, dot_path, json_path;
    int max_len = 8;
    int depth = 4;
    int oracle = 0;
    unsigned seed = 1;
};

// Desugared, sort-annotated copy of a named definition.
Term load_term(const ParsedFile& pf, const std::string& name) {
    Term t = pf.definition(name);
    infer_sort(t, pf.signature);
    Term core = desugar(t, pf.signature);
    infer_sort(core, pf.signature);
    return core;
}

int cmd_check(const Options& opt) {
    ParsedFile pf = parse_file(read_file(opt.file));
    Term l = pf.definition(opt.lhs);
    Term r = pf.definition(opt.rhs);
    Verdict v = check_identity(l, r, pf.signature);
    std::string line = verdict_json(v);
    std::cout << line << "\n";
    if (!opt.json_path.empty()) write_file(opt.json_path, line + "\n");
    if (opt.oracle > 0) {
        std::string diff = oracle_check(l, r, pf.signature, v, opt.oracle,
                                        opt.oracle, Bound{12}, opt.seed);
        if (!diff.empty()) {
            std::cerr << "oracle discrepancy: " << diff << "\n";
            return 3;
        }
    }
    return v.equivalent ? 0 : 1;
}

template <class Obj>
void print_language(const LanguageMorphism<Obj>& lang) {
    for (std::size_t i = 0; i < lang.components.size(); ++i) {
        if (lang.components.size() > 1)
            std::cout << "component " << i + 1 << "\n";
        std::vector<Obj> sorted(lang.components[i].begin(),
                                lang.components[i].end());
        std::sort(sorted.begin(), sorted.end(), [](const Obj& a, const Obj& b) {
            int ma = measure(a), mb = measure(b);
            if (ma != mb) return ma < mb;
            return a < b;
        });
        for (const Obj& o : sorted) {
            std::string s = to_string(o);
            std::cout << (s.empty() ? "_eps_" : s) << "\n";
        }
    }
}

int cmd_eval(const Options& opt) {
    ParsedFile pf = parse_file(read_file(opt.file));
    Term t = load_term(pf, opt.term);
    std::string interp_text = read_file(opt.interp_path);
    Bound b{opt.max_len};
    if (interp_file_is_trees(interp_text)) {
        auto interp = parse_tree_interp(interp_text, pf.signature);
        print_language(eval_term(t, pf.signature, interp, b));
    } else {
        auto interp = parse_word_interp(interp_text, pf.signature);
        print_language(eval_term(t, pf.signature, interp, b));
    }
    return 0;
}

ProcessGraph closed_graph(const ParsedFile& pf, const Term& t) {
    auto vars = free_vars(t, pf.signature);
    if (!vars.empty())
        throw domain_error("term has a free variable: " + vars.begin()->first);
    return compile(t, {});
}

int cmd_reduce(const Options& opt) {
    ParsedFile pf = parse_file(read_file(opt.file));
    ProcessGraph g = reduce(closed_graph(pf, load_term(pf, opt.term)));
    std::string dot = to_dot(g, opt.term);
    if (opt.dot_path.empty())
        std::cout << dot;
    else
        write_file(opt.dot_path, dot);
    return 0;
}

int cmd_unfold(const Options& opt) {
    ParsedFile pf = parse_file(read_file(opt.file));
    ProcessGraph g = unfold(closed_graph(pf, load_term(pf, opt.term)),
                            opt.depth);
    std::string dot = to_dot(g, opt.term);
    if (opt.dot_path.empty())
        std::cout << dot;
    else
        write_file(opt.dot_path, dot);
    return 0;
}

int cmd_enumerate(const Options& opt) {
    ParsedFile pf = parse_file(read_file(opt.file));
    Term t = load_term(pf, opt.term);
    GenericInterp gi = generic_interp(free_vars(t, pf.signature),
                                      pf.signature);
    ProcessGraph g = compile(t, gi.graphs);
    bool ranked = false;
    for (const auto& edges : g.out)
        for (const Edge& e : edges)
            if (!e.label.is_exit() && e.targets.size() >= 2) ranked = true;
    RankedAlphabet unary;
    if (ranked) {
        g = encode_unary(g, gi.alphabet, &unary);
    } else {
        for (const auto& [name, rank] : gi.alphabet.letters)
            if (rank <= 1) unary.add(name, rank);
    }
    Cfg cfg = encode_cfg(g, unary);
    auto lists = cfg_enumerate(cfg, opt.max_len);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        if (lists.size() > 1) std::cout << "component " << i + 1 << "\n";
        for (const Word& w : lists[i]) {
            std::string s = to_string(w);
            std::cout << (s.empty() ? "_eps_" : s) << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"decision procedure and toolkit for morphism terms over "
                 "process graphs, grammars and bounded language semantics"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* cmd) {
        cmd->add_option("file", opt.file, "input definitions file")
            ->required();
    };

    CLI::App* check =
        app.add_subcommand("check", "decide whether two terms are equal in "
                                    "every model");
    add_common(check);
    check->add_option("--lhs", opt.lhs, "left term name")->required();
    check->add_option("--rhs", opt.rhs, "right term name")->required();
    check->add_option("--oracle", opt.oracle,
                      "cross-check samples against bounded evaluation");
    check->add_option("--seed", opt.seed, "random seed for --oracle");
    check->add_option("--json", opt.json_path, "also write the verdict here");

    CLI::App* eval =
        app.add_subcommand("eval", "bounded language of a term under an "
                                   "interpretation");
    add_common(eval);
    eval->add_option("--term", opt.term, "term name")->required();
    eval->add_option("--interp", opt.interp_path, "interpretation file")
        ->required();
    eval->add_option("--max-len", opt.max_len, "size bound");

    CLI::App* red = app.add_subcommand("reduce", "reduced graph of a closed "
                                                 "term as DOT");
    add_common(red);
    red->add_option("--term", opt.term, "term name")->required();
    red->add_option("--dot", opt.dot_path, "output path (default stdout)");

    CLI::App* unf = app.add_subcommand("unfold", "depth-bounded unfolding of "
                                                 "a closed term as DOT");
    add_common(unf);
    unf->add_option("--term", opt.term, "term name")->required();
    unf->add_option("--depth", opt.depth, "unfolding depth");
    unf->add_option("--dot", opt.dot_path, "output path (default stdout)");

    CLI::App* enu = app.add_subcommand("enumerate", "bounded grammar "
                                                    "language of a term");
    add_common(enu);
    enu->add_option("--term", opt.term, "term name")->required();
    enu->add_option("--max-len", opt.max_len, "maximum word length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(opt);
        if (eval->parsed()) return cmd_eval(opt);
        if (red->parsed()) return cmd_reduce(opt);
        if (unf->parsed()) return cmd_unfold(opt);
        if (enu->parsed()) return cmd_enumerate(opt);
        std::cerr << "no command\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
