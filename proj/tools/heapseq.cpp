// Command-line front end: deciders, subsequence strategies, oracles, the
// hardness-reduction generator, and the simulation harness.
//
// Exit codes: 0 success / true verdict, 1 false verdict, 2 usage or I/O
// error, 3 search budget exhausted.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "heapseq/complete01.hpp"
#include "heapseq/core.hpp"
#include "heapseq/experiments.hpp"
#include "heapseq/greedy.hpp"
#include "heapseq/io.hpp"
#include "heapseq/oracle.hpp"
#include "heapseq/rank_index.hpp"
#include "heapseq/reduction.hpp"
#include "heapseq/rng.hpp"
#include "heapseq/subseq.hpp"
#include "heapseq/version.hpp"

namespace {

using namespace heapseq;

constexpr int exit_true = 0;
constexpr int exit_false = 1;
constexpr int exit_usage = 2;
constexpr int exit_exhausted = 3;

std::vector<std::int64_t> parse_int_list(const std::string& csv) {
    std::vector<std::int64_t> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(io::detail::parse_int(io::detail::strip(tok), "list entry"));
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw io::io_error("cannot open output file: " + path);
    out << text;
}

// Ranks 1..n of uniform draws, ties broken by arrival (none in practice).
std::vector<rank_t> ranks_of_stream(const std::vector<double>& stream) {
    std::vector<std::size_t> order(stream.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scored{stream[a], static_cast<std::int64_t>(a)} <
               scored{stream[b], static_cast<std::int64_t>(b)};
    });
    std::vector<rank_t> ranks(stream.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        ranks[order[r]] = static_cast<rank_t>(r + 1);
    return ranks;
}

// Final ranks of a relative-rank stream.
std::vector<rank_t> ranks_of_relrank(const std::vector<std::int64_t>& rel) {
    rank_index idx;
    std::vector<std::int32_t> ids;
    ids.reserve(rel.size());
    for (const auto r : rel) ids.push_back(idx.insert_at(r - 1, false));
    std::vector<rank_t> out(rel.size());
    for (std::size_t i = 0; i < rel.size(); ++i) out[i] = idx.position(ids[i]) + 1;
    return out;
}

template <class T>
void maybe_write_witness(const std::string& path, const heap_tree<T>& t) {
    if (!path.empty()) io::write_tree_file(path, t);
}

void maybe_write_ranks(const std::string& path, const std::vector<rank_t>& ranks) {
    if (path.empty()) return;
    sequence seq;
    seq.items = ranks;
    io::write_sequence_file(path, seq);
}

template <class T>
void print_strategy(const strategy_result<T>& r, std::int64_t n) {
    std::cout << "PLACED " << r.tree.size() << " OF " << n << "\n";
    for (const auto& ph : r.phases)
        std::cout << "phase " << ph.label << ": examined=" << ph.examined
                  << " placed=" << ph.placed << "\n";
}

int run_decide(const std::string& in, const std::string& witness) {
    const auto seq = io::read_sequence_file(in);
    auto report = [&](auto&& res) {
        if (res.heapable) {
            std::cout << "HEAPABLE\n";
            maybe_write_witness(witness, res.witness);
            return exit_true;
        }
        std::cout << "NOT HEAPABLE at index " << res.failed_index << "\n";
        return exit_false;
    };
    if (seq.is_triples()) return report(decide_heapable(seq.triples()));
    return report(decide_heapable(seq.ranks()));
}

int run_complete01(const std::string& in, const std::string& witness, const std::string& padded) {
    const auto seq = io::read_sequence_file(in);
    if (seq.is_triples()) throw io::io_error("complete01 expects a 0/1 rank sequence");
    const auto res = complete_heap_01(seq.ranks());
    if (!padded.empty()) maybe_write_ranks(padded, res.padded);
    if (res.heapable) {
        std::cout << "COMPLETELY HEAPABLE\n";
        maybe_write_witness(witness, res.witness);
        return exit_true;
    }
    std::cout << "NOT COMPLETELY HEAPABLE at index " << res.failed_index << "\n";
    return exit_false;
}

int run_verify(const std::string& seq_path, const std::string& tree_path, bool want_complete) {
    const auto seq = io::read_sequence_file(seq_path);
    bool ok = false, complete_ok = true;
    if (seq.is_triples()) {
        const auto& items = seq.triples();
        const auto t = io::read_tree_file(tree_path, std::span<const triple>(items));
        ok = verify_heap(std::span<const triple>(items), t);
        if (want_complete) complete_ok = verify_complete(t);
    } else {
        const auto& items = seq.ranks();
        const auto t = io::read_tree_file(tree_path, std::span<const rank_t>(items));
        ok = verify_heap(std::span<const rank_t>(items), t);
        if (want_complete) complete_ok = verify_complete(t);
    }
    if (ok && complete_ok) {
        std::cout << (want_complete ? "VALID COMPLETE\n" : "VALID\n");
        return exit_true;
    }
    std::cout << (!ok ? "INVALID heap\n" : "INVALID not complete\n");
    return exit_false;
}

struct lhs_options {
    std::string strategy;
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    double eps = 0.05;
    std::string mode = "halt";
    std::string witness;
    std::string save_seq;
};

int run_lhs(const lhs_options& o) {
    rng256 rng(o.seed);
    const auto mode = o.mode == "skip" ? fill_mode::skip : fill_mode::halt;
    if (o.strategy == "greedy") {
        const auto perm = random_permutation(static_cast<std::size_t>(o.n), rng);
        greedy_state<rank_t> st;
        std::vector<std::int64_t> idx(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) idx[i] = static_cast<std::int64_t>(i);
        const auto fs = greedy_fill(st, std::span<const rank_t>(perm),
                                     std::span<const std::int64_t>(idx), mode);
        strategy_result<rank_t> r;
        r.tree = st.take_tree();
        r.phases.push_back({"greedy", fs.examined, fs.placed});
        print_strategy(r, o.n);
        maybe_write_witness(o.witness, r.tree);
        maybe_write_ranks(o.save_seq, perm);
        return exit_true;
    }
    if (o.strategy == "relrank") {
        const auto rel = relrank_stream(static_cast<std::size_t>(o.n), rng);
        const auto r = relrank_online_lhs(std::span<const std::int64_t>(rel), o.eps);
        print_strategy(r, o.n);
        maybe_write_witness(o.witness, r.tree);
        maybe_write_ranks(o.save_seq, ranks_of_relrank(rel));
        return exit_true;
    }
    const auto stream = uniform_stream(static_cast<std::size_t>(o.n), rng);
    strategy_result<scored> r;
    if (o.strategy == "thm4")
        r = lhs_two_phase(std::span<const double>(stream), mode);
    else if (o.strategy == "thm4boot")
        r = lhs_bootstrap(std::span<const double>(stream), mode);
    else if (o.strategy == "online")
        r = online_lhs_uniform(std::span<const double>(stream));
    else
        throw io::io_error("unknown strategy: " + o.strategy);
    print_strategy(r, o.n);
    maybe_write_witness(o.witness, r.tree);
    maybe_write_ranks(o.save_seq, ranks_of_stream(stream));
    return exit_true;
}

int run_lchs(const lhs_options& o) {
    rng256 rng(o.seed);
    if (o.strategy == "relrank-banding") {
        const auto rel = relrank_stream(static_cast<std::size_t>(o.n), rng);
        const auto r = lchs_banding_relrank(std::span<const std::int64_t>(rel), o.eps);
        print_strategy(r, o.n);
        std::cout << "LEVELS " << (r.tree.empty() ? 0 : r.tree.depth()) << "\n";
        maybe_write_witness(o.witness, r.tree);
        maybe_write_ranks(o.save_seq, ranks_of_relrank(rel));
        return exit_true;
    }
    if (o.strategy != "banding") throw io::io_error("unknown strategy: " + o.strategy);
    const auto stream = uniform_stream(static_cast<std::size_t>(o.n), rng);
    const auto r = lchs_banding_online(std::span<const double>(stream));
    print_strategy(r, o.n);
    std::cout << "LEVELS " << (r.tree.empty() ? 0 : r.tree.depth()) << "\n";
    maybe_write_witness(o.witness, r.tree);
    maybe_write_ranks(o.save_seq, ranks_of_stream(stream));
    return exit_true;
}

struct oracle_options {
    std::string what;
    std::string in;
    std::int64_t n = 0;
    std::int64_t budget = 20'000'000;
};

int run_oracle(const oracle_options& o) {
    oracle::search_budget budget{o.budget};
    if (o.what == "prob") {
        const auto p = oracle::exact_heapable_prob(static_cast<int>(o.n));
        std::printf("P(heapable, n=%lld) = %llu/%llu = %.9f\n", static_cast<long long>(o.n),
                    static_cast<unsigned long long>(p.heapable),
                    static_cast<unsigned long long>(p.total), p.value());
        return exit_true;
    }
    const auto seq = io::read_sequence_file(o.in);
    auto with_items = [&](auto&& items) {
        using item_t = std::decay_t<decltype(items[0])>;
        std::span<const item_t> sp(items);
        if (o.what == "heapable" || o.what == "complete") {
            const auto v = o.what == "heapable" ? oracle::bt_heapable(sp, budget)
                                                : oracle::bt_completely_heapable(sp, budget);
            if (v == oracle::verdict::exhausted) {
                std::cout << "EXHAUSTED\n";
                return exit_exhausted;
            }
            std::cout << (v == oracle::verdict::yes ? "YES\n" : "NO\n");
            return v == oracle::verdict::yes ? exit_true : exit_false;
        }
        if (o.what == "lhs" || o.what == "lchs") {
            const auto r = o.what == "lhs" ? oracle::exact_lhs(sp, budget)
                                           : oracle::exact_lchs(sp, budget);
            if (r.exhausted) {
                std::cout << "EXHAUSTED\n";
                return exit_exhausted;
            }
            std::cout << "LENGTH " << r.length << "\n";
            std::cout << "indices:";
            for (const auto i : r.indices) std::cout << ' ' << i;
            std::cout << "\n";
            return exit_true;
        }
        if (o.what == "lis" || o.what == "lds") {
            const auto len = o.what == "lis" ? oracle::exact_lis(sp) : oracle::exact_lds(sp);
            std::cout << "LENGTH " << len << "\n";
            return exit_true;
        }
        throw io::io_error("unknown oracle: " + o.what);
    };
    if (seq.is_triples()) return with_items(seq.triples());
    return with_items(seq.ranks());
}

reduction::params load_params(const io::x3c_instance& inst, const std::string& params_path,
                              reduction::normalized_x3c& nx) {
    nx = reduction::normalize(inst);
    auto p = reduction::compute_params(nx.inst.n, static_cast<std::int64_t>(nx.inst.sets.size()));
    if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) throw io::io_error("cannot open params file: " + params_path);
        p = reduction::apply_overrides(p, reduction::parse_override_text(in));
    }
    return p;
}

int run_reduce(const std::string& in, const std::string& out, const std::string& report,
               const std::string& params_path) {
    const auto inst = io::read_x3c_file(in);
    reduction::normalized_x3c nx{{}, 0};
    const auto p = load_params(inst, params_path, nx);
    const auto built = reduction::build_instance(nx, p);
    std::ostringstream seq_text;
    sequence seq;
    seq.items = built.seq;
    io::write_sequence(seq_text, seq);
    write_text(out, seq_text.str());
    if (!report.empty()) write_text(report, built.report.to_text());
    std::cout << (built.report.matches ? "CAPACITY OK" : "CAPACITY MISMATCH") << " total="
              << built.report.total << " capacity=" << built.report.capacity << "\n";
    return exit_true;
}

int run_witness(const std::string& in, const std::string& cover_csv, const std::string& seq_path,
                const std::string& out, const std::string& params_path) {
    const auto inst = io::read_x3c_file(in);
    reduction::normalized_x3c nx{{}, 0};
    const auto p = load_params(inst, params_path, nx);
    const auto built = reduction::build_instance(nx, p);
    const auto file_seq = io::read_sequence_file(seq_path);
    if (!file_seq.is_triples() || file_seq.triples() != built.seq)
        throw io::io_error("sequence file does not match the instance built from " + in);
    const auto cover = parse_int_list(cover_csv);
    const auto tree =
        reduction::build_witness({nx, p, built, cover});
    if (!verify_heap(std::span<const triple>(built.seq), tree) || !verify_complete(tree))
        throw reduction::witness_error("internal: constructed witness failed verification");
    io::write_tree_file(out, tree);
    std::cout << "WITNESS OK nodes=" << tree.size() << "\n";
    return exit_true;
}

struct sim_options {
    std::string fig;
    std::string ns = "10,100,1000";
    std::int64_t trials = 1000;
    std::uint64_t seed = 0;
    std::string out = "-";
    int jobs = 1;
};

int run_simulate(const sim_options& o) {
    const auto ns = parse_int_list(o.ns);
    experiments::sim_report rep;
    if (o.fig == "fig3")
        rep = experiments::sim_heapable_prob(ns, o.trials, o.seed, o.jobs);
    else if (o.fig == "fig4")
        rep = experiments::sim_thm4(ns, o.trials, o.seed, o.jobs);
    else if (o.fig == "fig5")
        rep = experiments::sim_banding(ns, o.trials, o.seed, o.jobs);
    else
        throw io::io_error("unknown figure: " + o.fig);
    write_text(o.out, rep.to_csv());
    return exit_true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"heapable sequences: deciders, strategies, oracles, reductions, simulations"};
    std::string version_text = std::string(heapseq::library_name) + " " +
                               std::string(heapseq::library_version) + " (rng: " +
                               std::string(heapseq::rng_identity) + ")";
    app.set_version_flag("--version", version_text);
    app.require_subcommand(1);

    std::string in, out, witness, padded, tree, seq_path, report, params_path, cover;
    bool want_complete = false;
    lhs_options lo;
    oracle_options oo;
    sim_options so;

    auto* decide = app.add_subcommand("decide", "decide heapability of a sequence file");
    decide->add_option("--in", in, "sequence file")->required();
    decide->add_option("--witness", witness, "write witness tree file");

    auto* c01 = app.add_subcommand("complete01", "decide complete heapability of a 0/1 sequence");
    c01->add_option("--in", in, "sequence file")->required();
    c01->add_option("--witness", witness, "write witness tree file (over the padded sequence)");
    c01->add_option("--padded", padded, "write the padded sequence file");

    auto* verify = app.add_subcommand("verify", "verify a witness tree against a sequence");
    verify->add_option("--seq", seq_path, "sequence file")->required();
    verify->add_option("--tree", tree, "tree file")->required();
    verify->add_flag("--complete", want_complete, "also require a complete tree");

    auto* lhs = app.add_subcommand("lhs", "heapable-subsequence strategies");
    lhs->add_option("--strategy", lo.strategy, "greedy|thm4|thm4boot|online|relrank")->required();
    lhs->add_option("--n", lo.n, "stream length")->required();
    lhs->add_option("--seed", lo.seed, "rng seed")->required();
    lhs->add_option("--eps", lo.eps, "calibration fraction (relrank)");
    lhs->add_option("--mode", lo.mode, "halt|skip greedy mode")
        ->check(CLI::IsMember({"halt", "skip"}));
    lhs->add_option("--witness", lo.witness, "write result tree file");
    lhs->add_option("--save-seq", lo.save_seq, "write the generated sequence (as ranks)");

    auto* lchs = app.add_subcommand("lchs", "completely-heapable-subsequence strategies");
    lchs->add_option("--strategy", lo.strategy, "banding|relrank-banding")->required();
    lchs->add_option("--n", lo.n, "stream length")->required();
    lchs->add_option("--seed", lo.seed, "rng seed")->required();
    lchs->add_option("--eps", lo.eps, "calibration fraction (relrank)");
    lchs->add_option("--witness", lo.witness, "write result tree file");
    lchs->add_option("--save-seq", lo.save_seq, "write the generated sequence (as ranks)");

    auto* orc = app.add_subcommand("oracle", "exponential-time reference searches");
    orc->add_option("what", oo.what, "heapable|complete|lhs|lchs|prob|lis|lds")->required();
    orc->add_option("--in", oo.in, "sequence file");
    orc->add_option("--n", oo.n, "size (prob only)");
    orc->add_option("--budget", oo.budget, "node-expansion budget");

    auto* red = app.add_subcommand("reduce", "build a reduction instance from an exact-cover input");
    red->add_option("--in", in, "x3c file")->required();
    red->add_option("--out", out, "output sequence file (- for stdout)")->required();
    red->add_option("--report", report, "write the capacity report");
    red->add_option("--params", params_path, "key=value parameter overrides");

    auto* wit = app.add_subcommand("witness", "build a witness heap from a known exact cover");
    wit->add_option("--in", in, "x3c file")->required();
    wit->add_option("--cover", cover, "comma-separated 0-based set indices")->required();
    wit->add_option("--seq", seq_path, "instance sequence file")->required();
    wit->add_option("--out", out, "output tree file")->required();
    wit->add_option("--params", params_path, "key=value parameter overrides");

    auto* sim = app.add_subcommand("simulate", "seeded Monte Carlo reports (CSV)");
    sim->add_option("fig", so.fig, "fig3|fig4|fig5")->required();
    sim->add_option("--ns", so.ns, "comma-separated sizes");
    sim->add_option("--trials", so.trials, "trials per size");
    sim->add_option("--seed", so.seed, "master seed")->required();
    sim->add_option("--out", so.out, "output csv file (- for stdout)");
    sim->add_option("--jobs", so.jobs, "worker threads for trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (decide->parsed()) return run_decide(in, witness);
        if (c01->parsed()) return run_complete01(in, witness, padded);
        if (verify->parsed()) return run_verify(seq_path, tree, want_complete);
        if (lhs->parsed()) return run_lhs(lo);
        if (lchs->parsed()) return run_lchs(lo);
        if (orc->parsed()) return run_oracle(oo);
        if (red->parsed()) return run_reduce(in, out, report, params_path);
        if (wit->parsed()) return run_witness(in, cover, seq_path, out, params_path);
        if (sim->parsed()) return run_simulate(so);
    } catch (const heapseq::oracle::budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_exhausted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
