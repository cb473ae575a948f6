#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "heapseq/greedy.hpp"
#include "heapseq/oracle.hpp"
#include "heapseq/rng.hpp"
#include "heapseq/subseq.hpp"

namespace heapseq::experiments {

// Seeded Monte Carlo harness. Per-trial seeds are derived from
// (master_seed, n, trial), so results are byte-identical across runs and
// worker counts; trials write into an indexed buffer and aggregation is a
// single pass in index order.

struct sim_row {
    std::int64_t n = 0;
    std::int64_t trials = 0;
    std::string stat;
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    bool exact = false;
};

struct sim_report {
    std::uint64_t master_seed = 0;
    std::vector<sim_row> rows;

    std::string to_csv() const {
        std::ostringstream os;
        os << "# generator: " << rng_identity << "\n";
        os << "n,trials,stat,mean,stderr,exact,seed\n";
        char buf[64];
        for (const auto& r : rows) {
            os << r.n << ',' << r.trials << ',' << r.stat << ',';
            std::snprintf(buf, sizeof buf, "%.12g", r.mean);
            os << buf << ',';
            std::snprintf(buf, sizeof buf, "%.12g", r.stderr_of_mean);
            os << buf << ',' << (r.exact ? 1 : 0) << ',' << master_seed << "\n";
        }
        return os.str();
    }
};

namespace detail_sim {

struct moments {
    double mean = 0.0;
    double sem = 0.0; // sample sd / sqrt(trials)
};

inline moments aggregate(const std::vector<double>& vals) {
    moments m;
    const auto k = static_cast<double>(vals.size());
    if (vals.empty()) return m;
    double sum = 0.0;
    for (const auto v : vals) sum += v;
    m.mean = sum / k;
    if (vals.size() > 1) {
        double ss = 0.0;
        for (const auto v : vals) ss += (v - m.mean) * (v - m.mean);
        m.sem = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
    return m;
}

// Runs `trials` independent trials with derived seeds, optionally across
// threads; fn(trial, rng) returns one or more named statistics.
template <class F>
std::vector<std::vector<double>> run_trials(std::int64_t n, std::int64_t trials,
                                            std::uint64_t master, int jobs, std::size_t stats,
                                            F&& fn) {
    std::vector<std::vector<double>> out(stats, std::vector<double>(static_cast<std::size_t>(trials)));
    jobs = std::max(jobs, 1);
    auto worker = [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t t = lo; t < hi; ++t) {
            rng256 rng(derive_seed(master, static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(t)));
            const auto vals = fn(t, rng);
            for (std::size_t s = 0; s < stats; ++s) out[s][static_cast<std::size_t>(t)] = vals[s];
        }
    };
    if (jobs == 1 || trials < 2 * jobs) {
        worker(0, trials);
    } else {
        std::vector<std::thread> pool;
        const auto chunk = (trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            const auto lo = j * chunk;
            const auto hi = std::min<std::int64_t>(trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

} // namespace detail_sim

// Probability that a random permutation is heapable: exact enumeration for
// n <= 10, Monte Carlo above.
inline sim_report sim_heapable_prob(const std::vector<std::int64_t>& ns, std::int64_t trials,
                                    std::uint64_t master_seed, int jobs = 1) {
    sim_report rep;
    rep.master_seed = master_seed;
    for (const auto n : ns) {
        if (n <= 10) {
            const auto p = oracle::exact_heapable_prob(static_cast<int>(n));
            rep.rows.push_back({n, static_cast<std::int64_t>(p.total), "p_heapable", p.value(),
                                0.0, true});
            continue;
        }
        auto vals = detail_sim::run_trials(n, trials, master_seed, jobs, 1,
                                           [&](std::int64_t, rng256& rng) {
            const auto perm = random_permutation(static_cast<std::size_t>(n), rng);
            return std::vector<double>{
                decide_heapable(std::span<const rank_t>(perm)).heapable ? 1.0 : 0.0};
        });
        const auto m = detail_sim::aggregate(vals[0]);
        rep.rows.push_back({n, trials, "p_heapable", m.mean, m.sem, false});
    }
    return rep;
}

// Bootstrapped two-phase strategy: heap size and examined (candidate)
// fraction, both relative to n.
inline sim_report sim_thm4(const std::vector<std::int64_t>& ns, std::int64_t trials,
                           std::uint64_t master_seed, int jobs = 1) {
    sim_report rep;
    rep.master_seed = master_seed;
    for (const auto n : ns) {
        auto vals = detail_sim::run_trials(n, trials, master_seed, jobs, 2,
                                           [&](std::int64_t, rng256& rng) {
            const auto stream = uniform_stream(static_cast<std::size_t>(n), rng);
            const auto r = lhs_bootstrap(std::span<const double>(stream));
            double examined = 0;
            for (const auto& ph : r.phases)
                if (ph.label == "b1-two-phase" || ph.label == "b2-greedy") examined += ph.examined;
            return std::vector<double>{
                static_cast<double>(r.tree.size()) / static_cast<double>(n),
                examined / static_cast<double>(n)};
        });
        const auto m0 = detail_sim::aggregate(vals[0]);
        const auto m1 = detail_sim::aggregate(vals[1]);
        rep.rows.push_back({n, trials, "placed_frac", m0.mean, m0.sem, false});
        rep.rows.push_back({n, trials, "examined_frac", m1.mean, m1.sem, false});
    }
    return rep;
}

// Online banding: perfect-heap level count and node fraction.
inline sim_report sim_banding(const std::vector<std::int64_t>& ns, std::int64_t trials,
                              std::uint64_t master_seed, int jobs = 1) {
    sim_report rep;
    rep.master_seed = master_seed;
    for (const auto n : ns) {
        auto vals = detail_sim::run_trials(n, trials, master_seed, jobs, 2,
                                           [&](std::int64_t, rng256& rng) {
            const auto stream = uniform_stream(static_cast<std::size_t>(n), rng);
            const auto r = lchs_banding_online(std::span<const double>(stream));
            const auto sz = static_cast<std::int64_t>(r.tree.size());
            const double levels = r.tree.empty() ? 0.0 : static_cast<double>(r.tree.depth());
            return std::vector<double>{levels,
                                       static_cast<double>(sz) / static_cast<double>(n)};
        });
        const auto m0 = detail_sim::aggregate(vals[0]);
        const auto m1 = detail_sim::aggregate(vals[1]);
        rep.rows.push_back({n, trials, "levels", m0.mean, m0.sem, false});
        rep.rows.push_back({n, trials, "nodes_frac", m1.mean, m1.sem, false});
    }
    return rep;
}

} // namespace heapseq::experiments
