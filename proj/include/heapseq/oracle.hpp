#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <unordered_map>
#include <vector>

#include "heapseq/core.hpp"
#include "heapseq/greedy.hpp"

namespace heapseq::oracle {

// Exponential-time reference implementations. Every search takes an explicit
// node-expansion budget and reports exhaustion instead of guessing.

struct search_budget {
    std::int64_t max_nodes = 20'000'000;
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class verdict { yes, no, exhausted };

namespace detail {

struct out_of_budget {};

inline void charge(std::int64_t& left) {
    if (--left < 0) throw out_of_budget{};
}

// Order-preserving compression of arbitrary ordered keys to dense ids, so
// search states are small integer vectors with exact (collision-free)
// memoization.
template <class T>
std::vector<std::int32_t> compress(std::span<const T> seq) {
    std::vector<T> sorted(seq.begin(), seq.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::int32_t> ids(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        ids[i] = static_cast<std::int32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), seq[i]) - sorted.begin());
    return ids;
}

struct vec_hash {
    std::size_t operator()(const std::vector<std::int32_t>& v) const {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL ^ v.size();
        for (auto x : v) {
            h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) + 0x9E3779B97F4A7C15ULL +
                 (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

using state_set = std::unordered_set<std::vector<std::int32_t>, vec_hash>;

// Backtracking over slot-value choices. Slots of equal value are
// interchangeable for plain heapability, so branching is over distinct
// eligible values only.
inline bool bt_heapable_rec(const std::vector<std::int32_t>& seq, std::size_t i,
                            std::vector<std::int32_t>& slots, // sorted multiset of slot values
                            std::vector<state_set>& failed, std::int64_t& left) {
    if (i == seq.size()) return true;
    charge(left);
    if (failed[i].contains(slots)) return false;
    const auto x = seq[i];
    // Candidate slots: distinct values <= x, tried from largest down.
    auto hi = std::upper_bound(slots.begin(), slots.end(), x);
    std::vector<std::int32_t> cands;
    for (auto it = hi; it != slots.begin();) {
        --it;
        if (cands.empty() || cands.back() != *it) cands.push_back(*it);
    }
    for (const auto v : cands) {
        std::vector<std::int32_t> next = slots;
        next.erase(std::lower_bound(next.begin(), next.end(), v));
        next.insert(std::upper_bound(next.begin(), next.end(), x), 2, x);
        if (bt_heapable_rec(seq, i + 1, next, failed, left)) return true;
    }
    failed[i].insert(slots);
    return false;
}

} // namespace detail

template <class T>
verdict bt_heapable(std::span<const T> seq, search_budget budget = {}) {
    if (seq.empty()) return verdict::yes;
    const auto ids = detail::compress(seq);
    std::vector<std::int32_t> slots{ids[0], ids[0]};
    std::vector<detail::state_set> failed(ids.size());
    std::int64_t left = budget.max_nodes;
    try {
        return detail::bt_heapable_rec(ids, 1, slots, failed, left) ? verdict::yes : verdict::no;
    } catch (detail::out_of_budget&) {
        return verdict::exhausted;
    }
}

template <class T>
verdict bt_heapable(const std::vector<T>& seq, search_budget budget = {}) {
    return bt_heapable(std::span<const T>(seq), budget);
}

namespace detail {

// Complete-heapability search over literal heap positions 0..n-1. A complete
// tree with n nodes occupies exactly those positions, so a full placement is
// complete by construction. State is (index, occupied mask, values at
// occupied positions that still have an open child), memoized exactly.
struct complete_search {
    const std::vector<std::int32_t>& seq;
    std::int64_t n;
    std::vector<std::int32_t> pos_val;
    std::uint64_t mask = 0;
    state_set visited;
    std::int64_t left;

    complete_search(const std::vector<std::int32_t>& s, std::int64_t budget)
        : seq(s), n(static_cast<std::int64_t>(s.size())), pos_val(s.size(), 0), left(budget) {}

    bool open(std::int64_t p) const { return p < n && !(mask >> p & 1); }

    std::vector<std::int32_t> state_key(std::size_t i) const {
        std::vector<std::int32_t> key;
        key.push_back(static_cast<std::int32_t>(i));
        key.push_back(static_cast<std::int32_t>(mask & 0xFFFFFFFFu));
        key.push_back(static_cast<std::int32_t>(mask >> 32));
        for (std::int64_t p = 0; p < n; ++p) {
            if (!(mask >> p & 1)) continue;
            if (open(2 * p + 1) || open(2 * p + 2)) {
                key.push_back(static_cast<std::int32_t>(p));
                key.push_back(pos_val[static_cast<std::size_t>(p)]);
            }
        }
        return key;
    }

    bool run(std::size_t i) {
        if (i == seq.size()) return true;
        charge(left);
        auto key = state_key(i);
        if (visited.contains(key)) return false;
        const auto x = seq[i];
        for (std::int64_t p = 0; p < n; ++p) {
            if (mask >> p & 1) continue;
            if (p == 0) {
                if (mask != 0) continue;
            } else {
                const auto par = (p - 1) / 2;
                if (!(mask >> par & 1)) continue;
                if (pos_val[static_cast<std::size_t>(par)] > x) continue;
            }
            mask |= std::uint64_t{1} << p;
            pos_val[static_cast<std::size_t>(p)] = x;
            if (run(i + 1)) return true;
            mask &= ~(std::uint64_t{1} << p);
        }
        visited.insert(std::move(key));
        return false;
    }
};

} // namespace detail

// Decides whether the whole sequence can be heaped into a complete binary
// tree. Padding with the alphabet maximum is unnecessary here: the position
// search handles non-perfect complete shapes directly.
template <class T>
verdict bt_completely_heapable(std::span<const T> seq, search_budget budget = {}) {
    if (seq.empty()) return verdict::yes;
    if (seq.size() > 63) return verdict::exhausted;
    const auto ids = detail::compress(seq);
    detail::complete_search cs(ids, budget.max_nodes);
    try {
        return cs.run(0) ? verdict::yes : verdict::no;
    } catch (detail::out_of_budget&) {
        return verdict::exhausted;
    }
}

template <class T>
verdict bt_completely_heapable(const std::vector<T>& seq, search_budget budget = {}) {
    return bt_completely_heapable(std::span<const T>(seq), budget);
}

// ---------------------------------------------------------------------------
// Exact longest heapable subsequence.
//
// Branch and bound over skip/take. A taken prefix is represented by its
// greedy signature: the greedy tree's signature pointwise-dominates the
// signature of every witness for the same chosen subsequence, so an element
// placeable on any witness is placeable on the greedy tree. The compression
// is therefore lossless for maximization.
// ---------------------------------------------------------------------------

struct subseq_result {
    std::int64_t length = 0;
    std::vector<std::int64_t> indices;
    bool exhausted = false;
};

namespace detail {

struct lhs_search {
    const std::vector<std::int32_t>& seq;
    std::vector<std::int64_t> chosen;
    std::vector<std::int64_t> best_set;
    std::int64_t best = 0;
    std::int64_t left;

    lhs_search(const std::vector<std::int32_t>& s, std::int64_t budget)
        : seq(s), left(budget) {}

    void run(std::size_t i, std::vector<std::int32_t>& slots) {
        const auto n = static_cast<std::int64_t>(seq.size());
        const auto count = static_cast<std::int64_t>(chosen.size());
        if (count > best) {
            best = count;
            best_set = chosen;
        }
        if (i == seq.size()) return;
        if (count + (n - static_cast<std::int64_t>(i)) <= best) return;
        charge(left);
        const auto x = seq[i];
        // take
        const bool can_take = slots.empty() || slots.front() <= x;
        if (can_take) {
            std::vector<std::int32_t> next = slots;
            if (next.empty()) {
                next.insert(next.end(), 2, x);
            } else {
                auto hi = std::upper_bound(next.begin(), next.end(), x);
                next.erase(std::prev(hi));
                next.insert(std::upper_bound(next.begin(), next.end(), x), 2, x);
            }
            chosen.push_back(static_cast<std::int64_t>(i));
            run(i + 1, next);
            chosen.pop_back();
        }
        // skip
        run(i + 1, slots);
    }
};

} // namespace detail

template <class T>
subseq_result exact_lhs(std::span<const T> seq, search_budget budget = {}) {
    if (seq.empty()) return {};
    const auto ids = detail::compress(seq);
    detail::lhs_search ls(ids, budget.max_nodes);
    std::vector<std::int32_t> slots;
    subseq_result r;
    try {
        ls.run(0, slots);
    } catch (detail::out_of_budget&) {
        r.exhausted = true;
    }
    r.length = ls.best;
    r.indices = ls.best_set;
    return r;
}

template <class T>
subseq_result exact_lhs(const std::vector<T>& seq, search_budget budget = {}) {
    return exact_lhs(std::span<const T>(seq), budget);
}

// ---------------------------------------------------------------------------
// Exact longest completely-heapable subsequence: skip/take over the literal
// position search. A chosen subsequence of length K must finish occupying
// exactly positions 0..K-1, so partial occupations with unfillable holes are
// pruned.
// ---------------------------------------------------------------------------

namespace detail {

struct lchs_search {
    const std::vector<std::int32_t>& seq;
    std::int64_t n;
    std::vector<std::int32_t> pos_val;
    std::uint64_t mask = 0;
    std::int64_t max_pos = -1; // largest occupied position
    std::vector<std::int64_t> chosen;
    std::vector<std::int64_t> best_set;
    std::int64_t best = 0;
    std::int64_t left;
    std::unordered_map<std::vector<std::int32_t>, std::int64_t, vec_hash> memo;

    lchs_search(const std::vector<std::int32_t>& s, std::int64_t budget)
        : seq(s), n(static_cast<std::int64_t>(s.size())), pos_val(s.size(), 0), left(budget) {}

    bool open(std::int64_t p) const { return p < n && !(mask >> p & 1); }

    std::vector<std::int32_t> state_key(std::size_t i) const {
        std::vector<std::int32_t> key;
        key.push_back(static_cast<std::int32_t>(i));
        key.push_back(static_cast<std::int32_t>(mask & 0xFFFFFFFFu));
        key.push_back(static_cast<std::int32_t>(mask >> 32));
        for (std::int64_t p = 0; p <= max_pos; ++p) {
            if (!(mask >> p & 1)) continue;
            if (open(2 * p + 1) || open(2 * p + 2)) {
                key.push_back(static_cast<std::int32_t>(p));
                key.push_back(pos_val[static_cast<std::size_t>(p)]);
            }
        }
        return key;
    }

    // Number of chosen elements whose final placement is already a valid
    // complete prefix: occupied positions must be 0..count-1 at the end.
    void run(std::size_t i) {
        const auto count = static_cast<std::int64_t>(chosen.size());
        const auto holes = max_pos + 1 - count;
        if (holes == 0 && count > best) {
            best = count;
            best_set = chosen;
        }
        if (i == seq.size()) return;
        const auto remaining = static_cast<std::int64_t>(seq.size() - i);
        if (count + remaining <= best) return;
        if (holes > remaining) return; // cannot fill the prefix anymore
        charge(left);
        auto key = state_key(i);
        if (auto it = memo.find(key); it != memo.end() && it->second >= remaining) return;
        memo[key] = remaining;
        const auto x = seq[i];
        for (std::int64_t p = 0; p < n; ++p) {
            if (mask >> p & 1) continue;
            if (p == 0) {
                if (mask != 0) continue;
            } else {
                const auto par = (p - 1) / 2;
                if (!(mask >> par & 1)) continue;
                if (pos_val[static_cast<std::size_t>(par)] > x) continue;
            }
            mask |= std::uint64_t{1} << p;
            pos_val[static_cast<std::size_t>(p)] = x;
            const auto saved = max_pos;
            max_pos = std::max(max_pos, p);
            chosen.push_back(static_cast<std::int64_t>(i));
            run(i + 1);
            chosen.pop_back();
            max_pos = saved;
            mask &= ~(std::uint64_t{1} << p);
        }
        run(i + 1); // skip
    }
};

} // namespace detail

template <class T>
subseq_result exact_lchs(std::span<const T> seq, search_budget budget = {}) {
    if (seq.empty()) return {};
    if (seq.size() > 63) return {.length = 0, .indices = {}, .exhausted = true};
    const auto ids = detail::compress(seq);
    detail::lchs_search ls(ids, budget.max_nodes);
    subseq_result r;
    try {
        ls.run(0);
    } catch (detail::out_of_budget&) {
        r.exhausted = true;
    }
    r.length = ls.best;
    r.indices = ls.best_set;
    return r;
}

template <class T>
subseq_result exact_lchs(const std::vector<T>& seq, search_budget budget = {}) {
    return exact_lchs(std::span<const T>(seq), budget);
}

// ---------------------------------------------------------------------------
// Exact LIS / LDS lengths via patience counting.
// ---------------------------------------------------------------------------

template <class T>
std::int64_t exact_lis(std::span<const T> seq) {
    std::vector<T> tops; // smallest achievable tail of an increasing run per length
    for (const auto& x : seq) {
        auto it = std::lower_bound(tops.begin(), tops.end(), x);
        if (it == tops.end())
            tops.push_back(x);
        else
            *it = x;
    }
    return static_cast<std::int64_t>(tops.size());
}

template <class T>
std::int64_t exact_lis(const std::vector<T>& seq) {
    return exact_lis(std::span<const T>(seq));
}

template <class T>
std::int64_t exact_lds(std::span<const T> seq) {
    std::vector<T> rev(seq.rbegin(), seq.rend());
    return exact_lis(std::span<const T>(rev));
}

template <class T>
std::int64_t exact_lds(const std::vector<T>& seq) {
    return exact_lds(std::span<const T>(seq));
}

// ---------------------------------------------------------------------------
// Exact heapability probability by full permutation enumeration.
// ---------------------------------------------------------------------------

struct exact_prob {
    std::uint64_t heapable = 0;
    std::uint64_t total = 0;
    double value() const { return static_cast<double>(heapable) / static_cast<double>(total); }
};

inline exact_prob exact_heapable_prob(int n) {
    if (n < 1 || n > 10)
        throw budget_error("exact_heapable_prob: n must be in [1, 10]; use Monte Carlo above");
    std::vector<rank_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    exact_prob p;
    do {
        ++p.total;
        if (decide_heapable(std::span<const rank_t>(perm)).heapable) ++p.heapable;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return p;
}

// ---------------------------------------------------------------------------
// Full witness enumeration for small sequences. Branches over candidate
// parent nodes (sides are interchangeable, so one slot per node); reports
// each witness as a parent-assignment vector indexed by element position,
// with -1 for the root. Used by structural claim checks.
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
void enumerate_rec(std::span<const T> seq, std::size_t i,
                   std::vector<std::int32_t>& parent, std::vector<int>& nchild,
                   std::vector<std::vector<std::int32_t>>& out, std::int64_t& left) {
    if (i == seq.size()) {
        out.push_back(parent);
        return;
    }
    charge(left);
    for (std::size_t j = 0; j < i; ++j) {
        if (nchild[j] >= 2) continue;
        if (seq[i] < seq[j]) continue;
        parent[i] = static_cast<std::int32_t>(j);
        ++nchild[j];
        enumerate_rec(seq, i + 1, parent, nchild, out, left);
        --nchild[j];
        parent[i] = no_node;
    }
}

} // namespace detail

struct witness_enumeration {
    std::vector<std::vector<std::int32_t>> parents; // one entry per witness
    bool exhausted = false;
};

template <class T>
witness_enumeration enumerate_witnesses(std::span<const T> seq, search_budget budget = {}) {
    witness_enumeration we;
    if (seq.empty()) return we;
    std::vector<std::int32_t> parent(seq.size(), no_node);
    std::vector<int> nchild(seq.size(), 0);
    std::int64_t left = budget.max_nodes;
    try {
        detail::enumerate_rec(seq, 1, parent, nchild, we.parents, left);
    } catch (detail::out_of_budget&) {
        we.exhausted = true;
    }
    return we;
}

template <class T>
witness_enumeration enumerate_witnesses(const std::vector<T>& seq, search_budget budget = {}) {
    return enumerate_witnesses(std::span<const T>(seq), budget);
}

} // namespace heapseq::oracle
