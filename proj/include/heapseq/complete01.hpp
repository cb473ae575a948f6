#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <vector>

#include "heapseq/core.hpp"

namespace heapseq {

// ---------------------------------------------------------------------------
// Complete heapability of 0-1 sequences in linear time.
//
// Any completely heapable 0-1 sequence fits a canonical shape that depends
// only on the number of ones: in a perfect tree, the first m positions of a
// post-order traversal carry the ones. Those positions form a forest of
// perfect subtrees whose sizes realize the off-by-one binary decomposition
// m = sum a_l (2^l - 1) with a_l in {0,1} except the last nonzero
// coefficient, which may be 2.
// ---------------------------------------------------------------------------

// Appends ones up to the next 2^k - 1 length. A complete witness for the
// original sequence extends to the padded one (appended ones take the next
// level-order slots), so padding never turns a yes into a no; at non-perfect
// lengths it can turn a no into a yes, and the decider below answers the
// padded question.
inline std::vector<rank_t> pad_to_perfect(std::span<const rank_t> seq01) {
    std::vector<rank_t> out(seq01.begin(), seq01.end());
    std::size_t cap = 0;
    while (cap < out.size()) cap = 2 * cap + 1;
    out.resize(cap, 1);
    return out;
}

inline std::vector<rank_t> pad_to_perfect(const std::vector<rank_t>& s) {
    return pad_to_perfect(std::span<const rank_t>(s));
}

struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The canonical target labelling for n = 2^k - 1 positions and m ones.
// Positions use heap indexing (root 0, children 2p+1 / 2p+2).
struct canonical_shape {
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::vector<std::int64_t> zero_order;                 // pre-order of the zero positions
    std::vector<std::vector<std::int64_t>> one_queues;    // per 1-tree pre-order, tallest first
    std::vector<std::int64_t> one_tree_roots;             // same order as one_queues
};

namespace detail01 {

inline void post_order(std::int64_t p, std::int64_t n, std::vector<std::int64_t>& out) {
    if (p >= n) return;
    post_order(2 * p + 1, n, out);
    post_order(2 * p + 2, n, out);
    out.push_back(p);
}

inline void pre_order(std::int64_t p, std::int64_t n, std::vector<std::int64_t>& out) {
    if (p >= n) return;
    out.push_back(p);
    pre_order(2 * p + 1, n, out);
    pre_order(2 * p + 2, n, out);
}

inline void pre_order_filtered(std::int64_t p, std::int64_t n, const std::vector<char>& keep,
                               std::vector<std::int64_t>& out) {
    if (p >= n) return;
    if (keep[static_cast<std::size_t>(p)]) out.push_back(p);
    pre_order_filtered(2 * p + 1, n, keep, out);
    pre_order_filtered(2 * p + 2, n, keep, out);
}

} // namespace detail01

inline canonical_shape build_canonical(std::int64_t n, std::int64_t m) {
    if (n < 0 || ((n + 1) & n) != 0)
        throw shape_error("build_canonical: n must be 2^k - 1");
    if (m < 0 || m > n) throw shape_error("build_canonical: m out of range");
    canonical_shape cs;
    cs.n = n;
    cs.m = m;
    if (n == 0) return cs;

    std::vector<std::int64_t> post;
    post.reserve(static_cast<std::size_t>(n));
    detail01::post_order(0, n, post);
    std::vector<char> is_one(static_cast<std::size_t>(n), 0);
    for (std::int64_t i = 0; i < m; ++i) is_one[static_cast<std::size_t>(post[static_cast<std::size_t>(i)])] = 1;

    // Forest roots: one-positions whose parent is a zero (or the tree root).
    std::vector<std::int64_t> roots;
    for (std::int64_t p = 0; p < n; ++p) {
        if (!is_one[static_cast<std::size_t>(p)]) continue;
        if (p == 0 || !is_one[static_cast<std::size_t>((p - 1) / 2)]) roots.push_back(p);
    }
    // Height = levels of the perfect subtree below the root position.
    auto height = [&](std::int64_t p) {
        int h = 0;
        while (p < n) { ++h; p = 2 * p + 1; }
        return h;
    };
    std::stable_sort(roots.begin(), roots.end(),
                     [&](std::int64_t a, std::int64_t b) { return height(a) > height(b); });
    for (const auto r : roots) {
        std::vector<std::int64_t> q;
        detail01::pre_order(r, n, q);
        cs.one_tree_roots.push_back(r);
        cs.one_queues.push_back(std::move(q));
    }
    std::vector<char> is_zero(static_cast<std::size_t>(n), 0);
    for (std::int64_t p = 0; p < n; ++p)
        is_zero[static_cast<std::size_t>(p)] = !is_one[static_cast<std::size_t>(p)];
    detail01::pre_order_filtered(0, n, is_zero, cs.zero_order);
    return cs;
}

struct complete01_result {
    bool heapable = false;
    std::int64_t failed_index = -1;      // index into the padded sequence
    std::vector<rank_t> padded;
    heap_tree<rank_t> witness;           // over the padded sequence; perfect on success
};

// Algorithm: assign zeros along the canonical pre-order and ones from the
// queue of released 1-trees; a 1-tree is released once the parent position
// of its root holds a zero (the root-position tree, present only when every
// entry is a one, is released immediately).
inline complete01_result complete_heap_01(std::span<const rank_t> seq01) {
    for (const auto v : seq01)
        if (v != 0 && v != 1) throw std::invalid_argument("complete_heap_01: entries must be 0/1");

    complete01_result res;
    res.padded = pad_to_perfect(seq01);
    const auto n = static_cast<std::int64_t>(res.padded.size());
    if (n == 0) {
        res.heapable = true; // vacuous
        return res;
    }
    std::int64_t m = 0;
    for (const auto v : res.padded) m += v;
    const auto shape = build_canonical(n, m);

    // Map: parent position -> indices of 1-trees it releases.
    std::vector<std::vector<std::size_t>> releases(static_cast<std::size_t>(n));
    std::deque<std::int64_t> available;
    for (std::size_t t = 0; t < shape.one_tree_roots.size(); ++t) {
        const auto r = shape.one_tree_roots[t];
        if (r == 0) {
            for (const auto p : shape.one_queues[t]) available.push_back(p);
        } else {
            releases[static_cast<std::size_t>((r - 1) / 2)].push_back(t);
        }
    }

    std::vector<std::int64_t> assigned_pos(static_cast<std::size_t>(n), -1);
    std::size_t next_zero = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t pos;
        if (res.padded[static_cast<std::size_t>(i)] == 0) {
            pos = shape.zero_order[next_zero++];
            for (const auto t : releases[static_cast<std::size_t>(pos)])
                for (const auto p : shape.one_queues[t]) available.push_back(p);
        } else {
            if (available.empty()) {
                res.failed_index = i;
                return res;
            }
            pos = available.front();
            available.pop_front();
        }
        assigned_pos[static_cast<std::size_t>(i)] = pos;
    }

    // Materialize the witness tree from the position assignment.
    std::vector<std::int32_t> node_at(static_cast<std::size_t>(n), no_node);
    for (std::int64_t i = 0; i < n; ++i) {
        const auto pos = assigned_pos[static_cast<std::size_t>(i)];
        const auto v = res.padded[static_cast<std::size_t>(i)];
        if (pos == 0) {
            node_at[0] = res.witness.add_root(v, i);
        } else {
            const auto par = (pos - 1) / 2;
            const int side = pos % 2 == 1 ? 0 : 1;
            node_at[static_cast<std::size_t>(pos)] =
                res.witness.add_child(node_at[static_cast<std::size_t>(par)], side, v, i);
        }
    }
    res.heapable = true;
    return res;
}

inline complete01_result complete_heap_01(const std::vector<rank_t>& s) {
    return complete_heap_01(std::span<const rank_t>(s));
}

} // namespace heapseq
