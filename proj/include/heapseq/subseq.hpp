#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "heapseq/core.hpp"
#include "heapseq/greedy.hpp"
#include "heapseq/rank_index.hpp"

namespace heapseq {

// ---------------------------------------------------------------------------
// Constructive heapable-subsequence strategies, offline and online, over the
// uniform and relative-ranking input models.
// ---------------------------------------------------------------------------

struct phase_stat {
    std::string label;
    std::int64_t examined = 0;
    std::int64_t placed = 0;
};

template <class T>
struct strategy_result {
    heap_tree<T> tree;
    std::vector<std::int64_t> kept;      // sorted source indices present in the tree
    std::int64_t skipped = 0;
    std::vector<phase_stat> phases;
    std::vector<std::int64_t> accepted;  // raw accept decisions in arrival order
};

namespace detail_sub {

template <class T>
void finalize(strategy_result<T>& r) {
    r.kept.clear();
    r.kept.reserve(r.tree.size());
    for (const auto& nd : r.tree.nodes) r.kept.push_back(nd.seq_index);
    std::sort(r.kept.begin(), r.kept.end());
}

inline std::int64_t perfect_below(std::int64_t len) {
    std::int64_t cap = 0;
    while (2 * cap + 1 <= len) cap = 2 * cap + 1;
    return cap;
}

} // namespace detail_sub

// ---------------------------------------------------------------------------
// Patience sorting. Returns the indices of one longest increasing
// subsequence; the number of piles equals the LIS length.
// ---------------------------------------------------------------------------

template <class T>
std::vector<std::int64_t> lis_patience(std::span<const T> seq) {
    std::vector<T> tops;
    std::vector<std::int64_t> top_idx;
    std::vector<std::int64_t> back(seq.size(), -1);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& x = seq[i];
        const auto p = static_cast<std::size_t>(
            std::lower_bound(tops.begin(), tops.end(), x) - tops.begin());
        if (p == tops.size()) {
            tops.push_back(x);
            top_idx.push_back(static_cast<std::int64_t>(i));
        } else {
            tops[p] = x;
            top_idx[p] = static_cast<std::int64_t>(i);
        }
        back[i] = p > 0 ? top_idx[p - 1] : -1;
    }
    std::vector<std::int64_t> chain;
    if (!top_idx.empty()) {
        for (auto at = top_idx.back(); at != -1; at = back[static_cast<std::size_t>(at)])
            chain.push_back(at);
        std::reverse(chain.begin(), chain.end());
    }
    return chain;
}

template <class T>
std::vector<std::int64_t> lis_patience(const std::vector<T>& seq) {
    return lis_patience(std::span<const T>(seq));
}

// ---------------------------------------------------------------------------
// Seed heap: an increasing chain truncated to the largest 2^d - 1 prefix and
// laid out level-order into a perfect tree, maximizing leaves per node.
// ---------------------------------------------------------------------------

template <class T>
heap_tree<T> seed_heap_from_chain(std::span<const T> values, std::span<const std::int64_t> indices) {
    if (values.empty()) throw empty_input_error("seed_heap_from_chain: empty chain");
    const auto keep = detail_sub::perfect_below(static_cast<std::int64_t>(values.size()));
    heap_tree<T> t;
    t.add_root(values[0], indices[0]);
    for (std::int64_t k = 1; k < keep; ++k)
        t.add_child(static_cast<std::int32_t>((k - 1) / 2), static_cast<int>((k - 1) % 2),
                    values[static_cast<std::size_t>(k)], indices[static_cast<std::size_t>(k)]);
    return t;
}

// ---------------------------------------------------------------------------
// Greedy fill of a stream onto an existing state. halt stops at the first
// unplaceable element; skip continues past failures.
// ---------------------------------------------------------------------------

enum class fill_mode { halt, skip };

struct fill_stats {
    std::int64_t examined = 0;
    std::int64_t placed = 0;
    std::int64_t halted_at = -1; // source index of the halting element
};

template <class T>
fill_stats greedy_fill(greedy_state<T>& st, std::span<const T> values,
                       std::span<const std::int64_t> indices, fill_mode mode,
                       std::vector<std::int64_t>* accepted = nullptr) {
    fill_stats fs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ++fs.examined;
        if (st.insert(values[i], indices[i])) {
            ++fs.placed;
            if (accepted) accepted->push_back(indices[i]);
        } else if (mode == fill_mode::halt) {
            fs.halted_at = indices[i];
            break;
        }
    }
    return fs;
}

// ---------------------------------------------------------------------------
// Offline uniform-model strategies.
//
// Two-phase: seed a heap from the LIS of the small-valued first half, then
// fill greedily with the large-valued second half. Bootstrap: run two-phase
// inside the sub-n^(-1/8) prefix window (rescaled to a fresh uniform
// instance), then fill with everything large in the remainder.
// ---------------------------------------------------------------------------

inline strategy_result<scored> lhs_two_phase(std::span<const double> stream,
                                             fill_mode mode = fill_mode::halt) {
    const auto n = static_cast<std::int64_t>(stream.size());
    const auto half = n / 2;
    strategy_result<scored> r;

    std::vector<scored> a1;
    for (std::int64_t i = 0; i < half; ++i)
        if (stream[static_cast<std::size_t>(i)] < 0.5)
            a1.push_back(scored{stream[static_cast<std::size_t>(i)], i});
    std::vector<scored> a2v;
    std::vector<std::int64_t> a2i;
    for (std::int64_t i = half; i < n; ++i)
        if (stream[static_cast<std::size_t>(i)] > 0.5) {
            a2v.push_back(scored{stream[static_cast<std::size_t>(i)], i});
            a2i.push_back(i);
        }

    const auto chain_pos = lis_patience(std::span<const scored>(a1));
    greedy_state<scored> st;
    std::int64_t seeded = 0;
    if (!chain_pos.empty()) {
        std::vector<scored> cv;
        std::vector<std::int64_t> ci;
        for (const auto p : chain_pos) {
            cv.push_back(a1[static_cast<std::size_t>(p)]);
            ci.push_back(a1[static_cast<std::size_t>(p)].index);
        }
        auto seed = seed_heap_from_chain(std::span<const scored>(cv), std::span<const std::int64_t>(ci));
        seeded = static_cast<std::int64_t>(seed.size());
        st = greedy_state<scored>::from_tree(std::move(seed));
        for (const auto& nd : st.tree().nodes) r.accepted.push_back(nd.seq_index);
        std::sort(r.accepted.begin(), r.accepted.end());
    }
    const auto a2_total = static_cast<std::int64_t>(a2v.size());
    std::int64_t a2_pre_placed = 0;
    if (st.empty()) {
        if (!a2v.empty()) {
            st.insert(a2v.front(), a2i.front());
            r.accepted.push_back(a2i.front());
            a2_pre_placed = 1;
            a2v.erase(a2v.begin());
            a2i.erase(a2i.begin());
        } else if (n > 0) {
            st.insert(scored{stream[0], 0}, 0);
            r.accepted.push_back(0);
            seeded = 1;
        }
    }
    r.phases.push_back({"a1-lis", static_cast<std::int64_t>(a1.size()), seeded});

    const auto fs = greedy_fill(st, std::span<const scored>(a2v), std::span<const std::int64_t>(a2i),
                                mode, &r.accepted);
    r.phases.push_back({"a2-greedy", a2_total, fs.placed + a2_pre_placed});
    r.tree = st.take_tree();
    r.skipped = n - static_cast<std::int64_t>(r.tree.size());
    detail_sub::finalize(r);
    return r;
}

inline strategy_result<scored> lhs_bootstrap(std::span<const double> stream,
                                             fill_mode mode = fill_mode::halt) {
    const auto n = static_cast<std::int64_t>(stream.size());
    strategy_result<scored> r;
    if (n == 0) return r;
    const auto window = std::min<std::int64_t>(n, static_cast<std::int64_t>(
        std::ceil(std::pow(static_cast<double>(n), 7.0 / 8.0))));
    const double theta = std::pow(static_cast<double>(n), -1.0 / 8.0);

    std::vector<double> b1_rescaled;
    std::vector<std::int64_t> b1_idx;
    for (std::int64_t i = 0; i < window; ++i) {
        const auto v = stream[static_cast<std::size_t>(i)];
        if (v < theta) {
            b1_rescaled.push_back(v / theta);
            b1_idx.push_back(i);
        }
    }

    // Recurse on the rescaled sub-instance, then restore raw values: the
    // rescaling is monotone, so the tree structure remains a valid heap.
    greedy_state<scored> st;
    std::int64_t b1_placed = 0;
    if (!b1_rescaled.empty()) {
        auto sub = lhs_two_phase(std::span<const double>(b1_rescaled), mode);
        heap_tree<scored> raw;
        raw.nodes.reserve(sub.tree.size());
        raw.root = sub.tree.root;
        for (const auto& nd : sub.tree.nodes) {
            const auto local = nd.seq_index;
            const auto global = b1_idx[static_cast<std::size_t>(local)];
            raw.nodes.push_back({scored{stream[static_cast<std::size_t>(global)], global}, global,
                                 nd.parent, nd.child});
        }
        b1_placed = static_cast<std::int64_t>(raw.size());
        st = greedy_state<scored>::from_tree(std::move(raw));
        for (const auto& nd : st.tree().nodes) r.accepted.push_back(nd.seq_index);
        std::sort(r.accepted.begin(), r.accepted.end());
    }
    r.phases.push_back({"b1-two-phase", static_cast<std::int64_t>(b1_idx.size()), b1_placed});

    std::vector<scored> b2v;
    std::vector<std::int64_t> b2i;
    for (std::int64_t i = window; i < n; ++i) {
        const auto v = stream[static_cast<std::size_t>(i)];
        if (v > theta) {
            b2v.push_back(scored{v, i});
            b2i.push_back(i);
        }
    }
    const auto b2_total = static_cast<std::int64_t>(b2v.size());
    std::int64_t b2_pre_placed = 0;
    if (st.empty() && !b2v.empty()) {
        st.insert(b2v.front(), b2i.front());
        r.accepted.push_back(b2i.front());
        b2_pre_placed = 1;
        b2v.erase(b2v.begin());
        b2i.erase(b2i.begin());
    }
    const auto fs = greedy_fill(st, std::span<const scored>(b2v), std::span<const std::int64_t>(b2i),
                                mode, &r.accepted);
    r.phases.push_back({"b2-greedy", b2_total, fs.placed + b2_pre_placed});
    r.tree = st.take_tree();
    r.skipped = n - static_cast<std::int64_t>(r.tree.size());
    detail_sub::finalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// Online increasing-subsequence policy: accept a value just above the chain
// head when the jump fits inside the remaining per-step budget
// (1 - head) * sqrt(2 / (horizon - t + 1)).
// ---------------------------------------------------------------------------

class online_chain_policy {
public:
    explicit online_chain_policy(std::int64_t horizon) : horizon_(std::max<std::int64_t>(horizon, 1)) {}

    // Offer the t-th eligible value (rescaled to (0,1)); true = accept.
    bool offer(double y) {
        ++t_;
        const auto remaining = std::max<std::int64_t>(horizon_ - t_ + 1, 1);
        const double budget = (1.0 - head_) * std::sqrt(2.0 / static_cast<double>(remaining));
        if (y > head_ && y - head_ <= budget) {
            head_ = y;
            return true;
        }
        return false;
    }

    double head() const { return head_; }

private:
    std::int64_t horizon_;
    std::int64_t t_ = 0;
    double head_ = 0.0;
};

inline std::vector<std::int64_t> online_lis_uniform(std::span<const double> stream,
                                                    std::int64_t horizon = -1) {
    if (horizon < 0) horizon = static_cast<std::int64_t>(stream.size());
    online_chain_policy policy(horizon);
    std::vector<std::int64_t> chain;
    for (std::size_t i = 0; i < stream.size(); ++i)
        if (policy.offer(stream[i])) chain.push_back(static_cast<std::int64_t>(i));
    return chain;
}

// Online heapable subsequence in the uniform model. The chain is grown
// online inside the n^(7/8) window among sub-n^(-1/8) values, becomes the
// seed at the window boundary, and every later arrival is offered to the
// greedy state (skip on failure; an online algorithm must not halt).
// `horizon` is the announced stream length; decisions depend only on it and
// the prefix seen so far, so a truncated stream replays identically.
inline strategy_result<scored> online_lhs_uniform(std::span<const double> stream,
                                                  std::int64_t horizon = -1) {
    const auto n = static_cast<std::int64_t>(stream.size());
    if (horizon < 0) horizon = n;
    strategy_result<scored> r;
    if (n == 0) return r;
    const auto window = std::min<std::int64_t>(horizon, static_cast<std::int64_t>(
        std::ceil(std::pow(static_cast<double>(horizon), 7.0 / 8.0))));
    const double theta = std::pow(static_cast<double>(horizon), -1.0 / 8.0);
    const auto chain_horizon = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(std::pow(static_cast<double>(horizon), 3.0 / 4.0))));

    online_chain_policy policy(chain_horizon);
    std::vector<scored> chain_v;
    std::vector<std::int64_t> chain_i;
    std::int64_t b1_count = 0;
    for (std::int64_t i = 0; i < std::min(window, n); ++i) {
        const auto v = stream[static_cast<std::size_t>(i)];
        if (v >= theta) continue;
        ++b1_count;
        if (policy.offer(v / theta)) {
            chain_v.push_back(scored{v, i});
            chain_i.push_back(i);
            r.accepted.push_back(i);
        }
    }

    greedy_state<scored> st;
    std::int64_t seeded = 0;
    if (!chain_v.empty()) {
        auto seed = seed_heap_from_chain(std::span<const scored>(chain_v),
                                         std::span<const std::int64_t>(chain_i));
        seeded = static_cast<std::int64_t>(seed.size());
        st = greedy_state<scored>::from_tree(std::move(seed));
    }
    r.phases.push_back({"b1-chain", b1_count, seeded});

    std::int64_t b2_count = 0, b2_placed = 0, extra_count = 0, extra_placed = 0;
    for (std::int64_t i = window; i < n; ++i) {
        const auto v = stream[static_cast<std::size_t>(i)];
        const bool in_b2 = v > theta;
        (in_b2 ? b2_count : extra_count)++;
        if (st.insert(scored{v, i}, i)) {
            (in_b2 ? b2_placed : extra_placed)++;
            r.accepted.push_back(i);
        }
    }
    r.phases.push_back({"b2-greedy", b2_count, b2_placed});
    r.phases.push_back({"tail-small", extra_count, extra_placed});
    r.tree = st.take_tree();
    r.skipped = n - static_cast<std::int64_t>(r.tree.size());
    detail_sub::finalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// Relative-ranking model. Elements are known only by rank among the prefix;
// an order-statistics index materializes comparisons, and the first eps*n
// arrivals serve as a calibration sample whose empirical quantiles stand in
// for values.
// ---------------------------------------------------------------------------

namespace detail_sub {

// Subinterval chain policy: split the lowest `span_count` calibration gaps
// into `groups` equal subintervals, walk one subgroup of arrivals per
// subinterval, and accept the first arrival that lands inside the current
// one. Accepted elements are strictly increasing because consecutive
// subintervals are separated by a calibration element.
struct subinterval_chain {
    std::int64_t span_count = 0; // calibration prefix being targeted
    std::int64_t groups = 1;
    std::int64_t group_len = 0;
    std::int64_t offered = 0;
    std::int64_t cur_group = -1;
    bool accepted_current = false;

    // q1 = number of calibration elements smaller than the arrival.
    // Accepted elements are strictly increasing: an accept in subgroup g has
    // fewer calibration elements below it than any accept in a later
    // subgroup, and both are separated by the boundary calibration element.
    bool offer(std::int64_t q1) {
        if (group_len <= 0 || span_count <= 0) {
            ++offered;
            return false;
        }
        const auto g = offered++ / group_len;
        if (g >= groups) return false;
        if (g != cur_group) {
            cur_group = g;
            accepted_current = false;
        }
        if (accepted_current) return false;
        const auto lo = g * span_count / groups;
        const auto hi = (g + 1) * span_count / groups;
        if (q1 >= lo && q1 < hi) {
            accepted_current = true;
            return true;
        }
        return false;
    }
};

} // namespace detail_sub

// Online LIS under relative ranks: calibrate on the first eps*n arrivals,
// then target the lower half of the calibration sample subinterval by
// subinterval. Returns arrival indices of the chain.
inline std::vector<std::int64_t> relrank_online_lis(std::span<const std::int64_t> ranks, double eps,
                                                    std::int64_t horizon = -1) {
    const auto n = static_cast<std::int64_t>(ranks.size());
    if (horizon < 0) horizon = n;
    std::vector<std::int64_t> chain;
    if (n == 0) return chain;
    const auto c = std::min<std::int64_t>(horizon,
                                          static_cast<std::int64_t>(eps * static_cast<double>(horizon)));
    rank_index idx;
    detail_sub::subinterval_chain policy;
    policy.span_count = c / 2;
    policy.groups = std::max<std::int64_t>(1, static_cast<std::int64_t>(
        std::floor(std::sqrt(static_cast<double>(horizon)))));
    const auto m = (horizon - c) / 2;
    policy.group_len = m / policy.groups;

    for (std::int64_t i = 0; i < n; ++i) {
        const auto r = ranks[static_cast<std::size_t>(i)];
        if (i < c) {
            idx.insert_at(r - 1, true);
            continue;
        }
        if (i - c < m) {
            const auto q1 = idx.flagged_before(r - 1);
            if (policy.offer(q1)) chain.push_back(i);
        }
        idx.insert_at(r - 1, false);
    }
    return chain;
}

namespace detail_sub {

// Greedy heap construction when elements are only comparable through the
// rank index. Slots are kept ordered by the current position of their
// parent element; relative order between existing elements never changes,
// so the comparator is stable.
class relrank_greedy {
public:
    explicit relrank_greedy(const rank_index& idx) : idx_(&idx), slots_(slot_cmp{&idx}) {}

    struct node {
        std::int32_t elem;       // rank_index node id
        std::int64_t seq_index;
        std::int32_t parent;
        std::array<std::int32_t, 2> child{no_node, no_node};
    };

    bool empty() const { return nodes_.empty(); }
    std::size_t size() const { return nodes_.size(); }
    const std::vector<node>& nodes() const { return nodes_; }

    // Explicitly place elem as a fresh root (first node only).
    void seed_root(std::int32_t elem, std::int64_t seq_index) {
        nodes_.push_back(node{elem, seq_index, no_node});
        open_slots(0);
    }

    // Adopt an existing chain/tree layout: nodes in the given parent order.
    void adopt(const std::vector<node>& nodes) {
        nodes_ = nodes;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            auto& nd = nodes_[i];
            nd.child = {no_node, no_node};
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto p = nodes_[i].parent;
            if (p == no_node) continue;
            auto& pn = nodes_[static_cast<std::size_t>(p)];
            pn.child[pn.child[0] == no_node ? 0 : 1] = static_cast<std::int32_t>(i);
        }
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const auto& nd = nodes_[i];
            for (int s = 1; s >= 0; --s)
                if (nd.child[s] == no_node)
                    slots_.insert(slot{nd.elem, static_cast<std::int32_t>(i), static_cast<std::int8_t>(s)});
        }
    }

    // Greedy insert of elem (already present in the rank index). Returns
    // true when placed.
    bool insert(std::int32_t elem, std::int64_t seq_index) {
        if (nodes_.empty()) {
            seed_root(elem, seq_index);
            return true;
        }
        auto it = slots_.lower_bound(slot{elem, no_node, 0});
        if (it == slots_.begin()) return false;
        --it;
        const auto target = *it;
        slots_.erase(it);
        nodes_.push_back(node{elem, seq_index, target.tree_node});
        const auto id = static_cast<std::int32_t>(nodes_.size() - 1);
        nodes_[static_cast<std::size_t>(target.tree_node)].child[target.side] = id;
        open_slots(id);
        return true;
    }

    // Convert to a value tree using final positions (1-based ranks).
    heap_tree<std::int64_t> materialize() const {
        heap_tree<std::int64_t> t;
        t.nodes.reserve(nodes_.size());
        for (const auto& nd : nodes_)
            t.nodes.push_back({idx_->position(nd.elem) + 1, nd.seq_index, nd.parent, nd.child});
        if (!nodes_.empty()) t.root = 0;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].parent == no_node) t.root = static_cast<std::int32_t>(i);
        return t;
    }

private:
    struct slot {
        std::int32_t elem;
        std::int32_t tree_node;
        std::int8_t side;
    };
    struct slot_cmp {
        const rank_index* idx;
        bool operator()(const slot& a, const slot& b) const {
            return idx->position(a.elem) < idx->position(b.elem);
        }
    };

    void open_slots(std::int32_t id) {
        const auto& nd = nodes_[static_cast<std::size_t>(id)];
        slots_.insert(slot{nd.elem, id, 1});
        slots_.insert(slot{nd.elem, id, 0});
    }

    const rank_index* idx_;
    std::vector<node> nodes_;
    std::multiset<slot, slot_cmp> slots_;
};

} // namespace detail_sub

// Online heapable subsequence under relative ranks: calibration, a chain
// window targeting the low calibration quantiles, then greedy placement of
// every later arrival. Window and threshold are n^(3/4) and the n^(-1/4)
// calibration quantile; these exponents are free choices for this model,
// and small windows waste fewer arrivals at practical n.
inline strategy_result<std::int64_t> relrank_online_lhs(std::span<const std::int64_t> ranks,
                                                        double eps, std::int64_t horizon = -1) {
    const auto n = static_cast<std::int64_t>(ranks.size());
    if (horizon < 0) horizon = n;
    strategy_result<std::int64_t> r;
    if (n == 0) return r;
    const auto c = std::min<std::int64_t>(horizon,
                                          static_cast<std::int64_t>(eps * static_cast<double>(horizon)));
    const auto window = std::min<std::int64_t>(
        horizon - c,
        static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(horizon), 3.0 / 4.0))));
    const auto q_theta = std::max<std::int64_t>(
        1, std::llround(std::pow(static_cast<double>(horizon), -0.25) * static_cast<double>(c)));

    rank_index idx;
    detail_sub::subinterval_chain policy;
    policy.span_count = q_theta;
    policy.groups = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(
        std::pow(static_cast<double>(horizon), 0.25))));
    // Subgroups partition the expected sub-threshold population of the window.
    const auto expected_b1 = std::max<std::int64_t>(
        1, std::llround(static_cast<double>(window) * static_cast<double>(q_theta) /
                        static_cast<double>(std::max<std::int64_t>(c, 1))));
    policy.group_len = std::max<std::int64_t>(1, expected_b1 / policy.groups);

    std::vector<detail_sub::relrank_greedy::node> chain_nodes;
    detail_sub::relrank_greedy heap(idx);
    std::int64_t b1_count = 0, b2_count = 0, b2_placed = 0, extra_count = 0, extra_placed = 0;
    bool seeded = false;

    for (std::int64_t i = 0; i < n; ++i) {
        const auto rk = ranks[static_cast<std::size_t>(i)];
        if (i < c) {
            idx.insert_at(rk - 1, true);
            continue;
        }
        const auto q1 = idx.flagged_before(rk - 1);
        const auto elem = idx.insert_at(rk - 1, false);
        if (i - c < window) {
            if (q1 < q_theta) {
                ++b1_count;
                if (policy.offer(q1)) {
                    // Chain grows as a path: parent is the previous chain node.
                    const auto parent = chain_nodes.empty()
                                            ? no_node
                                            : static_cast<std::int32_t>(chain_nodes.size() - 1);
                    chain_nodes.push_back({elem, i, parent});
                    r.accepted.push_back(i);
                }
            }
            continue;
        }
        if (!seeded) {
            heap.adopt(chain_nodes);
            seeded = true;
        }
        const bool in_b2 = q1 >= q_theta;
        (in_b2 ? b2_count : extra_count)++;
        if (heap.insert(elem, i)) {
            (in_b2 ? b2_placed : extra_placed)++;
            r.accepted.push_back(i);
        }
    }
    if (!seeded) heap.adopt(chain_nodes);

    r.phases.push_back({"calibration", c, 0});
    r.phases.push_back({"b1-chain", b1_count, static_cast<std::int64_t>(chain_nodes.size())});
    r.phases.push_back({"b2-greedy", b2_count, b2_placed});
    r.phases.push_back({"tail-small", extra_count, extra_placed});
    r.tree = heap.materialize();
    r.skipped = n - static_cast<std::int64_t>(r.tree.size());
    detail_sub::finalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// Banding: assign disjoint ascending value bands to successive levels of a
// complete heap built online.
// ---------------------------------------------------------------------------

struct band_schedule {
    std::int64_t t0 = 0;
    struct level {
        std::int64_t u = 0; // window length in arrivals
        double v = 0.0;     // band width in value units
        double lo = 0.0, hi = 0.0;
    };
    std::vector<level> levels;
    std::int64_t total_u = 0;
    double total_v = 0.0;
};

// u_i = ceil((sqrt 2)^(i+1) sqrt(t0) sqrt(n)), v_i = u_i / n, capped so that
// sum u_i <= n/2 and sum v_i <= 1/2; bands tile (1/2, 1/2 + sum v_i).
inline band_schedule make_band_schedule(std::int64_t n, std::int64_t t0) {
    band_schedule s;
    s.t0 = t0;
    if (n <= 0 || t0 <= 0) return s;
    double lo = 0.5;
    for (int i = 1;; ++i) {
        const double raw = std::pow(std::sqrt(2.0), i + 1) *
                           std::sqrt(static_cast<double>(t0)) * std::sqrt(static_cast<double>(n));
        if (raw > static_cast<double>(n)) break;
        const auto u = static_cast<std::int64_t>(std::ceil(raw));
        const double v = static_cast<double>(u) / static_cast<double>(n);
        if (2 * (s.total_u + u) > n) break;
        if (s.total_v + v > 0.5) break;
        s.levels.push_back({u, v, lo, lo + v});
        s.total_u += u;
        s.total_v += v;
        lo += v;
    }
    return s;
}

namespace detail_sub {

// Shared banded-fill skeleton. `in_band(level, arrival) -> bool` decides
// acceptance; levels are filled left to right, a window that closes before
// its level is full aborts further growth, and a trailing partial level is
// dropped so the output is a perfect heap.
struct band_fill {
    const band_schedule& sched;
    std::int64_t level = 0;       // 0-based into sched.levels
    std::int64_t consumed = 0;    // arrivals consumed in the current window
    std::int64_t filled = 0;      // nodes placed in the current level
    bool aborted = false;

    // Returns the in-level position to fill, or -1.
    std::int64_t offer(bool value_in_current_band) {
        if (aborted || level >= static_cast<std::int64_t>(sched.levels.size())) return -1;
        const auto& lv = sched.levels[static_cast<std::size_t>(level)];
        const auto need = sched.t0 << (level + 1);
        std::int64_t placed_at = -1;
        if (value_in_current_band && filled < need) placed_at = filled++;
        if (++consumed == lv.u) {
            if (filled < need) {
                aborted = true;
            } else {
                ++level;
                consumed = 0;
                filled = 0;
            }
        }
        return placed_at;
    }

    std::int64_t current_level() const { return level; }
};

} // namespace detail_sub

// Online completely-heapable subsequence, uniform model: an online chain on
// the small half seeds the first levels, then each subsequent level accepts
// values from its own band left to right.
inline strategy_result<scored> lchs_banding_online(std::span<const double> stream,
                                                   std::int64_t horizon = -1) {
    const auto n = static_cast<std::int64_t>(stream.size());
    if (horizon < 0) horizon = n;
    strategy_result<scored> r;
    if (n == 0) return r;
    const auto half = horizon / 2;

    online_chain_policy policy(std::max<std::int64_t>(1, horizon / 4));
    std::vector<scored> chain_v;
    std::vector<std::int64_t> chain_i;
    std::int64_t eligible = 0;
    for (std::int64_t i = 0; i < std::min(half, n); ++i) {
        const auto v = stream[static_cast<std::size_t>(i)];
        if (v >= 0.5) continue;
        ++eligible;
        if (policy.offer(2.0 * v)) {
            chain_v.push_back(scored{v, i});
            chain_i.push_back(i);
            r.accepted.push_back(i);
        }
    }
    if (n <= half) {
        // Horizon boundary not reached: only chain decisions were made.
        heap_tree<scored> partial;
        if (!chain_v.empty())
            partial = seed_heap_from_chain(std::span<const scored>(chain_v),
                                           std::span<const std::int64_t>(chain_i));
        r.phases.push_back({"seed-chain", eligible, static_cast<std::int64_t>(partial.size())});
        r.phases.push_back({"bands", 0, 0});
        r.tree = std::move(partial);
        r.skipped = n - static_cast<std::int64_t>(r.tree.size());
        detail_sub::finalize(r);
        return r;
    }

    heap_tree<scored> tree;
    std::int64_t start = half;
    if (!chain_v.empty()) {
        tree = seed_heap_from_chain(std::span<const scored>(chain_v),
                                    std::span<const std::int64_t>(chain_i));
    } else {
        // No usable chain: fall back to the first small element after the
        // boundary, or give up banding and return the first arrival alone.
        std::int64_t root_at = -1;
        for (std::int64_t i = half; i < n; ++i)
            if (stream[static_cast<std::size_t>(i)] < 0.5) { root_at = i; break; }
        if (root_at == -1) {
            // Last resort: keep the first arrival alone. This is output
            // assembly, not an online accept, so it stays off the decision
            // log.
            tree.add_root(scored{stream[0], 0}, 0);
            r.phases.push_back({"seed-chain", eligible, 1});
            r.phases.push_back({"bands", 0, 0});
            r.tree = std::move(tree);
            r.skipped = n - 1;
            detail_sub::finalize(r);
            return r;
        }
        tree.add_root(scored{stream[static_cast<std::size_t>(root_at)], root_at}, root_at);
        r.accepted.push_back(root_at);
        start = root_at + 1;
    }
    const auto seed_levels = tree.depth();
    const auto t0 = std::int64_t{1} << (seed_levels - 1);
    r.phases.push_back({"seed-chain", eligible, static_cast<std::int64_t>(tree.size())});

    const auto sched = make_band_schedule(horizon, t0);
    detail_sub::band_fill fill{sched};
    // Per-level node ids; level l of the final tree has t0 * 2^l nodes.
    std::vector<std::vector<std::int32_t>> level_nodes(1);
    {
        // Bottom level of the seed, left to right.
        std::vector<std::int32_t> frontier;
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(tree.size()); ++i)
            if (tree.nodes[static_cast<std::size_t>(i)].child_count() == 0) frontier.push_back(i);
        level_nodes[0] = std::move(frontier);
    }
    std::int64_t banded_examined = 0, completed_levels = 0;
    for (std::int64_t i = start; i < n && !fill.aborted; ++i) {
        const auto lvl = fill.current_level();
        if (lvl >= static_cast<std::int64_t>(sched.levels.size())) break;
        ++banded_examined;
        const auto& band = sched.levels[static_cast<std::size_t>(lvl)];
        const auto v = stream[static_cast<std::size_t>(i)];
        const bool in_band = v >= band.lo && v < band.hi;
        const auto pos = fill.offer(in_band);
        if (pos >= 0) {
            if (static_cast<std::int64_t>(level_nodes.size()) <= lvl + 1) level_nodes.resize(lvl + 2);
            const auto parent = level_nodes[static_cast<std::size_t>(lvl)][static_cast<std::size_t>(pos / 2)];
            const auto id = tree.add_child(parent, static_cast<int>(pos % 2), scored{v, i}, i);
            level_nodes[static_cast<std::size_t>(lvl + 1)].push_back(id);
            r.accepted.push_back(i);
        }
        if (fill.current_level() > lvl) ++completed_levels;
    }

    // Drop a trailing partial level so the reported heap is perfect.
    if (static_cast<std::int64_t>(level_nodes.size()) > completed_levels + 1) {
        heap_tree<scored> trimmed;
        const auto& partial = level_nodes.back();
        std::vector<char> drop(tree.size(), 0);
        for (const auto id : partial) drop[static_cast<std::size_t>(id)] = 1;
        std::vector<std::int32_t> remap(tree.size(), no_node);
        for (std::size_t i = 0; i < tree.size(); ++i) {
            if (drop[i]) continue;
            const auto& nd = tree.nodes[i];
            if (nd.parent == no_node)
                remap[i] = trimmed.add_root(nd.value, nd.seq_index);
            else {
                const auto p = remap[static_cast<std::size_t>(nd.parent)];
                const int side = tree.nodes[static_cast<std::size_t>(nd.parent)].child[0] ==
                                         static_cast<std::int32_t>(i)
                                     ? 0
                                     : 1;
                remap[i] = trimmed.add_child(p, side, nd.value, nd.seq_index);
            }
        }
        tree = std::move(trimmed);
    }
    r.phases.push_back({"bands", banded_examined, static_cast<std::int64_t>(tree.size()) -
                                                       (std::int64_t{1} << seed_levels) + 1});
    r.tree = std::move(tree);
    r.skipped = n - static_cast<std::int64_t>(r.tree.size());
    detail_sub::finalize(r);
    return r;
}

// Relative-ranking banding: bands become calibration-rank intervals taken
// from the upper half of the first eps*n arrivals.
inline strategy_result<std::int64_t> lchs_banding_relrank(std::span<const std::int64_t> ranks,
                                                          double eps, std::int64_t horizon = -1) {
    const auto n = static_cast<std::int64_t>(ranks.size());
    if (horizon < 0) horizon = n;
    strategy_result<std::int64_t> r;
    if (n == 0) return r;
    const auto c = std::min<std::int64_t>(horizon,
                                          static_cast<std::int64_t>(eps * static_cast<double>(horizon)));

    rank_index idx;
    detail_sub::subinterval_chain policy;
    policy.span_count = c / 2;
    policy.groups = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(
        std::sqrt(static_cast<double>(horizon)))));
    const auto m = (horizon - c) / 2;
    policy.group_len = m / policy.groups;

    std::vector<detail_sub::relrank_greedy::node> chain_nodes;
    detail_sub::relrank_greedy heap(idx);
    std::int64_t eligible = 0;

    std::int64_t i = 0;
    for (; i < n && i < c + m; ++i) {
        const auto rk = ranks[static_cast<std::size_t>(i)];
        if (i < c) {
            idx.insert_at(rk - 1, true);
            continue;
        }
        const auto q1 = idx.flagged_before(rk - 1);
        const auto elem = idx.insert_at(rk - 1, false);
        if (q1 < policy.span_count) ++eligible;
        if (policy.offer(q1)) {
            chain_nodes.push_back({elem, i,
                                   chain_nodes.empty() ? no_node
                                                       : static_cast<std::int32_t>(chain_nodes.size() - 1)});
            r.accepted.push_back(i);
        }
    }

    // Rebuild the chain as a perfect level-order seed.
    const auto keep = detail_sub::perfect_below(static_cast<std::int64_t>(chain_nodes.size()));
    std::vector<detail_sub::relrank_greedy::node> seed_nodes;
    for (std::int64_t k = 0; k < keep; ++k) {
        auto nd = chain_nodes[static_cast<std::size_t>(k)];
        nd.parent = k == 0 ? no_node : static_cast<std::int32_t>((k - 1) / 2);
        seed_nodes.push_back(nd);
    }
    std::int64_t seed_levels = 0;
    while ((std::int64_t{1} << (seed_levels + 1)) - 1 <= keep && keep > 0) ++seed_levels;
    if (keep == 0) {
        // Fallback root: first post-boundary arrival below the calibration
        // median; otherwise a lone root from the first arrival.
        for (; i < n; ++i) {
            const auto rk = ranks[static_cast<std::size_t>(i)];
            const auto q1 = idx.flagged_before(rk - 1);
            const auto elem = idx.insert_at(rk - 1, false);
            if (q1 <= c / 2) {
                seed_nodes.push_back({elem, i, no_node});
                r.accepted.push_back(i);
                ++i;
                break;
            }
        }
        if (seed_nodes.empty()) {
            r.phases.push_back({"seed-chain", eligible, 0});
            r.phases.push_back({"bands", 0, 0});
            return r;
        }
        seed_levels = 1;
    }
    heap.adopt(seed_nodes);
    const auto t0 = std::int64_t{1} << (seed_levels - 1);
    r.phases.push_back({"seed-chain", eligible, keep > 0 ? keep : 1});

    const auto sched = make_band_schedule(horizon, t0);
    detail_sub::band_fill fill{sched};
    std::vector<std::vector<std::int32_t>> level_nodes(1);
    for (std::int32_t k = 0; k < static_cast<std::int32_t>(heap.size()); ++k)
        if (heap.nodes()[static_cast<std::size_t>(k)].child[0] == no_node &&
            heap.nodes()[static_cast<std::size_t>(k)].child[1] == no_node)
            level_nodes[0].push_back(k);

    std::int64_t banded_examined = 0, completed_levels = 0;
    std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> level_elems;
    for (; i < n; ++i) {
        // Every arrival enters the index so materialized values are true
        // final ranks, even after banding has stopped.
        const auto rk = ranks[static_cast<std::size_t>(i)];
        const auto q1 = idx.flagged_before(rk - 1);
        const auto elem = idx.insert_at(rk - 1, false);
        const auto lvl = fill.current_level();
        if (fill.aborted || lvl >= static_cast<std::int64_t>(sched.levels.size())) continue;
        ++banded_examined;
        const auto& band = sched.levels[static_cast<std::size_t>(lvl)];
        const auto lo = std::llround(band.lo * static_cast<double>(c));
        const auto hi = std::llround(band.hi * static_cast<double>(c));
        const bool in_band = q1 >= lo && q1 < hi;
        const auto pos = fill.offer(in_band);
        if (pos >= 0) {
            if (static_cast<std::int64_t>(level_elems.size()) <= lvl) level_elems.resize(lvl + 1);
            level_elems[static_cast<std::size_t>(lvl)].push_back({elem, i});
            r.accepted.push_back(i);
        }
        if (fill.current_level() > lvl) ++completed_levels;
    }

    // Final node list: seed + completed band levels, parents one level up.
    std::vector<detail_sub::relrank_greedy::node> all = seed_nodes;
    std::vector<std::int32_t> prev_level = level_nodes[0];
    for (std::int64_t lvl = 0; lvl < completed_levels; ++lvl) {
        std::vector<std::int32_t> cur;
        for (std::size_t p = 0; p < level_elems[static_cast<std::size_t>(lvl)].size(); ++p) {
            const auto [elem, arrival] = level_elems[static_cast<std::size_t>(lvl)][p];
            all.push_back({elem, arrival, prev_level[p / 2]});
            cur.push_back(static_cast<std::int32_t>(all.size() - 1));
        }
        prev_level = std::move(cur);
    }
    detail_sub::relrank_greedy final_heap(idx);
    final_heap.adopt(all);
    r.phases.push_back({"bands", banded_examined,
                        static_cast<std::int64_t>(all.size() - seed_nodes.size())});
    r.tree = final_heap.materialize();
    r.skipped = n - static_cast<std::int64_t>(r.tree.size());
    detail_sub::finalize(r);
    return r;
}

// ---------------------------------------------------------------------------
// Ascending blocks of descending runs: B equal blocks, each a decreasing
// run, blocks increasing. The longest decreasing subsequence is exactly one
// block; an increasing heapable subsequence can take at most 2^B - 1
// elements (doubling per block).
// ---------------------------------------------------------------------------

struct block_sequence {
    std::vector<rank_t> seq;
    std::int64_t blocks = 0;  // B
    std::int64_t n_used = 0;  // n rounded down to a multiple of B
};

inline block_sequence ascending_blocks(std::int64_t n) {
    block_sequence bs;
    if (n < 1) return bs;
    std::int64_t b = 1;
    while (b * ((std::int64_t{1} << b) - 1) < n) ++b;
    bs.blocks = b;
    bs.n_used = n - n % b;
    const auto width = bs.n_used / b;
    bs.seq.reserve(static_cast<std::size_t>(bs.n_used));
    for (std::int64_t j = 1; j <= b; ++j)
        for (std::int64_t v = j * width; v > (j - 1) * width; --v) bs.seq.push_back(v);
    return bs;
}

} // namespace heapseq
