#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace heapseq {

// ---------------------------------------------------------------------------
// Element keys.
//
// Plain integer ranks cover the permutation and materialized-uniform models.
// Gadget sequences use integer triples compared lexicographically; their
// first coordinate is stored scaled by ten so that fractional constants stay
// integral: v -> 10v, v - eps -> 10v - 5 (eps fixed at 1/2), 1/10 -> 1.
// ---------------------------------------------------------------------------

using rank_t = std::int64_t;

struct triple {
    std::int64_t a = 0; // scaled by ten
    std::int64_t b = 0;
    std::int64_t c = 0;
    friend auto operator<=>(const triple&, const triple&) = default;
};

inline constexpr std::int64_t scaled(std::int64_t v) { return 10 * v; }
inline constexpr std::int64_t scaled_minus_eps(std::int64_t v) { return 10 * v - 5; }
inline constexpr std::int64_t scaled_tenth = 1;

enum class seq_model { permutation, uniform, relative_rank };

// A parsed input sequence: either all ranks or all triples, never mixed.
struct sequence {
    std::variant<std::vector<rank_t>, std::vector<triple>> items;
    seq_model model = seq_model::permutation;

    bool is_triples() const { return items.index() == 1; }
    std::size_t size() const {
        return is_triples() ? std::get<1>(items).size() : std::get<0>(items).size();
    }
    const std::vector<rank_t>& ranks() const { return std::get<0>(items); }
    const std::vector<triple>& triples() const { return std::get<1>(items); }
};

// Streams scored by uniform draws break value ties by arrival index
// (earlier = smaller) so that every run is deterministic.
struct scored {
    double value = 0.0;
    std::int64_t index = 0;
    friend auto operator<=>(const scored&, const scored&) = default;
};

// ---------------------------------------------------------------------------
// Heap trees.
// ---------------------------------------------------------------------------

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::int32_t no_node = -1;

template <class T>
struct heap_tree {
    struct node {
        T value{};
        std::int64_t seq_index = 0;                 // position in the source sequence
        std::int32_t parent = no_node;
        std::array<std::int32_t, 2> child{no_node, no_node};
        int child_count() const {
            return (child[0] != no_node) + (child[1] != no_node);
        }
    };

    std::vector<node> nodes;
    std::int32_t root = no_node;

    bool empty() const { return nodes.empty(); }
    std::size_t size() const { return nodes.size(); }

    std::int32_t add_root(T value, std::int64_t seq_index) {
        if (root != no_node) throw structural_error("tree already has a root");
        nodes.push_back(node{std::move(value), seq_index, no_node, {no_node, no_node}});
        root = static_cast<std::int32_t>(nodes.size() - 1);
        return root;
    }

    std::int32_t add_child(std::int32_t parent, int side, T value, std::int64_t seq_index) {
        if (parent < 0 || parent >= static_cast<std::int32_t>(nodes.size()))
            throw structural_error("add_child: bad parent index");
        if (side < 0 || side > 1) throw structural_error("add_child: bad side");
        if (nodes[parent].child[side] != no_node)
            throw structural_error("add_child: slot already occupied");
        nodes.push_back(node{std::move(value), seq_index, parent, {no_node, no_node}});
        const auto id = static_cast<std::int32_t>(nodes.size() - 1);
        nodes[parent].child[side] = id;
        return id;
    }

    // Number of levels (root-only tree has 1).
    int depth() const {
        int best = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            int d = 1;
            std::int32_t p = nodes[i].parent;
            while (p != no_node) { ++d; p = nodes[p].parent; }
            best = std::max(best, d);
        }
        return best;
    }
};

namespace detail {

// Walks the tree from the root and checks link consistency. Throws
// structural_error on malformed input; returns nodes in BFS order.
template <class T>
std::vector<std::int32_t> checked_bfs(const heap_tree<T>& t) {
    const auto n = static_cast<std::int32_t>(t.nodes.size());
    if (n == 0) {
        if (t.root != no_node) throw structural_error("root set on empty tree");
        return {};
    }
    if (t.root < 0 || t.root >= n) throw structural_error("root out of range");
    if (t.nodes[t.root].parent != no_node) throw structural_error("root has a parent");
    for (std::int32_t i = 0; i < n; ++i) {
        if (i != t.root && t.nodes[i].parent == no_node)
            throw structural_error("multiple roots");
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<std::int32_t> order;
    order.reserve(static_cast<std::size_t>(n));
    order.push_back(t.root);
    seen[static_cast<std::size_t>(t.root)] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
        const auto v = order[head];
        for (int s = 0; s < 2; ++s) {
            const auto c = t.nodes[v].child[s];
            if (c == no_node) continue;
            if (c < 0 || c >= n) throw structural_error("child index out of range");
            if (seen[static_cast<std::size_t>(c)]) throw structural_error("node reached twice");
            if (t.nodes[c].parent != v) throw structural_error("child/parent mismatch");
            seen[static_cast<std::size_t>(c)] = 1;
            order.push_back(c);
        }
    }
    if (order.size() != static_cast<std::size_t>(n))
        throw structural_error("tree is not connected");
    return order;
}

} // namespace detail

// True iff the tree is a structurally sound heap over seq: heap property
// (parent <= child), temporal property (parent placed earlier), and every
// node's value equal to seq[seq_index]. Malformed trees throw; property
// violations return false.
template <class T>
bool verify_heap(std::span<const T> seq, const heap_tree<T>& t) {
    if (t.nodes.size() > seq.size()) throw structural_error("tree larger than sequence");
    const auto order = detail::checked_bfs(t);
    std::vector<char> used(seq.size(), 0);
    for (const auto& nd : t.nodes) {
        if (nd.seq_index < 0 || nd.seq_index >= static_cast<std::int64_t>(seq.size()))
            throw structural_error("seq_index out of range");
        if (used[static_cast<std::size_t>(nd.seq_index)])
            throw structural_error("seq_index used twice");
        used[static_cast<std::size_t>(nd.seq_index)] = 1;
    }
    for (const auto& nd : t.nodes) {
        if (!(nd.value == seq[static_cast<std::size_t>(nd.seq_index)])) return false;
        if (nd.parent == no_node) continue;
        const auto& p = t.nodes[nd.parent];
        if (nd.value < p.value) return false;          // heap property
        if (!(p.seq_index < nd.seq_index)) return false; // temporal property
    }
    return true;
}

template <class T>
bool verify_heap(const std::vector<T>& seq, const heap_tree<T>& t) {
    return verify_heap(std::span<const T>(seq), t);
}

// True iff the tree is a complete binary tree: positions taken in heap
// indexing (root 0, children 2p+1 / 2p+2) are exactly 0..n-1.
template <class T>
bool verify_complete(const heap_tree<T>& t) {
    const auto order = detail::checked_bfs(t);
    if (t.empty()) return true;
    const auto n = static_cast<std::int64_t>(t.nodes.size());
    std::vector<std::int64_t> pos(t.nodes.size(), 0);
    for (const auto v : order) {
        const auto p = pos[static_cast<std::size_t>(v)];
        for (int s = 0; s < 2; ++s) {
            const auto c = t.nodes[static_cast<std::size_t>(v)].child[s];
            if (c == no_node) continue;
            const auto cp = 2 * p + 1 + s;
            if (cp >= n) return false;
            pos[static_cast<std::size_t>(c)] = cp;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Signatures: the sorted multiset of free-slot values. A tree with k nodes
// has k+1 free slots; each node contributes its own value once per missing
// child.
// ---------------------------------------------------------------------------

struct empty_tree_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class T>
std::vector<T> signature_of(const heap_tree<T>& t) {
    if (t.empty()) throw empty_tree_error("signature of empty tree");
    std::vector<T> sig;
    sig.reserve(t.size() + 1);
    for (const auto& nd : t.nodes)
        for (int s = 0; s < 2; ++s)
            if (nd.child[s] == no_node) sig.push_back(nd.value);
    std::sort(sig.begin(), sig.end());
    return sig;
}

// Pointwise <= on equal-length sorted signatures.
template <class T>
bool dominates(std::span<const T> sig1, std::span<const T> sig2) {
    if (sig1.size() != sig2.size())
        throw std::invalid_argument("dominates: signature length mismatch");
    for (std::size_t i = 0; i < sig1.size(); ++i)
        if (sig2[i] < sig1[i]) return false;
    return true;
}

template <class T>
bool dominates(const std::vector<T>& a, const std::vector<T>& b) {
    return dominates(std::span<const T>(a), std::span<const T>(b));
}

// ---------------------------------------------------------------------------
// Live slot index: an ordered multiset of free slots keyed by value, with
// handles back into the tree. Supports the predecessor/insert/delete cycle
// the greedy decider needs in O(log n) per operation. Among slots of equal
// value the most recently inserted one is returned first, which makes the
// tie-break "prefer the newest parent" fall out of multimap insertion order.
// ---------------------------------------------------------------------------

struct slot_ref {
    std::int32_t parent = no_node;
    std::int8_t side = 0;
};

template <class T>
class slot_multiset {
public:
    using map_type = std::multimap<T, slot_ref>;
    using iterator = typename map_type::iterator;

    std::size_t size() const { return slots_.size(); }
    bool empty() const { return slots_.empty(); }

    void insert(const T& value, slot_ref ref) { slots_.emplace(value, ref); }

    // Largest slot value <= x, newest first among equals; end() if none.
    iterator predecessor(const T& x) {
        auto it = slots_.upper_bound(x);
        if (it == slots_.begin()) return slots_.end();
        return std::prev(it);
    }

    // All slots with the same value as the predecessor of x; used to test
    // that the verdict does not depend on the tie-break rule.
    std::vector<iterator> predecessor_ties(const T& x) {
        std::vector<iterator> ties;
        auto it = predecessor(x);
        if (it == slots_.end()) return ties;
        auto [lo, hi] = slots_.equal_range(it->first);
        for (auto p = lo; p != hi; ++p) ties.push_back(p);
        return ties;
    }

    void erase(iterator it) { slots_.erase(it); }
    iterator end() { return slots_.end(); }

    std::vector<T> values() const {
        std::vector<T> v;
        v.reserve(slots_.size());
        for (const auto& [k, ref] : slots_) v.push_back(k);
        return v;
    }

private:
    map_type slots_;
};

} // namespace heapseq
