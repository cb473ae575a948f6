#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "heapseq/core.hpp"
#include "heapseq/rng.hpp"

namespace heapseq {

// ---------------------------------------------------------------------------
// The greedy decider: insert each element into the free slot holding the
// largest value <= it. The signature of the greedy tree pointwise-dominates
// the signature of any witness built from the same prefix, so failure of the
// greedy insertion proves the sequence unheapable.
// ---------------------------------------------------------------------------

enum class tie_break { newest_parent, uniform_random };

template <class T>
class greedy_state {
public:
    greedy_state() = default;

    // Rebuild the slot index from an existing tree (used when a strategy
    // seeds the heap by other means and continues greedily).
    static greedy_state from_tree(heap_tree<T> tree) {
        greedy_state st;
        st.tree_ = std::move(tree);
        for (std::int32_t i = 0; i < static_cast<std::int32_t>(st.tree_.size()); ++i)
            for (int s = 1; s >= 0; --s)
                if (st.tree_.nodes[i].child[s] == no_node)
                    st.slots_.insert(st.tree_.nodes[i].value, slot_ref{i, static_cast<std::int8_t>(s)});
        return st;
    }

    const heap_tree<T>& tree() const { return tree_; }
    heap_tree<T> take_tree() { return std::move(tree_); }
    std::size_t size() const { return tree_.size(); }
    bool empty() const { return tree_.empty(); }
    std::vector<T> signature() const { return slots_.values(); }

    // Insert x (arriving at seq_index). Returns the node id on success,
    // nullopt when no slot value <= x exists. The first insertion into an
    // empty state creates the root.
    std::optional<std::int32_t> insert(const T& x, std::int64_t seq_index,
                                       tie_break tb = tie_break::newest_parent,
                                       rng256* rng = nullptr) {
        if (tree_.empty()) {
            const auto id = tree_.add_root(x, seq_index);
            push_child_slots(id, x);
            return id;
        }
        auto it = slots_.predecessor(x);
        if (it == slots_.end()) return std::nullopt;
        if (tb == tie_break::uniform_random) {
            auto ties = slots_.predecessor_ties(x);
            it = ties[static_cast<std::size_t>(rng->below(ties.size()))];
        }
        const slot_ref ref = it->second;
        slots_.erase(it);
        const auto id = tree_.add_child(ref.parent, ref.side, x, seq_index);
        push_child_slots(id, x);
        return id;
    }

private:
    void push_child_slots(std::int32_t id, const T& x) {
        // Right slot first so the left twin is preferred among equals.
        slots_.insert(x, slot_ref{id, 1});
        slots_.insert(x, slot_ref{id, 0});
    }

    heap_tree<T> tree_;
    slot_multiset<T> slots_;
};

template <class T>
struct decide_result {
    bool heapable = false;
    heap_tree<T> witness;                 // valid iff heapable
    std::int64_t failed_index = -1;       // index of the unplaceable element otherwise
};

struct empty_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class T>
decide_result<T> decide_heapable(std::span<const T> seq,
                                 tie_break tb = tie_break::newest_parent,
                                 rng256* rng = nullptr) {
    if (seq.empty()) throw empty_input_error("decide_heapable: empty sequence");
    greedy_state<T> st;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!st.insert(seq[i], static_cast<std::int64_t>(i), tb, rng))
            return {false, {}, static_cast<std::int64_t>(i)};
    }
    return {true, st.take_tree(), -1};
}

template <class T>
decide_result<T> decide_heapable(const std::vector<T>& seq,
                                 tie_break tb = tie_break::newest_parent,
                                 rng256* rng = nullptr) {
    return decide_heapable(std::span<const T>(seq), tb, rng);
}

} // namespace heapseq
