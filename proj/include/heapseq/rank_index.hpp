#pragma once

#include <cstdint>
#include <vector>

#include "heapseq/rng.hpp"

namespace heapseq {

// Order-statistics treap over arrival order, for streams that reveal only
// relative ranks. Supports insert-at-position, current position of a node,
// and counting flagged (calibration) elements in a prefix, each in
// O(log n) expected time. Priorities come from a fixed splitmix stream so
// runs are deterministic.
class rank_index {
public:
    rank_index() = default;

    std::int64_t size() const { return root_ == -1 ? 0 : nodes_[static_cast<std::size_t>(root_)].size; }

    // Insert a new element so that exactly `pos` existing elements precede
    // it (0-based). Returns a stable node id.
    std::int32_t insert_at(std::int64_t pos, bool flagged) {
        const auto id = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(node{-1, -1, -1, splitmix64(prio_state_), 1, flagged ? 1 : 0, flagged});
        if (root_ == -1) {
            root_ = id;
            return id;
        }
        // Descend by implicit key, attach as leaf.
        std::int32_t cur = root_;
        std::int64_t k = pos;
        for (;;) {
            auto& c = nodes_[static_cast<std::size_t>(cur)];
            const auto ls = c.left == -1 ? 0 : nodes_[static_cast<std::size_t>(c.left)].size;
            if (k <= ls) {
                if (c.left == -1) { link(cur, id, true); break; }
                cur = c.left;
            } else {
                k -= ls + 1;
                if (c.right == -1) { link(cur, id, false); break; }
                cur = c.right;
            }
        }
        // Refresh counters along the insertion path, then restore the heap
        // order on priorities; rotations keep subtree counters intact above
        // the rotation point.
        for (std::int32_t p = nodes_[static_cast<std::size_t>(id)].parent; p != -1;
             p = nodes_[static_cast<std::size_t>(p)].parent)
            pull(p);
        while (nodes_[static_cast<std::size_t>(id)].parent != -1 &&
               nodes_[static_cast<std::size_t>(id)].prio <
                   nodes_[static_cast<std::size_t>(nodes_[static_cast<std::size_t>(id)].parent)].prio)
            rotate_up(id);
        return id;
    }

    // Current 0-based position of a node.
    std::int64_t position(std::int32_t id) const {
        const auto& nd = nodes_[static_cast<std::size_t>(id)];
        std::int64_t pos = nd.left == -1 ? 0 : nodes_[static_cast<std::size_t>(nd.left)].size;
        std::int32_t cur = id;
        for (std::int32_t p = nd.parent; p != -1; p = nodes_[static_cast<std::size_t>(cur)].parent) {
            const auto& pn = nodes_[static_cast<std::size_t>(p)];
            if (pn.right == cur)
                pos += 1 + (pn.left == -1 ? 0 : nodes_[static_cast<std::size_t>(pn.left)].size);
            cur = p;
        }
        return pos;
    }

    // Number of flagged elements among the first `count` positions.
    std::int64_t flagged_before(std::int64_t count) const {
        std::int64_t got = 0;
        std::int32_t cur = root_;
        std::int64_t k = count;
        while (cur != -1 && k > 0) {
            const auto& c = nodes_[static_cast<std::size_t>(cur)];
            const auto ls = c.left == -1 ? 0 : nodes_[static_cast<std::size_t>(c.left)].size;
            if (k <= ls) {
                cur = c.left;
            } else {
                got += (c.left == -1 ? 0 : nodes_[static_cast<std::size_t>(c.left)].flag_count) +
                       (c.flagged ? 1 : 0);
                k -= ls + 1;
                cur = c.right;
            }
        }
        return got;
    }

private:
    struct node {
        std::int32_t left = -1, right = -1, parent = -1;
        std::uint64_t prio = 0;
        std::int64_t size = 1;
        std::int64_t flag_count = 0;
        bool flagged = false;
    };

    void link(std::int32_t parent, std::int32_t child, bool left) {
        auto& p = nodes_[static_cast<std::size_t>(parent)];
        (left ? p.left : p.right) = child;
        nodes_[static_cast<std::size_t>(child)].parent = parent;
    }

    void pull(std::int32_t v) {
        auto& n = nodes_[static_cast<std::size_t>(v)];
        n.size = 1;
        n.flag_count = n.flagged ? 1 : 0;
        for (const auto c : {n.left, n.right}) {
            if (c == -1) continue;
            n.size += nodes_[static_cast<std::size_t>(c)].size;
            n.flag_count += nodes_[static_cast<std::size_t>(c)].flag_count;
        }
    }

    void rotate_up(std::int32_t x) {
        const auto p = nodes_[static_cast<std::size_t>(x)].parent;
        const auto g = nodes_[static_cast<std::size_t>(p)].parent;
        auto& xn = nodes_[static_cast<std::size_t>(x)];
        auto& pn = nodes_[static_cast<std::size_t>(p)];
        if (pn.left == x) {
            pn.left = xn.right;
            if (xn.right != -1) nodes_[static_cast<std::size_t>(xn.right)].parent = p;
            xn.right = p;
        } else {
            pn.right = xn.left;
            if (xn.left != -1) nodes_[static_cast<std::size_t>(xn.left)].parent = p;
            xn.left = p;
        }
        pn.parent = x;
        xn.parent = g;
        if (g != -1) {
            auto& gn = nodes_[static_cast<std::size_t>(g)];
            (gn.left == p ? gn.left : gn.right) = x;
        } else {
            root_ = x;
        }
        pull(p);
        pull(x);
    }

    std::vector<node> nodes_;
    std::int32_t root_ = -1;
    std::uint64_t prio_state_ = 0x106689D45497FDB5ULL;
};

} // namespace heapseq
