#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "heapseq/core.hpp"
#include "heapseq/greedy.hpp"
#include "heapseq/io.hpp"
#include "heapseq/rng.hpp"

using namespace heapseq;

namespace {

// The worked witness for 1,3,5,2,4: root 1 with children 3 and 2, node 3
// with children 5 and 4.
heap_tree<rank_t> worked_witness() {
    heap_tree<rank_t> t;
    const auto r = t.add_root(1, 0);
    const auto n3 = t.add_child(r, 0, 3, 1);
    t.add_child(r, 1, 2, 3);
    t.add_child(n3, 0, 5, 2);
    t.add_child(n3, 1, 4, 4);
    return t;
}

} // namespace

TEST_CASE("verify_heap accepts the worked example", "[core]") {
    const std::vector<rank_t> seq{1, 3, 5, 2, 4};
    CHECK(verify_heap(seq, worked_witness()));
}

TEST_CASE("verify_heap on a single node", "[core]") {
    const std::vector<rank_t> seq{7};
    heap_tree<rank_t> t;
    t.add_root(7, 0);
    CHECK(verify_heap(seq, t));
}

TEST_CASE("verify_heap rejects a heap-property violation", "[core]") {
    const std::vector<rank_t> seq{5, 2};
    heap_tree<rank_t> t;
    const auto r = t.add_root(5, 0);
    t.add_child(r, 0, 2, 1);
    CHECK_FALSE(verify_heap(seq, t));
}

TEST_CASE("verify_heap distinguishes malformed trees from false", "[core]") {
    const std::vector<rank_t> seq{1, 2, 3};
    heap_tree<rank_t> t;
    t.add_root(1, 0);
    t.nodes.push_back({2, 1, no_node, {no_node, no_node}}); // second root
    CHECK_THROWS_AS(verify_heap(seq, t), structural_error);

    heap_tree<rank_t> cyc;
    cyc.add_root(1, 0);
    cyc.nodes.push_back({2, 1, 1, {no_node, no_node}}); // self-parent
    CHECK_THROWS_AS(verify_heap(seq, cyc), structural_error);
}

TEST_CASE("verify_complete on small shapes", "[core]") {
    heap_tree<rank_t> perfect;
    const auto r = perfect.add_root(1, 0);
    perfect.add_child(r, 0, 2, 1);
    perfect.add_child(r, 1, 3, 2);
    CHECK(verify_complete(perfect));

    heap_tree<rank_t> right_only;
    const auto r2 = right_only.add_root(1, 0);
    right_only.add_child(r2, 1, 2, 1);
    CHECK_FALSE(verify_complete(right_only));

    // 7-node perfect tree minus one leaf, last level left-justified.
    heap_tree<rank_t> complete6;
    const auto r3 = complete6.add_root(1, 0);
    const auto a = complete6.add_child(r3, 0, 2, 1);
    const auto b = complete6.add_child(r3, 1, 3, 2);
    complete6.add_child(a, 0, 4, 3);
    complete6.add_child(a, 1, 5, 4);
    complete6.add_child(b, 0, 6, 5);
    CHECK(verify_complete(complete6));
    // The same six nodes with the last leaf on the right are not complete.
    heap_tree<rank_t> gap6;
    const auto r4 = gap6.add_root(1, 0);
    const auto a2 = gap6.add_child(r4, 0, 2, 1);
    const auto b2 = gap6.add_child(r4, 1, 3, 2);
    gap6.add_child(a2, 0, 4, 3);
    gap6.add_child(a2, 1, 5, 4);
    gap6.add_child(b2, 1, 6, 5);
    CHECK_FALSE(verify_complete(gap6));
}

TEST_CASE("signature of the greedy heap of 1,4,2,2", "[core]") {
    const std::vector<rank_t> seq{1, 4, 2, 2};
    const auto res = decide_heapable(seq);
    REQUIRE(res.heapable);
    CHECK(signature_of(res.witness) == std::vector<rank_t>{2, 2, 2, 4, 4});
}

TEST_CASE("signature of a single node", "[core]") {
    heap_tree<rank_t> t;
    t.add_root(9, 0);
    CHECK(signature_of(t) == std::vector<rank_t>{9, 9});
    heap_tree<rank_t> empty;
    CHECK_THROWS_AS(signature_of(empty), empty_tree_error);
}

TEST_CASE("signature length is node count plus one", "[core]") {
    rng256 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto perm = random_permutation(1 + rng.below(20), rng);
        const auto res = decide_heapable(perm);
        if (!res.heapable) continue;
        CHECK(signature_of(res.witness).size() == res.witness.size() + 1);
    }
}

TEST_CASE("dominates is a partial order on sorted lists", "[core]") {
    const std::vector<rank_t> a{1, 2}, b{1, 3};
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    CHECK(dominates(a, a));
    CHECK_THROWS_AS(dominates(std::vector<rank_t>{1}, std::vector<rank_t>{1, 2}),
                    std::invalid_argument);

    rng256 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto len = 1 + rng.below(8);
        auto draw = [&] {
            std::vector<rank_t> v;
            for (std::size_t i = 0; i < len; ++i) v.push_back(static_cast<rank_t>(rng.below(10)));
            std::sort(v.begin(), v.end());
            return v;
        };
        const auto x = draw(), y = draw(), z = draw();
        CHECK(dominates(x, x)); // reflexive
        if (dominates(x, y) && dominates(y, x)) CHECK(x == y); // antisymmetric
        if (dominates(x, y) && dominates(y, z)) CHECK(dominates(x, z)); // transitive
    }
}

TEST_CASE("scaled triple encoding preserves the intended real order", "[core]") {
    // Constants used by the gadget construction, as (real value, scaled int).
    const std::int64_t n = 6, m = 8;
    const std::int64_t h = 9; // from (n=6, m=8)
    const std::int64_t K = std::int64_t{1} << h;
    std::vector<std::pair<double, std::int64_t>> consts;
    for (const std::int64_t v : {std::int64_t{-3}, std::int64_t{-2}, std::int64_t{-1}})
        consts.push_back({static_cast<double>(v), scaled(v)});
    consts.push_back({-0.5, scaled_minus_eps(0)});
    consts.push_back({0.0, scaled(0)});
    consts.push_back({0.1, scaled_tenth});
    for (std::int64_t v = 1; v <= n; ++v) {
        consts.push_back({static_cast<double>(v) - 0.5, scaled_minus_eps(v)});
        consts.push_back({static_cast<double>(v), scaled(v)});
    }
    for (const std::int64_t v : {K, K + 1, K + 2, K + 3})
        consts.push_back({static_cast<double>(v), scaled(v)});
    (void)m;
    for (const auto& [ra, sa] : consts)
        for (const auto& [rb, sb] : consts) {
            CHECK((ra < rb) == (sa < sb));
            CHECK((ra == rb) == (sa == sb));
        }
}

TEST_CASE("triples compare lexicographically", "[core]") {
    CHECK(triple{1, 0, 0} < triple{2, 0, 0});
    CHECK(triple{1, 0, 5} < triple{1, 1, 0});
    CHECK(triple{1, 1, 0} < triple{1, 1, 1});
    CHECK(triple{1, 1, 1} == triple{1, 1, 1});
}

TEST_CASE("sequence file round trip", "[core]") {
    sequence seq;
    seq.items = std::vector<rank_t>{3, 1, 4, 1};
    std::ostringstream os;
    io::write_sequence(os, seq);
    std::istringstream is("# comment\n" + os.str());
    const auto back = io::read_sequence(is);
    REQUIRE_FALSE(back.is_triples());
    CHECK(back.ranks() == seq.ranks());

    sequence tri;
    tri.items = std::vector<triple>{{-5, 0, 1}, {10, 2, 3}};
    std::ostringstream os2;
    io::write_sequence(os2, tri);
    std::istringstream is2(os2.str());
    const auto back2 = io::read_sequence(is2);
    REQUIRE(back2.is_triples());
    CHECK(back2.triples() == tri.triples());
}

TEST_CASE("tree file round trip preserves structure", "[core]") {
    const std::vector<rank_t> seq{1, 3, 5, 2, 4};
    const auto t = worked_witness();
    std::ostringstream os;
    io::write_tree(os, t);
    std::istringstream is(os.str());
    const auto back = io::read_tree(is, std::span<const rank_t>(seq));
    CHECK(verify_heap(seq, back));
    CHECK(back.size() == t.size());
    // Serialization is bit-exact under a second round trip.
    std::ostringstream os2;
    io::write_tree(os2, back);
    CHECK(os.str() == os2.str());
}
