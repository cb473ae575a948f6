#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "heapseq/core.hpp"
#include "heapseq/greedy.hpp"
#include "heapseq/oracle.hpp"
#include "heapseq/rng.hpp"
#include "heapseq/subseq.hpp"

using namespace heapseq;
using oracle::verdict;

namespace {

// Independent complete-heapability check used to cross-validate exact_lchs:
// enumerate subsequences by decreasing size and test each with the
// whole-sequence decision search.
std::int64_t naive_lchs(const std::vector<rank_t>& seq) {
    const auto n = seq.size();
    std::int64_t best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<rank_t> sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) sub.push_back(seq[i]);
        if (static_cast<std::int64_t>(sub.size()) <= best) continue;
        if (oracle::bt_completely_heapable(sub) == verdict::yes)
            best = static_cast<std::int64_t>(sub.size());
    }
    return best;
}

} // namespace

TEST_CASE("backtracking heapability on fixed points", "[oracle]") {
    CHECK(oracle::bt_heapable(std::vector<rank_t>{1, 3, 5, 2, 4}) == verdict::yes);
    CHECK(oracle::bt_heapable(std::vector<rank_t>{2, 1}) == verdict::no);
    CHECK(oracle::bt_heapable(std::vector<rank_t>{1, 5, 3, 2, 4}) == verdict::no);
}

TEST_CASE("searches report exhaustion on tiny budgets", "[oracle]") {
    // Ascending input: every search must walk the full depth, so a budget of
    // three expansions cannot complete.
    std::vector<rank_t> seq(12);
    std::iota(seq.begin(), seq.end(), 1);
    CHECK(oracle::bt_heapable(seq, {3}) == verdict::exhausted);
    CHECK(oracle::bt_completely_heapable(seq, {3}) == verdict::exhausted);
    CHECK(oracle::exact_lhs(seq, {3}).exhausted);
    CHECK(oracle::exact_lchs(seq, {3}).exhausted);
}

TEST_CASE("complete-heapability decision search on fixed cases", "[oracle]") {
    CHECK(oracle::bt_completely_heapable(std::vector<rank_t>{0, 0, 0, 0, 0, 0, 0}) == verdict::yes);
    CHECK(oracle::bt_completely_heapable(std::vector<rank_t>{1, 0}) == verdict::no);
    CHECK(oracle::bt_completely_heapable(std::vector<rank_t>{0, 1, 1}) == verdict::yes);
    // Level-order-forced search would wrongly reject this one; the position
    // search must accept it.
    CHECK(oracle::bt_completely_heapable(std::vector<rank_t>{0, 1, 0, 0, 0, 1, 1}) == verdict::yes);
}

TEST_CASE("exact LHS on fixed cases", "[oracle]") {
    const auto r = oracle::exact_lhs(std::vector<rank_t>{1, 5, 3, 2, 4});
    CHECK(r.length == 4); // drop the 5: 1,3,2,4 is heapable
    CHECK_FALSE(r.exhausted);
    REQUIRE(r.indices.size() == 4);
    // The reported witness subsequence is actually heapable.
    std::vector<rank_t> sub;
    for (const auto i : r.indices) sub.push_back(std::vector<rank_t>{1, 5, 3, 2, 4}[static_cast<std::size_t>(i)]);
    CHECK(decide_heapable(sub).heapable);

    std::vector<rank_t> asc(9);
    std::iota(asc.begin(), asc.end(), 1);
    CHECK(oracle::exact_lhs(asc).length == 9);

    CHECK(oracle::exact_lhs(std::vector<rank_t>{2, 1}).length == 1);
}

TEST_CASE("exact LHS witness subsequences replay greedily", "[oracle]") {
    rng256 rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const auto perm = random_permutation(4 + rng.below(7), rng);
        const auto r = oracle::exact_lhs(perm);
        REQUIRE_FALSE(r.exhausted);
        std::vector<rank_t> sub;
        for (const auto i : r.indices) sub.push_back(perm[static_cast<std::size_t>(i)]);
        CHECK(static_cast<std::int64_t>(sub.size()) == r.length);
        CHECK(decide_heapable(sub).heapable);
    }
}

TEST_CASE("exact LCHS on fixed cases", "[oracle]") {
    std::vector<rank_t> asc(7);
    std::iota(asc.begin(), asc.end(), 1);
    CHECK(oracle::exact_lchs(asc).length == 7);
    CHECK(oracle::exact_lchs(std::vector<rank_t>{3, 2, 1}).length == 1);
}

TEST_CASE("exact LCHS agrees with the all-subsequences checker", "[oracle]") {
    rng256 rng(57);
    for (int trial = 0; trial < 25; ++trial) {
        const auto perm = random_permutation(5 + rng.below(5), rng); // n in 5..9
        const auto smart = oracle::exact_lchs(perm);
        REQUIRE_FALSE(smart.exhausted);
        CHECK(smart.length == naive_lchs(perm));
    }
    // A couple of size-10 cross-checks.
    for (int trial = 0; trial < 3; ++trial) {
        const auto perm = random_permutation(10, rng);
        const auto smart = oracle::exact_lchs(perm);
        REQUIRE_FALSE(smart.exhausted);
        CHECK(smart.length == naive_lchs(perm));
    }
}

TEST_CASE("exact heapable probability for tiny n", "[oracle]") {
    const auto p1 = oracle::exact_heapable_prob(1);
    CHECK(p1.heapable == 1);
    CHECK(p1.total == 1);
    const auto p2 = oracle::exact_heapable_prob(2);
    CHECK(p2.heapable == 1);
    CHECK(p2.total == 2);
    const auto p3 = oracle::exact_heapable_prob(3);
    CHECK(p3.heapable == 2); // 1,2,3 and 1,3,2
    CHECK(p3.total == 6);
    CHECK_THROWS_AS(oracle::exact_heapable_prob(11), oracle::budget_error);
}

TEST_CASE("exact LIS and LDS", "[oracle]") {
    CHECK(oracle::exact_lis(std::vector<rank_t>{1}) == 1);
    CHECK(oracle::exact_lds(std::vector<rank_t>{1}) == 1);
    CHECK(oracle::exact_lis(std::vector<rank_t>{3, 1, 2}) == 2);
    CHECK(oracle::exact_lds(std::vector<rank_t>{3, 1, 2}) == 2);

    // Erdos-Szekeres: any n^2+1 distinct values have LIS or LDS >= n+1.
    rng256 rng(5);
    for (const int k : {2, 3, 4}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto perm = random_permutation(static_cast<std::size_t>(k * k + 1), rng);
            const auto best = std::max(oracle::exact_lis(perm), oracle::exact_lds(perm));
            CHECK(best >= k + 1);
        }
    }
}

TEST_CASE("subsequence bounds tie the oracles together", "[oracle]") {
    rng256 rng(83);
    for (int trial = 0; trial < 30; ++trial) {
        const auto perm = random_permutation(3 + rng.below(7), rng);
        const auto lhs = oracle::exact_lhs(perm);
        const auto lchs = oracle::exact_lchs(perm);
        REQUIRE_FALSE(lhs.exhausted);
        REQUIRE_FALSE(lchs.exhausted);
        CHECK(lhs.length >= oracle::exact_lis(perm));
        CHECK(lhs.length >= lchs.length);
        // Full-length LHS iff the sequence is heapable.
        const auto full = static_cast<std::int64_t>(perm.size());
        CHECK((lhs.length == full) == decide_heapable(perm).heapable);
    }
}

TEST_CASE("witness enumeration is consistent with the decider", "[oracle]") {
    rng256 rng(19);
    for (int trial = 0; trial < 60; ++trial) {
        const auto perm = random_permutation(1 + rng.below(6), rng);
        const auto en = oracle::enumerate_witnesses(perm);
        REQUIRE_FALSE(en.exhausted);
        CHECK(en.parents.empty() == !decide_heapable(perm).heapable);
        for (const auto& parents : en.parents) {
            // Rebuild and verify each enumerated witness.
            heap_tree<rank_t> t;
            std::vector<std::int32_t> node_of(perm.size(), no_node);
            std::vector<int> used(perm.size(), 0);
            for (std::size_t i = 0; i < perm.size(); ++i) {
                if (parents[i] == no_node)
                    node_of[i] = t.add_root(perm[i], static_cast<std::int64_t>(i));
                else
                    node_of[i] = t.add_child(node_of[static_cast<std::size_t>(parents[i])],
                                             used[static_cast<std::size_t>(parents[i])]++,
                                             perm[i], static_cast<std::int64_t>(i));
            }
            CHECK(verify_heap(perm, t));
        }
    }
}
