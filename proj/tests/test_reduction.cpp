#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "heapseq/core.hpp"
#include "heapseq/greedy.hpp"
#include "heapseq/oracle.hpp"
#include "heapseq/reduction.hpp"
#include "reconciled_params.hpp"

using namespace heapseq;
namespace red = heapseq::reduction;

namespace {

io::x3c_instance make_instance(std::int64_t n, std::vector<std::array<std::int64_t, 3>> sets) {
    io::x3c_instance inst;
    inst.n = n;
    inst.sets = std::move(sets);
    return inst;
}

red::built_instance build_reconciled(const io::x3c_instance& inst) {
    auto nx = red::normalize(inst);
    const auto m = static_cast<std::int64_t>(nx.inst.sets.size());
    auto p = red::compute_params(nx.inst.n, m);
    p = red::apply_overrides(p, reconciled_overrides(nx.inst.n, m));
    return red::build_instance(nx, p);
}

} // namespace

TEST_CASE("delta and gamma length formulas", "[reduction]") {
    for (std::int64_t k = 1; k <= 8; ++k)
        for (std::int64_t h = 1; h <= 6; ++h) {
            CHECK(static_cast<std::int64_t>(red::delta(0, k, h).size()) ==
                  k * ((std::int64_t{1} << h) - 1));
            if (h >= 2) {
                const auto g = red::gamma(0, k, h);
                CHECK(static_cast<std::int64_t>(g.size()) == k * ((std::int64_t{1} << h) - 2));
                // gamma is delta minus the final k terms, elementwise.
                const auto d = red::delta(0, k, h);
                for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == d[i]);
            }
        }
    CHECK_THROWS_AS(red::gamma(0, 1, 1), red::gadget_error);
    CHECK_THROWS_AS(red::delta(0, 0, 3), red::gadget_error);
}

TEST_CASE("delta(1,2,3) spells out the worked gadget", "[reduction]") {
    std::vector<triple> expect{{1, 0, 2}, {1, 0, 1}};
    for (std::int64_t j = 4; j >= 1; --j) expect.push_back({1, 1, j});
    for (std::int64_t j = 8; j >= 1; --j) expect.push_back({1, 2, j});
    CHECK(red::delta(1, 2, 3) == expect);
    CHECK(red::delta(7, 1, 1) == std::vector<triple>{{7, 0, 1}});
    CHECK(red::gamma(5, 1, 2).size() == 2);
    CHECK(red::gamma(1, 2, 3).size() == 12);
}

TEST_CASE("delta gadgets heap below a smaller root and start wide", "[reduction]") {
    // k gadget trees need k open slots above them: two fit below a single
    // root, three need a two-node prefix.
    for (std::int64_t k = 1; k <= 3; ++k) {
        std::vector<triple> seq{{-100, 0, 0}};
        if (k > 2) seq.push_back({-50, 0, 1});
        for (const auto& t : red::delta(10, k, 2)) seq.push_back(t);
        CHECK(decide_heapable(seq).heapable);
        CHECK(oracle::exact_lds(red::delta(10, k, 2)) >= k);
    }
}

TEST_CASE("stock parameter formulas", "[reduction]") {
    const auto p34 = red::compute_params(3, 4);
    CHECK(p34.h1 == 1);
    CHECK(p34.n1 == 2);
    CHECK(p34.m1 == 1);
    CHECK(p34.h2 == 3);
    CHECK(p34.n2 == 8);
    CHECK(p34.m2 == 2);
    CHECK(p34.h == 7);
    CHECK(p34.kv == 128);
    CHECK(p34.lv == 129);
    CHECK(p34.xv == 130);
    CHECK(p34.yv == 130);
    CHECK(p34.zv == 131);

    const auto p68 = red::compute_params(6, 8);
    CHECK(p68.h1 == 2);
    CHECK(p68.h2 == 4);
    CHECK(p68.h == 9);
    CHECK(p68.m1 >= 0);
    CHECK(p68.m2 >= 0);
}

TEST_CASE("subset blocks have eighteen values each", "[reduction]") {
    const auto p = red::compute_params(3, 4);
    for (std::int64_t i = 1; i <= 4; ++i)
        CHECK(red::subset_block(p, i, {1, 2, 3}).size() == 18);

    const auto nx = red::normalize(make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}}));
    const auto built = red::build_instance(nx, p);
    std::int64_t b_total = 0;
    for (const auto& row : built.report.rows)
        if (row.name.starts_with("b")) b_total += row.length;
    CHECK(b_total == 18 * 4);
}

TEST_CASE("m is normalized to a multiple of four by duplication", "[reduction]") {
    const auto nx = red::normalize(make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}}));
    CHECK(nx.inst.sets.size() == 4);
    CHECK(nx.added_sets == 1);
    CHECK(nx.inst.sets[3] == nx.inst.sets[2]);
    CHECK_THROWS_AS(red::normalize(make_instance(4, {{{1, 2, 3}}})), red::gadget_error);
}

TEST_CASE("capacity report reproduces the stock block table and flags the gap", "[reduction]") {
    const auto nx = red::normalize(make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}}));
    const auto p = red::compute_params(3, 4);
    const auto built = red::build_instance(nx, p);
    const auto& rep = built.report;

    CHECK(rep.block_length("a1") == 1);
    CHECK(rep.block_length("a2") == 63);  // (2 M1 - 1)(2^(h2+3) - 1)
    CHECK(rep.block_length("a3") == 7);
    CHECK(rep.block_length("a4") == 14);
    CHECK(rep.block_length("a5") == 6);
    CHECK(rep.block_length("a6") == 18);
    CHECK(rep.block_length("a7") == 2);
    CHECK(rep.block_length("c1") == 32);  // 8m (2^(h2-2) - 1)
    CHECK(rep.block_length("c2") == 12);
    CHECK(rep.block_length("c3") == 18);  // 6m - 2n
    std::int64_t a_total = 0, c_total = 0;
    for (const auto& row : rep.rows) {
        if (row.name[0] == 'a') a_total += row.length;
        if (row.name[0] == 'c') c_total += row.length;
    }
    CHECK(a_total == 111);
    CHECK(c_total == 62);
    CHECK(rep.total == 245);
    CHECK(rep.capacity == 127);
    CHECK_FALSE(rep.matches);
    CHECK(rep.to_text().find("MISMATCH") != std::string::npos);

    // Second stock-size check: (n=6, m=8) gives 875 against 511.
    const auto nx68 = red::normalize(make_instance(
        6, {{{1, 2, 3}}, {{4, 5, 6}}, {{1, 2, 4}}, {{3, 5, 6}},
            {{1, 3, 5}}, {{2, 4, 6}}, {{1, 2, 5}}, {{3, 4, 6}}}));
    const auto built68 = red::build_instance(nx68, red::compute_params(6, 8));
    CHECK(built68.report.total == 875);
    CHECK(built68.report.capacity == 511);
    CHECK_FALSE(built68.report.matches);
}

TEST_CASE("repeated triples are exactly the known tie families", "[reduction]") {
    // Three collision families are inherent to the stock constants:
    // every subset block repeats the exiled zero triple; sets sharing a
    // universe element repeat (u,0,0); and each subset block's (-1,i,1)
    // coincides with a row element of the -1 filler gadget. Nothing else
    // may collide.
    const auto inst = make_instance(6, {{{1, 2, 3}}, {{4, 5, 6}}, {{1, 2, 4}}, {{3, 5, 6}}});
    const auto built = build_reconciled(inst);
    CHECK(built.report.duplicate_values > 0);
    std::map<triple, std::int64_t> counts;
    for (const auto& t : built.seq) ++counts[t];
    for (const auto& [t, c] : counts) {
        if (c <= 1) continue;
        const bool zero_gadget = t.a == 0;
        const bool set_value = t.b == 0 && t.c == 0 && t.a >= 10 && t.a <= 60;
        const bool minus_one_row = t.a == scaled(-1) && t.c == 1;
        CHECK((zero_gadget || set_value || minus_one_row));
    }
}

TEST_CASE("override parsing and application", "[reduction]") {
    std::istringstream in("# comment\nh2=4\nh=9\na6_k=2\n");
    const auto kv = red::parse_override_text(in);
    CHECK(kv.at("h2") == 4);
    auto p = red::compute_params(3, 4);
    p = red::apply_overrides(p, kv);
    CHECK(p.h2 == 4);
    CHECK(p.h == 9);
    CHECK(p.capacity == 511);
    CHECK(p.kv == 512); // sentinels track the overridden height
    CHECK(p.a6_k == 2);
    std::istringstream bad("h2: 4\n");
    CHECK_THROWS_AS(red::parse_override_text(bad), red::gadget_error);
}

TEST_CASE("reconciled parameters close the capacity identity", "[reduction]") {
    const auto inst34 = make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}});
    const auto built34 = build_reconciled(inst34);
    CHECK(built34.report.matches);
    CHECK(built34.report.total == 255);
    CHECK(red::layout_violations(built34.p, built34.report.total).empty());

    const auto inst64 = make_instance(6, {{{1, 2, 3}}, {{4, 5, 6}}, {{1, 2, 4}}, {{3, 5, 6}}});
    const auto built64 = build_reconciled(inst64);
    CHECK(built64.report.matches);
    CHECK(red::layout_violations(built64.p, built64.report.total).empty());

    const auto inst68 = make_instance(
        6, {{{1, 2, 3}}, {{4, 5, 6}}, {{1, 2, 4}}, {{3, 5, 6}},
            {{1, 3, 5}}, {{2, 4, 6}}, {{1, 2, 5}}, {{3, 4, 6}}});
    const auto built68 = build_reconciled(inst68);
    CHECK(built68.report.matches);
    CHECK(red::layout_violations(built68.p, built68.report.total).empty());
}

TEST_CASE("witness construction verifies end to end", "[reduction]") {
    struct fixture {
        io::x3c_instance inst;
        std::vector<std::int64_t> cover;
    };
    const std::vector<fixture> fixtures{
        {make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}}), {0}},
        {make_instance(6, {{{1, 2, 3}}, {{4, 5, 6}}, {{1, 2, 4}}, {{3, 5, 6}}}), {0, 1}},
        {make_instance(6, {{{1, 2, 3}}, {{4, 5, 6}}, {{1, 2, 4}}, {{3, 5, 6}}}), {2, 3}},
        // Larger instance: exercises an empty a4 filler block (m2 = 0) and a
        // two-level c1 region.
        {make_instance(12, {{{1, 2, 3}}, {{4, 5, 6}}, {{7, 8, 9}}, {{10, 11, 12}},
                            {{1, 4, 7}}, {{2, 5, 8}}, {{3, 6, 9}}, {{10, 11, 12}}}),
         {0, 1, 2, 3}},
        {make_instance(12, {{{1, 2, 3}}, {{4, 5, 6}}, {{7, 8, 9}}, {{10, 11, 12}},
                            {{1, 4, 7}}, {{2, 5, 8}}, {{3, 6, 9}}, {{10, 11, 12}}}),
         {4, 5, 6, 7}},
    };
    for (const auto& fx : fixtures) {
        auto nx = red::normalize(fx.inst);
        const auto m = static_cast<std::int64_t>(nx.inst.sets.size());
        auto p = red::compute_params(nx.inst.n, m);
        p = red::apply_overrides(p, reconciled_overrides(nx.inst.n, m));
        const auto built = red::build_instance(nx, p);
        REQUIRE(built.report.matches);
        const auto tree = red::build_witness({nx, p, built, fx.cover});
        CHECK(tree.size() == built.seq.size());
        CHECK(verify_heap(std::span<const triple>(built.seq), tree));
        CHECK(verify_complete(tree));

        // Structural check: every subset-tree root holds its block's initial
        // (-1, i, 0) value and hangs from an a7 singleton (value -2).
        std::int64_t b_roots = 0;
        for (const auto& nd : tree.nodes) {
            if (!(nd.value.a == scaled(-1) && nd.value.c == 0)) continue;
            REQUIRE(nd.parent != no_node);
            CHECK(tree.nodes[static_cast<std::size_t>(nd.parent)].value.a == scaled(-2));
            ++b_roots;
        }
        CHECK(b_roots == m);
    }
}

TEST_CASE("witness preconditions are enforced", "[reduction]") {
    const auto inst = make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}});
    auto nx = red::normalize(inst);
    auto p = red::compute_params(3, 4);

    // Stock parameters: the layout cannot close; the builder refuses
    // with the violation list rather than emitting a bogus tree.
    const auto built_stock = red::build_instance(nx, p);
    CHECK_THROWS_AS(red::build_witness({nx, p, built_stock, {0}}), red::witness_error);
    CHECK_FALSE(red::layout_violations(p, built_stock.report.total).empty());

    // Reconciled parameters but a broken cover.
    auto pr = red::apply_overrides(p, reconciled_overrides(3, 4));
    const auto built = red::build_instance(nx, pr);
    CHECK_THROWS_AS(red::build_witness({nx, pr, built, {}}), red::witness_error);
    CHECK_THROWS_AS(red::build_witness({nx, pr, built, {0, 1}}), red::witness_error);

    // Not an exact cover (n=6 but the two sets overlap).
    const auto inst_bad = make_instance(6, {{{1, 2, 3}}, {{1, 2, 4}}, {{5, 6, 1}}, {{2, 3, 4}}});
    auto nx_bad = red::normalize(inst_bad);
    auto pb = red::apply_overrides(red::compute_params(6, 4), reconciled_overrides(6, 4));
    const auto built_bad = red::build_instance(nx_bad, pb);
    CHECK_THROWS_AS(red::build_witness({nx_bad, pb, built_bad, {0, 1}}), red::witness_error);
}

TEST_CASE("a mutated witness fails verification", "[reduction]") {
    const auto inst = make_instance(3, {{{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}, {{1, 2, 3}}});
    auto nx = red::normalize(inst);
    auto p = red::apply_overrides(red::compute_params(3, 4), reconciled_overrides(3, 4));
    const auto built = red::build_instance(nx, p);
    auto tree = red::build_witness({nx, p, built, {0}});
    REQUIRE(verify_heap(std::span<const triple>(built.seq), tree));

    // Swap the sequence positions of two leaves with different values.
    std::int32_t a = -1, b = -1;
    for (std::int32_t i = 0; i < static_cast<std::int32_t>(tree.size()); ++i) {
        if (tree.nodes[static_cast<std::size_t>(i)].child_count() != 0) continue;
        if (a == -1) {
            a = i;
        } else if (!(tree.nodes[static_cast<std::size_t>(i)].value ==
                     tree.nodes[static_cast<std::size_t>(a)].value)) {
            b = i;
            break;
        }
    }
    REQUIRE(b != -1);
    std::swap(tree.nodes[static_cast<std::size_t>(a)].seq_index,
              tree.nodes[static_cast<std::size_t>(b)].seq_index);
    CHECK_FALSE(verify_heap(std::span<const triple>(built.seq), tree));
}

TEST_CASE("structural claims hold under full enumeration", "[reduction]") {
    const auto rep = red::check_claims();
    CHECK_FALSE(rep.exhausted);
    CHECK(rep.decreasing_pairwise_non_ancestor);
    CHECK(rep.max_before_smaller_is_leaf);
    CHECK(rep.delta_width_depth);
}
