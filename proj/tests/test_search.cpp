#include <doctest.h>

#include <stdexcept>

#include "gdd/search.hpp"
#include "gdd/verify.hpp"

using namespace gdd;

namespace {

// Independent construction of a 5^4 design: four parallel classes over Z5,
// block (x,y) = {(0,x), (1,y), (2,x+y), (3,x+2y)}.
Design transversal_5_4() {
    std::vector<std::vector<int>> groups(4);
    for (int g = 0; g < 4; ++g)
        for (int x = 0; x < 5; ++x) groups[g].push_back(5 * g + x);
    std::vector<std::vector<int>> blocks;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y)
            blocks.push_back({x, 5 + y, 10 + (x + y) % 5, 15 + (x + 2 * y) % 5});
    return make_design(20, std::move(groups), std::move(blocks), Provenance::Manual);
}

}  // namespace

TEST_CASE("the transversal construction itself verifies (oracle sanity)") {
    Design d = transversal_5_4();
    CHECK(d.blocks.size() == 25);
    CHECK(verify(d, 4).pass);
}

TEST_CASE("plain search finds 5^4 with the oracle block count") {
    SearchProblem p;
    p.target = GroupType::parse("5^4");
    SearchOutcome o = search(p);
    REQUIRE(o.status == SearchStatus::Found);
    CHECK(o.design->blocks.size() == 25);
    CHECK(o.design->blocks.size() == transversal_5_4().blocks.size());
    CHECK(verify(*o.design, 4).pass);
    CHECK(o.design->provenance == Provenance::Searched);
}

TEST_CASE("plain search finds 2^7; restarts find 2^10") {
    SearchProblem p7;
    p7.target = GroupType::parse("2^7");
    SearchOutcome o7 = search(p7);
    REQUIRE(o7.status == SearchStatus::Found);
    CHECK(verify(*o7.design, 4).pass);

    // 2^10 has a heavy-tailed runtime distribution; the restart schedule
    // settles it
    SearchProblem p10;
    p10.target = GroupType::parse("2^10");
    SearchOutcome o10 = search_with_restarts(p10);
    REQUIRE(o10.status == SearchStatus::Found);
    CHECK(verify(*o10.design, 4).pass);
    CHECK(o10.design->blocks.size() == 30);
    CHECK(expected_block_count(GroupType::parse("2^10"), 4) == 30);
}

TEST_CASE("search rejects infeasible targets") {
    SearchProblem p;
    p.target = GroupType::parse("5^3 2^1");
    CHECK_THROWS_AS(search(p), std::invalid_argument);
}

TEST_CASE("nonexistence of 2^4 by exhaustion") {
    auto out = prove_nonexistence(GroupType::parse("2^4"));
    CHECK(out.status == NonexistenceStatus::Certified);
}

TEST_CASE("prove_nonexistence returns the counterexample when a design exists") {
    auto out = prove_nonexistence(GroupType::parse("5^4"));
    CHECK(out.status == NonexistenceStatus::CounterexampleFound);
    REQUIRE(out.counterexample);
    CHECK(verify(*out.counterexample, 4).pass);
}

TEST_CASE("prove_nonexistence guards large point counts") {
    CHECK_THROWS_AS(prove_nonexistence(GroupType::parse("5^8 2^8")), std::invalid_argument);
}

TEST_CASE("deterministic node counts for a fixed seed") {
    auto run = [] {
        SearchProblem p;
        p.target = GroupType::parse("5^4");
        p.seed = 42;
        return search(p);
    };
    SearchOutcome a = run(), b = run();
    REQUIRE(a.status == SearchStatus::Found);
    CHECK(a.stats.nodes == b.stats.nodes);
    CHECK(serialize_design(*a.design) == serialize_design(*b.design));
}

TEST_CASE("exhaustive outcome is stable under candidate-order permutations") {
    // 2^4 stays nonexistent whatever the seed; exhaustive mode ignores it
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        SearchProblem p;
        p.target = GroupType::parse("2^4");
        p.exhaustive = true;
        p.seed = seed;
        CHECK(search(p).status == SearchStatus::ExhaustedNoSolution);
    }
}

TEST_CASE("budget exhaustion reports BudgetExceeded") {
    SearchProblem p;
    p.target = GroupType::parse("2^2 5^5");
    p.node_budget = 50;
    SearchOutcome o = search(p);
    CHECK(o.status == SearchStatus::BudgetExceeded);
}

TEST_CASE("cyclic search regenerates a 2^7 from its difference layout") {
    CyclicLayout layout;
    layout.name = "2^7 layout";
    layout.modulus = 14;
    layout.classes.push_back({"c", false, 14});
    for (int i = 0; i < 7; ++i) layout.groups.push_back({i, i + 7});
    SearchProblem p;
    p.target = GroupType::parse("2^7");
    p.symmetry = layout;
    SearchOutcome o = search_base_blocks(p);
    REQUIRE(o.status == SearchStatus::Found);
    REQUIRE(o.system);
    CHECK(verify(*o.design, 4).pass);
    // the system re-develops to the same design
    Design redeveloped = develop(*o.system);
    CHECK(redeveloped.blocks == o.design->blocks);
    CHECK(redeveloped.groups == o.design->groups);
}

TEST_CASE("cyclic search finds 5^4 over Z5 columns") {
    CyclicLayout layout;
    layout.modulus = 5;
    for (const char* lbl : {"a", "b", "c", "d"}) layout.classes.push_back({lbl, false, 5});
    for (int g = 0; g < 4; ++g) {
        std::vector<int> grp;
        for (int x = 0; x < 5; ++x) grp.push_back(5 * g + x);
        layout.groups.push_back(std::move(grp));
    }
    SearchProblem p;
    p.target = GroupType::parse("5^4");
    p.symmetry = layout;
    SearchOutcome o = search_base_blocks(p);
    REQUIRE(o.status == SearchStatus::Found);
    CHECK(o.design->blocks.size() == 25);
    CHECK(verify(*o.design, 4).pass);
}

TEST_CASE("a class size not dividing the modulus is a layout error") {
    CyclicLayout layout;
    layout.modulus = 7;
    layout.classes.push_back({"c", false, 14});
    for (int i = 0; i < 7; ++i) layout.groups.push_back({i, i + 7});
    SearchProblem p;
    p.target = GroupType::parse("2^7");
    p.symmetry = layout;
    CHECK_THROWS_AS(search_base_blocks(p), std::invalid_argument);
}

TEST_CASE("cyclic layout must tile the target type") {
    CyclicLayout layout;
    layout.modulus = 14;
    layout.classes.push_back({"c", false, 14});
    layout.groups.push_back({});
    for (int p = 0; p < 14; ++p) layout.groups[0].push_back(p);
    SearchProblem p;
    p.target = GroupType::parse("2^7");
    p.symmetry = layout;
    CHECK_THROWS_AS(search_base_blocks(p), std::invalid_argument);
}

TEST_CASE("parallel search finds 5^4 and cancels siblings") {
    SearchProblem p;
    p.target = GroupType::parse("5^4");
    p.threads = 2;
    SearchOutcome o = search(p);
    REQUIRE(o.status == SearchStatus::Found);
    CHECK(verify(*o.design, 4).pass);
}

TEST_CASE("parallel exhaustive search still certifies 2^4") {
    SearchProblem p;
    p.target = GroupType::parse("2^4");
    p.exhaustive = true;
    p.threads = 3;
    CHECK(search(p).status == SearchStatus::ExhaustedNoSolution);
}
