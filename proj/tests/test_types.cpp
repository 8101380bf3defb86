#include <doctest.h>

#include <random>
#include <stdexcept>

#include "gdd/development.hpp"
#include "gdd/types.hpp"

using namespace gdd;

TEST_CASE("parse_type handles exponential notation") {
    GroupType g = GroupType::parse("2^2 5^5");
    CHECK(g.group_count() == 7);
    CHECK(g.point_count() == 29);
    CHECK(g.str() == "5^5 2^2");

    GroupType single = GroupType::parse("5");
    CHECK(single.group_count() == 1);
    CHECK(single.point_count() == 5);
    CHECK(single.str() == "5^1");

    GroupType big = GroupType::parse("5^8 14^1 20^1");
    CHECK(big.group_count() == 10);
    CHECK(big.point_count() == 74);
    CHECK(big.str() == "20^1 14^1 5^8");

    CHECK_THROWS_AS(GroupType::parse("0^3"), std::invalid_argument);
    CHECK_THROWS_AS(GroupType::parse("5^0"), std::invalid_argument);
    CHECK_THROWS_AS(GroupType::parse("2^^3"), std::invalid_argument);
    CHECK_THROWS_AS(GroupType::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(GroupType::parse("abc"), std::invalid_argument);
}

TEST_CASE("format_type canonicalizes") {
    CHECK(GroupType({5, 5, 5, 5, 2, 2, 2}).str() == "5^4 2^3");
    CHECK(GroupType({2}).str() == "2^1");
    CHECK(GroupType({20, 14, 5, 5, 5, 5, 5, 5, 5, 5}).str() == "20^1 14^1 5^8");
}

TEST_CASE("parse/format round-trip on random types") {
    std::mt19937 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        std::vector<int> sizes;
        int m = 1 + static_cast<int>(rng() % 10);
        for (int i = 0; i < m; ++i) sizes.push_back(1 + static_cast<int>(rng() % 30));
        GroupType g{std::move(sizes)};
        CHECK(GroupType::parse(g.str()) == g);
    }
}

TEST_CASE("type_of recovers notation from designs") {
    CHECK(load_fixture("2255").type().str() == "5^5 2^2");
    CHECK(load_fixture("2858").type().str() == "5^8 2^8");
    Design d = make_design(4, {{0, 1, 2, 3}}, {}, Provenance::Manual);
    CHECK(d.type().str() == "4^1");
}

TEST_CASE("expected_block_count against the pair-count oracle") {
    // b * k(k-1)/2 must equal the number of cross pairs (v^2 - sum g^2)/2
    auto cross_pairs = [](const GroupType& g) {
        long long v = g.point_count(), sq = 0;
        for (int x : g.sizes()) sq += static_cast<long long>(x) * x;
        return (v * v - sq) / 2;
    };
    for (const char* t : {"2^2 5^5", "5^4", "2^8 5^8", "2^14 5^5", "20^1 14^1 5^8"}) {
        GroupType g = GroupType::parse(t);
        CHECK(expected_block_count(g, 4) * 6 == cross_pairs(g));
    }
    CHECK(expected_block_count(GroupType::parse("2^2 5^5"), 4) == 59);
    CHECK(expected_block_count(GroupType::parse("5^4"), 4) == 25);
    CHECK(expected_block_count(GroupType::parse("2^8 5^8"), 4) == 242);
    // non-divisible signals an infeasible type
    CHECK_THROWS_AS(expected_block_count(GroupType::parse("5^3 2^1"), 4), std::domain_error);
    CHECK_THROWS_AS(expected_block_count(GroupType::parse("1^5"), 4), std::domain_error);
}

TEST_CASE("design files round-trip") {
    const Design& d = load_fixture("21455");
    std::string text = serialize_design(d);
    Design back = parse_design(text);
    CHECK(back.num_points == d.num_points);
    CHECK(back.groups == d.groups);
    CHECK(back.blocks == d.blocks);
    CHECK(back.labels == d.labels);
    CHECK(back.provenance == d.provenance);
    CHECK(serialize_design(back) == text);
}

TEST_CASE("make_design validates structure") {
    CHECK_THROWS_AS(make_design(4, {{0, 1}, {1, 2, 3}}, {}, Provenance::Manual), std::invalid_argument);
    CHECK_THROWS_AS(make_design(4, {{0, 1}}, {}, Provenance::Manual), std::invalid_argument);
    CHECK_THROWS_AS(make_design(4, {{0, 1, 2, 3}}, {{0, 1, 2, 9}}, Provenance::Manual), std::invalid_argument);
}
