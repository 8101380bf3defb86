#include <doctest.h>

#include <set>
#include <stdexcept>

#include "gdd/development.hpp"
#include "gdd/verify.hpp"

using namespace gdd;

TEST_CASE("all shipped fixtures load, develop and verify") {
    REQUIRE(fixture_names().size() == 14);
    for (const auto& name : fixture_names()) {
        INFO("fixture ", name);
        const Design& d = load_fixture(name);
        CHECK(static_cast<long long>(d.blocks.size()) == expected_block_count(d.type(), 4));
        auto rep = verify(d, 4);
        CHECK(rep.pass);
    }
}

TEST_CASE("fixture types match the published table headers") {
    const std::vector<std::pair<const char*, const char*>> expected = {
        {"2255", "5^5 2^2"},        {"21455", "5^5 2^14"},     {"2459", "5^9 2^4"},
        {"21854", "5^4 2^18"},      {"2858", "5^8 2^8"},       {"21755", "5^5 2^17"},
        {"21158", "5^8 2^11"},      {"22055", "5^5 2^20"},     {"21458", "5^8 2^14"},
        {"22655", "5^5 2^26"},      {"21659", "5^9 2^16"},     {"26513", "5^13 2^6"},
        {"21959", "5^9 2^19"},      {"58141201", "20^1 14^1 5^8"},
    };
    for (const auto& [name, type] : expected) {
        CHECK(load_fixture(name).type() == GroupType::parse(type));
    }
}

TEST_CASE("table-1 incidence inversion recovers the stated blocks") {
    const Design& d = load_fixture("2255");
    REQUIRE(d.blocks.size() == 59);
    // block 1 holds exactly the points whose lists start with 1 (1-based
    // labels 1,6,11,16 are points 0,5,10,15)
    CHECK(d.blocks[0] == std::vector<int>{0, 5, 10, 15});
    CHECK(d.blocks[58] == std::vector<int>{16, 20, 25, 28});
    // replication 8 on the 5-groups, 9 on the 2-groups
    auto rep = verify(d, 4);
    REQUIRE(rep.pass);
    for (int p = 0; p < 25; ++p) CHECK(rep.replication[p] == 8);
    for (int p = 25; p < 29; ++p) CHECK(rep.replication[p] == 9);
}

TEST_CASE("blocks_from_incidence basics") {
    IncidenceTable t;
    t.num_blocks = 1;
    for (int p : {1, 2, 3, 4}) t.per_point_lists[p] = {1};
    auto blocks = blocks_from_incidence(t, 4);
    REQUIRE(blocks.size() == 1);
    CHECK(blocks[0] == std::vector<int>{1, 2, 3, 4});

    IncidenceTable bad = t;
    bad.per_point_lists[5] = {1};
    CHECK_THROWS(blocks_from_incidence(bad, 4));
}

TEST_CASE("development wraps short classes over their own modulus") {
    // y has modulus 5 inside a mod-10 development
    const BaseBlockSystem& sys = fixture_system("21755");
    int y1 = -1;
    for (int p = 0; p < sys.num_points(); ++p)
        if (sys.point_label(p) == "y1") y1 = p;
    REQUIRE(y1 >= 0);
    CHECK(sys.shift_point(y1, 5) == y1);            // (1+5) mod 5 = 1
    CHECK(sys.point_label(sys.shift_point(y1, 1)) == "y2");
    // infinite points stay put
    int inf2 = -1;
    for (int p = 0; p < sys.num_points(); ++p)
        if (sys.point_label(p) == "inf2") inf2 = p;
    REQUIRE(inf2 >= 0);
    CHECK(sys.shift_point(inf2, 7) == inf2);
}

TEST_CASE("declared orbit lengths are asserted against stabilizers") {
    BaseBlockSystem sys = fixture_system("2858");
    REQUIRE(!sys.base_blocks.empty());
    CHECK(sys.base_blocks[0].declared_orbit == 2);
    sys.base_blocks[0].declared_orbit = 8;  // wrong on purpose
    CHECK_THROWS_AS(develop(sys), std::invalid_argument);
}

TEST_CASE("develop rejects duplicate blocks") {
    BaseBlockSystem sys = fixture_system("21455");
    sys.base_blocks.push_back(sys.base_blocks.back());
    CHECK_THROWS_AS(develop(sys), std::invalid_argument);
}

TEST_CASE("develop output order is deterministic and serialization is byte-stable") {
    const BaseBlockSystem& sys = fixture_system("21455");
    Design a = develop(sys);
    Design b = develop(sys);
    CHECK(serialize_design(a) == serialize_design(b));
}

TEST_CASE("developed 2^14 5^5 has the formula block count") {
    CHECK(expected_block_count(GroupType::parse("2^14 5^5"), 4) == 219);
    CHECK(load_fixture("21455").blocks.size() == 219);
}
