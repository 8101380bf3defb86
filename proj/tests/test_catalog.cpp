#include <doctest.h>

#include <filesystem>

#include "gdd/catalog.hpp"
#include "gdd/development.hpp"
#include "gdd/search.hpp"
#include "gdd/verify.hpp"

using namespace gdd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gdd-test-" + std::to_string(reinterpret_cast<uintptr_t>(this)));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("catalog register, lookup and round-trip") {
    TempDir tmp;
    Catalog cat(tmp.path.string());
    const Design& d = load_fixture("2255");
    auto entry = cat.register_design(d, "unit test");
    CHECK(entry.type.str() == "5^5 2^2");
    CHECK(entry.digest.size() == 64);

    auto hits = cat.lookup(GroupType::parse("2^2 5^5"));
    REQUIRE(hits.size() == 1);
    Design back = cat.load_entry(hits[0]);
    CHECK(back.blocks == d.blocks);
    CHECK(back.groups == d.groups);
    CHECK(back.labels == d.labels);
    CHECK(back.provenance == d.provenance);

    // duplicate registration is idempotent
    auto again = cat.register_design(d, "unit test");
    CHECK(again.digest == entry.digest);
    CHECK(cat.entries().size() == 1);

    CHECK(cat.lookup(GroupType::parse("2^4")).empty());
    CHECK(cat.lookup(GroupType::parse("17^4")).empty());
}

TEST_CASE("catalog rejects invalid designs") {
    TempDir tmp;
    Catalog cat(tmp.path.string());
    Design d = load_fixture("2255");
    d.blocks[0][0] = d.blocks[0][1];  // duplicated point, block loses a member
    CHECK_THROWS(cat.register_design(d, "broken"));
    CHECK(cat.entries().empty());  // failed registration leaves the index unchanged
}

TEST_CASE("multiple designs per type are kept, digest-sorted") {
    TempDir tmp;
    Catalog cat(tmp.path.string());
    SearchProblem p;
    p.target = GroupType::parse("5^4");
    Design a = *search(p).design;
    p.seed = 5;
    Design b = *search(p).design;
    cat.register_design(a);
    cat.register_design(b);
    auto hits = cat.lookup(GroupType::parse("5^4"));
    CHECK(hits.size() >= 1);
    for (size_t i = 1; i < hits.size(); ++i) CHECK(hits[i - 1].digest < hits[i].digest);
}
