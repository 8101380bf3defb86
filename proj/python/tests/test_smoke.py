"""Smoke tests for the _gdd4 extension module."""

import _gdd4 as g


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")


def main():
    check(g.parse_type("2^2 5^5") == "5^5 2^2", "canonical notation")
    check(g.type_points("5^8 14^1 20^1") == 74, "point count")
    check(g.expected_block_count("2^2 5^5") == 59, "block count 2^2 5^5")
    check(g.expected_block_count("2^14 5^5") == 219, "block count 2^14 5^5")

    rep = g.check_feasible("5^3 2^1")
    check(not rep["feasible"], "5^3 2^1 infeasible")
    check(g.check_feasible("1^4")["feasible"], "1^4 feasible")
    check(len(g.enumerate_feasible(30)) == 54, "54 feasible types up to 30 points")

    names = g.fixture_names()
    check(len(names) == 14, "14 fixtures")
    for name in names:
        check(g.verify_fixture(name)["pass"], f"fixture {name} verifies")

    d = g.load_fixture("2255")
    check(len(d["blocks"]) == 59, "table-1 design block count")
    check(g.verify(d)["pass"], "round-trip verify")
    # break one block and watch it fail
    d["blocks"][0] = [0, 1, 10, 15]
    check(not g.verify(d)["pass"], "mutated design rejected")

    check(g.decide(4, 0)["verdict"] == "definite-nonexistence", "2^4 nonexistent")
    check(g.decide(2, 5)["verdict"] == "exists", "2^2 5^5 exists")
    check(g.decide(11, 17)["verdict"] == "possible-exception", "2^11 5^17 open")
    check("shipped table" in g.decide(2, 5)["certificate"], "certificate renders")
    check(len(g.possible_exceptions()) == 17, "17 open pairs")

    out = g.search("5^4")
    check(out["status"] == "found", "search finds 5^4")
    check(g.verify(out["design"])["pass"], "searched design verifies")
    check(g.prove_nonexistence("2^4") == "certified", "2^4 exhaustion")

    print("python smoke tests: all pass")


if __name__ == "__main__":
    main()
