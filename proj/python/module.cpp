#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gdd/catalog.hpp"
#include "gdd/construct.hpp"
#include "gdd/development.hpp"
#include "gdd/feasibility.hpp"
#include "gdd/search.hpp"
#include "gdd/verify.hpp"

namespace py = pybind11;
using namespace gdd;

namespace {

py::dict design_dict(const Design& d) {
    py::dict out;
    out["type"] = d.type().str();
    out["points"] = d.num_points;
    out["groups"] = d.groups;
    out["blocks"] = d.blocks;
    out["provenance"] = provenance_str(d.provenance);
    if (!d.labels.empty()) out["labels"] = d.labels;
    return out;
}

py::dict verify_dict(const VerificationReport& rep) {
    py::dict out;
    out["pass"] = rep.pass;
    out["blocks"] = rep.block_count;
    py::list violations;
    for (const auto& v : rep.violations) {
        py::dict item;
        item["kind"] = violation_kind_str(v.kind);
        item["block"] = v.block;
        if (v.point_a >= 0) item["pair"] = py::make_tuple(v.point_a, v.point_b);
        violations.append(item);
    }
    out["violations"] = violations;
    if (rep.pass) out["replication"] = rep.replication;
    return out;
}

Design design_from_dict(const py::dict& d) {
    return make_design(d["points"].cast<int>(), d["groups"].cast<std::vector<std::vector<int>>>(),
                       d["blocks"].cast<std::vector<std::vector<int>>>(), Provenance::Manual);
}

}  // namespace

PYBIND11_MODULE(_gdd4, m) {
    m.doc() = "4-GDD toolkit for group sizes 2 and 5: feasibility, development, "
              "verification, exact-cover search and the existence decision procedure";

    m.def("parse_type", [](const std::string& s) { return GroupType::parse(s).str(); },
          "canonical exponential notation for a group type string");
    m.def("type_points", [](const std::string& s) { return GroupType::parse(s).point_count(); });
    m.def("type_groups", [](const std::string& s) { return GroupType::parse(s).group_count(); });
    m.def("expected_block_count",
          [](const std::string& s, int k) { return expected_block_count(GroupType::parse(s), k); },
          py::arg("type"), py::arg("k") = 4);

    m.def("check_feasible", [](const std::string& s) {
        auto rep = check_feasible(GroupType::parse(s));
        py::dict out;
        out["type"] = rep.type.str();
        out["feasible"] = rep.feasible();
        py::list conds;
        for (const auto& c : rep.conditions) {
            py::dict item;
            item["condition"] = c.condition;
            item["applicable"] = c.applicable;
            item["passed"] = c.passed;
            item["detail"] = c.detail;
            conds.append(item);
        }
        out["conditions"] = conds;
        return out;
    });
    m.def("feasible_2t5s", &feasible_2t5s, py::arg("t"), py::arg("s"));
    m.def("enumerate_feasible", [](int v_max) {
        std::vector<std::string> out;
        for (const auto& g : enumerate_feasible(v_max)) out.push_back(g.str());
        return out;
    });

    m.def("fixture_names", [] { return fixture_names(); });
    m.def("load_fixture", [](const std::string& name) { return design_dict(load_fixture(name)); });
    m.def("develop_file", [](const std::string& path) { return design_dict(develop(load_base_block_file(path))); },
          "develop a base-block file into a concrete design");

    m.def("verify", [](const py::dict& d, int k) { return verify_dict(verify(design_from_dict(d), k)); },
          py::arg("design"), py::arg("k") = 4);
    m.def("verify_fixture", [](const std::string& name) { return verify_dict(verify(load_fixture(name))); });

    m.def("decide", [](int t, int s) {
        Decision d = decide(t, s);
        py::dict out;
        out["t"] = t;
        out["s"] = s;
        out["verdict"] = verdict_str(d.verdict);
        if (d.certificate) out["certificate"] = render_certificate(d.certificate);
        return out;
    });
    m.def("possible_exceptions", [] { return possible_exceptions(); });

    m.def("search",
          [](const std::string& type, bool exhaustive, std::uint64_t node_budget, double time_budget, int threads,
             std::uint64_t seed, int restarts) {
              SearchProblem p;
              p.target = GroupType::parse(type);
              p.exhaustive = exhaustive;
              p.node_budget = node_budget;
              p.time_budget_secs = time_budget;
              p.threads = threads;
              p.seed = seed;
              SearchOutcome o = restarts > 0 ? search_with_restarts(p, restarts) : search(p);
              py::dict out;
              out["status"] = search_status_str(o.status);
              out["nodes"] = o.stats.nodes;
              out["seconds"] = o.stats.seconds;
              if (o.design) out["design"] = design_dict(*o.design);
              return out;
          },
          py::arg("type"), py::arg("exhaustive") = false, py::arg("node_budget") = UINT64_MAX,
          py::arg("time_budget_secs") = 0.0, py::arg("threads") = 1, py::arg("seed") = 0, py::arg("restarts") = 0);

    m.def("prove_nonexistence", [](const std::string& type) {
        auto out = prove_nonexistence(GroupType::parse(type));
        switch (out.status) {
            case NonexistenceStatus::Certified: return std::string("certified");
            case NonexistenceStatus::CounterexampleFound: return std::string("counterexample-found");
            case NonexistenceStatus::BudgetExceeded: return std::string("budget-exceeded");
        }
        return std::string("?");
    });
}
