// gdd4: construct, verify, search and decide existence of 4-GDDs with
// group sizes 2 and 5.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "gdd/catalog.hpp"
#include "gdd/construct.hpp"
#include "gdd/development.hpp"
#include "gdd/feasibility.hpp"
#include "gdd/search.hpp"
#include "gdd/verify.hpp"

using json = nlohmann::json;
using namespace gdd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

json feasibility_json(const FeasibilityReport& rep) {
    json out;
    out["type"] = rep.type.str();
    out["feasible"] = rep.feasible();
    out["conditions"] = json::array();
    for (const auto& c : rep.conditions) {
        out["conditions"].push_back({{"condition", c.condition},
                                     {"applicable", c.applicable},
                                     {"passed", c.passed},
                                     {"detail", c.detail}});
    }
    out["notes"] = rep.notes;
    return out;
}

json verification_json(const VerificationReport& rep) {
    json out;
    out["pass"] = rep.pass;
    out["blocks"] = rep.block_count;
    out["violations"] = json::array();
    for (const auto& v : rep.violations) {
        json item;
        item["kind"] = violation_kind_str(v.kind);
        if (v.block >= 0) item["block"] = v.block;
        if (v.point_a >= 0) item["pair"] = {v.point_a, v.point_b};
        out["violations"].push_back(std::move(item));
    }
    if (rep.pass) out["replication"] = rep.replication;
    return out;
}

json certificate_json(const CertPtr& cert) {
    json out;
    out["type"] = cert->target.str();
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, LeafShipped>) {
                out["kind"] = "shipped-table";
                out["fixture"] = node.fixture;
            } else if constexpr (std::is_same_v<T, LeafSearched>) {
                out["kind"] = "searched";
            } else if constexpr (std::is_same_v<T, LeafLemma>) {
                out["kind"] = "existence-lemma";
                out["family"] = node.family;
                out["g"] = node.g;
                out["p"] = node.p;
                if (node.family != "gp") out["n"] = node.n;
            } else if constexpr (std::is_same_v<T, LeafExternal>) {
                out["kind"] = "external-literature";
                out["tag"] = node.tag;
            } else {
                out["kind"] = "fill-in";
                out["master"] = node.recipe.master.str();
                out["u"] = node.recipe.u;
                json fills = json::array();
                const auto& g = node.recipe.master.sizes();
                for (int i = 0; i < node.recipe.master.group_count(); ++i) {
                    if (i == node.recipe.final_index) continue;
                    fills.push_back({{"group", g[i]},
                                     {"fill", node.recipe.is_keep(i) ? "keep" : node.recipe.fills[i].str()}});
                }
                out["fills"] = std::move(fills);
                out["final"] = {{"group", g[node.recipe.final_index]},
                                {"fill", node.recipe.final_fill ? node.recipe.final_fill->str() : "keep"}};
                out["children"] = json::array();
                for (const auto& ch : node.children) out["children"].push_back(certificate_json(ch));
            }
        },
        cert->node);
    return out;
}

Design load_design_arg(const std::string& arg) {
    if (is_fixture_name(arg)) return load_fixture(arg);
    return load_design_file(arg);
}

void emit(const json& j, bool as_json, const std::string& text) {
    if (as_json) std::cout << j.dump(2) << '\n';
    else std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"4-GDD toolkit: feasibility, base-block development, pairwise verification,\n"
                 "exact-cover search, recursive constructions and the 2^t 5^s decision procedure"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output (available on every verb)");

    // feasible <type>
    std::string type_arg;
    auto* feasible_cmd = app.add_subcommand("feasible", "evaluate the necessary conditions for a group type")->fallthrough();
    feasible_cmd->add_option("type", type_arg, "group type in exponential notation, e.g. \"2^2 5^5\"")->required();

    // enumerate --max-points N
    int max_points = 30;
    std::string enum_format = "lines";
    auto* enum_cmd = app.add_subcommand("enumerate", "list all feasible group types up to a point count")->fallthrough();
    enum_cmd->add_option("--max-points", max_points, "largest point count")->required();
    enum_cmd->add_option("--format", enum_format, "lines|json")->check(CLI::IsMember({"lines", "json"}));

    // develop <file|fixture> [--out]
    std::string dev_arg, dev_out;
    auto* dev_cmd = app.add_subcommand("develop", "develop a base-block file (or shipped fixture) into a design")->fallthrough();
    dev_cmd->add_option("source", dev_arg, "base-block file path or fixture name")->required();
    dev_cmd->add_option("--out", dev_out, "write the design file here");

    // verify <design-file>
    std::string verify_arg;
    auto* verify_cmd = app.add_subcommand("verify", "check the defining axioms of a design file")->fallthrough();
    verify_cmd->add_option("design", verify_arg, "design file path or fixture name")->required();

    // search <type> [...]
    std::string search_type, layout_file, search_out;
    int cyclic_mod = 0, threads = 1, restarts = 0;
    std::uint64_t budget_nodes = UINT64_MAX, seed = 0;
    double budget_secs = 0.0;
    bool exhaustive = false;
    auto* search_cmd = app.add_subcommand("search", "exact-cover search for a design of the given type")->fallthrough();
    search_cmd->add_option("type", search_type)->required();
    search_cmd->add_option("--cyclic", cyclic_mod, "assume a cyclic automorphism of this order (needs --layout)");
    search_cmd->add_option("--layout", layout_file, "point-class/group layout file for cyclic search");
    search_cmd->add_flag("--exhaustive", exhaustive, "complete the whole space (certifies nonexistence)");
    search_cmd->add_option("--budget-nodes", budget_nodes);
    search_cmd->add_option("--budget-secs", budget_secs);
    search_cmd->add_option("--threads", threads);
    search_cmd->add_option("--seed", seed, "candidate-order seed (ignored in exhaustive mode)");
    search_cmd->add_option("--restarts", restarts, "extra seeded attempts after the first run");
    search_cmd->add_option("--out", search_out, "write the found design here");

    // decide <t> <s>
    int dt = 0, ds = 0;
    auto* decide_cmd = app.add_subcommand("decide", "existence verdict and certificate for type 2^t 5^s")->fallthrough();
    decide_cmd->add_option("t", dt, "number of groups of size 2")->required();
    decide_cmd->add_option("s", ds, "number of groups of size 5")->required();

    // construct <type> [--require-concrete] [--catalog DIR] [--out]
    std::string cons_type, cons_out, catalog_dir = "gdd-catalog";
    bool require_concrete = false;
    auto* cons_cmd = app.add_subcommand("construct", "realize a design of the given 2^t 5^s type")->fallthrough();
    cons_cmd->add_option("type", cons_type)->required();
    cons_cmd->add_flag("--require-concrete", require_concrete,
                       "search for small missing ingredients instead of reporting them");
    cons_cmd->add_option("--catalog", catalog_dir, "catalog directory (default ./gdd-catalog)");
    cons_cmd->add_option("--out", cons_out, "write the design file here");

    // catalog list|add|show
    auto* cat_cmd = app.add_subcommand("catalog", "persistent store of constructed designs")->fallthrough();
    std::string cat_dir = "gdd-catalog", cat_add_file, cat_show_key;
    cat_cmd->add_option("--catalog", cat_dir, "catalog directory");
    auto* cat_list = cat_cmd->add_subcommand("list", "list entries")->fallthrough();
    auto* cat_add = cat_cmd->add_subcommand("add", "verify and register a design file")->fallthrough();
    cat_add->add_option("design", cat_add_file)->required();
    auto* cat_show = cat_cmd->add_subcommand("show", "print a design by digest prefix or type")->fallthrough();
    cat_show->add_option("key", cat_show_key)->required();
    cat_cmd->require_subcommand(1);

    // regression
    auto* reg_cmd = app.add_subcommand("regression", "run the full regression harness")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*feasible_cmd) {
            auto rep = check_feasible(GroupType::parse(type_arg));
            emit(feasibility_json(rep), as_json, rep.str());
            return rep.feasible() ? kExitOk : kExitDomain;
        }
        if (*enum_cmd) {
            auto types = enumerate_feasible(max_points);
            if (as_json || enum_format == "json") {
                json out = json::array();
                for (const auto& t : types)
                    out.push_back({{"type", t.str()}, {"points", t.point_count()}, {"groups", t.group_count()}});
                std::cout << out.dump(2) << '\n';
            } else {
                for (const auto& t : types) std::cout << t.str() << '\n';
            }
            return kExitOk;
        }
        if (*dev_cmd) {
            BaseBlockSystem sys =
                is_fixture_name(dev_arg) ? fixture_system(dev_arg) : load_base_block_file(dev_arg);
            Design d = develop(sys);
            auto rep = verify(d, 4);
            if (!dev_out.empty()) write_design_file(dev_out, d);
            json out = {{"name", sys.name},
                        {"type", d.type().str()},
                        {"points", d.num_points},
                        {"blocks", d.blocks.size()},
                        {"verified", rep.pass}};
            emit(out, as_json,
                 "developed " + sys.name + ": type " + d.type().str() + ", " + std::to_string(d.blocks.size()) +
                     " blocks, verify " + (rep.pass ? "pass" : "FAIL") + "\n");
            return rep.pass ? kExitOk : kExitDomain;
        }
        if (*verify_cmd) {
            Design d = load_design_arg(verify_arg);
            auto rep = verify(d, 4);
            emit(verification_json(rep), as_json, rep.str(&d));
            return rep.pass ? kExitOk : kExitDomain;
        }
        if (*search_cmd) {
            SearchProblem p;
            p.target = GroupType::parse(search_type);
            p.exhaustive = exhaustive;
            p.node_budget = budget_nodes;
            p.time_budget_secs = budget_secs;
            p.threads = threads;
            p.seed = seed;
            if (!layout_file.empty()) {
                CyclicLayout layout = load_base_block_file(layout_file);
                if (cyclic_mod != 0 && cyclic_mod != layout.modulus)
                    throw std::invalid_argument("--cyclic disagrees with the layout file modulus");
                p.symmetry = std::move(layout);
            } else if (cyclic_mod != 0) {
                throw std::invalid_argument("--cyclic needs --layout FILE");
            }
            SearchOutcome o = restarts > 0 ? search_with_restarts(p, restarts) : search(p);
            json out = {{"type", search_type},
                        {"status", search_status_str(o.status)},
                        {"nodes", o.stats.nodes},
                        {"max_depth", o.stats.max_depth},
                        {"seconds", o.stats.seconds}};
            if (o.design) {
                out["blocks"] = o.design->blocks.size();
                if (!search_out.empty()) write_design_file(search_out, *o.design);
            }
            std::string text = search_type + ": " + search_status_str(o.status) + " (" +
                               std::to_string(o.stats.nodes) + " nodes, " + std::to_string(o.stats.seconds) +
                               " s)\n";
            if (o.system) {
                text += "base blocks:\n";
                for (const auto& bb : o.system->base_blocks) {
                    text += "  orbit=" + std::to_string(bb.declared_orbit) + ": {";
                    for (size_t i = 0; i < bb.points.size(); ++i) {
                        if (i) text += ", ";
                        text += o.system->classes[bb.points[i].class_index].label +
                                std::to_string(bb.points[i].subscript);
                    }
                    text += "}\n";
                }
            }
            emit(out, as_json, text);
            return o.status == SearchStatus::Found ||
                           (exhaustive && o.status == SearchStatus::ExhaustedNoSolution)
                       ? kExitOk
                       : kExitDomain;
        }
        if (*decide_cmd) {
            Decision d = decide(dt, ds);
            json out = {{"t", dt},
                        {"s", ds},
                        {"verdict", verdict_str(d.verdict)}};
            std::string tname;
            if (dt > 0) tname += "2^" + std::to_string(dt);
            if (ds > 0) tname += (tname.empty() ? "" : " ") + std::string("5^") + std::to_string(ds);
            if (tname.empty()) tname = "(empty type)";
            std::string text = tname + ": " + verdict_str(d.verdict) + "\n";
            if (d.certificate) {
                out["certificate"] = certificate_json(d.certificate);
                text += render_certificate(d.certificate);
            }
            emit(out, as_json, text);
            return d.verdict == Verdict::Exists ? kExitOk : kExitDomain;
        }
        if (*cons_cmd) {
            GroupType gt = GroupType::parse(cons_type);
            int t = gt.count_of(2), s = gt.count_of(5);
            if (type_2t5s(t, s) != gt)
                throw std::invalid_argument("construct handles types of the form 2^t 5^s");
            Decision d = decide(t, s);
            if (d.verdict != Verdict::Exists) {
                emit({{"verdict", verdict_str(d.verdict)}}, as_json, verdict_str(d.verdict) + "\n");
                return kExitDomain;
            }
            Catalog cat(catalog_dir);
            RealizeResult r = require_concrete ? materialize(t, s, cat) : realize(d.certificate, &cat);
            if (std::holds_alternative<Design>(r)) {
                const Design& des = std::get<Design>(r);
                auto entry = cat.register_design(des, "construct " + gt.str());
                if (!cons_out.empty()) write_design_file(cons_out, des);
                json out = {{"type", des.type().str()},
                            {"points", des.num_points},
                            {"blocks", des.blocks.size()},
                            {"digest", entry.digest},
                            {"catalog", catalog_dir}};
                emit(out, as_json,
                     "constructed " + des.type().str() + ": " + std::to_string(des.blocks.size()) +
                         " blocks, digest " + entry.digest.substr(0, 12) + "...\n");
                return kExitOk;
            }
            const auto& partial = std::get<PartialResult>(r);
            json out;
            out["partial"] = true;
            out["missing"] = json::array();
            std::string text = "partial result; missing concrete designs for:\n";
            for (const auto& m : partial.missing) {
                out["missing"].push_back(m.str());
                text += "  " + m.str() + "\n";
            }
            emit(out, as_json, text);
            return kExitDomain;
        }
        if (*cat_cmd) {
            Catalog cat(cat_dir);
            if (*cat_list) {
                auto all = cat.entries();
                json out = json::array();
                std::string text;
                for (const auto& e : all) {
                    out.push_back({{"digest", e.digest},
                                   {"type", e.type.str()},
                                   {"provenance", provenance_str(e.provenance)},
                                   {"verified_at", e.verified_at}});
                    text += e.digest.substr(0, 12) + "  " + e.type.str() + "  " + provenance_str(e.provenance) +
                            "  " + e.verified_at + "\n";
                }
                emit(out, as_json, text.empty() ? "(empty catalog)\n" : text);
                return kExitOk;
            }
            if (*cat_add) {
                Design d = load_design_arg(cat_add_file);
                auto entry = cat.register_design(d, "catalog add");
                emit({{"digest", entry.digest}, {"type", entry.type.str()}}, as_json,
                     "registered " + entry.type.str() + " as " + entry.digest.substr(0, 12) + "...\n");
                return kExitOk;
            }
            if (*cat_show) {
                for (const auto& e : cat.entries()) {
                    bool hit = e.digest.rfind(cat_show_key, 0) == 0;
                    if (!hit) {
                        try {
                            hit = GroupType::parse(cat_show_key) == e.type;
                        } catch (...) {}
                    }
                    if (hit) {
                        Design d = cat.load_entry(e);
                        if (as_json) {
                            json out = {{"digest", e.digest}, {"type", e.type.str()}, {"design", serialize_design(d)}};
                            std::cout << out.dump(2) << '\n';
                        } else {
                            std::cout << serialize_design(d);
                        }
                        return kExitOk;
                    }
                }
                std::cerr << "no catalog entry matches " << cat_show_key << '\n';
                return kExitDomain;
            }
        }
        if (*reg_cmd) {
            auto sum = run_regression();
            if (as_json) {
                json out = json::array();
                for (const auto& st : sum.stages)
                    out.push_back({{"stage", st.name}, {"pass", st.pass}, {"detail", st.detail}});
                std::cout << out.dump(2) << '\n';
            } else {
                std::cout << sum.str();
            }
            return sum.pass() ? kExitOk : kExitDomain;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}
