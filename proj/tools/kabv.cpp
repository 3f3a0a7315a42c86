/*
 * Copyright 2026 the kabv authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Command-line front end. Exit codes: 0 for true/passed, 1 for false/failed,
// 2 for usage, parse or fragment problems, 3 when a build limit is hit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "kab/analysis.hpp"
#include "kab/errors.hpp"
#include "kab/exports.hpp"
#include "kab/mucalc.hpp"
#include "kab/parser.hpp"
#include "kab/printer.hpp"
#include "kab/repair.hpp"
#include "kab/ts.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path);
    out << content;
}

kab::Semantics semantics_arg(const std::string& name) {
    auto s = kab::semantics_from_name(name);
    if (!s) throw std::runtime_error("unknown semantics '" + name + "'");
    return *s;
}

bool repair_based(kab::Semantics s) {
    return s == kab::Semantics::B || s == kab::Semantics::C || s == kab::Semantics::Eb ||
           s == kab::Semantics::Ec;
}

std::string abox_str(const kab::ABox& a) {
    std::string s = "{";
    bool first = true;
    for (const auto& f : a) {
        if (!first) s += ", ";
        s += f.str();
        first = false;
    }
    return s + "}";
}

int run_check(const std::string& file) {
    kab::ParseOptions lax;
    lax.check_a0_consistency = false;
    kab::KabSpec spec = kab::parse_kab(read_file(file), lax);
    std::cout << "parsed: " << spec.actions.size() << " actions, " << spec.process.size()
              << " process rules\n";
    for (const auto& ax : spec.tbox.negative_concepts)
        std::cout << "label " << ax.label << ": " << ax.lhs.str() << " disjoint " << ax.rhs.str()
                  << "\n";
    for (const auto& ax : spec.tbox.negative_roles)
        std::cout << "label " << ax.label << ": " << ax.lhs.str() << " roledisjoint "
                  << ax.rhs.str() << "\n";
    for (const auto& ax : spec.tbox.functionalities)
        std::cout << "label " << ax.label << ": funct " << ax.role.str() << "\n";
    if (!kab::is_consistent(spec.tbox, spec.a0)) {
        std::cout << "initial ABox is inconsistent\n";
        return 1;
    }
    std::cout << "consistent\n";
    return 0;
}

int run_wa(const std::string& file, const std::string& dot) {
    kab::KabSpec spec = kab::parse_kab(read_file(file));
    kab::DependencyGraph g = kab::dependency_graph(spec);
    if (!dot.empty()) write_file(dot, kab::graph_to_dot(g));
    if (kab::is_weakly_acyclic(g)) {
        std::cout << "weakly acyclic\n";
        return 0;
    }
    std::cout << "not weakly acyclic\n";
    return 1;
}

int run_build(const std::string& file, const std::string& sem_name, const kab::BuildLimits& lim,
              const std::string& json, const std::string& dot) {
    kab::KabSpec spec = kab::parse_kab(read_file(file));
    kab::TransitionSystem ts = kab::build_ts(spec, semantics_arg(sem_name), lim);
    std::cout << "semantics=" << kab::semantics_name(ts.semantics) << " states=" << ts.states.size()
              << " edges=" << ts.edges.size() << "\n";
    if (!json.empty()) write_file(json, kab::ts_to_json(ts));
    if (!dot.empty()) write_file(dot, kab::ts_to_dot(ts));
    return 0;
}

int run_verify(const std::string& kab_file, const std::string& prop_file,
               const std::string& sem_name, const std::string& mode_name, bool require_fragment,
               const kab::BuildLimits& lim) {
    kab::Semantics sem = semantics_arg(sem_name);
    kab::QueryMode mode;
    if (mode_name == "certain") {
        mode = kab::QueryMode::Certain;
    } else if (mode_name == "cqa") {
        mode = kab::QueryMode::Cqa;
    } else {
        throw std::runtime_error("unknown query mode '" + mode_name + "'");
    }
    kab::KabSpec spec = kab::parse_kab(read_file(kab_file));
    auto entries = kab::parse_property_file(read_file(prop_file));

    // Verdicts over a repair system are only insensitive to the repair
    // interleaving inside the paired-modality fragment.
    if (repair_based(sem)) {
        for (const auto& [name, f] : entries) {
            if (kab::is_it_fragment(f)) continue;
            if (require_fragment) {
                std::cerr << "formula '" << name << "' is outside the paired-modality fragment\n";
                return 2;
            }
            std::cerr << "warning: formula '" << name
                      << "' is outside the paired-modality fragment; the verdict depends on the "
                         "repair interleaving\n";
        }
    }

    kab::TransitionSystem ts = kab::build_ts(spec, sem, lim);
    bool all = true;
    for (const auto& [name, f] : entries) {
        kab::CheckResult res = kab::model_check(ts, f, mode);
        std::cout << name << ": " << (res.verdict ? "true" : "false") << "\n";
        if (!res.verdict) all = false;
    }
    return all ? 0 : 1;
}

int run_repairs(const std::string& kab_file, const std::string& abox_file,
                const std::string& kind) {
    kab::ParseOptions lax;
    lax.check_a0_consistency = false;
    kab::KabSpec spec = kab::parse_kab(read_file(kab_file), lax);
    kab::ABox a = kab::parse_abox(read_file(abox_file));
    if (kind == "b") {
        for (const auto& r : kab::b_repairs(spec.tbox, a)) std::cout << abox_str(r) << "\n";
    } else if (kind == "c") {
        std::cout << abox_str(kab::c_repair(spec.tbox, a)) << "\n";
    } else {
        throw std::runtime_error("unknown repair kind '" + kind + "'");
    }
    return 0;
}

int run_translate(const std::string& prop_file) {
    for (const auto& [name, f] : kab::parse_property_file(read_file(prop_file)))
        std::cout << name << ": " << kab::print_mu(*kab::tau(f)) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification toolkit for knowledge and action bases"};
    app.require_subcommand(1);

    std::string kab_file, prop_file, abox_file, sem_name = "standard", mode_name = "certain";
    std::string kind = "b", json_out, dot_out;
    bool require_fragment = false;
    kab::BuildLimits lim;

    auto add_limits = [&](CLI::App* cmd) {
        cmd->add_option("--max-states", lim.max_states, "state budget");
        cmd->add_option("--max-depth", lim.max_depth, "exploration depth budget");
        cmd->add_option("--max-run-domain", lim.max_run_domain, "visible-constant budget");
    };
    auto add_semantics = [&](CLI::App* cmd) {
        cmd->add_option("--semantics", sem_name, "execution semantics")
            ->check(CLI::IsMember({"standard", "b", "c", "eb", "ec", "it"}));
    };

    CLI::App* check = app.add_subcommand("check", "parse a specification, report its constraint "
                                                  "labels and initial-state consistency");
    check->add_option("file", kab_file)->required();

    CLI::App* wa = app.add_subcommand("wa", "test weak acyclicity of the dependency graph");
    wa->add_option("file", kab_file)->required();
    wa->add_option("--dot", dot_out, "write the dependency graph in dot format");

    CLI::App* build = app.add_subcommand("build", "build the transition system");
    build->add_option("file", kab_file)->required();
    add_semantics(build);
    add_limits(build);
    build->add_option("--json", json_out, "write the system as json");
    build->add_option("--dot", dot_out, "write the system in dot format");

    CLI::App* verify = app.add_subcommand("verify", "model-check a property file");
    verify->add_option("kab", kab_file)->required();
    verify->add_option("prop", prop_file)->required();
    add_semantics(verify);
    add_limits(verify);
    verify->add_option("--query-mode", mode_name, "query answering mode")
        ->check(CLI::IsMember({"certain", "cqa"}));
    verify->add_flag("--require-it-fragment", require_fragment,
                     "reject formulas outside the paired-modality fragment");

    CLI::App* repairs = app.add_subcommand("repairs", "list the repairs of an ABox snapshot");
    repairs->add_option("kab", kab_file)->required();
    repairs->add_option("--abox", abox_file, "snapshot file of ground atoms")->required();
    repairs->add_option("--kind", kind, "repair notion")->check(CLI::IsMember({"b", "c"}));

    CLI::App* translate = app.add_subcommand(
        "translate-tau", "relativize properties to violation-free repair states");
    translate->add_option("prop", prop_file)->required();

    int rc = 0;
    check->callback([&] { rc = run_check(kab_file); });
    wa->callback([&] { rc = run_wa(kab_file, dot_out); });
    build->callback([&] { rc = run_build(kab_file, sem_name, lim, json_out, dot_out); });
    verify->callback([&] {
        rc = run_verify(kab_file, prop_file, sem_name, mode_name, require_fragment, lim);
    });
    repairs->callback([&] { rc = run_repairs(kab_file, abox_file, kind); });
    translate->callback([&] { rc = run_translate(prop_file); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const kab::LimitExceeded& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return rc;
}
