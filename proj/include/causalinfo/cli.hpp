#pragma once

// Command-line front end. run() takes the argument vector and the output
// streams, so the whole surface is testable in-process.
//
// Exit status: 0 success, 1 usage error, 2 model or query error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "causalinfo/criteria.hpp"
#include "causalinfo/distribution.hpp"
#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/information.hpp"
#include "causalinfo/intervention.hpp"
#include "causalinfo/model.hpp"
#include "causalinfo/model_io.hpp"
#include "causalinfo/random_models.hpp"

namespace causalinfo::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_query = 2;

using ojson = nlohmann::ordered_json;

/// 12 significant digits.
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

inline Vertex lookup(const Dag& dag, const std::string& name) {
    if (auto v = dag.find(name)) return *v;
    throw Error(ErrorKind::InvalidSpec, "unknown variable '" + name + "'");
}

inline VertexSet parse_set(const Dag& dag, const std::string& text) {
    VertexSet out;
    for (const auto& name : split(text, ',')) out.insert(lookup(dag, name));
    return out;
}

inline PartialAssignment parse_assignment(const Dag& dag, const std::string& text) {
    PartialAssignment out;
    for (const auto& item : split(text, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::InvalidSpec, "expected NAME=VALUE, got '" + item + "'");
        const Vertex v = lookup(dag, item.substr(0, eq));
        const std::string value = item.substr(eq + 1);
        std::size_t parsed = 0;
        std::size_t used = 0;
        try {
            parsed = std::stoul(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size())
            throw Error(ErrorKind::InvalidSpec, "value '" + value + "' for " + dag.label(v) + " is not a symbol index");
        if (out.count(v)) throw Error(ErrorKind::InvalidSpec, dag.label(v) + " assigned twice");
        out[v] = parsed;
    }
    return out;
}

inline std::string set_text(const Dag& dag, const VertexSet& s) {
    std::string out;
    for (Vertex v : s) out += (out.empty() ? "" : ",") + dag.label(v);
    return out;
}

inline ojson set_json(const Dag& dag, const VertexSet& s) {
    ojson out = ojson::array();
    for (Vertex v : s) out.push_back(dag.label(v));
    return out;
}

inline std::string assignment_text(const Dag& dag, const PartialAssignment& a) {
    std::string out;
    for (const auto& [v, value] : a) out += (out.empty() ? "" : ",") + dag.label(v) + "=" + std::to_string(value);
    return out;
}

inline ojson info_json(InfoValue v) {
    ojson out;
    out["bits"] = v.is_finite() ? ojson(v.bits()) : ojson(nullptr);
    out["infinite"] = !v.is_finite();
    return out;
}

inline ojson table_json(const Dag& dag, const JointTable& t) {
    ojson out;
    ojson scope = ojson::array(), cards = ojson::array(), entries = ojson::array();
    for (const auto& var : t.scope()) {
        scope.push_back(dag.label(var.id));
        cards.push_back(var.cardinality);
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto values = t.decode(i);
        ojson assignment = ojson::object();
        for (std::size_t k = 0; k < values.size(); ++k) assignment[dag.label(t.scope()[k].id)] = values[k];
        entries.push_back({{"assignment", assignment}, {"p", t[i]}});
    }
    out["scope"] = scope;
    out["cardinalities"] = cards;
    out["entries"] = entries;
    return out;
}

inline void print_table(std::ostream& out, const Dag& dag, const JointTable& t) {
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto values = t.decode(i);
        std::string row;
        for (std::size_t k = 0; k < values.size(); ++k)
            row += (k ? " " : "") + dag.label(t.scope()[k].id) + "=" + std::to_string(values[k]);
        if (row.empty()) row = "()";
        out << row << '\t' << format_number(t[i]) << '\n';
    }
}

struct Options {
    bool json = false;
    double tolerance = default_cdi_tolerance;
    std::string file;
    std::string on, given, intervene, from, to, cause, effect, adjust, a, b, out_path, kind;
    std::size_t max_size = 4;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    std::size_t variables = 4;
    bool functional = false;
};

class Session {
public:
    Session(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

    int validate() {
        const auto doc = load_model_file(opt_.file, false);
        const auto report = std::visit([](const auto& m) { return validate_model(m); }, doc.model);
        const Dag& dag = doc.dag();
        if (opt_.json) {
            ojson j;
            j["command"] = "validate";
            j["valid"] = report.empty();
            ojson list = ojson::array();
            for (const auto& v : report) {
                ojson item;
                item["kind"] = std::string(to_string(v.kind));
                item["variable"] = dag.label(v.variable);
                item["row"] = v.row ? ojson(*v.row) : ojson(nullptr);
                item["message"] = v.message;
                list.push_back(item);
            }
            j["violations"] = list;
            emit(j);
        } else if (report.empty()) {
            out_ << "valid " << (doc.is_functional() ? "functional" : "cpt") << " model with " << dag.size()
                 << " variables\n";
        } else {
            for (const auto& v : report) {
                out_ << to_string(v.kind) << ' ' << dag.label(v.variable);
                if (v.row) out_ << " row " << *v.row;
                out_ << ": " << v.message << '\n';
            }
        }
        return report.empty() ? exit_ok : exit_query;
    }

    int joint() {
        load();
        return table_result("joint", "P(" + all_names() + ")", joint_from_cpts(model()));
    }

    int marginal_cmd() {
        load();
        const VertexSet t = parse_set(dag(), opt_.on);
        return table_result("marginal", "P(" + set_text(dag(), t) + ")", marginal(joint_from_cpts(model()), t));
    }

    // Evidence outside an alphabet has probability zero; say which variable.
    PartialAssignment parse_evidence() {
        const auto evidence = parse_assignment(dag(), opt_.given);
        for (const auto& [v, value] : evidence)
            if (value >= cardinalities()[v])
                throw Error(ErrorKind::ZeroProbabilityEvidence, "evidence " + dag().label(v) + "=" +
                                                                    std::to_string(value) + " lies outside its alphabet");
        return evidence;
    }

    int condition_cmd() {
        load();
        const auto evidence = parse_evidence();
        return table_result("condition", "P(. | " + assignment_text(dag(), evidence) + ")",
                            condition(joint_from_cpts(model()), evidence));
    }

    int intervene() {
        load();
        InterventionSpec spec{parse_assignment(dag(), opt_.intervene)};
        const auto evidence = parse_evidence();
        VertexSet t;
        if (opt_.on.empty()) {
            t = set_difference(VertexSet::range(dag().size()),
                               set_union(spec.targets(), causalinfo::detail::keys_of(evidence)));
        } else {
            t = parse_set(dag(), opt_.on);
        }
        std::string title = "P(" + set_text(dag(), t) + " | do(" + assignment_text(dag(), spec.values) + ")";
        if (!evidence.empty()) title += ", " + assignment_text(dag(), evidence);
        title += ")";
        return table_result("intervene", title, interventional_conditional(model(), spec, evidence, t));
    }

    int di() {
        load();
        const VertexSet t = parse_set(dag(), opt_.from), s = parse_set(dag(), opt_.to),
                        z = parse_set(dag(), opt_.given);
        const InfoValue v = conditional_directed_information(model(), t, s, z);
        std::string name = "I(" + set_text(dag(), t) + " -> " + set_text(dag(), s);
        if (!z.empty()) name += " | " + set_text(dag(), z);
        name += ")";
        return value_result("di", name, v);
    }

    int mi() {
        load();
        const VertexSet a = parse_set(dag(), opt_.a), b = parse_set(dag(), opt_.b), z = parse_set(dag(), opt_.given);
        const InfoValue v = conditional_mutual_information(joint_from_cpts(model()), a, b, z);
        std::string name = "I(" + set_text(dag(), a) + "; " + set_text(dag(), b);
        if (!z.empty()) name += " | " + set_text(dag(), z);
        name += ")";
        return value_result("mi", name, v);
    }

    int chainrule() {
        load();
        const VertexSet t = parse_set(dag(), opt_.from), s = parse_set(dag(), opt_.to);
        const auto terms = chain_rule_decomposition(model(), t, s);
        if (opt_.json) {
            ojson j;
            j["command"] = "chainrule";
            j["from"] = set_json(dag(), t);
            j["to"] = set_json(dag(), s);
            j["mi_term"] = info_json(terms.mi_term);
            j["cdi_term"] = info_json(terms.cdi_term);
            j["total"] = info_json(terms.total);
            j["additive"] = terms.additive();
            emit(j);
        } else {
            out_ << "mi_term\t" << format_number(terms.mi_term.bits()) << '\n';
            out_ << "cdi_term\t" << format_number(terms.cdi_term.bits()) << '\n';
            out_ << "total\t" << format_number(terms.total.bits()) << '\n';
            out_ << "additive\t" << (terms.additive() ? "yes" : "no") << '\n';
        }
        return exit_ok;
    }

    int backdoor() {
        load();
        const VertexSet s = parse_set(dag(), opt_.cause), t = parse_set(dag(), opt_.effect),
                        z = parse_set(dag(), opt_.adjust);
        const auto cert = certify_backdoor(model(), s, t, z, opt_.tolerance);
        if (opt_.json) {
            ojson j;
            j["command"] = "backdoor";
            j["cause"] = set_json(dag(), s);
            j["effect"] = set_json(dag(), t);
            j["adjust"] = set_json(dag(), cert.adjustment);
            j["graphical_ok"] = cert.graphical_ok;
            j["information_ok"] = cert.information_ok;
            j["cdi"] = info_json(cert.cdi_value);
            j["max_discrepancy"] = cert.max_discrepancy;
            j["tolerance"] = opt_.tolerance;
            emit(j);
        } else {
            out_ << "adjust\t{" << set_text(dag(), cert.adjustment) << "}\n";
            out_ << "graphical_ok\t" << (cert.graphical_ok ? "true" : "false") << '\n';
            out_ << "information_ok\t" << (cert.information_ok ? "true" : "false") << '\n';
            out_ << "cdi\t" << format_number(cert.cdi_value.bits()) << '\n';
            out_ << "max_discrepancy\t" << format_number(cert.max_discrepancy) << '\n';
        }
        return exit_ok;
    }

    int findbackdoor() {
        load();
        const VertexSet s = parse_set(dag(), opt_.cause), t = parse_set(dag(), opt_.effect);
        const auto sets = find_backdoor_sets(model(), s, t, opt_.max_size, opt_.tolerance);
        if (opt_.json) {
            ojson j;
            j["command"] = "findbackdoor";
            j["cause"] = set_json(dag(), s);
            j["effect"] = set_json(dag(), t);
            ojson list = ojson::array();
            for (const auto& z : sets) list.push_back(set_json(dag(), z));
            j["sets"] = list;
            emit(j);
        } else {
            for (const auto& z : sets) out_ << '{' << set_text(dag(), z) << "}\n";
        }
        return exit_ok;
    }

    int dot() {
        doc_ = load_model_file(opt_.file);
        const auto spec = parse_assignment(dag(), opt_.intervene);
        std::vector<std::string> assigned(dag().size());
        VertexSet s;
        for (const auto& [v, value] : spec) {
            if (value >= cardinalities()[v])
                throw Error(ErrorKind::InvalidSpec, "value out of range for " + dag().label(v));
            s.insert(v);
            assigned[v] = std::to_string(value);
        }
        const std::string text = to_dot(dag(), s, assigned);
        if (!opt_.out_path.empty()) {
            std::ofstream file(opt_.out_path, std::ios::binary);
            if (!file) throw Error(ErrorKind::ParseError, "cannot write " + opt_.out_path);
            file << text;
        } else {
            out_ << text;
        }
        return exit_ok;
    }

    int sample_cmd() {
        doc_ = load_model_file(opt_.file);
        std::vector<Assignment> draws;
        for (std::size_t i = 0; i < opt_.count; ++i)
            draws.push_back(std::visit([&](const auto& m) { return sample(m, opt_.seed, i); }, doc_->model));
        if (opt_.json) {
            ojson j;
            j["command"] = "sample";
            j["seed"] = opt_.seed;
            j["variables"] = set_json(dag(), VertexSet::range(dag().size()));
            j["samples"] = draws;
            emit(j);
        } else {
            out_ << set_text(dag(), VertexSet::range(dag().size())) << '\n';
            for (const auto& x : draws) {
                for (std::size_t k = 0; k < x.size(); ++k) out_ << (k ? "," : "") << x[k];
                out_ << '\n';
            }
        }
        return exit_ok;
    }

    int canonical() {
        load();
        CanonicalKind kind{};
        if (opt_.kind == "chain")
            kind = CanonicalKind::Chain;
        else if (opt_.kind == "fork")
            kind = CanonicalKind::Fork;
        else
            kind = CanonicalKind::Collider;
        const auto r = canonical_structure_report(model(), kind);
        const Dag& g = dag();
        const std::vector<std::pair<std::string, InfoValue>> values = {
            {"I(" + g.label(r.x) + "->" + g.label(r.y) + ")", r.x_to_y},
            {"I(" + g.label(r.y) + "->" + g.label(r.x) + ")", r.y_to_x},
            {"I(" + g.label(r.y) + "->" + g.label(r.z) + ")", r.y_to_z},
            {"I(" + g.label(r.z) + "->" + g.label(r.y) + ")", r.z_to_y},
            {"I(" + g.label(r.x) + "->" + g.label(r.z) + ")", r.x_to_z},
            {"I(" + g.label(r.z) + "->" + g.label(r.x) + ")", r.z_to_x},
        };
        if (opt_.json) {
            ojson j;
            j["command"] = "canonical";
            j["kind"] = std::string(to_string(kind));
            j["roles"] = {{"X", g.label(r.x)}, {"Y", g.label(r.y)}, {"Z", g.label(r.z)}};
            ojson vals = ojson::object();
            for (const auto& [name, v] : values) vals[name] = info_json(v);
            j["directed_information"] = vals;
            ojson ids = ojson::array();
            for (const auto& c : r.identities)
                ids.push_back({{"identity", c.statement}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
            j["identities"] = ids;
            j["all_hold"] = r.all_hold();
            emit(j);
        } else {
            out_ << "roles\tX=" << g.label(r.x) << " Y=" << g.label(r.y) << " Z=" << g.label(r.z) << '\n';
            for (const auto& [name, v] : values) out_ << name << '\t' << format_number(v.bits()) << '\n';
            for (const auto& c : r.identities)
                out_ << (c.holds ? "holds\t" : "FAILS\t") << c.statement << "\t(" << format_number(c.lhs) << " vs "
                     << format_number(c.rhs) << ")\n";
        }
        return r.all_hold() ? exit_ok : exit_query;
    }

    int format() {
        out_ << serialize_model(load_model_file(opt_.file));
        return exit_ok;
    }

    int generate() {
        CounterRng rng(opt_.seed);
        RandomModelOptions ropt;
        ropt.variables = opt_.variables;
        ModelDocument doc{"", CptModel(Dag{}, {}, {})};
        if (opt_.kind == "random") {
            doc.description = "random model, seed " + std::to_string(opt_.seed);
            if (opt_.functional)
                doc.model = random_functional_model(rng, ropt);
            else
                doc.model = random_cpt_model(rng, ropt);
        } else {
            const CanonicalKind kind = opt_.kind == "chain"  ? CanonicalKind::Chain
                                       : opt_.kind == "fork" ? CanonicalKind::Fork
                                                             : CanonicalKind::Collider;
            doc.description = std::string(to_string(kind)) + " with random CPTs, seed " + std::to_string(opt_.seed);
            doc.model = random_canonical_model(rng, kind);
        }
        out_ << serialize_model(doc);
        return exit_ok;
    }

private:
    void load() {
        doc_ = load_model_file(opt_.file);
        cpt_.emplace(doc_->cpt_model());
    }
    const Dag& dag() const { return doc_->dag(); }
    const CptModel& model() const { return *cpt_; }
    std::vector<std::size_t> cardinalities() const {
        return std::visit([](const auto& m) { return m.cardinalities(); }, doc_->model);
    }
    std::string all_names() const { return set_text(dag(), VertexSet::range(dag().size())); }

    void emit(const ojson& j) { out_ << j.dump(2) << '\n'; }

    int table_result(const char* command, const std::string& title, const JointTable& t) {
        if (opt_.json) {
            ojson j;
            j["command"] = command;
            j["query"] = title;
            j["table"] = table_json(dag(), t);
            emit(j);
        } else {
            out_ << "# " << title << '\n';
            print_table(out_, dag(), t);
        }
        return exit_ok;
    }

    int value_result(const char* command, const std::string& name, InfoValue v) {
        if (opt_.json) {
            ojson j;
            j["command"] = command;
            j["quantity"] = name;
            j["value"] = info_json(v);
            emit(j);
        } else {
            out_ << name << " = " << format_number(v.bits()) << " bits\n";
        }
        return exit_ok;
    }

    const Options& opt_;
    std::ostream& out_;
    std::optional<ModelDocument> doc_;
    std::optional<CptModel> cpt_;
};

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    detail::Options opt;
    CLI::App app{"Exact interventions, directed information and back-door checks for discrete causal models",
                 "causalinfo"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", opt.json, "Machine-readable JSON output");
    app.add_option("--tol", opt.tolerance, "Tolerance (bits) for a conditional directed information to count as 0")
        ->check(CLI::NonNegativeNumber);

    auto file_arg = [&](CLI::App* sub) { sub->add_option("file", opt.file, "Model file")->required(); };
    const std::vector<std::string> kinds = {"chain", "fork", "collider"};

    auto* validate = app.add_subcommand("validate", "Check a model file and list every violation");
    file_arg(validate);
    auto* joint = app.add_subcommand("joint", "Print the joint distribution");
    file_arg(joint);
    auto* marg = app.add_subcommand("marginal", "Print a marginal distribution");
    file_arg(marg);
    marg->add_option("--on", opt.on, "Comma-separated variables")->required();
    auto* cond = app.add_subcommand("condition", "Condition on observed evidence");
    file_arg(cond);
    cond->add_option("--given", opt.given, "Evidence, e.g. X=1,Y=0")->required();
    auto* intervene = app.add_subcommand("intervene", "Interventional distribution, optionally conditioned afterwards");
    file_arg(intervene);
    intervene->add_option("--do", opt.intervene, "Hard assignment, e.g. X=1")->required();
    intervene->add_option("--on", opt.on, "Target variables (default: all others)");
    intervene->add_option("--given", opt.given, "Evidence applied after the intervention");
    auto* di = app.add_subcommand("di", "Directed information I(from -> to [| given])");
    file_arg(di);
    di->add_option("--from", opt.from, "Set T")->required();
    di->add_option("--to", opt.to, "Set S")->required();
    di->add_option("--given", opt.given, "Conditioning set");
    auto* mi = app.add_subcommand("mi", "Mutual information I(a; b [| given])");
    file_arg(mi);
    mi->add_option("--a", opt.a, "First set")->required();
    mi->add_option("--b", opt.b, "Second set")->required();
    mi->add_option("--given", opt.given, "Conditioning set");
    auto* chain = app.add_subcommand("chainrule", "Chain-rule split of I(from -> to)");
    file_arg(chain);
    chain->add_option("--from", opt.from, "Set T")->required();
    chain->add_option("--to", opt.to, "Set S")->required();
    auto* backdoor = app.add_subcommand("backdoor", "Certify an adjustment set");
    file_arg(backdoor);
    backdoor->add_option("--cause", opt.cause, "Cause set S")->required();
    backdoor->add_option("--effect", opt.effect, "Effect set T")->required();
    backdoor->add_option("--adjust", opt.adjust, "Adjustment set Z (default: empty)");
    auto* find = app.add_subcommand("findbackdoor", "Enumerate certified adjustment sets");
    file_arg(find);
    find->add_option("--cause", opt.cause, "Cause set S")->required();
    find->add_option("--effect", opt.effect, "Effect set T")->required();
    find->add_option("--max-size", opt.max_size, "Largest candidate size")->capture_default_str();
    auto* dot = app.add_subcommand("dot", "Graphviz rendering of the DAG");
    file_arg(dot);
    dot->add_option("--do", opt.intervene, "Intervened variables to draw boxed");
    dot->add_option("--out", opt.out_path, "Write to a file instead of stdout");
    auto* samp = app.add_subcommand("sample", "Draw reproducible samples");
    file_arg(samp);
    samp->add_option("--seed", opt.seed, "Generator seed")->required();
    samp->add_option("--count", opt.count, "Number of samples")->capture_default_str();
    auto* canon = app.add_subcommand("canonical", "Directed-information identities of a chain, fork or collider");
    file_arg(canon);
    canon->add_option("--kind", opt.kind, "chain|fork|collider")->required()->check(CLI::IsMember(kinds));
    auto* format = app.add_subcommand("format", "Print the canonical serialization of a model file");
    file_arg(format);
    auto* gen = app.add_subcommand("generate", "Emit a seeded random model file");
    gen->add_option("--kind", opt.kind, "chain|fork|collider|random")
        ->required()
        ->check(CLI::IsMember({"chain", "fork", "collider", "random"}));
    gen->add_option("--seed", opt.seed, "Generator seed")->required();
    gen->add_option("--variables", opt.variables, "Variable count for --kind random")
        ->capture_default_str()
        ->check(CLI::Range(1, 24));
    gen->add_flag("--functional", opt.functional, "Structural equations instead of CPTs (--kind random)");

    std::vector<const char*> argv{"causalinfo"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    detail::Session session(opt, out);
    try {
        if (validate->parsed()) return session.validate();
        if (joint->parsed()) return session.joint();
        if (marg->parsed()) return session.marginal_cmd();
        if (cond->parsed()) return session.condition_cmd();
        if (intervene->parsed()) return session.intervene();
        if (di->parsed()) return session.di();
        if (mi->parsed()) return session.mi();
        if (chain->parsed()) return session.chainrule();
        if (backdoor->parsed()) return session.backdoor();
        if (find->parsed()) return session.findbackdoor();
        if (dot->parsed()) return session.dot();
        if (samp->parsed()) return session.sample_cmd();
        if (canon->parsed()) return session.canonical();
        if (format->parsed()) return session.format();
        if (gen->parsed()) return session.generate();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_query;
    }
    err << "usage error: no subcommand\n";
    return exit_usage;
}

}  // namespace causalinfo::cli
