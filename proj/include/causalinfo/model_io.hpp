#pragma once

// Model files: JSON documents declaring variables in causal order with either
// CPT rows or structural equations. Rows are keyed by explicit parent
// assignments. serialize_model writes the canonical layout, so loading and
// re-serializing a canonical file reproduces it byte for byte. The schema is
// documented in docs/model-format.md.

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "causalinfo/distribution.hpp"
#include "causalinfo/errors.hpp"
#include "causalinfo/graph.hpp"
#include "causalinfo/model.hpp"

namespace causalinfo {

inline constexpr const char* model_format_name = "causalinfo-model";
inline constexpr int model_format_version = 1;

struct ModelDocument {
    std::string description;
    std::variant<CptModel, FunctionalModel> model;

    bool is_functional() const { return std::holds_alternative<FunctionalModel>(model); }
    const Dag& dag() const {
        return std::visit([](const auto& m) -> const Dag& { return m.dag(); }, model);
    }
    /// The CPT form; functional models are converted by pushforward.
    CptModel cpt_model() const {
        if (const auto* fm = std::get_if<FunctionalModel>(&model)) return cpt_from_functional(*fm);
        return std::get<CptModel>(model);
    }
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

inline const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) parse_fail(where + ": missing \"" + key + "\"");
    return obj.at(key);
}

inline std::size_t as_index(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0) parse_fail(where + ": expected a nonnegative integer");
    return j.get<std::size_t>();
}

inline double as_probability(const json& j, const std::string& where) {
    if (!j.is_number()) parse_fail(where + ": expected a number");
    return j.get<double>();
}

// Row index of a {"given": {...}} object over the listed parents.
inline std::size_t given_row(const json& given, const std::vector<std::string>& parent_names,
                             const std::vector<std::size_t>& parent_cards, const std::string& where) {
    if (!given.is_object()) parse_fail(where + ": \"given\" must be an object");
    if (given.size() != parent_names.size())
        parse_fail(where + ": \"given\" must assign exactly the parents of the variable");
    std::size_t row = 0;
    for (std::size_t k = 0; k < parent_names.size(); ++k) {
        if (!given.contains(parent_names[k])) parse_fail(where + ": \"given\" misses parent " + parent_names[k]);
        const std::size_t value = as_index(given.at(parent_names[k]), where);
        if (value >= parent_cards[k])
            parse_fail(where + ": value " + std::to_string(value) + " out of range for parent " + parent_names[k]);
        row = row * parent_cards[k] + value;
    }
    return row;
}

inline std::string given_text(const std::vector<std::string>& names, const std::vector<std::size_t>& cards,
                              std::size_t row) {
    std::vector<std::size_t> values(names.size());
    for (std::size_t k = names.size(); k-- > 0;) {
        values[k] = row % cards[k];
        row /= cards[k];
    }
    std::string out = "{";
    for (std::size_t k = 0; k < names.size(); ++k) {
        if (k) out += ", ";
        out += json(names[k]).dump() + ": " + std::to_string(values[k]);
    }
    return out + "}";
}

template <class T>
std::string inline_array(const std::vector<T>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += json(values[i]).dump();
    }
    return out + "]";
}

}  // namespace detail

/// Parses a model document. Throws ParseError for malformed or out-of-order
/// input and, when `check` is set, InvalidModel when the parsed model breaks a
/// model invariant (unnormalized rows, function values out of range).
inline ModelDocument parse_model(const std::string& text, bool check = true) {
    using detail::json;
    using detail::parse_fail;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("document must be a JSON object");
    if (detail::require(doc, "format", "document") != model_format_name)
        parse_fail(std::string("\"format\" must be \"") + model_format_name + "\"");
    if (detail::require(doc, "version", "document") != model_format_version)
        parse_fail("unsupported format version");
    const json& kind = detail::require(doc, "kind", "document");
    if (kind != "cpt" && kind != "functional") parse_fail("\"kind\" must be \"cpt\" or \"functional\"");
    const bool functional = kind == "functional";
    std::string description;
    if (doc.contains("description")) {
        if (!doc["description"].is_string()) parse_fail("\"description\" must be a string");
        description = doc["description"].get<std::string>();
    }
    const json& vars = detail::require(doc, "variables", "document");
    if (!vars.is_array()) parse_fail("\"variables\" must be an array");

    const std::size_t n = vars.size();
    std::map<std::string, Vertex> index;
    std::vector<std::string> labels;
    std::vector<std::size_t> cards;
    std::vector<VertexSet> parents;
    for (Vertex v = 0; v < n; ++v) {
        const json& var = vars[v];
        const std::string where = "variable " + std::to_string(v);
        const json& name = detail::require(var, "name", where);
        if (!name.is_string() || name.get<std::string>().empty()) parse_fail(where + ": name must be a nonempty string");
        const std::string label = name.get<std::string>();
        if (index.count(label)) parse_fail("duplicate variable name " + label);
        const std::size_t card = detail::as_index(detail::require(var, "cardinality", label), label);
        if (card == 0) parse_fail(label + ": cardinality must be at least 1");
        const json& plist = detail::require(var, "parents", label);
        if (!plist.is_array()) parse_fail(label + ": \"parents\" must be an array");
        VertexSet ps;
        for (const auto& p : plist) {
            if (!p.is_string()) parse_fail(label + ": parent names must be strings");
            auto it = index.find(p.get<std::string>());
            if (it == index.end())
                parse_fail(label + ": parent " + p.get<std::string>() +
                           " is not declared earlier (variables must be listed in causal order)");
            if (ps.contains(it->second)) parse_fail(label + ": parent " + p.get<std::string>() + " listed twice");
            ps.insert(it->second);
        }
        index[label] = v;
        labels.push_back(label);
        cards.push_back(card);
        parents.push_back(std::move(ps));
    }
    Dag dag = validate_dag(n, parents, labels);

    std::vector<std::vector<double>> cpt_rows(n);
    std::vector<std::vector<double>> noise(n);
    std::vector<std::vector<std::size_t>> functions(n);
    for (Vertex v = 0; v < n; ++v) {
        const json& var = vars[v];
        const std::string& label = labels[v];
        std::vector<std::string> pnames;
        std::vector<std::size_t> pcards;
        for (Vertex p : dag.parents(v)) {
            pnames.push_back(labels[p]);
            pcards.push_back(cards[p]);
        }
        std::size_t row_count = 1;
        for (auto c : pcards) row_count *= c;
        std::vector<bool> seen(row_count, false);

        if (!functional) {
            if (var.contains("noise") || var.contains("function"))
                parse_fail(label + ": CPT models take \"cpt\", not \"noise\"/\"function\"");
            const json& rows = detail::require(var, "cpt", label);
            if (!rows.is_array()) parse_fail(label + ": \"cpt\" must be an array");
            cpt_rows[v].assign(row_count * cards[v], 0.0);
            for (const auto& row : rows) {
                const std::size_t r = detail::given_row(detail::require(row, "given", label), pnames, pcards, label);
                if (seen[r]) parse_fail(label + ": duplicate CPT row " + detail::given_text(pnames, pcards, r));
                seen[r] = true;
                const json& p = detail::require(row, "p", label);
                if (!p.is_array() || p.size() != cards[v])
                    parse_fail(label + ": each \"p\" needs " + std::to_string(cards[v]) + " entries");
                for (std::size_t k = 0; k < cards[v]; ++k)
                    cpt_rows[v][r * cards[v] + k] = detail::as_probability(p[k], label);
            }
        } else {
            if (var.contains("cpt")) parse_fail(label + ": functional models take \"noise\" and \"function\"");
            const json& u = detail::require(var, "noise", label);
            if (!u.is_array() || u.empty()) parse_fail(label + ": \"noise\" must be a nonempty array");
            for (const auto& p : u) noise[v].push_back(detail::as_probability(p, label));
            const std::size_t nu = noise[v].size();
            const json& rows = detail::require(var, "function", label);
            if (!rows.is_array()) parse_fail(label + ": \"function\" must be an array");
            functions[v].assign(row_count * nu, 0);
            for (const auto& row : rows) {
                const std::size_t r = detail::given_row(detail::require(row, "given", label), pnames, pcards, label);
                if (seen[r]) parse_fail(label + ": duplicate function row " + detail::given_text(pnames, pcards, r));
                seen[r] = true;
                const json& values = detail::require(row, "values", label);
                if (!values.is_array() || values.size() != nu)
                    parse_fail(label + ": each \"values\" needs one entry per noise symbol");
                for (std::size_t k = 0; k < nu; ++k) functions[v][r * nu + k] = detail::as_index(values[k], label);
            }
        }
        for (std::size_t r = 0; r < row_count; ++r)
            if (!seen[r]) parse_fail(label + ": missing row " + detail::given_text(pnames, pcards, r));
    }

    if (functional) {
        FunctionalModel fm(std::move(dag), std::move(cards), std::move(noise), std::move(functions));
        if (check && !validate_model(fm).empty())
            throw Error(ErrorKind::InvalidModel, detail::describe(validate_model(fm), fm.dag()));
        return {description, std::move(fm)};
    }
    return {description, CptModel::from_rows(std::move(dag), std::move(cards), std::move(cpt_rows), check)};
}

/// Canonical text: two-space indentation, one row object per line, rows in
/// mixed-radix order of the parent assignment, trailing newline.
inline std::string serialize_model(const ModelDocument& document) {
    using detail::json;
    const Dag& dag = document.dag();
    const bool functional = document.is_functional();
    std::ostringstream out;
    out << "{\n";
    out << "  \"format\": " << json(model_format_name).dump() << ",\n";
    out << "  \"version\": " << model_format_version << ",\n";
    out << "  \"kind\": " << (functional ? "\"functional\"" : "\"cpt\"") << ",\n";
    if (!document.description.empty()) out << "  \"description\": " << json(document.description).dump() << ",\n";
    out << "  \"variables\": [";
    for (Vertex v = 0; v < dag.size(); ++v) {
        std::vector<std::string> pnames;
        std::vector<std::size_t> pcards;
        const auto& cards = std::visit([](const auto& m) -> const std::vector<std::size_t>& { return m.cardinalities(); },
                                       document.model);
        for (Vertex p : dag.parents(v)) {
            pnames.push_back(dag.label(p));
            pcards.push_back(cards[p]);
        }
        out << (v ? ",\n" : "\n") << "    {\n";
        out << "      \"name\": " << json(dag.label(v)).dump() << ",\n";
        out << "      \"cardinality\": " << cards[v] << ",\n";
        out << "      \"parents\": " << detail::inline_array(pnames) << ",\n";
        if (!functional) {
            const Kernel& cpt = std::get<CptModel>(document.model).cpt(v);
            out << "      \"cpt\": [\n";
            for (std::size_t r = 0; r < cpt.row_count(); ++r) {
                auto row = cpt.row(r);
                out << "        {\"given\": " << detail::given_text(pnames, pcards, r)
                    << ", \"p\": " << detail::inline_array(std::vector<double>(row.begin(), row.end()))
                    << (r + 1 < cpt.row_count() ? "},\n" : "}\n");
            }
            out << "      ]\n";
        } else {
            const auto& fm = std::get<FunctionalModel>(document.model);
            const std::size_t nu = fm.noise_cardinality(v);
            const auto& f = fm.function(v);
            const std::size_t rows = f.size() / nu;
            out << "      \"noise\": " << detail::inline_array(fm.noise(v)) << ",\n";
            out << "      \"function\": [\n";
            for (std::size_t r = 0; r < rows; ++r) {
                std::vector<std::size_t> values(f.begin() + static_cast<std::ptrdiff_t>(r * nu),
                                                f.begin() + static_cast<std::ptrdiff_t>((r + 1) * nu));
                out << "        {\"given\": " << detail::given_text(pnames, pcards, r)
                    << ", \"values\": " << detail::inline_array(values) << (r + 1 < rows ? "},\n" : "}\n");
            }
            out << "      ]\n";
        }
        out << "    }";
    }
    out << (dag.size() ? "\n  ]\n" : "]\n") << "}\n";
    return out.str();
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline ModelDocument load_model_file(const std::string& path, bool check = true) {
    return parse_model(read_text_file(path), check);
}

}  // namespace causalinfo
