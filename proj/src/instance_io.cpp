// Instance readers and writers for the JSON and edge-list formats.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "copchase/errors.hpp"
#include "copchase/format.hpp"
#include "copchase/graph.hpp"

namespace copchase {
namespace {

using json = nlohmann::json;

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ValidationError(std::string("instance is missing the \"") + key + "\" field");
    return *it;
}

}  // namespace

Instance parse_json_instance(std::string_view text, GambleMode mode) {
    // nlohmann keeps the last of duplicate object keys, so duplicates are
    // caught during parsing instead.
    std::vector<std::unordered_set<std::string>> open_objects;
    std::string duplicate_key;
    auto detect_duplicates = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
        case json::parse_event_t::object_start: open_objects.emplace_back(); break;
        case json::parse_event_t::object_end: open_objects.pop_back(); break;
        case json::parse_event_t::key:
            if (!open_objects.back().insert(parsed.get<std::string>()).second && duplicate_key.empty())
                duplicate_key = parsed.get<std::string>();
            break;
        default: break;
        }
        return true;
    };

    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), detect_duplicates);
    } catch (const json::parse_error& e) {
        auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string what = e.what();
        if (auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
        throw ParseError("malformed JSON: " + what, line, column);
    }
    if (!duplicate_key.empty()) throw ValidationError("duplicate key \"" + duplicate_key + "\" in instance");
    if (!doc.is_object()) throw ValidationError("instance must be a JSON object");

    try {
        const json& directed = require(doc, "directed");
        if (!directed.is_boolean()) throw ValidationError("\"directed\" must be true or false");

        const json& vertices = require(doc, "vertices");
        if (!vertices.is_array()) throw ValidationError("\"vertices\" must be an array of labels");
        std::vector<std::string> labels;
        std::unordered_map<std::string, VertexId> ids;
        for (const auto& v : vertices) {
            if (!v.is_string()) throw ValidationError("vertex labels must be strings");
            auto label = v.get<std::string>();
            if (!ids.emplace(label, static_cast<VertexId>(labels.size())).second)
                throw ValidationError("duplicate vertex label '" + label + "'");
            labels.push_back(std::move(label));
        }
        if (labels.empty()) throw EmptyInstanceError();

        auto lookup = [&](const json& label, const char* where) {
            if (!label.is_string()) throw ValidationError(std::string("vertex references in ") + where + " must be strings");
            auto it = ids.find(label.get<std::string>());
            if (it == ids.end())
                throw ValidationError("unknown vertex label '" + label.get<std::string>() + "' in " + where);
            return it->second;
        };

        std::vector<Edge> edges;
        if (auto it = doc.find("edges"); it != doc.end()) {
            if (!it->is_array()) throw ValidationError("\"edges\" must be an array of [u, v] pairs");
            for (const auto& e : *it) {
                if (!e.is_array() || e.size() != 2) throw ValidationError("each edge must be a two-element array");
                edges.emplace_back(lookup(e[0], "edges"), lookup(e[1], "edges"));
            }
        }

        const json& gamble = require(doc, "gamble");
        if (!gamble.is_object()) throw ValidationError("\"gamble\" must be an object mapping labels to probabilities");
        std::vector<double> p(labels.size(), 0.0);
        std::vector<bool> given(labels.size(), false);
        for (const auto& [label, value] : gamble.items()) {
            VertexId v = lookup(json(label), "gamble");
            if (!value.is_number()) throw ValidationError("probability of '" + label + "' must be a number");
            p[v] = value.get<double>();
            given[v] = true;
        }
        if (mode == GambleMode::strict) {
            auto missing = std::find(given.begin(), given.end(), false);
            if (missing != given.end())
                throw ValidationError("gamble has no entry for vertex '" +
                                      labels[static_cast<std::size_t>(missing - given.begin())] + "'");
        }

        const std::size_t n = labels.size();
        Graph g = Graph::build(directed.get<bool>(), n, edges, std::move(labels));
        Gamble validated = validate_gamble(g, p, mode);
        return {std::move(g), std::move(validated)};
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid instance: ") + e.what());
    }
}

Instance parse_edge_list_instance(std::string_view text, GambleMode mode) {
    struct GambleLine {
        std::string label;
        double p;
        std::size_t line, column;
    };

    std::optional<bool> directed;
    std::vector<std::string> labels;
    std::unordered_map<std::string, VertexId> ids;
    std::vector<Edge> edges;
    std::vector<GambleLine> gamble_lines;

    auto vertex = [&](const std::string& label) {
        auto [it, inserted] = ids.emplace(label, static_cast<VertexId>(labels.size()));
        if (inserted) labels.push_back(label);
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        struct Token {
            std::string text;
            std::size_t column;
        };
        std::vector<Token> tokens;
        for (std::size_t i = 0; i < line.size();) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            tokens.push_back({std::string(line.substr(i, j - i)), i + 1});
            i = j;
        }
        if (tokens.empty()) continue;

        const std::string& op = tokens[0].text;
        auto fail = [&](const std::string& what, std::size_t column) -> void { throw ParseError(what, line_no, column); };
        auto expect_args = [&](std::size_t count) {
            if (tokens.size() != count + 1)
                fail("'" + op + "' takes " + std::to_string(count) + " argument(s), got " +
                         std::to_string(tokens.size() - 1),
                     tokens[0].column);
        };

        if (op == "directed" || op == "undirected") {
            expect_args(0);
            if (directed) fail("duplicate graph header", tokens[0].column);
            directed = (op == "directed");
            continue;
        }
        if (!directed) fail("expected 'directed' or 'undirected' header before '" + op + "'", tokens[0].column);

        if (op == "e") {
            expect_args(2);
            VertexId u = vertex(tokens[1].text);
            VertexId v = vertex(tokens[2].text);
            edges.emplace_back(u, v);
        } else if (op == "v") {
            expect_args(1);
            vertex(tokens[1].text);
        } else if (op == "p") {
            expect_args(2);
            const std::string& value = tokens[2].text;
            double p = 0.0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), p);
            if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(p))
                fail("invalid probability '" + value + "'", tokens[2].column);
            gamble_lines.push_back({tokens[1].text, p, line_no, tokens[1].column});
        } else {
            fail("unknown directive '" + op + "'", tokens[0].column);
        }
    }

    if (!directed) throw ParseError("missing 'directed' or 'undirected' header", 1, 1);
    if (labels.empty()) throw EmptyInstanceError();

    std::vector<double> p(labels.size(), 0.0);
    std::vector<bool> given(labels.size(), false);
    for (const auto& gl : gamble_lines) {
        auto it = ids.find(gl.label);
        if (it == ids.end()) throw ParseError("unknown vertex label '" + gl.label + "' in gamble", gl.line, gl.column);
        if (given[it->second]) throw ParseError("duplicate gamble entry for vertex '" + gl.label + "'", gl.line, gl.column);
        given[it->second] = true;
        p[it->second] = gl.p;
    }

    const std::size_t n = labels.size();
    Graph g = Graph::build(*directed, n, edges, std::move(labels));
    Gamble validated = validate_gamble(g, p, mode);
    return {std::move(g), std::move(validated)};
}

Instance parse_instance(std::string_view text, GambleMode mode) {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_json_instance(text, mode);
    return parse_edge_list_instance(text, mode);
}

Instance load_instance(const std::string& path, GambleMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str(), mode);
}

std::string to_json_instance(const Graph& g, const Gamble& gamble) {
    nlohmann::ordered_json doc;
    doc["directed"] = g.directed();
    auto& vertices = doc["vertices"] = nlohmann::ordered_json::array();
    for (VertexId v = 0; v < g.vertex_count(); ++v) vertices.push_back(g.label(v));
    auto& edges = doc["edges"] = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges()) edges.push_back({g.label(u), g.label(v)});
    auto& p = doc["gamble"] = nlohmann::ordered_json::object();
    for (VertexId v = 0; v < g.vertex_count(); ++v) p[g.label(v)] = gamble[v];
    return doc.dump();
}

std::string to_edge_list_instance(const Graph& g, const Gamble& gamble) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        std::string label = g.label(v);
        bool representable = !label.empty() && std::none_of(label.begin(), label.end(), [](char c) {
            return c == '#' || std::isspace(static_cast<unsigned char>(c));
        });
        if (!representable) throw ValidationError("label '" + label + "' cannot be written in the edge-list format");
    }
    std::ostringstream os;
    os << (g.directed() ? "directed" : "undirected") << '\n';
    // Declare every vertex first so ids come back in the same order.
    for (VertexId v = 0; v < g.vertex_count(); ++v) os << "v " << g.label(v) << '\n';
    for (auto [u, v] : g.edges()) os << "e " << g.label(u) << ' ' << g.label(v) << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v) os << "p " << g.label(v) << ' ' << format_double(gamble[v]) << '\n';
    return os.str();
}

}  // namespace copchase
