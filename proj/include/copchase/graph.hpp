#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace copchase {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Immutable adjacency structure over dense vertex ids 0..n-1.
///
/// Out-neighbor lists are sorted ascending, hold no duplicates and never hold
/// the vertex itself: the cop's option to stay is implicit in
/// closed_neighborhood(). in_adj() is always the transpose of out_adj(); for
/// undirected graphs the two are identical.
class Graph {
public:
    /// Builds a normalized graph. Duplicate edges collapse, self-loops are
    /// dropped and undirected input is symmetrized. Throws EmptyInstanceError
    /// for vertex_count == 0 and ValidationError for out-of-range endpoints.
    static Graph build(bool directed, std::size_t vertex_count, std::span<const Edge> edges,
                       std::vector<std::string> labels = {});

    bool directed() const noexcept { return directed_; }
    std::size_t vertex_count() const noexcept { return out_adj_.size(); }
    /// Number of stored arcs; an undirected edge counts once.
    std::size_t edge_count() const noexcept;

    std::span<const VertexId> out_adj(VertexId v) const { return out_adj_.at(v); }
    std::span<const VertexId> in_adj(VertexId v) const { return in_adj_.at(v); }

    /// Display name of v; falls back to "v<id>" when the graph carries no labels.
    std::string label(VertexId v) const;
    bool has_labels() const noexcept { return !labels_.empty(); }

    /// Every edge once: (u, v) with u < v for undirected graphs, all arcs otherwise.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    Graph() = default;

    bool directed_ = false;
    std::vector<std::string> labels_;
    std::vector<std::vector<VertexId>> out_adj_;
    std::vector<std::vector<VertexId>> in_adj_;
};

inline Graph build_graph(bool directed, std::size_t vertex_count, std::span<const Edge> edges) {
    return Graph::build(directed, vertex_count, edges);
}

/// out_adj(v) ∪ {v}, ascending. Throws ValidationError if v is out of range.
std::vector<VertexId> closed_neighborhood(const Graph& g, VertexId v);

enum class GambleMode {
    strict,      ///< probabilities sum to 1
    permissive,  ///< probabilities sum to at most 1
};

inline constexpr double kGambleSumTolerance = 1e-9;

/// The gambler's time-independent distribution over vertices.
class Gamble {
public:
    std::size_t size() const noexcept { return p_.size(); }
    double operator[](VertexId v) const { return p_[v]; }
    std::span<const double> probabilities() const noexcept { return p_; }
    GambleMode mode() const noexcept { return mode_; }
    double sum() const noexcept;

    friend bool operator==(const Gamble&, const Gamble&) = default;

private:
    friend Gamble make_gamble(std::span<const double>, GambleMode);

    std::vector<double> p_;
    GambleMode mode_ = GambleMode::strict;
};

/// Checks raw against the mode's constraints and wraps it unchanged (no
/// renormalization).
Gamble validate_gamble(const Graph& g, std::span<const double> raw, GambleMode mode = GambleMode::strict);

/// validate_gamble without a graph; errors name vertices by id.
Gamble make_gamble(std::span<const double> raw, GambleMode mode = GambleMode::strict);

struct Instance {
    Graph graph;
    Gamble gamble;
};

/// Parses either instance format. A document whose first non-blank character
/// is '{' is read as JSON, anything else as the edge-list format.
Instance parse_instance(std::string_view text, GambleMode mode = GambleMode::strict);
Instance parse_json_instance(std::string_view text, GambleMode mode = GambleMode::strict);
Instance parse_edge_list_instance(std::string_view text, GambleMode mode = GambleMode::strict);

/// Reads a file and parses it with parse_instance.
Instance load_instance(const std::string& path, GambleMode mode = GambleMode::strict);

std::string to_json_instance(const Graph& g, const Gamble& gamble);
std::string to_edge_list_instance(const Graph& g, const Gamble& gamble);

}  // namespace copchase
