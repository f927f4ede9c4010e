#include "copchase/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "copchase/errors.hpp"
#include "copchase/format.hpp"

namespace copchase {

std::string InstanceTooLargeError::message(std::optional<std::uint64_t> count, double log10_count, std::uint64_t cap) {
    std::ostringstream os;
    os << "strategy space too large for enumeration: ";
    if (count)
        os << *count;
    else
        os << "~1e" << format_double(std::round(log10_count * 100.0) / 100.0);
    os << " strategies exceed the cap of " << cap;
    return os.str();
}

Graph Graph::build(bool directed, std::size_t vertex_count, std::span<const Edge> edges,
                   std::vector<std::string> labels) {
    if (vertex_count == 0) throw EmptyInstanceError();
    if (vertex_count > std::numeric_limits<VertexId>::max())
        throw ValidationError("vertex count " + std::to_string(vertex_count) + " exceeds the supported maximum");
    if (!labels.empty()) {
        if (labels.size() != vertex_count)
            throw ValidationError("label table has " + std::to_string(labels.size()) + " entries for " +
                                  std::to_string(vertex_count) + " vertices");
        std::unordered_set<std::string_view> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second) throw ValidationError("duplicate vertex label '" + l + "'");
    }

    Graph g;
    g.directed_ = directed;
    g.labels_ = std::move(labels);
    g.out_adj_.resize(vertex_count);

    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [u, v] = edges[i];
        if (u >= vertex_count || v >= vertex_count) {
            std::ostringstream os;
            os << "edge #" << i << " (" << u << ", " << v << ") has an endpoint outside [0, " << vertex_count << ")";
            throw ValidationError(os.str());
        }
        if (u == v) continue;
        g.out_adj_[u].push_back(v);
        if (!directed) g.out_adj_[v].push_back(u);
    }
    for (auto& adj : g.out_adj_) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        adj.shrink_to_fit();
    }

    if (directed) {
        g.in_adj_.resize(vertex_count);
        // Scanning sources in ascending order keeps each in-list sorted.
        for (VertexId u = 0; u < vertex_count; ++u)
            for (VertexId v : g.out_adj_[u]) g.in_adj_[v].push_back(u);
    } else {
        g.in_adj_ = g.out_adj_;
    }
    return g;
}

std::size_t Graph::edge_count() const noexcept {
    std::size_t arcs = 0;
    for (const auto& adj : out_adj_) arcs += adj.size();
    return directed_ ? arcs : arcs / 2;
}

std::string Graph::label(VertexId v) const {
    if (v >= vertex_count()) throw ValidationError("vertex id " + std::to_string(v) + " out of range");
    return labels_.empty() ? "v" + std::to_string(v) : labels_[v];
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    for (VertexId u = 0; u < vertex_count(); ++u)
        for (VertexId v : out_adj_[u])
            if (directed_ || u < v) out.emplace_back(u, v);
    return out;
}

std::vector<VertexId> closed_neighborhood(const Graph& g, VertexId v) {
    if (v >= g.vertex_count())
        throw ValidationError("vertex id " + std::to_string(v) + " out of range [0, " +
                              std::to_string(g.vertex_count()) + ")");
    auto adj = g.out_adj(v);
    std::vector<VertexId> out;
    out.reserve(adj.size() + 1);
    auto pos = std::lower_bound(adj.begin(), adj.end(), v);
    out.insert(out.end(), adj.begin(), pos);
    out.push_back(v);
    out.insert(out.end(), pos, adj.end());
    return out;
}

double Gamble::sum() const noexcept { return std::accumulate(p_.begin(), p_.end(), 0.0); }

namespace {

template <typename LabelFn>
void check_gamble(std::span<const double> raw, GambleMode mode, LabelFn label) {
    for (VertexId v = 0; v < raw.size(); ++v) {
        double p = raw[v];
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("probability of vertex '" + label(v) + "' is " + format_double(p) +
                                  ", outside [0, 1]");
    }
    double total = std::accumulate(raw.begin(), raw.end(), 0.0);
    if (mode == GambleMode::strict && std::abs(total - 1.0) > kGambleSumTolerance)
        throw ValidationError("gamble probabilities sum to " + format_double(total) +
                              ", expected 1 (use permissive mode for sub-distributions)");
    if (mode == GambleMode::permissive && total > 1.0 + kGambleSumTolerance)
        throw ValidationError("gamble probabilities sum to " + format_double(total) + ", which exceeds 1");
}

}  // namespace

Gamble validate_gamble(const Graph& g, std::span<const double> raw, GambleMode mode) {
    if (raw.size() != g.vertex_count())
        throw ValidationError("gamble has " + std::to_string(raw.size()) + " entries for " +
                              std::to_string(g.vertex_count()) + " vertices");
    check_gamble(raw, mode, [&](VertexId v) { return g.label(v); });
    return make_gamble(raw, mode);
}

Gamble make_gamble(std::span<const double> raw, GambleMode mode) {
    check_gamble(raw, mode, [](VertexId v) { return "v" + std::to_string(v); });
    Gamble out;
    out.p_.assign(raw.begin(), raw.end());
    out.mode_ = mode;
    return out;
}

}  // namespace copchase
