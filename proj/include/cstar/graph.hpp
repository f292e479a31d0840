#pragma once

#include <compare>
#include <string>
#include <vector>

namespace cstar {

/// Endpoint of an edge: an internal vertex or a boundary vertex, zero-based.
struct Target {
    enum class Kind { Internal, Boundary };
    Kind kind;
    int index;

    static Target internal(int i) { return {Kind::Internal, i}; }
    static Target boundary(int j) { return {Kind::Boundary, j}; }
    bool is_internal() const { return kind == Kind::Internal; }
    bool is_boundary() const { return kind == Kind::Boundary; }

    friend auto operator<=>(const Target&, const Target&) = default;
};

/// Labeled admissible graph: n internal vertices each with an ordered star of
/// outgoing edges, and m boundary vertices that only receive edges.
class AdmissibleGraph {
public:
    AdmissibleGraph(int n, int m, std::vector<std::vector<Target>> stars);

    int internal_count() const noexcept { return n_; }
    int boundary_count() const noexcept { return m_; }
    const std::vector<std::vector<Target>>& stars() const noexcept { return stars_; }
    const std::vector<Target>& star(int k) const { return stars_.at(k); }
    int edge_count() const;

    friend bool operator==(const AdmissibleGraph&, const AdmissibleGraph&) = default;

private:
    int n_;
    int m_;
    std::vector<std::vector<Target>> stars_;
};

/// All labeled admissible graphs with n internal vertices, m boundary vertices
/// and `edge_count` edges, in a fixed deterministic order. Stars never repeat a
/// target (parallel edges carry a vanishing form).
std::vector<AdmissibleGraph> enumerate(int n, int m, int edge_count);

/// Graphs where every internal vertex has out-degree exactly two.
std::vector<AdmissibleGraph> star_graphs(int n, int m);

/// `n;m;star1|star2|...` with internal targets as `k` and boundary targets as
/// `bJ`, both one-based.
std::string canonical_key(const AdmissibleGraph& g);
AdmissibleGraph graph_from_key(const std::string& key);

std::string target_label(const Target& t);
Target parse_target(const std::string& label, int n, int m);

} // namespace cstar
