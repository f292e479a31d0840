#include "cstar/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cstar {

AdmissibleGraph::AdmissibleGraph(int n, int m, std::vector<std::vector<Target>> stars)
    : n_(n), m_(m), stars_(std::move(stars))
{
    if (n < 0 || m < 0) {
        throw std::invalid_argument("vertex counts must be non-negative");
    }
    if (2 * n + m < 3) {
        throw std::invalid_argument("admissible graphs need 2n + m >= 3");
    }
    if (static_cast<int>(stars_.size()) != n) {
        throw std::invalid_argument("one star per internal vertex is required");
    }
    for (int k = 0; k < n; ++k) {
        const auto& s = stars_[k];
        for (std::size_t a = 0; a < s.size(); ++a) {
            const Target& t = s[a];
            if (t.is_internal()) {
                if (t.index < 0 || t.index >= n) {
                    throw std::invalid_argument("internal target out of range");
                }
                if (t.index == k) {
                    throw std::invalid_argument("simple loops are not admissible");
                }
            } else if (t.index < 0 || t.index >= m) {
                throw std::invalid_argument("boundary target out of range");
            }
            for (std::size_t b = 0; b < a; ++b) {
                if (s[b] == t) {
                    throw std::invalid_argument("repeated target within one star");
                }
            }
        }
    }
}

int AdmissibleGraph::edge_count() const
{
    return std::accumulate(stars_.begin(), stars_.end(), 0,
                           [](int acc, const auto& s) { return acc + static_cast<int>(s.size()); });
}

namespace {

// Ordered tuples of `size` distinct elements of `pool`, lexicographic in pool order.
void ordered_tuples(const std::vector<Target>& pool, int size, std::vector<Target>& current,
                    std::vector<bool>& used, std::vector<std::vector<Target>>& out)
{
    if (static_cast<int>(current.size()) == size) {
        out.push_back(current);
        return;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (used[i]) {
            continue;
        }
        used[i] = true;
        current.push_back(pool[i]);
        ordered_tuples(pool, size, current, used, out);
        current.pop_back();
        used[i] = false;
    }
}

std::vector<Target> target_pool(int n, int m, int k)
{
    std::vector<Target> pool;
    for (int i = 0; i < n; ++i) {
        if (i != k) {
            pool.push_back(Target::internal(i));
        }
    }
    for (int j = 0; j < m; ++j) {
        pool.push_back(Target::boundary(j));
    }
    return pool;
}

std::vector<std::vector<Target>> stars_of_size(int n, int m, int k, int size)
{
    std::vector<std::vector<Target>> out;
    auto pool = target_pool(n, m, k);
    if (size > static_cast<int>(pool.size())) {
        return out;
    }
    std::vector<Target> current;
    std::vector<bool> used(pool.size(), false);
    ordered_tuples(pool, size, current, used, out);
    return out;
}

void check_counts(int n, int m)
{
    if (n < 0 || m < 0) {
        throw std::invalid_argument("vertex counts must be non-negative");
    }
    if (2 * n + m < 3) {
        throw std::invalid_argument("admissible graphs need 2n + m >= 3");
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) {
            return parts;
        }
        start = pos + 1;
    }
}

} // namespace

std::vector<AdmissibleGraph> enumerate(int n, int m, int edge_count)
{
    check_counts(n, m);
    std::vector<AdmissibleGraph> out;
    int per_vertex = n - 1 + m;
    if (edge_count < 0 || edge_count > n * per_vertex) {
        return out;
    }
    // All candidate stars per vertex, ordered by out-degree then lexicographically.
    std::vector<std::vector<std::vector<Target>>> candidates(n);
    for (int k = 0; k < n; ++k) {
        for (int size = 0; size <= per_vertex; ++size) {
            auto s = stars_of_size(n, m, k, size);
            candidates[k].insert(candidates[k].end(), s.begin(), s.end());
        }
    }
    std::vector<std::vector<Target>> chosen(n);
    auto recurse = [&](auto&& self, int k, int remaining) -> void {
        if (k == n) {
            if (remaining == 0) {
                out.emplace_back(n, m, chosen);
            }
            return;
        }
        int capacity_after = (n - k - 1) * per_vertex;
        for (const auto& star : candidates[k]) {
            int size = static_cast<int>(star.size());
            if (size > remaining || remaining - size > capacity_after) {
                continue;
            }
            chosen[k] = star;
            self(self, k + 1, remaining - size);
        }
    };
    recurse(recurse, 0, edge_count);
    return out;
}

std::vector<AdmissibleGraph> star_graphs(int n, int m)
{
    if (n < 1) {
        throw std::invalid_argument("star_graphs needs at least one internal vertex");
    }
    check_counts(n, m);
    std::vector<std::vector<std::vector<Target>>> candidates(n);
    for (int k = 0; k < n; ++k) {
        candidates[k] = stars_of_size(n, m, k, 2);
    }
    std::vector<AdmissibleGraph> out;
    std::vector<std::vector<Target>> chosen(n);
    auto recurse = [&](auto&& self, int k) -> void {
        if (k == n) {
            out.emplace_back(n, m, chosen);
            return;
        }
        for (const auto& star : candidates[k]) {
            chosen[k] = star;
            self(self, k + 1);
        }
    };
    recurse(recurse, 0);
    return out;
}

std::string target_label(const Target& t)
{
    return t.is_internal() ? std::to_string(t.index + 1) : "b" + std::to_string(t.index + 1);
}

Target parse_target(const std::string& label, int n, int m)
{
    if (label.empty()) {
        throw std::invalid_argument("empty edge target");
    }
    bool boundary = label[0] == 'b';
    std::string digits = boundary ? label.substr(1) : label;
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
        throw std::invalid_argument("bad edge target '" + label + "'");
    }
    int v = std::stoi(digits);
    if (boundary) {
        if (v < 1 || v > m) {
            throw std::invalid_argument("boundary target out of range: " + label);
        }
        return Target::boundary(v - 1);
    }
    if (v < 1 || v > n) {
        throw std::invalid_argument("internal target out of range: " + label);
    }
    return Target::internal(v - 1);
}

std::string canonical_key(const AdmissibleGraph& g)
{
    std::ostringstream out;
    out << g.internal_count() << ";" << g.boundary_count() << ";";
    for (int k = 0; k < g.internal_count(); ++k) {
        if (k > 0) {
            out << "|";
        }
        const auto& s = g.star(k);
        for (std::size_t a = 0; a < s.size(); ++a) {
            if (a > 0) {
                out << ",";
            }
            out << target_label(s[a]);
        }
    }
    return out.str();
}

AdmissibleGraph graph_from_key(const std::string& key)
{
    auto first = key.find(';');
    auto second = key.find(';', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw std::invalid_argument("malformed graph key '" + key + "'");
    }
    int n = std::stoi(key.substr(0, first));
    int m = std::stoi(key.substr(first + 1, second - first - 1));
    std::string body = key.substr(second + 1);
    std::vector<std::vector<Target>> stars;
    if (n > 0) {
        for (const auto& star : split(body, '|')) {
            std::vector<Target> s;
            if (!star.empty()) {
                for (const auto& label : split(star, ',')) {
                    s.push_back(parse_target(label, n, m));
                }
            }
            stars.push_back(std::move(s));
        }
    }
    return AdmissibleGraph(n, m, std::move(stars));
}

} // namespace cstar
