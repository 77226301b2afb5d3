#pragma once

// Switch configuration derived from a path set, and the data-plane
// behaviour it produces. The simulator walks the arc-transition relation
// directly (state = the directed arc a packet just traversed), so it is an
// implementation-independent oracle for the closure verdict.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "flowcheck/path.hpp"
#include "flowcheck/topology.hpp"

namespace flowcheck {

// Switch `sw` forwards packets arriving from `in_neighbor` to `out_neighbor`.
// Several rules sharing (in_neighbor, sw) clone the packet.
struct FlowRule {
    NodeId in_neighbor;
    NodeId sw;
    NodeId out_neighbor;

    auto operator<=>(const FlowRule&) const = default;
};

class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::set<FlowRule> rules) : rules_(std::move(rules)) {}

    void add(FlowRule r) { rules_.insert(std::move(r)); }
    const std::set<FlowRule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    bool contains(const FlowRule& r) const { return rules_.count(r) != 0; }

    auto operator<=>(const Configuration&) const = default;

private:
    std::set<FlowRule> rules_;
};

// Every window a.b.c of every path becomes the rule (a, b, c). Expects
// complete paths, whose interior nodes are all switches.
inline Configuration derive_rules(const PathSet& set) {
    Configuration config;
    for (const auto& p : set.paths())
        for (std::size_t i = 0; i + 2 < p.nodes().size(); ++i)
            config.add({p.nodes()[i], p.nodes()[i + 1], p.nodes()[i + 2]});
    return config;
}

// A walk that revisits a directed arc, proving an infinite family of
// induced paths. The repeated arc is the state the walk closes on.
struct LoopWitness {
    std::vector<NodeId> walk;
    Arc repeated_arc;
};

struct InducedPaths {
    std::set<Path> paths;
};

using InducedResult = std::variant<InducedPaths, LoopWitness>;

inline bool is_loop(const InducedResult& r) { return std::holds_alternative<LoopWitness>(r); }

namespace detail {

using ArcAdjacency = std::map<Arc, std::set<Arc>>;

struct ArcGraph {
    ArcAdjacency out;
    std::set<Arc> start_arcs;  // host-headed arcs with at least one rule
};

inline void validate_configuration(const Configuration& config, const Topology& t) {
    for (const auto& r : config.rules()) {
        if (!t.is_switch(r.sw))
            throw std::invalid_argument("rule switch is not a switch node: " + r.sw);
        if (!t.neighbors(r.sw).count(r.in_neighbor))
            throw std::invalid_argument("rule in-neighbor " + r.in_neighbor +
                                        " is not adjacent to switch " + r.sw);
        if (!t.neighbors(r.sw).count(r.out_neighbor))
            throw std::invalid_argument("rule out-neighbor " + r.out_neighbor +
                                        " is not adjacent to switch " + r.sw);
    }
}

inline ArcGraph build_arc_graph(const Configuration& config, const Topology& t) {
    ArcGraph g;
    for (const auto& r : config.rules()) {
        g.out[{r.in_neighbor, r.sw}].insert({r.sw, r.out_neighbor});
        if (t.is_host(r.in_neighbor)) g.start_arcs.insert({r.in_neighbor, r.sw});
    }
    return g;
}

inline std::set<Arc> reachable_arcs(const ArcGraph& g, const std::set<Arc>& from) {
    std::set<Arc> seen(from.begin(), from.end());
    std::vector<Arc> stack(from.begin(), from.end());
    while (!stack.empty()) {
        Arc a = stack.back();
        stack.pop_back();
        const auto it = g.out.find(a);
        if (it == g.out.end()) continue;
        for (const auto& b : it->second)
            if (seen.insert(b).second) stack.push_back(b);
    }
    return seen;
}

// True iff some arc reachable from `from` lies on a cycle.
inline bool has_reachable_cycle(const ArcGraph& g, const std::set<Arc>& from) {
    enum : unsigned char { kWhite, kGray, kBlack };
    std::map<Arc, unsigned char> color;
    const auto reach = reachable_arcs(g, from);

    for (const auto& root : reach) {
        if (color[root] != kWhite) continue;
        // Iterative DFS; frame = (arc, position in its successor set).
        std::vector<std::pair<Arc, std::set<Arc>::const_iterator>> stack;
        static const std::set<Arc> empty;
        auto succ = [&](const Arc& a) -> const std::set<Arc>& {
            const auto it = g.out.find(a);
            return it == g.out.end() ? empty : it->second;
        };
        color[root] = kGray;
        stack.emplace_back(root, succ(root).begin());
        while (!stack.empty()) {
            auto& [node, it] = stack.back();
            if (it == succ(node).end()) {
                color[node] = kBlack;
                stack.pop_back();
                continue;
            }
            Arc next = *it++;
            if (color[next] == kGray) return true;
            if (color[next] == kWhite) {
                color[next] = kGray;
                stack.emplace_back(next, succ(next).begin());
            }
        }
    }
    return false;
}

inline std::map<Arc, std::size_t> bfs_distances(const ArcAdjacency& out, const std::set<Arc>& sources) {
    std::map<Arc, std::size_t> dist;
    std::vector<Arc> frontier(sources.begin(), sources.end());
    for (const auto& s : sources) dist[s] = 0;
    std::size_t d = 0;
    while (!frontier.empty()) {
        ++d;
        std::vector<Arc> next;
        for (const auto& a : frontier) {
            const auto it = out.find(a);
            if (it == out.end()) continue;
            for (const auto& b : it->second)
                if (dist.emplace(b, d).second) next.push_back(b);
        }
        frontier = std::move(next);
    }
    return dist;
}

inline ArcAdjacency reversed(const ArcAdjacency& out) {
    ArcAdjacency in;
    for (const auto& [a, succs] : out)
        for (const auto& b : succs) in[b].insert(a);
    return in;
}

// Lexicographically smallest shortest path from any source to `target`,
// as a vertex sequence including both ends. Ties between equal-length
// paths are broken step by step towards the smallest next vertex.
inline std::optional<std::vector<Arc>> lex_shortest_path(const ArcAdjacency& out,
                                                         const std::set<Arc>& sources,
                                                         const Arc& target) {
    const auto dist_to_target = bfs_distances(reversed(out), {target});

    std::optional<Arc> best;
    for (const auto& s : sources) {
        const auto it = dist_to_target.find(s);
        if (it == dist_to_target.end()) continue;
        if (!best || it->second < dist_to_target.at(*best) ||
            (it->second == dist_to_target.at(*best) && s < *best))
            best = s;
    }
    if (!best) return std::nullopt;

    std::vector<Arc> walk{*best};
    Arc cur = *best;
    while (cur != target) {
        const std::size_t remaining = dist_to_target.at(cur);
        const auto it = out.find(cur);
        std::optional<Arc> next;
        for (const auto& b : it->second) {
            const auto dit = dist_to_target.find(b);
            if (dit != dist_to_target.end() && dit->second + 1 == remaining && (!next || b < *next))
                next = b;
        }
        cur = *next;
        walk.push_back(cur);
    }
    return walk;
}

inline std::vector<NodeId> arc_walk_to_nodes(const std::vector<Arc>& arcs) {
    std::vector<NodeId> nodes{arcs.front().first};
    for (const auto& a : arcs) nodes.push_back(a.second);
    return nodes;
}

// Shortest walk from a start arc that revisits an arc state; ties broken by
// lexicographic comparison of the resulting node sequence.
inline LoopWitness shortest_loop_witness(const ArcGraph& g, const std::set<Arc>& starts) {
    const auto dist_from_start = bfs_distances(g.out, starts);

    // Shortest cycle length through X = 1 + dist(successors(X) -> X).
    auto cycle_length = [&](const Arc& x) -> std::optional<std::size_t> {
        const auto it = g.out.find(x);
        if (it == g.out.end()) return std::nullopt;
        const auto dist_to_x = bfs_distances(reversed(g.out), {x});
        std::optional<std::size_t> best;
        for (const auto& s : it->second) {
            const auto dit = dist_to_x.find(s);
            if (dit != dist_to_x.end() && (!best || dit->second + 1 < *best))
                best = dit->second + 1;
        }
        return best;
    };

    std::optional<std::size_t> best_total;
    std::vector<Arc> candidates;
    for (const auto& [x, d] : dist_from_start) {
        const auto c = cycle_length(x);
        if (!c) continue;
        const std::size_t total = d + *c;
        if (!best_total || total < *best_total) {
            best_total = total;
            candidates = {x};
        } else if (total == *best_total) {
            candidates.push_back(x);
        }
    }

    LoopWitness best;
    for (const auto& x : candidates) {
        auto prefix = *lex_shortest_path(g.out, starts, x);
        // Smallest shortest cycle x -> ... -> x.
        const auto& succs = g.out.at(x);
        auto back = *lex_shortest_path(g.out, succs, x);
        std::vector<Arc> arcs = prefix;
        arcs.insert(arcs.end(), back.begin(), back.end());
        auto nodes = arc_walk_to_nodes(arcs);
        if (best.walk.empty() || nodes < best.walk) {
            best.walk = std::move(nodes);
            best.repeated_arc = x;
        }
    }
    return best;
}

// Enumerates every walk from the start arcs that ends on a host-tailed arc.
// `arc_simple` restricts the walks to those that never revisit an arc state
// (the only well defined finite set when loops exist); on a loop-free graph
// the restriction changes nothing. A budget of 0 means unlimited.
inline std::set<Path> enumerate_walks(const ArcGraph& g, const std::set<Arc>& starts,
                                      const Topology& t, bool arc_simple, std::size_t budget) {
    std::set<Path> out;
    static const std::set<Arc> empty;
    auto succ = [&](const Arc& a) -> const std::set<Arc>& {
        const auto it = g.out.find(a);
        return it == g.out.end() ? empty : it->second;
    };

    for (const auto& start : starts) {
        // Iterative DFS; the walk under construction is the frame stack.
        std::vector<std::pair<Arc, std::set<Arc>::const_iterator>> stack;
        std::set<Arc> on_walk;
        stack.emplace_back(start, succ(start).begin());
        on_walk.insert(start);

        auto record = [&]() {
            std::vector<NodeId> nodes{stack.front().first.first};
            for (const auto& frame : stack) nodes.push_back(frame.first.second);
            out.insert(Path(std::move(nodes)));
            if (budget && out.size() > budget) throw BudgetExceeded(budget);
        };

        while (!stack.empty()) {
            auto& [node, it] = stack.back();
            if (it == succ(node).end()) {
                on_walk.erase(node);
                stack.pop_back();
                continue;
            }
            Arc next = *it++;
            if (arc_simple && on_walk.count(next)) continue;
            stack.emplace_back(next, succ(next).begin());
            on_walk.insert(next);
            // A host-tailed arc ends a complete path; it has no successors,
            // so the stack unwinds past it on the next iteration.
            if (t.is_host(next.second)) record();
        }
    }
    return out;
}

}  // namespace detail

// The set of complete paths the configuration implements, or a loop witness
// when a rule chain revisits a directed arc. Throws BudgetExceeded when the
// finite enumeration grows past `path_budget`.
inline InducedResult induced_paths(const Configuration& config, const Topology& t,
                                   std::size_t path_budget = kDefaultPathBudget) {
    detail::validate_configuration(config, t);
    const auto g = detail::build_arc_graph(config, t);
    if (detail::has_reachable_cycle(g, g.start_arcs))
        return detail::shortest_loop_witness(g, g.start_arcs);
    return InducedPaths{detail::enumerate_walks(g, g.start_arcs, t, false, path_budget)};
}

struct InjectionReport {
    std::set<Path> delivered;
    std::optional<LoopWitness> loop;
};

// Exhaustive traversal of the arc-transition relation from one host's
// uplink arc. Cloning is explored as branching. When a loop exists the
// delivered set is restricted to walks that use each arc state at most
// once; without a loop that is every walk.
inline InjectionReport simulate_injection(const Configuration& config, const NodeId& source_host,
                                          const Topology& t) {
    if (!t.is_host(source_host)) throw UnknownNode(source_host);
    detail::validate_configuration(config, t);
    const auto g = detail::build_arc_graph(config, t);

    const std::set<Arc> start{{source_host, t.host_uplink(source_host)}};
    InjectionReport report;
    if (detail::has_reachable_cycle(g, start))
        report.loop = detail::shortest_loop_witness(g, start);
    report.delivered = detail::enumerate_walks(g, start, t, true, 0);
    return report;
}

}  // namespace flowcheck
