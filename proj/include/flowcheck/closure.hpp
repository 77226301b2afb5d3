#pragma once

// Arc-closedness verification. The directed graph D(P) has one vertex per
// arc of the long paths of P plus source and sink; source-to-sink walks of
// D(P) are exactly the complete paths of the arc closure of P. A cycle in
// D(P) therefore means infinitely many induced paths (a forwarding loop),
// and a walk count above |Q| means the request can only be implemented as
// a superset.

#include <algorithm>
#include <cstdint>
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

struct DpVertex {
    enum class Kind { source, arc, sink };

    Kind kind;
    Arc arc;  // meaningful only when kind == Kind::arc

    static DpVertex source() { return {Kind::source, {}}; }
    static DpVertex sink() { return {Kind::sink, {}}; }
    static DpVertex of(Arc a) { return {Kind::arc, std::move(a)}; }

    bool is_arc() const { return kind == Kind::arc; }

    std::string label() const {
        switch (kind) {
            case Kind::source: return "source";
            case Kind::sink: return "sink";
            case Kind::arc: return "(" + arc.first + "," + arc.second + ")";
        }
        return {};
    }

    // source < arcs (lexicographic) < sink
    friend auto operator<=>(const DpVertex& lhs, const DpVertex& rhs) {
        auto rank = [](Kind k) { return k == Kind::source ? 0 : k == Kind::arc ? 1 : 2; };
        if (auto c = rank(lhs.kind) <=> rank(rhs.kind); c != 0) return c;
        return lhs.arc <=> rhs.arc;
    }
    friend bool operator==(const DpVertex& lhs, const DpVertex& rhs) {
        return (lhs <=> rhs) == 0;
    }
};

class ClosureGraph {
public:
    ClosureGraph() {
        adjacency_[DpVertex::source()];
        adjacency_[DpVertex::sink()];
    }

    void add_arc_vertex(const Arc& a) {
        if (arcs_.insert(a).second) adjacency_[DpVertex::of(a)];
    }

    void add_edge(const DpVertex& from, const DpVertex& to) {
        if (adjacency_[from].insert(to).second) ++edge_count_;
    }

    void set_q_size(std::size_t k) { q_size_ = k; }

    // Arc vertices; source and sink complete the vertex set.
    const std::set<Arc>& arc_vertices() const { return arcs_; }
    std::size_t vertex_count() const { return arcs_.size() + 2; }
    std::size_t edge_count() const { return edge_count_; }
    std::size_t q_size() const { return q_size_; }

    const std::map<DpVertex, std::set<DpVertex>>& adjacency() const { return adjacency_; }
    const std::set<DpVertex>& successors(const DpVertex& v) const {
        static const std::set<DpVertex> empty;
        const auto it = adjacency_.find(v);
        return it == adjacency_.end() ? empty : it->second;
    }

    std::set<std::pair<DpVertex, DpVertex>> edges() const {
        std::set<std::pair<DpVertex, DpVertex>> out;
        for (const auto& [v, succs] : adjacency_)
            for (const auto& w : succs) out.emplace(v, w);
        return out;
    }

private:
    std::set<Arc> arcs_;
    std::map<DpVertex, std::set<DpVertex>> adjacency_;
    std::size_t edge_count_ = 0;
    std::size_t q_size_ = 0;
};

// Q is the subset of P with more than two arcs. Arcs incident to hosts can
// only sit at the ends of complete paths, so two-arc paths h.s.h' never
// produce new prefix/suffix combinations and stay out of the graph.
inline ClosureGraph build_closure_graph(const PathSet& set) {
    ClosureGraph g;
    std::size_t k = 0;
    for (const auto& p : set.paths()) {
        if (p.length() <= 2) continue;
        ++k;
        const auto arcs = path_arcs(p);
        for (const auto& a : arcs) g.add_arc_vertex(a);
        g.add_edge(DpVertex::source(), DpVertex::of(arcs.front()));
        g.add_edge(DpVertex::of(arcs.back()), DpVertex::sink());
        for (std::size_t i = 1; i < arcs.size(); ++i)
            g.add_edge(DpVertex::of(arcs[i - 1]), DpVertex::of(arcs[i]));
    }
    g.set_q_size(k);
    return g;
}

// A cycle as an arc-vertex sequence, rotated to start at its
// lexicographically smallest vertex; std::nullopt when acyclic. Source and
// sink cannot lie on cycles (no in- respectively out-edges).
inline std::optional<std::vector<Arc>> find_cycle(const ClosureGraph& g) {
    enum : unsigned char { kWhite, kGray, kBlack };
    std::map<DpVertex, unsigned char> color;

    for (const auto& [root, unused] : g.adjacency()) {
        if (color[root] != kWhite) continue;
        std::vector<std::pair<DpVertex, std::set<DpVertex>::const_iterator>> stack;
        color[root] = kGray;
        stack.emplace_back(root, g.successors(root).begin());
        while (!stack.empty()) {
            auto& [node, it] = stack.back();
            if (it == g.successors(node).end()) {
                color[node] = kBlack;
                stack.pop_back();
                continue;
            }
            DpVertex next = *it++;
            if (color[next] == kGray) {
                // Back edge; the gray suffix of the stack is the cycle.
                std::vector<Arc> cycle;
                auto frame = std::find_if(stack.begin(), stack.end(),
                                          [&](const auto& f) { return f.first == next; });
                for (; frame != stack.end(); ++frame) cycle.push_back(frame->first.arc);
                const auto smallest = std::min_element(cycle.begin(), cycle.end());
                std::rotate(cycle.begin(), smallest, cycle.end());
                return cycle;
            }
            if (color[next] == kWhite) {
                color[next] = kGray;
                stack.emplace_back(next, g.successors(next).begin());
            }
        }
    }
    return std::nullopt;
}

struct CyclicGraph : std::logic_error {
    CyclicGraph() : std::logic_error("closure graph has a cycle; path count is infinite") {}
};

struct SatCount {
    std::uint64_t value = 0;
    bool saturated = false;  // value clamped at the cap, true count is >= cap

    friend bool operator==(const SatCount&, const SatCount&) = default;
};

// Exact number of distinct source-to-sink paths, saturated at `cap`.
// Dynamic programming over a topological order; throws CyclicGraph when no
// such order exists.
inline SatCount count_source_sink_paths(const ClosureGraph& g, std::uint64_t cap) {
    std::map<DpVertex, std::size_t> in_degree;
    for (const auto& [v, unused] : g.adjacency()) in_degree[v];
    for (const auto& [v, succs] : g.adjacency())
        for (const auto& w : succs) ++in_degree[w];

    std::vector<DpVertex> order;
    order.reserve(in_degree.size());
    for (const auto& [v, d] : in_degree)
        if (d == 0) order.push_back(v);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (const auto& w : g.successors(order[i]))
            if (--in_degree[w] == 0) order.push_back(w);
    if (order.size() != g.adjacency().size()) throw CyclicGraph();

    auto sat_add = [cap](std::uint64_t a, std::uint64_t b) {
        return a > cap - b ? cap : a + b;
    };

    std::map<DpVertex, std::uint64_t> count;
    count[DpVertex::source()] = cap == 0 ? 0 : 1;
    for (const auto& v : order) {
        const auto c = count[v];
        if (c == 0) continue;
        for (const auto& w : g.successors(v)) count[w] = sat_add(count[w], c);
    }
    const auto total = count[DpVertex::sink()];
    return {total, total >= cap};
}

namespace detail {

// All source-to-sink walks of an acyclic closure graph, mapped back to node
// sequences. Iterative so that very long paths cannot overflow the stack.
inline std::set<Path> enumerate_closure_paths(const ClosureGraph& g, std::size_t budget) {
    std::set<Path> out;
    std::vector<std::pair<DpVertex, std::set<DpVertex>::const_iterator>> stack;
    stack.emplace_back(DpVertex::source(), g.successors(DpVertex::source()).begin());
    while (!stack.empty()) {
        auto& [node, it] = stack.back();
        if (it == g.successors(node).end()) {
            stack.pop_back();
            continue;
        }
        DpVertex next = *it++;
        if (next.kind == DpVertex::Kind::sink) {
            std::vector<NodeId> nodes;
            nodes.push_back(stack[1].first.arc.first);
            for (std::size_t i = 1; i < stack.size(); ++i) nodes.push_back(stack[i].first.arc.second);
            out.insert(Path(std::move(nodes)));
            if (budget && out.size() > budget) throw BudgetExceeded(budget);
            continue;
        }
        stack.emplace_back(next, g.successors(next).begin());
    }
    return out;
}

}  // namespace detail

enum class ClosureStatus { arc_closed, finite_superset, infinite_closure };

inline const char* to_string(ClosureStatus s) {
    switch (s) {
        case ClosureStatus::arc_closed: return "arc_closed";
        case ClosureStatus::finite_superset: return "finite_superset";
        case ClosureStatus::infinite_closure: return "infinite_closure";
    }
    return "unknown";
}

// Three-way implementability result. Exactly one witness field is
// populated: extra_paths for finite supersets, cycle for infinite closures.
struct Verdict {
    ClosureStatus status = ClosureStatus::arc_closed;
    SatCount counted_paths;
    std::vector<Path> extra_paths;        // finite_superset only, sorted
    std::vector<Arc> cycle;               // infinite_closure only, normalized
    std::vector<Path> re_added_removals;  // update checks: removed paths the closure re-induces
};

inline Verdict check_arc_closed(const PathSet& set, std::size_t budget = kDefaultPathBudget) {
    const auto g = build_closure_graph(set);

    Verdict verdict;
    if (auto cycle = find_cycle(g)) {
        verdict.status = ClosureStatus::infinite_closure;
        verdict.counted_paths = {0, true};
        verdict.cycle = std::move(*cycle);
        return verdict;
    }

    // Only "greater than |Q|" matters for the verdict; the larger cap keeps
    // the reported count exact up to the enumeration budget.
    const std::uint64_t cap = std::max<std::uint64_t>(g.q_size() + 1, budget);
    verdict.counted_paths = count_source_sink_paths(g, cap);

    if (verdict.counted_paths.value <= g.q_size()) {
        verdict.status = ClosureStatus::arc_closed;
        return verdict;
    }

    if (verdict.counted_paths.saturated || verdict.counted_paths.value > budget)
        throw BudgetExceeded(budget);

    verdict.status = ClosureStatus::finite_superset;
    const auto walks = detail::enumerate_closure_paths(g, budget);
    for (const auto& w : walks)
        if (!set.contains(w)) verdict.extra_paths.push_back(w);
    return verdict;
}

struct FiniteClosure {
    std::set<Path> paths;
};

struct InfiniteClosureWitness {
    std::vector<Arc> cycle;           // when detected via D(P)
    std::optional<Path> pumped_path;  // when detected via the swap fixed point
};

using ClosureResult = std::variant<FiniteClosure, InfiniteClosureWitness>;

inline bool is_infinite(const ClosureResult& r) {
    return std::holds_alternative<InfiniteClosureWitness>(r);
}

// The arc closure of P: all source-to-sink walks of D(P) united with the
// two-arc paths of P. Equals P exactly when the verdict is arc_closed.
inline ClosureResult arc_closure(const PathSet& set, std::size_t budget = kDefaultPathBudget) {
    const auto g = build_closure_graph(set);
    if (auto cycle = find_cycle(g))
        return InfiniteClosureWitness{std::move(*cycle), std::nullopt};

    const auto count = count_source_sink_paths(g, std::max<std::uint64_t>(budget, 1) + 1);
    if (count.saturated || count.value > budget) throw BudgetExceeded(budget);

    FiniteClosure closure{detail::enumerate_closure_paths(g, budget)};
    for (const auto& p : set.paths())
        if (p.length() <= 2) closure.paths.insert(p);
    return closure;
}

// Independent oracle for arc_closure: saturate the swap rule directly.
// Whenever two member paths share a directed arc, both cross combinations
// of their prefixes and suffixes around that arc must be members too; a
// generated path that repeats an arc pumps forever, so the closure is
// infinite the moment one appears.
inline ClosureResult brute_force_closure(const PathSet& set, std::size_t budget = kDefaultPathBudget) {
    std::vector<Path> all(set.paths());
    std::set<Path> members(all.begin(), all.end());
    std::vector<std::size_t> worklist;
    for (std::size_t i = 0; i < all.size(); ++i) worklist.push_back(i);

    auto arc_positions = [](const Path& p) {
        std::map<Arc, std::vector<std::size_t>> pos;
        for (std::size_t i = 0; i + 1 < p.nodes().size(); ++i) pos[p.arc_at(i)].push_back(i);
        return pos;
    };

    while (!worklist.empty()) {
        const std::size_t i = worklist.back();
        worklist.pop_back();
        // Pair the fresh path with every member, in both roles.
        for (std::size_t j = 0; j < all.size(); ++j) {
            for (const auto& [prefix_side, suffix_side] :
                 {std::pair{i, j}, std::pair{j, i}}) {
                // Copies: `all` may reallocate when combinations are added.
                const Path p = all[prefix_side];
                const Path q = all[suffix_side];
                const auto q_pos = arc_positions(q);
                for (std::size_t u = 0; u + 1 < p.nodes().size(); ++u) {
                    const auto it = q_pos.find(p.arc_at(u));
                    if (it == q_pos.end()) continue;
                    for (const std::size_t v : it->second) {
                        std::vector<NodeId> combo(p.nodes().begin(),
                                                  p.nodes().begin() + static_cast<long>(u) + 2);
                        combo.insert(combo.end(), q.nodes().begin() + static_cast<long>(v) + 2,
                                     q.nodes().end());
                        Path candidate(std::move(combo));
                        if (members.count(candidate)) continue;
                        if (!is_edge_simple(candidate))
                            return InfiniteClosureWitness{{}, std::move(candidate)};
                        members.insert(candidate);
                        all.push_back(candidate);
                        worklist.push_back(all.size() - 1);
                        if (members.size() > budget) throw BudgetExceeded(budget);
                    }
                }
            }
        }
    }
    return FiniteClosure{std::move(members)};
}

// Verdict for the update request (P ∪ add) \ remove, with the removed paths
// that the closure immediately re-induces called out.
inline Verdict check_update(const PathSet& set, const std::vector<Path>& add,
                            const std::vector<Path>& remove,
                            std::size_t budget = kDefaultPathBudget) {
    auto verdict = check_arc_closed(set.updated(add, remove), budget);
    if (verdict.status == ClosureStatus::finite_superset) {
        const std::set<Path> removed(remove.begin(), remove.end());
        for (const auto& p : verdict.extra_paths)
            if (removed.count(p)) verdict.re_added_removals.push_back(p);
    }
    return verdict;
}

}  // namespace flowcheck
