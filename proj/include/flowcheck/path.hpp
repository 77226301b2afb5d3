#pragma once

// Requested data paths and the structural checks the verification pipeline
// expects of them: edge simplicity, node simplicity, completeness
// (host-to-host with only switches in between) and membership in the
// topology.

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowcheck/topology.hpp"

namespace flowcheck {

inline constexpr std::size_t kDefaultPathBudget = 100000;

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(std::size_t budget)
        : std::runtime_error("path budget of " + std::to_string(budget) + " exceeded") {}
};

// A node sequence of at least one arc; consecutive nodes are distinct.
class Path {
public:
    explicit Path(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
        if (nodes_.size() < 2)
            throw std::invalid_argument("a path needs at least two nodes");
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
            if (nodes_[i] == nodes_[i + 1])
                throw std::invalid_argument("consecutive path nodes must differ: " + nodes_[i]);
    }

    Path(std::initializer_list<NodeId> nodes) : Path(std::vector<NodeId>(nodes)) {}

    const std::vector<NodeId>& nodes() const { return nodes_; }
    std::size_t length() const { return nodes_.size() - 1; }  // number of arcs
    const NodeId& head() const { return nodes_.front(); }
    const NodeId& tail() const { return nodes_.back(); }

    Arc arc_at(std::size_t i) const { return {nodes_[i], nodes_[i + 1]}; }

    std::string to_string() const {
        std::string s = nodes_.front();
        for (std::size_t i = 1; i < nodes_.size(); ++i) {
            s += ' ';
            s += nodes_[i];
        }
        return s;
    }

    auto operator<=>(const Path&) const = default;

private:
    std::vector<NodeId> nodes_;
};

// Ordered list of directed arcs, one per step.
inline std::vector<Arc> path_arcs(const Path& p) {
    std::vector<Arc> arcs;
    arcs.reserve(p.length());
    for (std::size_t i = 0; i + 1 < p.nodes().size(); ++i) arcs.push_back(p.arc_at(i));
    return arcs;
}

// True iff no directed arc repeats; (a,b) and (b,a) count as distinct.
inline bool is_edge_simple(const Path& p) {
    std::set<Arc> seen;
    for (std::size_t i = 0; i + 1 < p.nodes().size(); ++i)
        if (!seen.insert(p.arc_at(i)).second) return false;
    return true;
}

inline bool is_node_simple(const Path& p) {
    std::set<NodeId> seen;
    for (const auto& n : p.nodes())
        if (!seen.insert(n).second) return false;
    return true;
}

// Head and tail are hosts, every intermediate node is a switch.
inline bool is_complete(const Path& p, const Topology& t) {
    for (const auto& n : p.nodes())
        if (!t.has_node(n)) throw UnknownNode(n);
    if (!t.is_host(p.head()) || !t.is_host(p.tail())) return false;
    for (std::size_t i = 1; i + 1 < p.nodes().size(); ++i)
        if (!t.is_switch(p.nodes()[i])) return false;
    return true;
}

// The requested set P for one traffic type. Set semantics: duplicate node
// sequences collapse (the dropped copies are remembered for reporting);
// first-occurrence order is preserved because the rerouting repair is
// order sensitive.
class PathSet {
public:
    PathSet() = default;
    explicit PathSet(std::string traffic_type) : traffic_type_(std::move(traffic_type)) {}
    PathSet(std::string traffic_type, const std::vector<Path>& paths)
        : traffic_type_(std::move(traffic_type)) {
        for (const auto& p : paths) add(p);
    }

    const std::string& traffic_type() const { return traffic_type_; }

    // Returns false when the path was already present.
    bool add(const Path& p) {
        if (!index_.insert(p).second) {
            dropped_duplicates_.push_back(p);
            return false;
        }
        ordered_.push_back(p);
        return true;
    }

    bool contains(const Path& p) const { return index_.count(p) != 0; }
    std::size_t size() const { return ordered_.size(); }
    bool empty() const { return ordered_.empty(); }

    const std::vector<Path>& paths() const { return ordered_; }
    const std::set<Path>& as_set() const { return index_; }
    const std::vector<Path>& dropped_duplicates() const { return dropped_duplicates_; }

    // Set algebra used by update requests: (P ∪ add) \ remove.
    PathSet updated(const std::vector<Path>& add, const std::vector<Path>& remove) const {
        std::set<Path> removed(remove.begin(), remove.end());
        PathSet out(traffic_type_);
        for (const auto& p : ordered_)
            if (!removed.count(p)) out.add(p);
        for (const auto& p : add)
            if (!removed.count(p)) out.add(p);
        return out;
    }

private:
    std::string traffic_type_;
    std::vector<Path> ordered_;
    std::set<Path> index_;
    std::vector<Path> dropped_duplicates_;
};

enum class PathIssueKind {
    UnknownNode,
    MissingLink,
    NotComplete,
    NotEdgeSimple,
};

inline const char* to_string(PathIssueKind k) {
    switch (k) {
        case PathIssueKind::UnknownNode: return "unknown_node";
        case PathIssueKind::MissingLink: return "missing_link";
        case PathIssueKind::NotComplete: return "not_complete";
        case PathIssueKind::NotEdgeSimple: return "not_edge_simple";
    }
    return "unknown";
}

struct PathIssue {
    Path path;
    PathIssueKind kind;
    std::string detail;
};

// Violations are data, not failures; an empty issue list means the set is
// implementable input. Collapsed duplicates are carried over as warnings.
struct PathSetReport {
    std::vector<PathIssue> issues;
    std::vector<Path> collapsed_duplicates;

    bool ok() const { return issues.empty(); }
};

inline PathSetReport validate_path_set(const PathSet& set, const Topology& t,
                                       bool require_edge_simple = true) {
    PathSetReport report;
    report.collapsed_duplicates = set.dropped_duplicates();

    for (const auto& p : set.paths()) {
        bool known = true;
        for (const auto& n : p.nodes()) {
            if (!t.has_node(n)) {
                report.issues.push_back({p, PathIssueKind::UnknownNode, n});
                known = false;
            }
        }
        if (!known) continue;

        for (std::size_t i = 0; i + 1 < p.nodes().size(); ++i) {
            const auto& x = p.nodes()[i];
            const auto& y = p.nodes()[i + 1];
            if (!t.has_link(x, y))
                report.issues.push_back({p, PathIssueKind::MissingLink, x + "," + y});
        }

        if (!t.is_host(p.head()) || !t.is_host(p.tail())) {
            report.issues.push_back(
                {p, PathIssueKind::NotComplete, "head and tail must be hosts"});
        } else {
            for (std::size_t i = 1; i + 1 < p.nodes().size(); ++i)
                if (t.is_host(p.nodes()[i]))
                    report.issues.push_back(
                        {p, PathIssueKind::NotComplete, "intermediate host " + p.nodes()[i]});
            if (p.length() < 2)
                report.issues.push_back(
                    {p, PathIssueKind::NotComplete,
                     "a complete path needs at least one switch between its hosts"});
        }

        if (require_edge_simple && !is_edge_simple(p))
            report.issues.push_back({p, PathIssueKind::NotEdgeSimple, "a directed arc repeats"});
    }

    return report;
}

// Switch-to-switch links of the topology traversed (in either direction) by
// no path of P. This is the detour material N available to the rerouting
// repair.
inline std::set<Link> unused_switch_edges(const Topology& t, const PathSet& set) {
    std::set<Link> used;
    for (const auto& p : set.paths())
        for (std::size_t i = 0; i + 1 < p.nodes().size(); ++i)
            used.insert(Link(p.nodes()[i], p.nodes()[i + 1]));

    std::set<Link> unused;
    for (const auto& l : t.links())
        if (t.is_switch(l.a) && t.is_switch(l.b) && !used.count(l)) unused.insert(l);
    return unused;
}

}  // namespace flowcheck
