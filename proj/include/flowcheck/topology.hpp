#pragma once

// Undirected host/switch topology with structural validation.
//
// Hosts and switches are declared explicitly; validation cross-checks the
// degree rule (every host hangs off exactly one switch), rejects self loops,
// duplicate links and disconnected graphs, and reports *all* violations
// rather than stopping at the first.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flowcheck {

using NodeId = std::string;

// Directed traversal of a link: (from, to).
using Arc = std::pair<NodeId, NodeId>;

// Undirected link; endpoints are kept in lexicographic order so that
// {a,b} and {b,a} compare equal.
struct Link {
    NodeId a;
    NodeId b;

    Link(NodeId x, NodeId y) {
        if (y < x) std::swap(x, y);
        a = std::move(x);
        b = std::move(y);
    }
    static Link of(const Arc& arc) { return Link(arc.first, arc.second); }

    auto operator<=>(const Link&) const = default;
};

enum class TopologyViolationKind {
    InvalidName,
    DuplicateNode,
    UnknownEndpoint,
    SelfLoop,
    DuplicateLink,
    HostDegreeViolation,
    Disconnected,
};

inline const char* to_string(TopologyViolationKind k) {
    switch (k) {
        case TopologyViolationKind::InvalidName: return "invalid_name";
        case TopologyViolationKind::DuplicateNode: return "duplicate_node";
        case TopologyViolationKind::UnknownEndpoint: return "unknown_endpoint";
        case TopologyViolationKind::SelfLoop: return "self_loop";
        case TopologyViolationKind::DuplicateLink: return "duplicate_link";
        case TopologyViolationKind::HostDegreeViolation: return "host_degree_violation";
        case TopologyViolationKind::Disconnected: return "disconnected";
    }
    return "unknown";
}

struct TopologyViolation {
    TopologyViolationKind kind;
    NodeId subject;       // offending node or "a,b" for links
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<TopologyViolation> violations)
        : std::runtime_error(summarize(violations)), violations_(std::move(violations)) {}

    const std::vector<TopologyViolation>& violations() const { return violations_; }

private:
    static std::string summarize(const std::vector<TopologyViolation>& vs) {
        std::string s = "topology validation failed:";
        for (const auto& v : vs) {
            s += ' ';
            s += to_string(v.kind);
            s += '(';
            s += v.subject;
            s += ')';
        }
        return s;
    }

    std::vector<TopologyViolation> violations_;
};

struct UnknownNode : std::runtime_error {
    explicit UnknownNode(const NodeId& n) : std::runtime_error("unknown node: " + n) {}
};

// Raw, unvalidated construction input.
struct TopologyInput {
    std::vector<NodeId> hosts;
    std::vector<NodeId> switches;
    std::vector<std::pair<NodeId, NodeId>> links;
};

class Topology {
public:
    // Collects every violation of the structural rules; empty means valid.
    static std::vector<TopologyViolation> validate(const TopologyInput& in) {
        std::vector<TopologyViolation> out;

        auto check_name = [&](const NodeId& n) {
            bool bad = n.empty() ||
                       std::any_of(n.begin(), n.end(), [](unsigned char c) { return std::isspace(c); });
            if (bad)
                out.push_back({TopologyViolationKind::InvalidName, n,
                               "node names must be non-empty and free of whitespace"});
            return !bad;
        };

        std::set<NodeId> hosts, switches, all;
        for (const auto& h : in.hosts) {
            if (!check_name(h)) continue;
            if (!all.insert(h).second)
                out.push_back({TopologyViolationKind::DuplicateNode, h, "node declared more than once"});
            else
                hosts.insert(h);
        }
        for (const auto& s : in.switches) {
            if (!check_name(s)) continue;
            if (!all.insert(s).second)
                out.push_back({TopologyViolationKind::DuplicateNode, s, "node declared more than once"});
            else
                switches.insert(s);
        }

        std::set<Link> links;
        std::map<NodeId, std::set<NodeId>> adj;
        for (const auto& [x, y] : in.links) {
            bool known = true;
            for (const auto& end : {x, y}) {
                if (!all.count(end)) {
                    out.push_back({TopologyViolationKind::UnknownEndpoint, end,
                                   "link endpoint is not a declared node"});
                    known = false;
                }
            }
            if (!known) continue;
            if (x == y) {
                out.push_back({TopologyViolationKind::SelfLoop, x, "self loops are not allowed"});
                continue;
            }
            if (!links.insert(Link(x, y)).second) {
                out.push_back({TopologyViolationKind::DuplicateLink, x + "," + y,
                               "link declared more than once"});
                continue;
            }
            adj[x].insert(y);
            adj[y].insert(x);
        }

        for (const auto& h : hosts) {
            const auto it = adj.find(h);
            const std::size_t deg = it == adj.end() ? 0 : it->second.size();
            if (deg != 1) {
                out.push_back({TopologyViolationKind::HostDegreeViolation, h,
                               "host must be connected to exactly one node, has degree " +
                                   std::to_string(deg)});
            } else if (!switches.count(*it->second.begin())) {
                out.push_back({TopologyViolationKind::HostDegreeViolation, h,
                               "host neighbor " + *it->second.begin() + " is not a switch"});
            }
        }

        if (!all.empty()) {
            std::set<NodeId> seen;
            std::vector<NodeId> stack{*all.begin()};
            seen.insert(*all.begin());
            while (!stack.empty()) {
                NodeId n = stack.back();
                stack.pop_back();
                const auto it = adj.find(n);
                if (it == adj.end()) continue;
                for (const auto& m : it->second)
                    if (seen.insert(m).second) stack.push_back(m);
            }
            if (seen.size() != all.size())
                out.push_back({TopologyViolationKind::Disconnected, *all.begin(),
                               "graph is not connected; model each connected component as a "
                               "separate network"});
        }

        return out;
    }

    // Throws ValidationError carrying the full violation list.
    static Topology build(const TopologyInput& in) {
        auto violations = validate(in);
        if (!violations.empty()) throw ValidationError(std::move(violations));
        Topology t;
        t.hosts_.insert(in.hosts.begin(), in.hosts.end());
        t.switches_.insert(in.switches.begin(), in.switches.end());
        for (const auto& [x, y] : in.links) {
            t.links_.insert(Link(x, y));
            t.adj_[x].insert(y);
            t.adj_[y].insert(x);
        }
        return t;
    }

    const std::set<NodeId>& hosts() const { return hosts_; }
    const std::set<NodeId>& switches() const { return switches_; }
    const std::set<Link>& links() const { return links_; }

    bool has_node(const NodeId& n) const { return hosts_.count(n) || switches_.count(n); }
    bool is_host(const NodeId& n) const { return hosts_.count(n) != 0; }
    bool is_switch(const NodeId& n) const { return switches_.count(n) != 0; }
    bool has_link(const NodeId& x, const NodeId& y) const { return links_.count(Link(x, y)) != 0; }

    const std::set<NodeId>& neighbors(const NodeId& n) const {
        if (!has_node(n)) throw UnknownNode(n);
        static const std::set<NodeId> empty;
        const auto it = adj_.find(n);
        return it == adj_.end() ? empty : it->second;
    }

    // The single switch a host hangs off.
    const NodeId& host_uplink(const NodeId& host) const {
        if (!is_host(host)) throw UnknownNode(host);
        return *neighbors(host).begin();
    }

    // Round-trips the topology back into construction input.
    TopologyInput to_input() const {
        TopologyInput in;
        in.hosts.assign(hosts_.begin(), hosts_.end());
        in.switches.assign(switches_.begin(), switches_.end());
        for (const auto& l : links_) in.links.emplace_back(l.a, l.b);
        return in;
    }

private:
    Topology() = default;

    std::set<NodeId> hosts_;
    std::set<NodeId> switches_;
    std::set<Link> links_;
    std::map<NodeId, std::set<NodeId>> adj_;
};

}  // namespace flowcheck
