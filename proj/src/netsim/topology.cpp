#include "chainsync/netsim/topology.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace chainsync::netsim {

NodeId Topology::add_node(std::string name, NodeKind kind)
{
    if (name.empty())
        throw std::invalid_argument("node name must not be empty");
    if (find(name))
        throw std::invalid_argument("duplicate node '" + name + "'");
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back(Node{id, std::move(name), kind});
    return id;
}

void Topology::add_link(NodeId a, NodeId b, std::uint64_t rate_bps, Duration propagation)
{
    if (a >= nodes_.size() || b >= nodes_.size() || a == b)
        throw std::invalid_argument("link endpoints must be two distinct existing nodes");
    if (rate_bps == 0)
        throw std::invalid_argument("link rate must be positive");
    if (propagation < 0)
        throw std::invalid_argument("propagation delay must be >= 0");
    for (const auto& l : links_) {
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a))
            throw std::invalid_argument("duplicate link " + nodes_[a].name + "-" + nodes_[b].name);
    }
    links_.push_back(Link{a, b, rate_bps, propagation});
}

Topology Topology::daisy_chain(const std::vector<std::string>& names, std::uint64_t rate_bps, Duration propagation)
{
    if (names.size() < 2)
        throw std::invalid_argument("a daisy chain needs at least two nodes");
    Topology t;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const bool end = i == 0 || i + 1 == names.size();
        t.add_node(names[i], end ? NodeKind::Endpoint : NodeKind::Bridge);
    }
    for (std::size_t i = 0; i + 1 < names.size(); ++i)
        t.add_link(static_cast<NodeId>(i), static_cast<NodeId>(i + 1), rate_bps, propagation);
    return t;
}

std::optional<NodeId> Topology::find(const std::string& name) const
{
    for (const auto& n : nodes_) {
        if (n.name == name)
            return n.id;
    }
    return std::nullopt;
}

NodeId Topology::require(const std::string& name) const
{
    if (auto id = find(name))
        return *id;
    throw std::invalid_argument("unknown node '" + name + "'");
}

std::vector<NodeId> Topology::neighbors(NodeId id) const
{
    std::vector<NodeId> out;
    for (const auto& l : links_) {
        if (l.a == id)
            out.push_back(l.b);
        else if (l.b == id)
            out.push_back(l.a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

const Link& Topology::link_between(NodeId a, NodeId b) const
{
    for (const auto& l : links_) {
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a))
            return l;
    }
    throw std::invalid_argument("no link between " + nodes_.at(a).name + " and " + nodes_.at(b).name);
}

std::vector<NodeId> Topology::route(NodeId from, NodeId to) const
{
    if (from == to)
        return {from};
    std::vector<std::optional<NodeId>> parent(nodes_.size());
    std::deque<NodeId> frontier{from};
    parent[from] = from;
    while (!frontier.empty()) {
        const NodeId cur = frontier.front();
        frontier.pop_front();
        if (cur == to)
            break;
        if (cur != from && nodes_[cur].kind != NodeKind::Bridge)
            continue;
        for (NodeId n : neighbors(cur)) {
            if (!parent[n]) {
                parent[n] = cur;
                frontier.push_back(n);
            }
        }
    }
    if (!parent[to])
        return {};
    std::vector<NodeId> path{to};
    while (path.back() != from)
        path.push_back(*parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

void Topology::validate() const
{
    if (nodes_.empty())
        throw std::invalid_argument("topology has no nodes");
    for (const auto& a : nodes_) {
        for (const auto& b : nodes_) {
            if (a.id != b.id && route(a.id, b.id).empty())
                throw std::invalid_argument("topology not connected: no path " + a.name + " -> " + b.name);
        }
    }
}

} // namespace chainsync::netsim
