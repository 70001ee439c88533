#pragma once

#include "chainsync/engine/sim_time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chainsync::netsim {

using NodeId = std::uint32_t;

/// Endpoints only source and sink frames; bridges also forward
/// (store-and-forward). Robot modules are bridges with a local host.
enum class NodeKind { Endpoint, Bridge };

struct Node {
    NodeId id = 0;
    std::string name;
    NodeKind kind = NodeKind::Endpoint;
};

struct Link {
    NodeId a = 0;
    NodeId b = 0;
    std::uint64_t rate_bps = 1'000'000'000;
    Duration propagation = 0;
};

class Topology {
public:
    NodeId add_node(std::string name, NodeKind kind);
    void add_link(NodeId a, NodeId b, std::uint64_t rate_bps, Duration propagation);

    /// Linear chain: the two ends are endpoints, everything between is a bridge.
    static Topology daisy_chain(const std::vector<std::string>& names, std::uint64_t rate_bps, Duration propagation);

    /// Throws std::invalid_argument unless every node reaches every other one
    /// through bridges only.
    void validate() const;

    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<Link>& links() const noexcept { return links_; }
    [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
    [[nodiscard]] std::optional<NodeId> find(const std::string& name) const;
    [[nodiscard]] NodeId require(const std::string& name) const;

    [[nodiscard]] std::vector<NodeId> neighbors(NodeId id) const;
    [[nodiscard]] const Link& link_between(NodeId a, NodeId b) const;

    /// Node sequence from `from` to `to` (inclusive), shortest path that only
    /// transits bridges. Empty when unreachable.
    [[nodiscard]] std::vector<NodeId> route(NodeId from, NodeId to) const;

private:
    std::vector<Node> nodes_;
    std::vector<Link> links_;
};

} // namespace chainsync::netsim
