#ifndef NETCODE_NETWORK_HPP
#define NETCODE_NETWORK_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netcode {

enum class NodeKind { Source, Intermediate, Terminal };

std::string node_kind_name(NodeKind k);
std::optional<NodeKind> node_kind_from_name(const std::string& name);

struct Node {
    std::string id;
    NodeKind kind = NodeKind::Intermediate;

    bool operator==(const Node&) const = default;
};

struct Edge {
    std::string id;
    std::string tail;
    std::string head;
    int index = 0; // disambiguates parallel edges; (tail, head, index) unique

    bool operator==(const Edge&) const = default;
};

struct SourceRef {
    std::string node;
    std::string label;

    bool operator==(const SourceRef&) const = default;
};

struct Terminal {
    std::string node;
    std::vector<std::string> demands;

    bool operator==(const Terminal&) const = default;
};

struct NetworkMeta {
    std::string family;
    std::uint32_t q = 0;
    std::string provenance; // empty unless the topology was reconstructed

    bool operator==(const NetworkMeta&) const = default;
};

/// A directed acyclic coding network. Sources are listed in a fixed order
/// that defines the column-block order of all global coding matrices.
struct Network {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    std::vector<SourceRef> sources;
    std::vector<Terminal> terminals;
    NetworkMeta meta;

    const Node* find_node(const std::string& id) const;
    const Edge* find_edge(const std::string& id) const;

    bool operator==(const Network& other) const;
    bool operator!=(const Network& other) const { return !(*this == other); }
};

enum class ValidationCode {
    DuplicateNode,
    DuplicateEdge,
    UnknownEndpoint,
    SelfLoop,
    BadSourceList,
    BadTerminalList,
    SourceHasInEdge,
    TerminalHasOutEdge,
    UnknownDemand,
    CycleDetected,
};

std::string validation_code_name(ValidationCode c);

struct ValidationIssue {
    ValidationCode code;
    std::string subject; // offending node or edge id
    std::string message;
};

class InvalidNetwork : public std::runtime_error {
public:
    explicit InvalidNetwork(ValidationIssue issue)
        : std::runtime_error(issue.message), issue_(std::move(issue))
    {
    }
    const ValidationIssue& issue() const { return issue_; }

private:
    ValidationIssue issue_;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checks every structural invariant in a fixed order and reports the first
/// violation, or nullopt when the network is well formed.
std::optional<ValidationIssue> network_validate(const Network& n);

/// Edges ordered so that every edge appears after all edges into its tail
/// node; deterministic (layered by longest path from the sources, then by
/// edge id). Throws InvalidNetwork on a cycle.
std::vector<Edge> topological_edge_order(const Network& n);

std::string to_json(const Network& n);

/// Parses and validates. Throws ParseError on malformed input or schema
/// violations, InvalidNetwork when the parsed network breaks an invariant.
Network network_from_json(const std::string& text);

std::string to_dot(const Network& n);

/// The coding skeleton of a validated network: which edges carry fresh
/// linear combinations ("coded" edges), where their inputs come from, and
/// what each terminal receives.
///
/// An intermediate node with a single in-edge that is itself coded is a
/// fan-out node: its out-edges relay that symbol unchanged. Every other
/// intermediate node combines its inputs, and each of its out-edges is a
/// coded edge. A producer token is the source label or coded-edge id whose
/// symbol travels on a given edge.
class CodingStructure {
public:
    explicit CodingStructure(const Network& n); // throws InvalidNetwork

    const Network& network() const { return net_; }

    /// Coded edge ids in topological order.
    const std::vector<std::string>& coded_edges() const { return coded_; }
    bool is_coded(const std::string& edge_id) const;

    /// Producer tokens feeding a coded edge, in edge-list order.
    const std::vector<std::string>& producers(const std::string& coded_edge) const;

    /// Producer tokens a terminal receives, in edge-list order.
    const std::vector<std::string>& terminal_inputs(const std::string& terminal) const;

    /// The token carried by an edge (label, coded id, or the edge's own id).
    const std::string& edge_token(const std::string& edge_id) const;

    const std::vector<std::string>& source_order() const { return source_labels_; }
    std::size_t source_index(const std::string& label) const;

private:
    Network net_;
    std::vector<std::string> coded_;
    std::map<std::string, std::string> token_;
    std::map<std::string, std::vector<std::string>> producers_;
    std::map<std::string, std::vector<std::string>> terminal_inputs_;
    std::vector<std::string> source_labels_;
    std::map<std::string, std::size_t> source_index_;
};

} // namespace netcode

#endif
