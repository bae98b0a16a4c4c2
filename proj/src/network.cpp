#include "netcode/network.hpp"

#include "json.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace netcode {

std::string node_kind_name(NodeKind k)
{
    switch (k) {
    case NodeKind::Source: return "source";
    case NodeKind::Intermediate: return "intermediate";
    case NodeKind::Terminal: return "terminal";
    }
    return "intermediate";
}

std::optional<NodeKind> node_kind_from_name(const std::string& name)
{
    if (name == "source") return NodeKind::Source;
    if (name == "intermediate") return NodeKind::Intermediate;
    if (name == "terminal") return NodeKind::Terminal;
    return std::nullopt;
}

std::string validation_code_name(ValidationCode c)
{
    switch (c) {
    case ValidationCode::DuplicateNode: return "DuplicateNode";
    case ValidationCode::DuplicateEdge: return "DuplicateEdge";
    case ValidationCode::UnknownEndpoint: return "UnknownEndpoint";
    case ValidationCode::SelfLoop: return "SelfLoop";
    case ValidationCode::BadSourceList: return "BadSourceList";
    case ValidationCode::BadTerminalList: return "BadTerminalList";
    case ValidationCode::SourceHasInEdge: return "SourceHasInEdge";
    case ValidationCode::TerminalHasOutEdge: return "TerminalHasOutEdge";
    case ValidationCode::UnknownDemand: return "UnknownDemand";
    case ValidationCode::CycleDetected: return "CycleDetected";
    }
    return "Unknown";
}

const Node* Network::find_node(const std::string& id) const
{
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const Edge* Network::find_edge(const std::string& id) const
{
    for (const auto& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

bool Network::operator==(const Network& other) const
{
    return nodes == other.nodes && edges == other.edges && sources == other.sources &&
           terminals == other.terminals && meta == other.meta;
}

namespace {

ValidationIssue issue(ValidationCode code, std::string subject, std::string message)
{
    return ValidationIssue{code, std::move(subject), std::move(message)};
}

std::unordered_map<std::string, NodeKind> kind_map(const Network& n)
{
    std::unordered_map<std::string, NodeKind> kinds;
    for (const auto& node : n.nodes) kinds.emplace(node.id, node.kind);
    return kinds;
}

} // namespace

std::optional<ValidationIssue> network_validate(const Network& n)
{
    std::unordered_map<std::string, NodeKind> kinds;
    for (const auto& node : n.nodes) {
        if (!kinds.emplace(node.id, node.kind).second)
            return issue(ValidationCode::DuplicateNode, node.id,
                         "duplicate node id '" + node.id + "'");
    }

    std::unordered_set<std::string> edge_ids;
    std::set<std::tuple<std::string, std::string, int>> endpoints;
    for (const auto& e : n.edges) {
        auto tail = kinds.find(e.tail);
        auto head = kinds.find(e.head);
        if (tail == kinds.end())
            return issue(ValidationCode::UnknownEndpoint, e.id,
                         "edge '" + e.id + "' has unknown tail '" + e.tail + "'");
        if (head == kinds.end())
            return issue(ValidationCode::UnknownEndpoint, e.id,
                         "edge '" + e.id + "' has unknown head '" + e.head + "'");
        if (e.tail == e.head)
            return issue(ValidationCode::SelfLoop, e.id,
                         "edge '" + e.id + "' is a self loop on '" + e.tail + "'");
        if (!edge_ids.insert(e.id).second)
            return issue(ValidationCode::DuplicateEdge, e.id,
                         "duplicate edge id '" + e.id + "'");
        if (!endpoints.insert({e.tail, e.head, e.index}).second)
            return issue(ValidationCode::DuplicateEdge, e.id,
                         "edge '" + e.id + "' repeats (tail, head, index)");
    }

    std::unordered_set<std::string> listed_sources, labels;
    for (const auto& s : n.sources) {
        auto it = kinds.find(s.node);
        if (it == kinds.end() || it->second != NodeKind::Source)
            return issue(ValidationCode::BadSourceList, s.node,
                         "source list entry '" + s.node + "' is not a source node");
        if (!listed_sources.insert(s.node).second)
            return issue(ValidationCode::BadSourceList, s.node,
                         "source node '" + s.node + "' listed twice");
        if (!labels.insert(s.label).second)
            return issue(ValidationCode::BadSourceList, s.node,
                         "source label '" + s.label + "' used twice");
    }
    for (const auto& node : n.nodes)
        if (node.kind == NodeKind::Source && !listed_sources.count(node.id))
            return issue(ValidationCode::BadSourceList, node.id,
                         "source node '" + node.id + "' missing from source list");

    std::unordered_set<std::string> listed_terminals;
    for (const auto& t : n.terminals) {
        auto it = kinds.find(t.node);
        if (it == kinds.end() || it->second != NodeKind::Terminal)
            return issue(ValidationCode::BadTerminalList, t.node,
                         "terminal list entry '" + t.node + "' is not a terminal node");
        if (!listed_terminals.insert(t.node).second)
            return issue(ValidationCode::BadTerminalList, t.node,
                         "terminal node '" + t.node + "' listed twice");
    }
    for (const auto& node : n.nodes)
        if (node.kind == NodeKind::Terminal && !listed_terminals.count(node.id))
            return issue(ValidationCode::BadTerminalList, node.id,
                         "terminal node '" + node.id + "' missing from terminal list");

    for (const auto& e : n.edges) {
        if (kinds.at(e.head) == NodeKind::Source)
            return issue(ValidationCode::SourceHasInEdge, e.id,
                         "edge '" + e.id + "' enters source node '" + e.head + "'");
        if (kinds.at(e.tail) == NodeKind::Terminal)
            return issue(ValidationCode::TerminalHasOutEdge, e.id,
                         "edge '" + e.id + "' leaves terminal node '" + e.tail + "'");
    }

    for (const auto& t : n.terminals)
        for (const auto& d : t.demands)
            if (!labels.count(d))
                return issue(ValidationCode::UnknownDemand, t.node,
                             "terminal '" + t.node + "' demands unknown label '" + d + "'");

    // Kahn's algorithm over nodes
    std::unordered_map<std::string, std::size_t> indegree;
    for (const auto& node : n.nodes) indegree[node.id] = 0;
    for (const auto& e : n.edges) ++indegree[e.head];
    std::vector<std::string> ready;
    for (const auto& node : n.nodes)
        if (indegree[node.id] == 0) ready.push_back(node.id);
    std::size_t seen = 0;
    while (!ready.empty()) {
        std::string v = ready.back();
        ready.pop_back();
        ++seen;
        for (const auto& e : n.edges)
            if (e.tail == v && --indegree[e.head] == 0) ready.push_back(e.head);
    }
    if (seen != n.nodes.size()) {
        std::string witness;
        for (const auto& node : n.nodes)
            if (indegree[node.id] > 0) {
                witness = node.id;
                break;
            }
        return issue(ValidationCode::CycleDetected, witness,
                     "cycle through node '" + witness + "'");
    }

    return std::nullopt;
}

namespace {

// Longest-path depth from in-degree-zero nodes; requires an acyclic network.
std::unordered_map<std::string, std::size_t> node_depths(const Network& n)
{
    std::unordered_map<std::string, std::size_t> indegree, depth;
    for (const auto& node : n.nodes) {
        indegree[node.id] = 0;
        depth[node.id] = 0;
    }
    std::vector<std::vector<const Edge*>> out(n.nodes.size());
    std::unordered_map<std::string, std::size_t> node_pos;
    for (std::size_t i = 0; i < n.nodes.size(); ++i) node_pos[n.nodes[i].id] = i;
    for (const auto& e : n.edges) {
        ++indegree[e.head];
        out[node_pos[e.tail]].push_back(&e);
    }
    std::vector<std::string> ready;
    for (const auto& node : n.nodes)
        if (indegree[node.id] == 0) ready.push_back(node.id);
    while (!ready.empty()) {
        std::string v = ready.back();
        ready.pop_back();
        for (const Edge* e : out[node_pos[v]]) {
            depth[e->head] = std::max(depth[e->head], depth[v] + 1);
            if (--indegree[e->head] == 0) ready.push_back(e->head);
        }
    }
    return depth;
}

} // namespace

std::vector<Edge> topological_edge_order(const Network& n)
{
    if (auto bad = network_validate(n)) throw InvalidNetwork(*bad);
    auto depth = node_depths(n);
    std::vector<Edge> order = n.edges;
    std::sort(order.begin(), order.end(), [&](const Edge& a, const Edge& b) {
        std::size_t da = depth.at(a.tail), db = depth.at(b.tail);
        if (da != db) return da < db;
        return a.id < b.id;
    });
    return order;
}

std::string to_json(const Network& n)
{
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : n.nodes)
        j["nodes"].push_back({{"id", node.id}, {"kind", node_kind_name(node.kind)}});
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : n.edges)
        j["edges"].push_back(
            {{"id", e.id}, {"tail", e.tail}, {"head", e.head}, {"index", e.index}});
    j["sources"] = nlohmann::ordered_json::array();
    for (const auto& s : n.sources)
        j["sources"].push_back({{"node", s.node}, {"label", s.label}});
    j["terminals"] = nlohmann::ordered_json::array();
    for (const auto& t : n.terminals)
        j["terminals"].push_back({{"node", t.node}, {"demands", t.demands}});
    j["meta"] = {{"family", n.meta.family}, {"q", n.meta.q}};
    if (!n.meta.provenance.empty()) j["meta"]["provenance"] = n.meta.provenance;
    return j.dump(2) + "\n";
}

namespace {

const nlohmann::json& require_field(const nlohmann::json& j, const char* key,
                                    const char* where)
{
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError(std::string("missing field '") + key + "' in " + where);
    return *it;
}

std::string require_string(const nlohmann::json& j, const char* key, const char* where)
{
    const auto& v = require_field(j, key, where);
    if (!v.is_string())
        throw ParseError(std::string("field '") + key + "' in " + where +
                         " must be a string");
    return v.get<std::string>();
}

} // namespace

Network network_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top-level JSON value must be an object");

    Network n;
    const auto& nodes = require_field(j, "nodes", "network");
    if (!nodes.is_array()) throw ParseError("'nodes' must be an array");
    for (const auto& jn : nodes) {
        Node node;
        node.id = require_string(jn, "id", "node");
        std::string kind = require_string(jn, "kind", "node");
        auto k = node_kind_from_name(kind);
        if (!k)
            throw ParseError("node '" + node.id + "' has unknown kind '" + kind + "'");
        node.kind = *k;
        n.nodes.push_back(std::move(node));
    }

    const auto& edges = require_field(j, "edges", "network");
    if (!edges.is_array()) throw ParseError("'edges' must be an array");
    for (const auto& je : edges) {
        Edge e;
        e.id = require_string(je, "id", "edge");
        e.tail = require_string(je, "tail", "edge");
        e.head = require_string(je, "head", "edge");
        const auto& idx = require_field(je, "index", "edge");
        if (!idx.is_number_integer())
            throw ParseError("edge '" + e.id + "' field 'index' must be an integer");
        e.index = idx.get<int>();
        n.edges.push_back(std::move(e));
    }

    const auto& sources = require_field(j, "sources", "network");
    if (!sources.is_array()) throw ParseError("'sources' must be an array");
    for (const auto& js : sources) {
        SourceRef s;
        s.node = require_string(js, "node", "source");
        s.label = require_string(js, "label", "source");
        n.sources.push_back(std::move(s));
    }

    const auto& terminals = require_field(j, "terminals", "network");
    if (!terminals.is_array()) throw ParseError("'terminals' must be an array");
    for (const auto& jt : terminals) {
        Terminal t;
        t.node = require_string(jt, "node", "terminal");
        const auto& demands = require_field(jt, "demands", "terminal");
        if (!demands.is_array())
            throw ParseError("terminal '" + t.node + "' field 'demands' must be an array");
        for (const auto& d : demands) {
            if (!d.is_string())
                throw ParseError("terminal '" + t.node + "' demands must be strings");
            t.demands.push_back(d.get<std::string>());
        }
        n.terminals.push_back(std::move(t));
    }

    if (auto it = j.find("meta"); it != j.end() && it->is_object()) {
        if (auto f = it->find("family"); f != it->end() && f->is_string())
            n.meta.family = f->get<std::string>();
        if (auto q = it->find("q"); q != it->end() && q->is_number_unsigned())
            n.meta.q = q->get<std::uint32_t>();
        if (auto p = it->find("provenance"); p != it->end() && p->is_string())
            n.meta.provenance = p->get<std::string>();
    }

    if (auto bad = network_validate(n)) throw InvalidNetwork(*bad);
    return n;
}

namespace {

std::string dot_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

} // namespace

std::string to_dot(const Network& n)
{
    std::ostringstream os;
    std::string name = n.meta.family.empty() ? "network" : n.meta.family;
    os << "digraph \"" << dot_escape(name) << "\" {\n";
    if (n.nodes.empty()) {
        os << "}\n";
        return os.str();
    }
    os << "  rankdir=LR;\n";

    std::unordered_map<std::string, const Terminal*> term_info;
    for (const auto& t : n.terminals) term_info[t.node] = &t;

    for (const auto& node : n.nodes) {
        os << "  \"" << dot_escape(node.id) << "\"";
        if (node.kind == NodeKind::Source) {
            os << " [shape=box]";
        } else if (node.kind == NodeKind::Terminal) {
            std::string label = dot_escape(node.id);
            if (auto it = term_info.find(node.id); it != term_info.end())
                label += "\\n{" + dot_escape(join(it->second->demands, ", ")) + "}";
            os << " [shape=doublecircle, label=\"" << label << "\"]";
        } else {
            os << " [shape=circle]";
        }
        os << ";\n";
    }

    CodingStructure cs(n);
    for (const auto& e : n.edges) {
        os << "  \"" << dot_escape(e.tail) << "\" -> \"" << dot_escape(e.head) << "\"";
        if (cs.is_coded(e.id)) os << " [label=\"" << dot_escape(e.id) << "\", penwidth=2]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

CodingStructure::CodingStructure(const Network& n) : net_(n)
{
    if (auto bad = network_validate(net_)) throw InvalidNetwork(*bad);

    for (const auto& s : net_.sources) {
        source_index_[s.label] = source_labels_.size();
        source_labels_.push_back(s.label);
    }

    auto kinds = kind_map(net_);
    std::unordered_map<std::string, std::vector<const Edge*>> in_edges;
    for (const auto& e : net_.edges) in_edges[e.head].push_back(&e);

    // token/coded flags are decided walking nodes shallowest-first, so the
    // classification of each in-edge is settled before its head node's turn
    auto depth = node_depths(net_);
    std::vector<const Node*> order;
    for (const auto& node : net_.nodes) order.push_back(&node);
    std::stable_sort(order.begin(), order.end(), [&](const Node* a, const Node* b) {
        return depth.at(a->id) < depth.at(b->id);
    });

    std::unordered_map<std::string, std::string> node_label;
    for (const auto& s : net_.sources) node_label[s.node] = s.label;

    std::unordered_set<std::string> coded_flag;
    for (const Node* v : order) {
        bool fanout = false;
        if (v->kind == NodeKind::Intermediate) {
            const auto& in = in_edges[v->id];
            fanout = in.size() == 1 && coded_flag.count(in[0]->id) > 0;
        }
        for (const auto& e : net_.edges) {
            if (e.tail != v->id) continue;
            if (v->kind == NodeKind::Source) {
                token_[e.id] = node_label[v->id];
            } else if (fanout) {
                token_[e.id] = token_.at(in_edges[v->id][0]->id);
            } else {
                token_[e.id] = e.id;
                coded_flag.insert(e.id);
            }
        }
    }

    for (const auto& e : topological_edge_order(net_))
        if (coded_flag.count(e.id)) coded_.push_back(e.id);

    for (const auto& id : coded_) {
        const Edge* e = net_.find_edge(id);
        std::vector<std::string> prod;
        for (const Edge* f : in_edges[e->tail]) prod.push_back(token_.at(f->id));
        producers_[id] = std::move(prod);
    }

    for (const auto& t : net_.terminals) {
        std::vector<std::string> inputs;
        for (const Edge* f : in_edges[t.node]) inputs.push_back(token_.at(f->id));
        terminal_inputs_[t.node] = std::move(inputs);
    }
}

bool CodingStructure::is_coded(const std::string& edge_id) const
{
    return producers_.count(edge_id) > 0;
}

const std::vector<std::string>& CodingStructure::producers(const std::string& coded_edge) const
{
    auto it = producers_.find(coded_edge);
    if (it == producers_.end())
        throw std::invalid_argument("'" + coded_edge + "' is not a coded edge");
    return it->second;
}

const std::vector<std::string>& CodingStructure::terminal_inputs(const std::string& terminal) const
{
    auto it = terminal_inputs_.find(terminal);
    if (it == terminal_inputs_.end())
        throw std::invalid_argument("unknown terminal '" + terminal + "'");
    return it->second;
}

const std::string& CodingStructure::edge_token(const std::string& edge_id) const
{
    auto it = token_.find(edge_id);
    if (it == token_.end()) throw std::invalid_argument("unknown edge '" + edge_id + "'");
    return it->second;
}

std::size_t CodingStructure::source_index(const std::string& label) const
{
    auto it = source_index_.find(label);
    if (it == source_index_.end())
        throw std::invalid_argument("unknown source label '" + label + "'");
    return it->second;
}

} // namespace netcode
