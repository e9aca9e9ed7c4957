#include "lego/graph.hpp"
#include "lego/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lego {

std::uint32_t Interner::intern(std::string_view label) {
    auto it = index_.find(std::string(label));
    if (it != index_.end())
        return it->second;
    auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
}

std::optional<std::uint32_t> Interner::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

const std::string& Interner::label(std::uint32_t id) const {
    if (id >= labels_.size())
        throw ContractError("interner: id " + std::to_string(id) + " out of range");
    return labels_[id];
}

Graph::Graph(std::shared_ptr<const Vocab> vocab, std::vector<Triple> triples,
             std::vector<EntityId> vertices)
    : vocab_(std::move(vocab)), triples_(std::move(triples)), vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());

    for (EntityId v : vertices_) {
        if (v >= vocab_->entities.size())
            throw ContractError("graph: vertex id out of vocab range");
    }
    for (const Triple& t : triples_) {
        if (!has_vertex(t.source) || !has_vertex(t.target))
            throw ContractError("graph: triple endpoint is not a vertex");
        if (t.relation >= vocab_->relations.size())
            throw ContractError("graph: relation id out of vocab range");
        adjacency_[t.source].fwd.push_back({t.relation, t.target});
        adjacency_[t.target].bwd.push_back({t.relation, t.source});
    }
    for (auto& [v, adj] : adjacency_) {
        std::sort(adj.fwd.begin(), adj.fwd.end());
        std::sort(adj.bwd.begin(), adj.bwd.end());
    }
}

std::vector<RelationId> Graph::distinct_relations() const {
    std::vector<RelationId> rels;
    rels.reserve(triples_.size());
    for (const Triple& t : triples_)
        rels.push_back(t.relation);
    std::sort(rels.begin(), rels.end());
    rels.erase(std::unique(rels.begin(), rels.end()), rels.end());
    return rels;
}

bool Graph::has_vertex(EntityId v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Graph::has_triple(EntityId s, RelationId r, EntityId t) const {
    return std::binary_search(triples_.begin(), triples_.end(), Triple{s, r, t});
}

std::span<const Edge> Graph::forward(EntityId v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end())
        return {};
    return it->second.fwd;
}

std::span<const Edge> Graph::backward(EntityId v) const {
    auto it = adjacency_.find(v);
    if (it == adjacency_.end())
        return {};
    return it->second.bwd;
}

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
}

} // namespace

Graph load_triples(std::istream& in) {
    auto vocab = std::make_shared<Vocab>();
    std::vector<Triple> triples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty())
            continue;
        auto first = line.find('\t');
        auto second = first == std::string::npos ? std::string::npos : line.find('\t', first + 1);
        if (first == std::string::npos || second == std::string::npos ||
            line.find('\t', second + 1) != std::string::npos)
            throw ParseError("triples: expected exactly 3 tab-separated fields", lineno);
        std::string_view source(line.data(), first);
        std::string_view relation(line.data() + first + 1, second - first - 1);
        std::string_view target(line.data() + second + 1, line.size() - second - 1);
        if (source.empty() || relation.empty() || target.empty())
            throw ParseError("triples: empty label", lineno);
        Triple t{vocab->entities.intern(source), vocab->relations.intern(relation),
                 vocab->entities.intern(target)};
        triples.push_back(t);
    }
    if (triples.empty())
        throw ParseError("triples: file contains no triples");

    std::vector<EntityId> vertices(vocab->entities.size());
    for (std::size_t i = 0; i < vertices.size(); ++i)
        vertices[i] = static_cast<EntityId>(i);
    return Graph(std::move(vocab), std::move(triples), std::move(vertices));
}

Graph load_triples(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("triples: cannot open " + path.string());
    return load_triples(in);
}

void save_triples(const Graph& graph, std::ostream& out) {
    for (const Triple& t : graph.triples()) {
        out << graph.entity_label(t.source) << '\t' << graph.relation_label(t.relation) << '\t'
            << graph.entity_label(t.target) << '\n';
    }
}

void save_triples(const Graph& graph, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("triples: cannot open " + path.string() + " for writing");
    save_triples(graph, out);
}

namespace {

std::vector<EntityId> sorted_unique(std::vector<EntityId> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

} // namespace

std::vector<Query> load_queries(std::istream& in, const Graph& graph) {
    std::vector<Query> queries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("queries: invalid JSON: ") + e.what(), lineno);
        }
        if (!j.is_object())
            throw ParseError("queries: line is not a JSON object", lineno);
        for (const auto& [key, _] : j.items()) {
            if (key != "id" && key != "question" && key != "topic_entities" && key != "answers")
                throw ParseError("queries: unknown key '" + key + "'", lineno);
        }
        if (!j.contains("id") || !j.contains("question") || !j.contains("topic_entities") ||
            !j.contains("answers"))
            throw ParseError("queries: missing required key", lineno);
        if (!j["id"].is_string() || !j["question"].is_string() ||
            !j["topic_entities"].is_array() || !j["answers"].is_array())
            throw ParseError("queries: wrong field type", lineno);

        Query q;
        q.id = j["id"].get<std::string>();
        q.text = j["question"].get<std::string>();

        for (const auto& label : j["topic_entities"]) {
            if (!label.is_string())
                throw ParseError("queries: topic entity is not a string", lineno);
            auto id = graph.find_entity(label.get<std::string>());
            if (!id) {
                q.skipped = true;
                q.warnings.push_back("topic entity not in graph: " + label.get<std::string>());
                continue;
            }
            q.topic_entities.push_back(*id);
        }
        if (q.topic_entities.empty() && !q.skipped) {
            q.skipped = true;
            q.warnings.push_back("no topic entities");
        }
        q.topic_entities = sorted_unique(std::move(q.topic_entities));

        for (const auto& label : j["answers"]) {
            if (!label.is_string())
                throw ParseError("queries: answer is not a string", lineno);
            auto id = graph.find_entity(label.get<std::string>());
            if (!id) {
                ++q.dropped_answers;
                continue;
            }
            q.answers.push_back(*id);
        }
        q.answers = sorted_unique(std::move(q.answers));
        if (q.dropped_answers > 0)
            q.warnings.push_back(std::to_string(q.dropped_answers) +
                                 " answer label(s) not in graph, dropped");
        if (q.answers.empty())
            q.warnings.push_back("empty answer set");

        queries.push_back(std::move(q));
    }
    return queries;
}

std::vector<Query> load_queries(const std::filesystem::path& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("queries: cannot open " + path.string());
    return load_queries(in, graph);
}

std::vector<OutEdge> out_edges(const Graph& graph, EntityId v, EdgeScope scope) {
    if (!graph.has_vertex(v))
        throw ContractError("out_edges: entity " + std::to_string(v) + " is not a vertex");
    std::vector<OutEdge> edges;
    if (scope == EdgeScope::Forward || scope == EdgeScope::Both) {
        for (const Edge& e : graph.forward(v))
            edges.push_back({e.relation, e.neighbor, EdgeDir::Forward});
    }
    if (scope == EdgeScope::Backward || scope == EdgeScope::Both) {
        for (const Edge& e : graph.backward(v))
            edges.push_back({e.relation, e.neighbor, EdgeDir::Backward});
    }
    return edges;
}

Graph induced_subgraph(const Graph& graph, const std::vector<EntityId>& keep) {
    std::vector<EntityId> vertices = sorted_unique(keep);
    for (EntityId v : vertices) {
        if (!graph.has_vertex(v))
            throw ContractError("induced_subgraph: keep set contains a non-vertex");
    }
    auto kept = [&](EntityId v) {
        return std::binary_search(vertices.begin(), vertices.end(), v);
    };
    std::vector<Triple> triples;
    for (const Triple& t : graph.triples()) {
        if (kept(t.source) && kept(t.target))
            triples.push_back(t);
    }
    return Graph(graph.vocab_ptr(), std::move(triples), std::move(vertices));
}

} // namespace lego
