#pragma once
// Interned, immutable triple store with bidirectional adjacency.
//
// Entity and relation labels map to dense ids assigned in first-occurrence
// order. Subgraphs share the parent's interning tables, so ids stay valid
// across extraction stages and label lookups never need re-resolution.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lego {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

enum class EdgeDir : std::uint8_t { Forward, Backward };

// Which adjacency to walk; Both yields forward edges then backward edges.
enum class EdgeScope : std::uint8_t { Forward, Backward, Both };

struct Triple {
    EntityId source;
    RelationId relation;
    EntityId target;

    auto operator<=>(const Triple&) const = default;
};

// One adjacency entry: the relation and the entity on the other end.
struct Edge {
    RelationId relation;
    EntityId neighbor;

    auto operator<=>(const Edge&) const = default;
};

struct OutEdge {
    RelationId relation;
    EntityId neighbor;
    EdgeDir dir;

    auto operator<=>(const OutEdge&) const = default;
};

// Bidirectional label <-> dense-id table. Ids are contiguous from zero.
class Interner {
public:
    std::uint32_t intern(std::string_view label);
    std::optional<std::uint32_t> find(std::string_view label) const;
    const std::string& label(std::uint32_t id) const;
    std::size_t size() const { return labels_.size(); }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

// Shared interning tables for entities and relations.
struct Vocab {
    Interner entities;
    Interner relations;
};

class Graph {
public:
    Graph() = default;

    // Takes ownership of triples/vertices; both are deduplicated and sorted.
    // Every id must be valid in vocab and every triple endpoint must be a vertex.
    Graph(std::shared_ptr<const Vocab> vocab, std::vector<Triple> triples,
          std::vector<EntityId> vertices);

    const std::vector<Triple>& triples() const { return triples_; }
    const std::vector<EntityId>& vertices() const { return vertices_; }

    std::size_t entity_count() const { return vertices_.size(); }
    std::size_t triple_count() const { return triples_.size(); }
    // Distinct relation ids occurring in this graph's triples.
    std::vector<RelationId> distinct_relations() const;

    bool has_vertex(EntityId v) const;
    bool has_triple(EntityId s, RelationId r, EntityId t) const;

    // Adjacency lists are sorted by (relation, neighbor). Unknown vertices
    // yield empty spans.
    std::span<const Edge> forward(EntityId v) const;
    std::span<const Edge> backward(EntityId v) const;
    // Symmetrized degree: parallel edges and self-loops count per slot.
    std::size_t degree(EntityId v) const { return forward(v).size() + backward(v).size(); }

    const Vocab& vocab() const { return *vocab_; }
    const std::shared_ptr<const Vocab>& vocab_ptr() const { return vocab_; }

    const std::string& entity_label(EntityId id) const { return vocab_->entities.label(id); }
    const std::string& relation_label(RelationId id) const { return vocab_->relations.label(id); }
    std::optional<EntityId> find_entity(std::string_view label) const {
        return vocab_->entities.find(label);
    }

private:
    struct Adjacency {
        std::vector<Edge> fwd;
        std::vector<Edge> bwd;
    };

    std::shared_ptr<const Vocab> vocab_;
    std::vector<Triple> triples_;      // sorted, unique
    std::vector<EntityId> vertices_;   // sorted, unique
    std::unordered_map<EntityId, Adjacency> adjacency_;
};

// A benchmark query: question text, pre-linked topic entities, gold answers.
struct Query {
    std::string id;
    std::string text;
    std::vector<EntityId> topic_entities; // sorted, unique, resolved
    std::vector<EntityId> answers;        // sorted, unique, resolved
    bool skipped = false;                 // topic entity failed to resolve
    std::uint32_t dropped_answers = 0;    // answer labels not present in the graph
    std::vector<std::string> warnings;
};

// Loads tab-separated `source\trelation\ttarget` lines. Duplicate lines
// collapse to one stored triple. Throws ParseError on malformed lines or an
// empty file.
Graph load_triples(const std::filesystem::path& path);
Graph load_triples(std::istream& in);

// Writes the triple set back out as TSV, one triple per line.
void save_triples(const Graph& graph, const std::filesystem::path& path);
void save_triples(const Graph& graph, std::ostream& out);

// Loads JSON-lines queries with keys exactly {id, question, topic_entities,
// answers}. Unresolvable answers are dropped and counted; a query with any
// unresolvable (or no) topic entity is marked skipped.
std::vector<Query> load_queries(const std::filesystem::path& path, const Graph& graph);
std::vector<Query> load_queries(std::istream& in, const Graph& graph);

// Incident edges of v in deterministic order: sorted by (relation, neighbor)
// per direction; Both concatenates forward then backward. Throws
// ContractError when v is not a vertex of the graph.
std::vector<OutEdge> out_edges(const Graph& graph, EntityId v, EdgeScope scope);

// Subgraph induced by `keep`: exactly the triples with both endpoints kept.
// The vertex set of the result is `keep` itself; interning tables are shared
// with the parent. Ids outside the parent's vertex set are a contract error.
Graph induced_subgraph(const Graph& graph, const std::vector<EntityId>& keep);

} // namespace lego
