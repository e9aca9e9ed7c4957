#pragma once
// Subgraph extraction: rank entities around the topic entities and induce a
// budgeted subgraph. Ranking is personalized-pagerank power iteration or its
// Monte-Carlo random-walk counterpart; an optional scorer pass then prunes
// the subgraph to the most query-relevant relations.
//
// All traversal here is over the symmetrized graph: every stored edge is
// usable in both directions and degree counts both orientations.

#include "lego/graph.hpp"
#include "lego/scoring.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace lego {

struct PprParams {
    double restart_prob = 0.8; // probability mass returned to the seeds per step
    std::uint32_t max_ent = 2000;
    double tol = 1e-8;         // L1 stopping threshold
    std::uint32_t max_iter = 100;
};

struct RwrParams {
    std::uint32_t path_num = 64; // walks per seed
    double restart_prob = 0.8;
    std::uint32_t max_walk_len = 10;
    std::uint32_t max_ent = 2000;
    std::uint64_t seed = 0;
};

using ScoredEntities = std::unordered_map<EntityId, double>;

// Power iteration with preference mass 1/|seeds| on each seed. Mass on
// isolated vertices teleports back to the seeds, so the result always sums
// to 1. Throws ContractError on empty or invalid seeds.
ScoredEntities ppr_scores(const Graph& graph, const std::vector<EntityId>& seeds,
                          const PprParams& params);

// Monte-Carlo estimate: per seed, path_num walks of max_walk_len steps; each
// step restarts to the seed with probability restart_prob, otherwise moves to
// a uniformly random incident edge. Scores are normalized visit counts and
// deterministic for a fixed params.seed.
ScoredEntities rwr_scores(const Graph& graph, const std::vector<EntityId>& seeds,
                          const RwrParams& params);

// The top-scoring entities within the budget. Seeds are always included and
// consume budget first; remaining slots go by (score desc, id asc).
std::vector<EntityId> top_entities(const ScoredEntities& scores, std::uint32_t max_ent,
                                   const std::vector<EntityId>& seeds);

// Scores each distinct relation label of the subgraph against the query text
// and keeps only triples whose relation ranks in the top `window`. Topic
// entities stay even when edgeless; other entities survive only with at least
// one retained incident triple.
Graph semantic_refine(const Graph& subgraph, const Query& query, std::uint32_t window,
                      Scorer& scorer);

enum class SeMethod : std::uint8_t { Ppr, Rwr, PprScored };

const char* to_string(SeMethod m);
SeMethod se_method_from_string(const std::string& name);

struct SeConfig {
    SeMethod method = SeMethod::Ppr;
    PprParams ppr;
    RwrParams rwr;
    std::uint32_t window = 24;  // relation budget for PprScored
    ScorerConfig scorer;        // used by PprScored only

    bool operator==(const SeConfig&) const = default;
};

// Stage dispatcher. `refine_scorer` is required for PprScored and ignored
// otherwise. Seeds are the query's topic entities.
Graph extract_subgraph(const Graph& graph, const Query& query, const SeConfig& cfg,
                       Scorer* refine_scorer);

} // namespace lego
