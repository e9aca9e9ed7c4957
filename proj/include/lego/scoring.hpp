#pragma once
// Uniform relevance-scoring interface over text candidates. Native scorers
// (bm25, random) run in-process; embedding, rerank and llm scorers talk to
// remote endpoints over HTTP. Remote kinds also accept the endpoint "stub",
// which produces deterministic hash-based scores for offline runs and tests.

#include "lego/graph.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace lego {

enum class ScorerKind : std::uint8_t { Bm25, Random, Embedding, Rerank, Llm };

const char* to_string(ScorerKind kind);
ScorerKind scorer_kind_from_string(const std::string& name);
bool scorer_kind_is_remote(ScorerKind kind);

struct ScorerConfig {
    ScorerKind kind = ScorerKind::Bm25;
    std::string endpoint;            // remote kinds only; "stub" = offline mode
    std::string model;               // remote kinds only
    std::uint32_t batch_size = 32;
    std::uint64_t seed = 0;          // random kind
    double k1 = 1.2;                 // bm25
    double b = 0.75;                 // bm25
    std::uint32_t max_in_flight = 8; // remote request bound
    std::uint32_t retries = 3;       // remote attempts before failing

    bool operator==(const ScorerConfig&) const = default;
};

// Throws ConfigError on out-of-range values or a missing remote endpoint.
void validate(const ScorerConfig& cfg);

enum class CandidateKind : std::uint8_t { Entity, Relation, Triple, Path };

// A scoreable item: the rendered text plus the ids needed to resolve it back.
struct Candidate {
    CandidateKind kind = CandidateKind::Entity;
    std::string text;
    std::vector<std::uint32_t> payload;
};

using ScoreVector = std::vector<double>;

class Scorer {
public:
    virtual ~Scorer() = default;

    // One finite score per candidate, higher = more relevant. Scores are only
    // comparable within a single call. Throws ContractError on an empty batch
    // and ScorerError on remote failures.
    ScoreVector score_batch(const std::string& query_text,
                            const std::vector<Candidate>& candidates);

    const ScorerConfig& config() const { return config_; }

    // Times an llm scorer fell back to uniform scores after unparseable output.
    std::uint64_t format_failures() const { return format_failures_.load(); }

protected:
    explicit Scorer(ScorerConfig cfg) : config_(std::move(cfg)) {}
    virtual ScoreVector score_impl(const std::string& query_text,
                                   const std::vector<Candidate>& candidates) = 0;
    void count_format_failure() { format_failures_.fetch_add(1); }

    ScorerConfig config_;

private:
    std::atomic<std::uint64_t> format_failures_{0};
};

// Validates the config and constructs the matching implementation.
std::shared_ptr<Scorer> make_scorer(const ScorerConfig& cfg);

// Renders `<source label>, <relation label>, <target label>`, verbatim labels.
std::string render_triple(const Triple& t, const Graph& graph);

// Candidate indices ordered by (score desc, text asc, payload asc). Every
// rank-based selection in the pipeline goes through this one tie-break.
std::vector<std::size_t> rank_candidates(const std::vector<Candidate>& candidates,
                                         const ScoreVector& scores);

} // namespace lego
