#include "lego/scoring.hpp"

#include "lego/bm25.hpp"
#include "lego/errors.hpp"
#include "lego/hash.hpp"
#include "lego/remote.hpp"

#include <algorithm>
#include <cmath>

namespace lego {

const char* to_string(ScorerKind kind) {
    switch (kind) {
    case ScorerKind::Bm25: return "bm25";
    case ScorerKind::Random: return "random";
    case ScorerKind::Embedding: return "embedding";
    case ScorerKind::Rerank: return "rerank";
    case ScorerKind::Llm: return "llm";
    }
    return "?";
}

ScorerKind scorer_kind_from_string(const std::string& name) {
    if (name == "bm25") return ScorerKind::Bm25;
    if (name == "random") return ScorerKind::Random;
    if (name == "embedding") return ScorerKind::Embedding;
    if (name == "rerank") return ScorerKind::Rerank;
    if (name == "llm") return ScorerKind::Llm;
    throw ConfigError("unknown scorer kind '" + name + "'");
}

bool scorer_kind_is_remote(ScorerKind kind) {
    return kind == ScorerKind::Embedding || kind == ScorerKind::Rerank ||
           kind == ScorerKind::Llm;
}

void validate(const ScorerConfig& cfg) {
    if (cfg.batch_size == 0)
        throw ConfigError("scorer: batch_size must be positive");
    if (cfg.kind == ScorerKind::Bm25) {
        if (cfg.k1 <= 0.0)
            throw ConfigError("scorer: bm25 requires k1 > 0");
        if (cfg.b < 0.0 || cfg.b > 1.0)
            throw ConfigError("scorer: bm25 requires 0 <= b <= 1");
    }
    if (scorer_kind_is_remote(cfg.kind) && cfg.endpoint.empty())
        throw ConfigError(std::string("scorer: kind '") + to_string(cfg.kind) +
                          "' requires an endpoint");
}

ScoreVector Scorer::score_batch(const std::string& query_text,
                                const std::vector<Candidate>& candidates) {
    if (candidates.empty())
        throw ContractError("score_batch: empty candidate list");
    for (const Candidate& c : candidates) {
        if (c.text.empty())
            throw ContractError("score_batch: candidate with empty text");
    }
    ScoreVector scores = score_impl(query_text, candidates);
    if (scores.size() != candidates.size())
        throw ScorerError("score_batch: scorer returned " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(candidates.size()) + " candidates");
    for (double s : scores) {
        if (!std::isfinite(s))
            throw ScorerError("score_batch: non-finite score");
    }
    return scores;
}

namespace {

class Bm25Scorer final : public Scorer {
public:
    explicit Bm25Scorer(ScorerConfig cfg) : Scorer(std::move(cfg)) {}

protected:
    ScoreVector score_impl(const std::string& query_text,
                           const std::vector<Candidate>& candidates) override {
        std::vector<std::vector<std::string>> docs;
        docs.reserve(candidates.size());
        for (const Candidate& c : candidates)
            docs.push_back(tokenize(c.text));
        const Bm25Stats stats = Bm25Stats::build(docs);
        const auto query_terms = tokenize(query_text);
        ScoreVector scores;
        scores.reserve(docs.size());
        for (const auto& doc : docs)
            scores.push_back(bm25_score(stats, query_terms, doc, config_.k1, config_.b));
        return scores;
    }
};

class RandomScorer final : public Scorer {
public:
    explicit RandomScorer(ScorerConfig cfg) : Scorer(std::move(cfg)) {}

protected:
    ScoreVector score_impl(const std::string& query_text,
                           const std::vector<Candidate>& candidates) override {
        const std::uint64_t qh = mix64(fnv1a64(query_text));
        ScoreVector scores;
        scores.reserve(candidates.size());
        for (const Candidate& c : candidates)
            scores.push_back(hash_to_unit(mix64(config_.seed ^ qh ^ mix64(fnv1a64(c.text)))));
        return scores;
    }
};

// Offline stand-in for a remote scorer: deterministic hash scores salted by
// kind and model so different stub backends disagree with each other.
class StubScorer final : public Scorer {
public:
    explicit StubScorer(ScorerConfig cfg)
        : Scorer(std::move(cfg)),
          salt_(mix64(fnv1a64(to_string(config_.kind)) ^ mix64(fnv1a64(config_.model)))) {}

protected:
    ScoreVector score_impl(const std::string& query_text,
                           const std::vector<Candidate>& candidates) override {
        const std::uint64_t qh = mix64(fnv1a64(query_text));
        ScoreVector scores;
        scores.reserve(candidates.size());
        for (const Candidate& c : candidates)
            scores.push_back(hash_to_unit(mix64(salt_ ^ qh ^ mix64(fnv1a64(c.text)))));
        return scores;
    }

private:
    std::uint64_t salt_;
};

} // namespace

std::shared_ptr<Scorer> make_scorer(const ScorerConfig& cfg) {
    validate(cfg);
    switch (cfg.kind) {
    case ScorerKind::Bm25:
        return std::make_shared<Bm25Scorer>(cfg);
    case ScorerKind::Random:
        return std::make_shared<RandomScorer>(cfg);
    case ScorerKind::Embedding:
    case ScorerKind::Rerank:
    case ScorerKind::Llm:
        if (cfg.endpoint == "stub")
            return std::make_shared<StubScorer>(cfg);
        return make_remote_scorer(cfg);
    }
    throw ConfigError("unreachable scorer kind");
}

std::string render_triple(const Triple& t, const Graph& graph) {
    return graph.entity_label(t.source) + ", " + graph.relation_label(t.relation) + ", " +
           graph.entity_label(t.target);
}

std::vector<std::size_t> rank_candidates(const std::vector<Candidate>& candidates,
                                         const ScoreVector& scores) {
    if (candidates.size() != scores.size())
        throw ContractError("rank_candidates: size mismatch");
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b])
            return scores[a] > scores[b];
        if (candidates[a].text != candidates[b].text)
            return candidates[a].text < candidates[b].text;
        return candidates[a].payload < candidates[b].payload;
    });
    return order;
}

} // namespace lego
