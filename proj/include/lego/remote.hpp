#pragma once
// HTTP-backed scorers (embedding similarity, reranker, llm-as-scorer) plus
// the shared JSON-over-HTTP plumbing used by the generation client.
//
// All remote calls batch at most config.batch_size candidates per request,
// preserve candidate order, bound in-flight requests per scorer, and retry
// transport failures with exponential backoff before giving up.

#include "lego/scoring.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace lego {

// Splits "http(s)://host[:port]/path" into client base and request path.
struct ParsedUrl {
    std::string base; // scheme://host[:port]
    std::string path; // leading '/', "/" when absent
};
ParsedUrl parse_url(const std::string& url);

// POSTs `body` as application/json, retrying transport failures. When the
// environment variable named by `token_env` is set, it is sent as a bearer
// token. Throws ScorerError after the final attempt or on a non-2xx status.
nlohmann::json post_json(const std::string& endpoint, const nlohmann::json& body,
                         const char* token_env, std::uint32_t retries);

// Constructs an embedding/rerank/llm scorer for a real endpoint.
std::shared_ptr<Scorer> make_remote_scorer(const ScorerConfig& cfg);

// First run of exactly `expected` comma-separated floats in an llm completion;
// nullopt when the completion does not contain one.
std::optional<std::vector<double>> parse_score_list(const std::string& completion,
                                                    std::size_t expected);

// Prompt asking an llm to emit one score per candidate, comma-separated.
std::string llm_scoring_prompt(const std::string& query_text,
                               const std::vector<Candidate>& candidates);

} // namespace lego
