#include "lego/remote.hpp"

#include "lego/bm25.hpp"
#include "lego/errors.hpp"
#include "lego/http_util.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <semaphore>
#include <thread>
#include <unordered_map>

namespace lego {

using nlohmann::json;

ParsedUrl parse_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint is not a URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

namespace {

constexpr std::chrono::milliseconds kBackoffBase{50};

httplib::Headers auth_headers(const char* token_env) {
    httplib::Headers headers;
    if (token_env != nullptr) {
        if (const char* token = std::getenv(token_env); token != nullptr && *token != '\0')
            headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    return headers;
}

} // namespace

json post_json(const std::string& endpoint, const json& body, const char* token_env,
               std::uint32_t retries) {
    const ParsedUrl url = parse_url(endpoint);
    const std::string payload = body.dump();
    std::string last_error;
    for (std::uint32_t attempt = 0; attempt < std::max(retries, 1u); ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(kBackoffBase * (1u << (attempt - 1)));
        httplib::Client client(url.base);
        client.set_connection_timeout(std::chrono::seconds(5));
        client.set_read_timeout(std::chrono::seconds(120));
        client.set_default_headers(auth_headers(token_env));
        auto res = client.Post(url.path, payload, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            last_error = "HTTP " + std::to_string(res->status);
            // 4xx is not going to change on retry
            if (res->status >= 400 && res->status < 500)
                break;
            continue;
        }
        try {
            return json::parse(res->body);
        } catch (const json::parse_error& e) {
            throw ScorerError("endpoint " + endpoint + " returned invalid JSON: " + e.what());
        }
    }
    throw ScorerError("POST " + endpoint + " failed after " + std::to_string(retries) +
                      " attempts: " + last_error);
}

std::optional<std::vector<double>> parse_score_list(const std::string& completion,
                                                    std::size_t expected) {
    // Scan every position where a number starts and try to read a
    // comma-separated run from there.
    for (std::size_t start = 0; start < completion.size(); ++start) {
        char c = completion[start];
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.'))
            continue;
        std::vector<double> values;
        std::size_t pos = start;
        while (values.size() < expected) {
            const char* begin = completion.c_str() + pos;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin)
                break;
            values.push_back(v);
            pos = static_cast<std::size_t>(end - completion.c_str());
            // move past one separating comma (with optional whitespace)
            std::size_t next = pos;
            while (next < completion.size() &&
                   std::isspace(static_cast<unsigned char>(completion[next])))
                ++next;
            if (values.size() == expected)
                break;
            if (next >= completion.size() || completion[next] != ',')
                break;
            pos = next + 1;
            while (pos < completion.size() &&
                   std::isspace(static_cast<unsigned char>(completion[pos])))
                ++pos;
        }
        if (values.size() == expected)
            return values;
        // skip to the end of this numeric token before rescanning
        while (start + 1 < completion.size() &&
               (std::isdigit(static_cast<unsigned char>(completion[start + 1])) ||
                completion[start + 1] == '.'))
            ++start;
    }
    return std::nullopt;
}

std::string llm_scoring_prompt(const std::string& query_text,
                               const std::vector<Candidate>& candidates) {
    std::string prompt =
        "Please score the relations (separated by semicolon) that contribute to the question "
        "on a scale from 0 to 1 (the sum of the scores of all relations is 1).\n"
        "\n"
        "Q: Name the president of the country whose main spoken language was Brahui in 1980?\n"
        "\n"
        "Topic Entity: Brahui Language\n"
        "\n"
        "Relations: language.human_language.main_country\n"
        "\n"
        "language.human_language.countries_spoken_in\n"
        "\n"
        "base.rosetta.languoid.parent\n"
        "\n"
        "kg.object_profile.prominent_type\n"
        "\n"
        "Score: 0.4, 0.3, 0.2, 0.0\n"
        "\n"
        "language.human_language.main_country is highly relevant as it directly relates to the "
        "country whose president is being asked for, and the main country where Brahui language "
        "is spoken in 1980.\n"
        "\n"
        "language.human_language.countries_spoken_in is also relevant as it provides information "
        "on the countries where Brahui language is spoken, which could help narrow down the "
        "search for the president.\n"
        "\n"
        "base.rosetta.languoid.parent is less relevant but still provides some context on the "
        "language family to which Brahui belongs, which could be useful in understanding the "
        "linguistic and cultural background of the country in question.\n"
        "\n"
        "kg.object_profile.prominent_type is not relevant and contributes nothing to the "
        "question.\n"
        "\n"
        "Q: " +
        query_text +
        "\n"
        "\n"
        "Topic Entity: \n"
        "\n"
        "Relations:";
    for (const Candidate& c : candidates) {
        prompt += ' ';
        prompt += c.text;
        prompt += '\n';
    }
    return prompt;
}

namespace {

// Bounds concurrent requests issued by one scorer instance.
class InFlightGuard {
public:
    explicit InFlightGuard(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
    ~InFlightGuard() { sem_.release(); }
    InFlightGuard(const InFlightGuard&) = delete;
    InFlightGuard& operator=(const InFlightGuard&) = delete;

private:
    std::counting_semaphore<>& sem_;
};

class RemoteScorerBase : public Scorer {
protected:
    explicit RemoteScorerBase(ScorerConfig cfg)
        : Scorer(std::move(cfg)), in_flight_(config_.max_in_flight) {}

    ScoreVector score_impl(const std::string& query_text,
                           const std::vector<Candidate>& candidates) override {
        ScoreVector scores(candidates.size(), 0.0);
        const std::size_t batch = config_.batch_size;
        for (std::size_t begin = 0; begin < candidates.size(); begin += batch) {
            const std::size_t end = std::min(begin + batch, candidates.size());
            try {
                InFlightGuard guard(in_flight_);
                score_range(query_text, candidates, begin, end, scores);
            } catch (const ScorerError& e) {
                throw ScorerError(std::string(e.what()) + " [candidates " +
                                  std::to_string(begin) + ".." + std::to_string(end - 1) + "]");
            }
        }
        return scores;
    }

    virtual void score_range(const std::string& query_text,
                             const std::vector<Candidate>& candidates, std::size_t begin,
                             std::size_t end, ScoreVector& scores) = 0;

private:
    std::counting_semaphore<> in_flight_;
};

class EmbeddingScorer final : public RemoteScorerBase {
public:
    explicit EmbeddingScorer(ScorerConfig cfg) : RemoteScorerBase(std::move(cfg)) {}

private:
    void score_range(const std::string& query_text, const std::vector<Candidate>& candidates,
                     std::size_t begin, std::size_t end, ScoreVector& scores) override {
        std::vector<std::string> texts;
        texts.push_back(query_text);
        for (std::size_t i = begin; i < end; ++i)
            texts.push_back(candidates[i].text);
        auto embeddings = embed(texts);
        const auto& query_vec = embeddings[0];
        for (std::size_t i = begin; i < end; ++i) {
            const auto& vec = embeddings[i - begin + 1];
            if (vec.empty() || query_vec.empty())
                throw ScorerError("embedding endpoint returned an empty vector");
            double score = cosine_similarity(query_vec, vec);
            if (score == 0.0 && is_zero(vec))
                std::cerr << "warning: degenerate zero embedding for candidate text\n";
            scores[i] = score;
        }
    }

    static bool is_zero(const std::vector<double>& v) {
        for (double x : v)
            if (x != 0.0)
                return false;
        return true;
    }

    // Embeds texts, serving repeats from the cache; requests preserve order.
    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) {
        std::vector<std::vector<double>> out(texts.size());
        std::vector<std::size_t> missing;
        {
            std::lock_guard lock(cache_mutex_);
            for (std::size_t i = 0; i < texts.size(); ++i) {
                auto it = cache_.find(texts[i]);
                if (it != cache_.end())
                    out[i] = it->second;
                else
                    missing.push_back(i);
            }
        }
        if (!missing.empty()) {
            json input = json::array();
            for (std::size_t i : missing)
                input.push_back(texts[i]);
            json body{{"model", config_.model}, {"input", input}};
            json reply = post_json(config_.endpoint, body, "LEGO_SCORER_TOKEN", config_.retries);
            if (!reply.contains("data") || !reply["data"].is_array() ||
                reply["data"].size() != missing.size())
                throw ScorerError("embedding endpoint: response length mismatch");
            std::lock_guard lock(cache_mutex_);
            for (std::size_t k = 0; k < missing.size(); ++k) {
                const auto& item = reply["data"][k];
                if (!item.contains("embedding") || !item["embedding"].is_array())
                    throw ScorerError("embedding endpoint: missing 'embedding' field");
                auto vec = item["embedding"].get<std::vector<double>>();
                out[missing[k]] = vec;
                cache_[texts[missing[k]]] = std::move(vec);
            }
        }
        return out;
    }

    std::mutex cache_mutex_;
    std::unordered_map<std::string, std::vector<double>> cache_;
};

class RerankScorer final : public RemoteScorerBase {
public:
    explicit RerankScorer(ScorerConfig cfg) : RemoteScorerBase(std::move(cfg)) {}

private:
    void score_range(const std::string& query_text, const std::vector<Candidate>& candidates,
                     std::size_t begin, std::size_t end, ScoreVector& scores) override {
        json documents = json::array();
        for (std::size_t i = begin; i < end; ++i)
            documents.push_back(candidates[i].text);
        json body{{"model", config_.model}, {"query", query_text}, {"documents", documents}};
        json reply = post_json(config_.endpoint, body, "LEGO_SCORER_TOKEN", config_.retries);
        if (!reply.contains("results") || !reply["results"].is_array() ||
            reply["results"].size() != end - begin)
            throw ScorerError("rerank endpoint: response length mismatch");
        std::vector<bool> seen(end - begin, false);
        for (const auto& item : reply["results"]) {
            if (!item.contains("index") || !item.contains("relevance_score"))
                throw ScorerError("rerank endpoint: malformed result entry");
            auto idx = item["index"].get<std::int64_t>();
            if (idx < 0 || static_cast<std::size_t>(idx) >= end - begin ||
                seen[static_cast<std::size_t>(idx)])
                throw ScorerError("rerank endpoint: bad or duplicate index in response");
            seen[static_cast<std::size_t>(idx)] = true;
            scores[begin + static_cast<std::size_t>(idx)] =
                item["relevance_score"].get<double>();
        }
    }
};

class LlmScorer final : public RemoteScorerBase {
public:
    explicit LlmScorer(ScorerConfig cfg) : RemoteScorerBase(std::move(cfg)) {}

private:
    void score_range(const std::string& query_text, const std::vector<Candidate>& candidates,
                     std::size_t begin, std::size_t end, ScoreVector& scores) override {
        std::vector<Candidate> slice(candidates.begin() + static_cast<std::ptrdiff_t>(begin),
                                     candidates.begin() + static_cast<std::ptrdiff_t>(end));
        const std::string prompt = llm_scoring_prompt(query_text, slice);
        // one retry on unparseable output, then uniform fallback
        for (int attempt = 0; attempt < 2; ++attempt) {
            const std::string completion = complete(prompt);
            if (auto parsed = parse_score_list(completion, slice.size())) {
                for (std::size_t i = 0; i < parsed->size(); ++i)
                    scores[begin + i] = (*parsed)[i];
                return;
            }
        }
        count_format_failure();
        for (std::size_t i = begin; i < end; ++i)
            scores[i] = 1.0 / static_cast<double>(slice.size());
    }

    std::string complete(const std::string& prompt) {
        json body{{"model", config_.model},
                  {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
                  {"temperature", 0.0},
                  {"max_tokens", 512},
                  {"stop", json::array()}};
        json reply = post_json(config_.endpoint, body, "LEGO_SCORER_TOKEN", config_.retries);
        if (!reply.contains("choices") || !reply["choices"].is_array() ||
            reply["choices"].empty())
            throw ScorerError("llm endpoint: no choices in response");
        const auto& msg = reply["choices"][0];
        if (!msg.contains("message") || !msg["message"].contains("content"))
            throw ScorerError("llm endpoint: malformed choice");
        return msg["message"]["content"].get<std::string>();
    }
};

} // namespace

std::shared_ptr<Scorer> make_remote_scorer(const ScorerConfig& cfg) {
    switch (cfg.kind) {
    case ScorerKind::Embedding:
        return std::make_shared<EmbeddingScorer>(cfg);
    case ScorerKind::Rerank:
        return std::make_shared<RerankScorer>(cfg);
    case ScorerKind::Llm:
        return std::make_shared<LlmScorer>(cfg);
    default:
        throw ConfigError("make_remote_scorer: not a remote kind");
    }
}

} // namespace lego
