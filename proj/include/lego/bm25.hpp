#pragma once
// Okapi BM25 over a small per-call corpus. Statistics are rebuilt for every
// scoring batch; relevance is only comparable within one batch.

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lego {

// Lowercases and splits on any non-alphanumeric byte, so dotted or
// underscored relation labels break into their components.
std::vector<std::string> tokenize(std::string_view text);

struct Bm25Stats {
    std::size_t doc_count = 0;
    double avg_doc_len = 0.0;
    std::unordered_map<std::string, std::size_t> doc_freq;

    static Bm25Stats build(const std::vector<std::vector<std::string>>& docs);
    // IDF floored at zero; terms in at least half the corpus contribute nothing.
    double idf(const std::string& term) const;
};

double bm25_score(const Bm25Stats& stats, const std::vector<std::string>& query_terms,
                  const std::vector<std::string>& doc_terms, double k1 = 1.2, double b = 0.75);

// Cosine similarity in [-1, 1]. A zero vector scores 0 (degenerate embedding).
// Throws ContractError on dimension mismatch.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

} // namespace lego
