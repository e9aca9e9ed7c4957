#include "lego/bm25.hpp"
#include "lego/errors.hpp"

#include <cctype>
#include <cmath>

namespace lego {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

Bm25Stats Bm25Stats::build(const std::vector<std::vector<std::string>>& docs) {
    Bm25Stats stats;
    stats.doc_count = docs.size();
    std::size_t total_len = 0;
    for (const auto& doc : docs) {
        total_len += doc.size();
        std::unordered_map<std::string, bool> seen;
        for (const auto& term : doc) {
            if (!seen.emplace(term, true).second)
                continue;
            ++stats.doc_freq[term];
        }
    }
    stats.avg_doc_len = docs.empty() ? 0.0 : static_cast<double>(total_len) / docs.size();
    return stats;
}

double Bm25Stats::idf(const std::string& term) const {
    auto it = doc_freq.find(term);
    const double df = it == doc_freq.end() ? 0.0 : static_cast<double>(it->second);
    const double n = static_cast<double>(doc_count);
    const double raw = std::log((n - df + 0.5) / (df + 0.5));
    return raw > 0.0 ? raw : 0.0;
}

double bm25_score(const Bm25Stats& stats, const std::vector<std::string>& query_terms,
                  const std::vector<std::string>& doc_terms, double k1, double b) {
    if (doc_terms.empty() || query_terms.empty() || stats.doc_count == 0)
        return 0.0;
    std::unordered_map<std::string, std::size_t> tf;
    for (const auto& term : doc_terms)
        ++tf[term];
    const double dl = static_cast<double>(doc_terms.size());
    const double norm = k1 * (1.0 - b + b * dl / stats.avg_doc_len);
    double score = 0.0;
    for (const auto& term : query_terms) {
        auto it = tf.find(term);
        if (it == tf.end())
            continue;
        const double f = static_cast<double>(it->second);
        score += stats.idf(term) * (f * (k1 + 1.0)) / (f + norm);
    }
    return score;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw ContractError("cosine_similarity: dimension mismatch");
    if (a.empty())
        throw ContractError("cosine_similarity: empty vectors");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0)
        return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

} // namespace lego
