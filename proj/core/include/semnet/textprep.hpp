#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semnet::text {

enum class StemmerKind { Porter, None };

StemmerKind parse_stemmer(std::string_view name);
std::string_view stemmer_name(StemmerKind kind);

struct PrepConfig {
    std::set<std::string> stopwords;  ///< lowercase entries
    StemmerKind stemmer = StemmerKind::Porter;
    std::size_t min_token_len = 2;
    std::size_t collocation_min_count = 5;
    double collocation_score_threshold = 3.0;  ///< PMI, bits
};

/// Built-in English stopword list (one word per line in the shipped data file).
const std::set<std::string>& default_stopwords();
std::set<std::string> load_stopwords(std::string_view file_content);

PrepConfig default_prep_config();

struct TokenSeq {
    std::string doc_id;
    std::vector<std::string> tokens;

    bool operator==(const TokenSeq&) const = default;
};

/// Splits raw text into lowercase ASCII words. Hyphens, punctuation and other
/// non-alphanumeric characters separate words; common Latin-1 accents are folded.
std::vector<std::string> split_words(std::string_view text);

/// Network token for a multi-word phrase: its words joined by '_'.
std::string phrase_token(std::string_view phrase);

/// Protected phrases are fused (longest match first) before stopword removal
/// and stemming and are emitted as-is.
class PhraseMatcher {
public:
    PhraseMatcher() = default;
    explicit PhraseMatcher(const std::vector<std::string>& phrases);

    bool empty() const noexcept { return by_first_.empty(); }
    /// Length in words of the longest phrase starting at words[pos], or 0.
    std::size_t match(const std::vector<std::string>& words, std::size_t pos) const;

private:
    std::map<std::string, std::vector<std::vector<std::string>>> by_first_;
};

/// Stems to a fixed point.
std::string stem(std::string_view word, StemmerKind kind);

TokenSeq tokenize_normalize(std::string_view text, const PrepConfig& cfg, const PhraseMatcher& protected_phrases,
                            std::string doc_id = {});
TokenSeq tokenize_normalize(std::string_view text, const PrepConfig& cfg,
                            const std::vector<std::string>& protected_phrases, std::string doc_id = {});

struct Collocation {
    std::string fused;
    std::int64_t count = 0;
    double score = 0.0;  ///< pointwise mutual information, log2
};

using CollocationTable = std::map<std::pair<std::string, std::string>, Collocation>;

/// Adjacent-pair PMI over the corpus; keeps pairs meeting both the count floor
/// and the score threshold.
CollocationTable detect_collocations(const std::vector<TokenSeq>& corpus, const PrepConfig& cfg);

/// Greedy left-to-right single pass; fused tokens are not re-fused.
TokenSeq apply_collocations(const TokenSeq& seq, const CollocationTable& table);

std::string collocations_to_csv(const CollocationTable& table);

}  // namespace semnet::text
