#include "semnet/textprep.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"
#include "semnet/porter.hpp"
#include "semnet/resources.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace semnet::text {

StemmerKind parse_stemmer(std::string_view name) {
    if (name == "porter") return StemmerKind::Porter;
    if (name == "none") return StemmerKind::None;
    throw ParseError("unknown stemmer: " + std::string(name));
}

std::string_view stemmer_name(StemmerKind kind) { return kind == StemmerKind::Porter ? "porter" : "none"; }

std::set<std::string> load_stopwords(std::string_view file_content) {
    std::set<std::string> words;
    for (auto& line : io::split(file_content, '\n')) {
        auto w = io::to_lower_ascii(io::trim(line));
        if (!w.empty() && w.front() != '#') words.insert(std::move(w));
    }
    return words;
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = load_stopwords(resources::stopwords_en());
    return words;
}

PrepConfig default_prep_config() {
    PrepConfig cfg;
    cfg.stopwords = default_stopwords();
    return cfg;
}

namespace {

// U+00C0..U+00FF folded to ASCII; ' ' marks a separator (multiplication/division signs).
constexpr std::string_view kLatin1Fold =
    "aaaaaaaceeeeiiii"
    "dnooooo ouuuuyts"
    "aaaaaaaceeeeiiii"
    "dnooooo ouuuuyty";

}  // namespace

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) words.push_back(std::move(current));
        current.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c < 0x80) {
            if (std::isalnum(c) || c == '_') {
                current.push_back(static_cast<char>(std::tolower(c)));
            } else {
                flush();
            }
            continue;
        }
        if (c == 0xC3 && i + 1 < text.size()) {
            const auto next = static_cast<unsigned char>(text[i + 1]);
            if ((next & 0xC0) == 0x80) {
                const char folded = kLatin1Fold[(next & 0x3F)];
                ++i;
                if (folded == ' ') {
                    flush();
                } else {
                    current.push_back(folded);
                }
                continue;
            }
        }
        // Any other non-ASCII sequence is a separator; skip its continuation bytes.
        flush();
        while (i + 1 < text.size() && (static_cast<unsigned char>(text[i + 1]) & 0xC0) == 0x80) ++i;
    }
    flush();
    return words;
}

std::string phrase_token(std::string_view phrase) {
    auto words = split_words(phrase);
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back('_');
        out += words[i];
    }
    return out;
}

PhraseMatcher::PhraseMatcher(const std::vector<std::string>& phrases) {
    for (const auto& p : phrases) {
        auto words = split_words(p);
        if (words.empty()) continue;
        auto& bucket = by_first_[words.front()];
        if (std::find(bucket.begin(), bucket.end(), words) == bucket.end()) bucket.push_back(std::move(words));
    }
    for (auto& [first, bucket] : by_first_) {
        std::stable_sort(bucket.begin(), bucket.end(),
                         [](const auto& a, const auto& b) { return a.size() > b.size(); });
    }
}

std::size_t PhraseMatcher::match(const std::vector<std::string>& words, std::size_t pos) const {
    auto it = by_first_.find(words[pos]);
    if (it == by_first_.end()) return 0;
    for (const auto& phrase : it->second) {
        if (pos + phrase.size() > words.size()) continue;
        if (std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<std::ptrdiff_t>(pos))) {
            return phrase.size();
        }
    }
    return 0;
}

std::string stem(std::string_view word, StemmerKind kind) {
    std::string current(word);
    if (kind == StemmerKind::None || current.find('_') != std::string::npos) return current;
    while (true) {
        auto next = porter_stem(current);
        if (next == current) return current;
        current = std::move(next);
    }
}

TokenSeq tokenize_normalize(std::string_view text, const PrepConfig& cfg, const PhraseMatcher& protected_phrases,
                            std::string doc_id) {
    TokenSeq out;
    out.doc_id = std::move(doc_id);
    const auto words = split_words(text);
    const auto min_len = std::max<std::size_t>(cfg.min_token_len, 1);
    for (std::size_t i = 0; i < words.size();) {
        if (const auto len = protected_phrases.match(words, i); len > 0) {
            std::string fused = words[i];
            for (std::size_t k = 1; k < len; ++k) fused += "_" + words[i + k];
            out.tokens.push_back(std::move(fused));
            i += len;
            continue;
        }
        const auto& w = words[i++];
        if (w.size() < min_len || cfg.stopwords.count(w)) continue;
        auto s = stem(w, cfg.stemmer);
        if (s.size() < min_len || cfg.stopwords.count(s)) continue;
        out.tokens.push_back(std::move(s));
    }
    return out;
}

TokenSeq tokenize_normalize(std::string_view text, const PrepConfig& cfg,
                            const std::vector<std::string>& protected_phrases, std::string doc_id) {
    return tokenize_normalize(text, cfg, PhraseMatcher(protected_phrases), std::move(doc_id));
}

CollocationTable detect_collocations(const std::vector<TokenSeq>& corpus, const PrepConfig& cfg) {
    std::unordered_map<std::string, std::int64_t> unigrams;
    std::map<std::pair<std::string, std::string>, std::int64_t> pairs;
    std::int64_t total_tokens = 0;
    std::int64_t total_pairs = 0;
    for (const auto& seq : corpus) {
        const auto& t = seq.tokens;
        total_tokens += static_cast<std::int64_t>(t.size());
        for (const auto& tok : t) ++unigrams[tok];
        for (std::size_t i = 0; i + 1 < t.size(); ++i) {
            ++pairs[{t[i], t[i + 1]}];
            ++total_pairs;
        }
    }
    CollocationTable table;
    if (total_pairs == 0) return table;
    const auto min_count = static_cast<std::int64_t>(cfg.collocation_min_count);
    for (const auto& [key, count] : pairs) {
        if (count < min_count) continue;
        const double p_ab = static_cast<double>(count) / static_cast<double>(total_pairs);
        const double p_a = static_cast<double>(unigrams[key.first]) / static_cast<double>(total_tokens);
        const double p_b = static_cast<double>(unigrams[key.second]) / static_cast<double>(total_tokens);
        const double pmi = std::log2(p_ab / (p_a * p_b));
        if (pmi < cfg.collocation_score_threshold) continue;
        table.emplace(key, Collocation{key.first + "_" + key.second, count, pmi});
    }
    return table;
}

TokenSeq apply_collocations(const TokenSeq& seq, const CollocationTable& table) {
    TokenSeq out;
    out.doc_id = seq.doc_id;
    const auto& t = seq.tokens;
    out.tokens.reserve(t.size());
    for (std::size_t i = 0; i < t.size();) {
        if (i + 1 < t.size()) {
            auto it = table.find({t[i], t[i + 1]});
            if (it != table.end()) {
                out.tokens.push_back(it->second.fused);
                i += 2;
                continue;
            }
        }
        out.tokens.push_back(t[i++]);
    }
    return out;
}

std::string collocations_to_csv(const CollocationTable& table) {
    std::string out = "token_a,token_b,count,score\n";
    for (const auto& [key, c] : table) {
        out += io::csv_line({key.first, key.second, std::to_string(c.count), io::format_double(c.score)});
    }
    return out;
}

}  // namespace semnet::text
