#include "semnet/geo.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"
#include "semnet/resources.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>

namespace semnet::geo {

namespace {

struct Word {
    std::string text;
    bool sentence_start = false;
};

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80 || c == '\''; }

// Words keep their case. Non-ASCII bytes count as letters so accented names stay whole.
std::vector<Word> words_of(std::string_view text) {
    std::vector<Word> words;
    bool sentence_start = true;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (!is_word_byte(c) || c == '\'') {
            if (c == '.' || c == '!' || c == '?') {
                sentence_start = true;
            } else if (!std::isspace(c) && c != '\'' && c != '"' && c != '(' && c != ')') {
                sentence_start = false;
            }
            ++i;
            continue;
        }
        const auto start = i;
        while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
        std::string w(text.substr(start, i - start));
        // Possessives: "Italy's", "Italy’s".
        for (std::string_view suffix : {std::string_view("'s"), std::string_view("\xE2\x80\x99s")}) {
            if (w.size() > suffix.size() && w.ends_with(suffix)) w.resize(w.size() - suffix.size());
        }
        while (!w.empty() && w.back() == '\'') w.pop_back();
        words.push_back({std::move(w), sentence_start});
        sentence_start = false;
    }
    return words;
}

std::vector<std::string> form_words(std::string_view form) {
    std::vector<std::string> out;
    for (auto& w : words_of(form)) out.push_back(std::move(w.text));
    return out;
}

}  // namespace

Gazetteer::Gazetteer(std::map<std::string, std::set<std::string>> entries, std::set<std::string> ambiguous)
    : entries_(std::move(entries)), ambiguous_(std::move(ambiguous)) {
    std::map<std::string, std::vector<std::string>> owners;
    for (const auto& [country, forms] : entries_) {
        for (const auto& f : forms) owners[f].push_back(country);
    }
    for (const auto& [form, countries] : owners) {
        if (countries.size() > 1 && !ambiguous_.count(form)) {
            throw ParseError("gazetteer form '" + form + "' belongs to several countries but is not flagged ambiguous");
        }
        auto words = form_words(form);
        if (words.empty()) continue;
        by_first_word_[words.front()].push_back(Form{words, countries, ambiguous_.count(form) > 0});
    }
    for (auto& [first, forms] : by_first_word_) {
        std::stable_sort(forms.begin(), forms.end(),
                         [](const Form& a, const Form& b) { return a.words.size() > b.words.size(); });
    }
}

std::set<std::string> Gazetteer::tag(std::string_view text) const {
    std::set<std::string> found;
    const auto words = words_of(text);
    for (std::size_t i = 0; i < words.size();) {
        auto it = by_first_word_.find(words[i].text);
        std::size_t consumed = 0;
        if (it != by_first_word_.end()) {
            for (const auto& form : it->second) {
                if (i + form.words.size() > words.size()) continue;
                bool same = true;
                for (std::size_t k = 0; k < form.words.size() && same; ++k) same = words[i + k].text == form.words[k];
                if (!same) continue;
                consumed = form.words.size();
                if (!(form.ambiguous && words[i].sentence_start)) {
                    found.insert(form.countries.begin(), form.countries.end());
                }
                break;
            }
        }
        i += consumed ? consumed : 1;
    }
    return found;
}

Gazetteer gazetteer_from_json(std::string_view json_text) {
    std::map<std::string, std::set<std::string>> entries;
    std::set<std::string> ambiguous;
    try {
        auto j = nlohmann::json::parse(json_text);
        for (const auto& [key, value] : j.items()) {
            auto forms = value.get<std::vector<std::string>>();
            if (key == "ambiguous") {
                ambiguous.insert(forms.begin(), forms.end());
            } else {
                entries[key].insert(forms.begin(), forms.end());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid gazetteer: ") + e.what());
    }
    return Gazetteer(std::move(entries), std::move(ambiguous));
}

const Gazetteer& default_gazetteer() {
    static const Gazetteer gaz = gazetteer_from_json(resources::gazetteer());
    return gaz;
}

std::set<std::string> tag_countries(const corpus::Document& doc, const Gazetteer& gaz) {
    auto found = gaz.tag(doc.title);
    auto in_abstract = gaz.tag(doc.abstract_text);
    found.insert(in_abstract.begin(), in_abstract.end());
    return found;
}

std::map<std::string, std::size_t> country_counts(const corpus::DocumentSet& docs, const Gazetteer& gaz) {
    std::map<std::string, std::size_t> counts;
    for (const auto& d : docs) {
        for (const auto& c : tag_countries(d, gaz)) ++counts[c];
    }
    return counts;
}

std::string counts_to_csv(const std::map<std::string, std::map<std::string, std::size_t>>& by_dataset) {
    std::map<std::string, std::map<std::string, std::size_t>> by_country;
    for (const auto& [dataset, counts] : by_dataset) {
        for (const auto& [country, n] : counts) by_country[country][dataset] = n;
    }
    std::string out = "country,dataset,count\n";
    for (const auto& [country, per_dataset] : by_country) {
        for (const auto& [dataset, n] : per_dataset) out += io::csv_line({country, dataset, std::to_string(n)});
    }
    return out;
}

}  // namespace semnet::geo
