#include "semnet/lexicon.hpp"

#include "semnet/error.hpp"
#include "semnet/io.hpp"
#include "semnet/textprep.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <unordered_set>

namespace semnet::lexicon {

using nlohmann::ordered_json;

void Lexicon::validate() const {
    std::unordered_set<std::string> names;
    std::map<std::string, std::string> owner;  // token -> cluster
    for (const auto& c : clusters) {
        if (c.name.empty()) throw ParseError("cluster name may not be empty");
        if (c.keywords.empty()) throw ParseError("cluster '" + c.name + "' has no keywords");
        if (!names.insert(c.name).second) throw ParseError("duplicate cluster name: " + c.name);
        for (const auto& token : member_tokens(c)) {
            auto [it, inserted] = owner.emplace(token, c.name);
            if (!inserted && it->second != c.name) {
                throw CollisionError(token, "keyword '" + token + "' claimed by clusters '" + it->second + "' and '" +
                                                c.name + "'");
            }
        }
    }
}

const ClusterDef* Lexicon::find(std::string_view name) const {
    for (const auto& c : clusters) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::vector<std::string> Lexicon::all_keywords() const {
    std::vector<std::string> out;
    for (const auto& c : clusters) out.insert(out.end(), c.keywords.begin(), c.keywords.end());
    return out;
}

std::vector<std::string> Lexicon::member_tokens(const ClusterDef& cluster) const {
    std::set<std::string> tokens;
    for (const auto& k : cluster.keywords) {
        auto t = text::phrase_token(k);
        if (t.empty()) throw ParseError("keyword '" + k + "' in cluster '" + cluster.name + "' has no word characters");
        tokens.insert(std::move(t));
    }
    return {tokens.begin(), tokens.end()};
}

Lexicon from_json(std::string_view json_text) {
    Lexicon lex;
    try {
        auto j = nlohmann::json::parse(json_text);
        lex.version = j.value("version", std::int64_t{1});
        lex.notes = j.value("notes", std::string{});
        for (const auto& c : j.at("clusters")) {
            ClusterDef def;
            def.name = c.at("name").get<std::string>();
            def.description = c.value("description", std::string{});
            for (const auto& k : c.at("keywords")) def.keywords.insert(k.get<std::string>());
            lex.clusters.push_back(std::move(def));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid lexicon: ") + e.what());
    }
    lex.validate();
    return lex;
}

std::string to_json(const Lexicon& lex) {
    ordered_json j;
    j["version"] = lex.version;
    if (!lex.notes.empty()) j["notes"] = lex.notes;
    j["clusters"] = ordered_json::array();
    for (const auto& c : lex.clusters) {
        ordered_json cj;
        cj["name"] = c.name;
        cj["description"] = c.description;
        cj["keywords"] = std::vector<std::string>(c.keywords.begin(), c.keywords.end());
        j["clusters"].push_back(std::move(cj));
    }
    return j.dump(2) + "\n";
}

Lexicon load_lexicon(const std::filesystem::path& path) { return from_json(io::read_file(path)); }

void save_lexicon(const Lexicon& lex, const std::filesystem::path& path) {
    lex.validate();
    io::write_file(path, to_json(lex));
}

Lexicon edit_cluster(const Lexicon& lex, std::string_view cluster, const std::vector<std::string>& add,
                     const std::vector<std::string>& remove) {
    Lexicon next = lex;
    ClusterDef* target = nullptr;
    for (auto& c : next.clusters) {
        if (c.name == cluster) target = &c;
    }
    if (!target) throw NotFoundError("unknown cluster: " + std::string(cluster));
    for (const auto& k : remove) target->keywords.erase(k);
    for (const auto& k : add) target->keywords.insert(k);
    if (target->keywords.empty()) throw ParseError("cluster may not be emptied: " + target->name);
    next.version = lex.version + 1;
    next.validate();
    return next;
}

Lexicon building_sustainability_lexicon() {
    Lexicon lex;
    lex.version = 1;
    lex.clusters = {
        {"Renewables",
         {"renewable energy", "solar energy", "geothermal energy", "hydroelectric energy", "wind energy",
          "biomass energy"},
         "Terms related to sustainable energy sources"},
        {"Efficiency",
         {"energy efficiency", "refurbish", "retrofit"},
         "Terms used to identify the concept of efficiency in the construction process"},
        {"Materials",
         {"brick", "insulation", "portland cement", "alkali", "limestone", "asphalt", "sand", "stone", "steel", "glass",
          "wood"},
         "Terms related to various materials commonly used in construction and building processes"},
        {"Components",
         {"composite", "roof", "green roof", "cool roofs", "fa\xC3\xA7" "ade", "window"},
         "Terms related to building elements and features that aim to improve sustainability and energy efficiency"},
        {"Energy Technologies",
         {"heat pump", "solar panels", "photovoltaic", "micro-wind", "boiler"},
         "Terms associated with the technology responsible for generating, converting, storing, and distributing "
         "various forms of energy"},
        {"LCA",
         {"life cycle assessment", "life cycle energy", "lce", "life cycle cost"},
         "Terms related to the building life cycle assessment approach"},
        {"Saving",
         {"economic benefits", "saving", "payback time", "investment"},
         "Terms related to economic aspects and advantages associated with various initiatives and investments"},
    };
    lex.validate();
    return lex;
}

}  // namespace semnet::lexicon
