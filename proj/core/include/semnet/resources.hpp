#pragma once

#include <string_view>

// Data files compiled into the library (generated from core/data/).
namespace semnet::resources {

std::string_view stopwords_en();
std::string_view gazetteer();
/// Recorded lexical-database responses used by the replayable suggestion provider.
std::string_view lexical_fixture();

}  // namespace semnet::resources
