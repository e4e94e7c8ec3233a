#pragma once

#include <string>
#include <string_view>

namespace semnet::text {

/// Porter (1980) suffix-stripping stemmer, following the reference C
/// implementation. Input must be lowercase ASCII; words of length <= 2 are
/// returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace semnet::text
