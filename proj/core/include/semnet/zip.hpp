#pragma once

#include <map>
#include <string>

namespace semnet::io {

/// Uncompressed (stored) zip archive of name -> content. Timestamps are fixed
/// so identical inputs give identical bytes.
std::string zip_store(const std::map<std::string, std::string>& files);

}  // namespace semnet::io
