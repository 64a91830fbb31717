/**
 * ngramvec - word embeddings trained with n-gram augmented contexts
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ngramvec {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Heterogeneous-lookup map so string_view queries don't allocate.
template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

}  // namespace ngramvec
