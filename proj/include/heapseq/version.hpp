#pragma once

#include <string_view>

namespace heapseq {

inline constexpr std::string_view library_name = "heapseq";
inline constexpr std::string_view library_version = "0.1.0";

} // namespace heapseq
