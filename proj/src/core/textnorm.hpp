#pragma once

#include <string>
#include <string_view>

namespace docground {

// The one text normalizer shared by matching, verification and evaluation:
// ASCII lowercase, whitespace runs collapsed to single spaces, then leading
// and trailing ASCII punctuation and whitespace stripped. Bytes >= 0x80 pass
// through untouched, so UTF-8 content survives.
std::string normalize_text(std::string_view s);

// Longest common subsequence length over bytes.
std::size_t lcs_length(std::string_view a, std::string_view b);

// lcs_length / max(len). Two empty strings are identical: 1.0.
double text_similarity(std::string_view a, std::string_view b);

} // namespace docground
