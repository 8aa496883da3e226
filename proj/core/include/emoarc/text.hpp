#pragma once

#include <string>
#include <string_view>
#include <vector>

// Shared text utilities. Every metric, the policy vocabulary and the
// protagonist tracker see the same tokenization.
namespace emoarc::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Lowercased tokens; runs of letters/digits/apostrophes (and any non-ASCII
// byte) form words, every other non-space character is its own token.
std::vector<std::string> tokenize(std::string_view s);

bool is_punct_token(std::string_view tok) noexcept;
bool is_terminator_token(std::string_view tok) noexcept;

// Inverse-ish of tokenize for generated text: punctuation attaches to the
// previous word and sentence starts are capitalized.
std::string detokenize(const std::vector<std::string>& tokens);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace emoarc::text
