#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "emoarc/types.hpp"

// JSON bodies of the /react and /classify HTTP protocols. Parsers and
// validators throw ProtocolError with a description of the first violation.
namespace emoarc::wire {

inline constexpr std::string_view kReactPath = "/react";
inline constexpr std::string_view kClassifyPath = "/classify";
inline constexpr std::string_view kHealthPath = "/health";

struct ReactRequest {
  std::string sentence;
  Relation relation = Relation::xreact;
  int k = 1;
};

std::string encode_react_request(const ReactRequest& req);
ReactRequest decode_react_request(std::string_view body);

// Phrases must be non-empty and sorted by descending confidence.
std::string encode_react_response(const std::vector<Reaction>& phrases);
std::vector<Reaction> decode_react_response(std::string_view body);

std::string encode_classify_request(std::string_view text);
std::string decode_classify_request(std::string_view body);

// All five emotions present, non-negative, summing to 1 within 1e-6.
std::string encode_classify_response(const EmotionProbs& probs);
EmotionProbs decode_classify_response(std::string_view body);

std::string encode_error(std::string_view message);

inline constexpr double kProbSumTolerance = 1e-6;

}  // namespace emoarc::wire
