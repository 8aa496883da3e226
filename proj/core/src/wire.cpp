#include "emoarc/wire.hpp"

#include <cmath>

#include <json.hpp>

#include "emoarc/errors.hpp"

namespace emoarc::wire {
namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;  // encoders keep the documented field order

json parse_object(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("body is not a JSON object");
  return j;
}

void require_finite_nonneg(const json& v, const std::string& what) {
  if (!v.is_number()) throw ProtocolError(what + " is not a number");
  const double d = v.get<double>();
  if (!std::isfinite(d) || d < 0.0) throw ProtocolError(what + " must be finite and non-negative");
}

}  // namespace

std::string encode_react_request(const ReactRequest& req) {
  ojson j{{"sentence", req.sentence}, {"relation", to_string(req.relation)}, {"k", req.k}};
  return j.dump();
}

ReactRequest decode_react_request(std::string_view body) {
  auto j = parse_object(body);
  if (!j.contains("sentence") || !j["sentence"].is_string()) throw ProtocolError("'sentence' must be a string");
  if (!j.contains("relation") || !j["relation"].is_string()) throw ProtocolError("'relation' must be a string");
  ReactRequest req;
  req.sentence = j["sentence"].get<std::string>();
  auto rel = parse_relation(j["relation"].get<std::string>());
  if (!rel) throw ProtocolError("'relation' must be xReact or oReact");
  req.relation = *rel;
  if (j.contains("k")) {
    if (!j["k"].is_number_integer() || j["k"].get<int>() < 1) throw ProtocolError("'k' must be a positive integer");
    req.k = j["k"].get<int>();
  }
  return req;
}

std::string encode_react_response(const std::vector<Reaction>& phrases) {
  ojson arr = ojson::array();
  for (const auto& r : phrases) arr.push_back(ojson{{"text", r.phrase}, {"confidence", r.confidence}});
  return ojson{{"phrases", std::move(arr)}}.dump();
}

std::vector<Reaction> decode_react_response(std::string_view body) {
  auto j = parse_object(body);
  if (!j.contains("phrases") || !j["phrases"].is_array()) throw ProtocolError("'phrases' must be an array");
  const auto& arr = j["phrases"];
  if (arr.empty()) throw ProtocolError("'phrases' is empty");
  std::vector<Reaction> out;
  for (const auto& item : arr) {
    if (!item.is_object() || !item.contains("text") || !item["text"].is_string()) {
      throw ProtocolError("phrase entries need a string 'text'");
    }
    if (!item.contains("confidence")) throw ProtocolError("phrase entry without 'confidence'");
    require_finite_nonneg(item["confidence"], "'confidence'");
    Reaction r{item["text"].get<std::string>(), item["confidence"].get<double>()};
    if (!out.empty() && r.confidence > out.back().confidence) {
      throw ProtocolError("'phrases' not sorted by descending confidence");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string encode_classify_request(std::string_view text) { return json{{"text", std::string(text)}}.dump(); }

std::string decode_classify_request(std::string_view body) {
  auto j = parse_object(body);
  if (!j.contains("text") || !j["text"].is_string()) throw ProtocolError("'text' must be a string");
  return j["text"].get<std::string>();
}

std::string encode_classify_response(const EmotionProbs& probs) {
  ojson p = ojson::object();
  for (auto e : kAllEmotions) p[std::string(to_string(e))] = probs[e];
  return ojson{{"probs", std::move(p)}}.dump();
}

EmotionProbs decode_classify_response(std::string_view body) {
  auto j = parse_object(body);
  if (!j.contains("probs") || !j["probs"].is_object()) throw ProtocolError("'probs' must be an object");
  const auto& p = j["probs"];
  EmotionProbs out;
  double sum = 0.0;
  for (auto e : kAllEmotions) {
    const std::string key(to_string(e));
    if (!p.contains(key)) throw ProtocolError("'probs' lacks '" + key + "'");
    require_finite_nonneg(p[key], "probability of " + key);
    out[e] = p[key].get<double>();
    sum += out[e];
  }
  if (p.size() != kNumEmotions) throw ProtocolError("'probs' has keys beyond the five basic emotions");
  if (std::abs(sum - 1.0) > kProbSumTolerance) throw ProtocolError("probabilities do not sum to 1");
  return out;
}

std::string encode_error(std::string_view message) { return json{{"error", std::string(message)}}.dump(); }

}  // namespace emoarc::wire
