#pragma once

#include <chrono>
#include <string>

namespace emoarc::detail {

// POST a JSON body to endpoint + path and return the 200 response body.
// Connection failures and 503 raise Unavailable, timeouts OracleTimeout,
// any other non-200 status ProtocolError.
std::string post_json(const std::string& endpoint, const std::string& path, const std::string& body,
                      std::chrono::milliseconds timeout);

}  // namespace emoarc::detail
