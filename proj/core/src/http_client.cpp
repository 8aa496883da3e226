#include "http_client.hpp"

#include <httplib.h>

#include "emoarc/errors.hpp"

namespace emoarc::detail {
namespace {

struct SplitUrl {
  std::string base;    // scheme://host[:port]
  std::string prefix;  // path prefix without trailing slash
};

SplitUrl split_url(const std::string& endpoint) {
  auto scheme = endpoint.find("://");
  const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
  auto slash = endpoint.find('/', host_start);
  SplitUrl out;
  if (slash == std::string::npos) {
    out.base = endpoint;
  } else {
    out.base = endpoint.substr(0, slash);
    out.prefix = endpoint.substr(slash);
    while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  }
  if (scheme == std::string::npos) out.base = "http://" + out.base;
  return out;
}

}  // namespace

std::string post_json(const std::string& endpoint, const std::string& path, const std::string& body,
                      std::chrono::milliseconds timeout) {
  const auto url = split_url(endpoint);
  httplib::Client cli(url.base);
  if (!cli.is_valid()) throw Unavailable("invalid endpoint '" + endpoint + "'");
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  cli.set_write_timeout(secs.count(), usecs.count());

  auto res = cli.Post(url.prefix + path, body, "application/json");
  if (!res) {
    const auto err = res.error();
    const auto what = endpoint + path + ": " + httplib::to_string(err);
    switch (err) {
      case httplib::Error::Read:
      case httplib::Error::Write:
      case httplib::Error::ConnectionTimeout: throw OracleTimeout(what);
      default: throw Unavailable(what);
    }
  }
  if (res->status == 503) throw Unavailable(endpoint + path + " returned 503: " + res->body);
  if (res->status != 200) {
    throw ProtocolError(endpoint + path + " returned HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  return res->body;
}

}  // namespace emoarc::detail
