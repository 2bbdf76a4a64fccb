// Eigen comes first: the resolver headers pulled in by httplib define `_res`.
#include "invtest/cli.hpp"
#include "invtest/types.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace invtest {

std::string http_get(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw DataError("malformed URL '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string host = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);
  httplib::Client client(host);
  client.set_follow_location(true);
  client.set_connection_timeout(20);
  client.set_read_timeout(60);
  auto res = client.Get(path);
  if (!res) throw DataError("download of '" + url + "' failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw DataError("download of '" + url + "' returned HTTP " + std::to_string(res->status));
  return res->body;
}

}  // namespace invtest
