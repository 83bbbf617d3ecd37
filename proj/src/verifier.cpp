#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include "quakeloc/verifier.hpp"

#include <spdlog/spdlog.h>

namespace quakeloc {

OpenCageVerifier::OpenCageVerifier(std::string api_key, std::string base_url, int timeout_seconds)
    : api_key_(std::move(api_key)), base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

VerifyStatus OpenCageVerifier::confirm(std::string_view name) {
  try {
    httplib::Client client(base_url_);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    httplib::Params params{{"q", std::string(name)},
                           {"key", api_key_},
                           {"limit", "1"},
                           {"no_annotations", "1"}};
    auto res = client.Get("/geocode/v1/json", params, httplib::Headers{});
    if (!res) {
      spdlog::warn("geocoder unreachable for '{}': {}", name, httplib::to_string(res.error()));
      return VerifyStatus::kUnavailable;
    }
    if (res->status != 200) {
      spdlog::warn("geocoder returned HTTP {} for '{}'", res->status, name);
      return VerifyStatus::kUnavailable;
    }
    auto body = nlohmann::json::parse(res->body);
    auto total = body.value("total_results", 0);
    return total > 0 ? VerifyStatus::kConfirmed : VerifyStatus::kUnconfirmed;
  } catch (const std::exception& e) {
    spdlog::warn("geocoder failure for '{}': {}", name, e.what());
    return VerifyStatus::kUnavailable;
  }
}

}  // namespace quakeloc
