#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace quakeloc {

enum class VerifyStatus { kConfirmed, kUnconfirmed, kUnavailable };

// External geocoder used as a second opinion on gazetteer hits.
// Implementations must not throw for transport problems; they report
// kUnavailable instead.
class GeocodeVerifier {
 public:
  virtual ~GeocodeVerifier() = default;
  virtual VerifyStatus confirm(std::string_view name) = 0;
};

// OpenCage forward-geocoding binding. A name is confirmed when the API
// reports at least one result. base_url may point at a plain-http endpoint
// (used by tests); the default is the public HTTPS service.
class OpenCageVerifier : public GeocodeVerifier {
 public:
  explicit OpenCageVerifier(std::string api_key,
                            std::string base_url = "https://api.opencagedata.com",
                            int timeout_seconds = 10);
  VerifyStatus confirm(std::string_view name) override;

 private:
  std::string api_key_;
  std::string base_url_;
  int timeout_seconds_;
};

// Environment variable holding the OpenCage credential.
inline constexpr const char* kOpenCageKeyEnv = "OPENCAGE_API_KEY";

}  // namespace quakeloc
