#include <doctest.h>

#include "httplib.h"

#include <thread>

#include "quakeloc/gazetteer.hpp"
#include "quakeloc/verifier.hpp"

using namespace quakeloc;

namespace {

// Minimal stand-in for the geocoding endpoint on a loopback port.
class FakeGeocoder {
 public:
  FakeGeocoder() {
    server_.Get("/geocode/v1/json", [this](const httplib::Request& req, httplib::Response& res) {
      last_key_ = req.get_param_value("key");
      auto q = req.get_param_value("q");
      if (q == "boom") {
        res.status = 500;
        res.set_content("oops", "text/plain");
        return;
      }
      if (q == "garbled") {
        res.set_content("{not json", "application/json");
        return;
      }
      int total = q == "Wajima" ? 3 : 0;
      res.set_content("{\"total_results\": " + std::to_string(total) + ", \"results\": []}",
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeGeocoder() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  const std::string& last_key() const { return last_key_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::string last_key_;
};

}  // namespace

TEST_CASE("result count decides confirmation") {
  FakeGeocoder fake;
  OpenCageVerifier v("secret", fake.url(), 2);
  CHECK(v.confirm("Wajima") == VerifyStatus::kConfirmed);
  CHECK(fake.last_key() == "secret");
  CHECK(v.confirm("help") == VerifyStatus::kUnconfirmed);
}

TEST_CASE("server errors and bad bodies are reported as unavailable") {
  FakeGeocoder fake;
  OpenCageVerifier v("secret", fake.url(), 2);
  CHECK(v.confirm("boom") == VerifyStatus::kUnavailable);
  CHECK(v.confirm("garbled") == VerifyStatus::kUnavailable);
}

TEST_CASE("unreachable endpoint is unavailable and falls back to the gazetteer") {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  OpenCageVerifier v("secret", "http://127.0.0.1:" + std::to_string(port), 1);
  CHECK(v.confirm("Wajima") == VerifyStatus::kUnavailable);

  LocationRecord r;
  r.geoname_id = 1;
  r.name = "Wajima";
  Gazetteer g({r});
  CHECK(validate_location(g, "Wajima", &v));
}
