#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <semaphore>
#include <string>

namespace sparkle::workers {

using Json = nlohmann::json;

/// Sends one request envelope {"id", "payload"} to a route and returns the
/// response envelope {"id", "result"} or {"id", "error"}.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Json post(const std::string& route, const Json& envelope) = 0;
};

Json make_envelope(const std::string& id, Json payload);

/// Unwraps a response envelope; throws WorkerError on {"error"} or a missing result.
Json unwrap_result(const Json& response, const std::string& expected_id);

struct HttpEndpointConfig {
  std::string url;  // e.g. http://127.0.0.1:8080 or http://host/prefix
  double timeout_s = 60.0;
  int max_retries = 2;
  double backoff_base_s = 0.5;
  double backoff_factor = 2.0;
  int max_in_flight = 4;
  std::string bearer_token;
};

/// JSON over HTTP POST with bounded in-flight requests and exponential
/// backoff. Connection failures, timeouts, and 5xx responses are retried.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(HttpEndpointConfig config);

  Json post(const std::string& route, const Json& envelope) override;

  /// Total retries performed (attempts beyond the first) across all calls.
  int retry_count() const { return retries_.load(); }
  /// Replaces the sleep used between attempts (tests).
  void set_sleep(std::function<void(double)> sleep) { sleep_ = std::move(sleep); }

 private:
  HttpEndpointConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::counting_semaphore<> in_flight_;
  std::atomic<int> retries_{0};
  std::function<void(double)> sleep_;
};

/// Offline mock. The fixture maps request ids to canned results; keys ending in
/// '*' match by prefix (longest prefix wins). A result may be literal
/// role output or a policy the mock expands against the request payload:
///   edit:     {"policy": "identity"} | {"policy": "tint", "rgb": [r, g, b]} | {"frame": <b64 png>}
///   animate:  {"policy": "static"} | {"policy": "drift", "delta": d}
///   track:    {"policy": "box-follow", "offsets": [[dx, dy], ...], "dropout": [t, ...],
///              "blobs": [{"frame": t, "box": [x0, y0, x1, y1]}], "soft": bool}
///   any:      {"error": "message"}
class ScriptedTransport : public Transport {
 public:
  explicit ScriptedTransport(Json fixture);
  static ScriptedTransport from_file(const std::filesystem::path& path);

  Json post(const std::string& route, const Json& envelope) override;

  int call_count() const;
  std::map<std::string, int> calls_by_route() const;
  void reset_counters();

 private:
  const Json* lookup(const std::string& id) const;

  Json fixture_;
  mutable std::mutex mutex_;
  std::map<std::string, int> calls_;
};

}  // namespace sparkle::workers
