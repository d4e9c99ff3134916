#include <httplib.h>

#include <chrono>
#include <cmath>
#include <thread>

#include "sparkle/error.hpp"
#include "sparkle/workers/transport.hpp"

namespace sparkle::workers {

namespace {

struct SemaphoreGuard {
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  std::counting_semaphore<>& sem;
};

void set_timeout(httplib::Client& client, double seconds) {
  auto whole = static_cast<time_t>(std::floor(seconds));
  auto micros = static_cast<time_t>(std::lround((seconds - static_cast<double>(whole)) * 1e6));
  client.set_connection_timeout(whole, micros);
  client.set_read_timeout(whole, micros);
  client.set_write_timeout(whole, micros);
}

}  // namespace

HttpTransport::HttpTransport(HttpEndpointConfig config)
    : config_(std::move(config)),
      in_flight_(std::max(1, config_.max_in_flight)),
      sleep_([](double s) { std::this_thread::sleep_for(std::chrono::duration<double>(s)); }) {
  if (!(config_.timeout_s > 0.0)) throw ValidationError("worker timeout must be > 0");
  if (config_.max_retries < 0) throw ValidationError("worker max_retries must be >= 0");
  auto scheme = config_.url.find("://");
  if (scheme == std::string::npos) throw ValidationError("worker url needs a scheme: " + config_.url);
  auto path = config_.url.find('/', scheme + 3);
  scheme_host_port_ = config_.url.substr(0, path);
  path_prefix_ = path == std::string::npos ? "" : config_.url.substr(path);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
}

Json HttpTransport::post(const std::string& route, const Json& envelope) {
  const std::string body = envelope.dump();
  const std::string path = path_prefix_ + route;
  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      sleep_(config_.backoff_base_s * std::pow(config_.backoff_factor, attempt - 1));
    }
    httplib::Result result{nullptr, httplib::Error::Unknown};
    {
      SemaphoreGuard guard(in_flight_);
      httplib::Client client(scheme_host_port_);
      set_timeout(client, config_.timeout_s);
      httplib::Headers headers;
      if (!config_.bearer_token.empty()) headers.emplace("Authorization", "Bearer " + config_.bearer_token);
      result = client.Post(path, headers, body, "application/json");
    }
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status >= 400) {
      throw WorkerError("worker " + path + " rejected request: HTTP " + std::to_string(result->status));
    }
    try {
      return Json::parse(result->body);
    } catch (const Json::parse_error&) {
      throw WorkerError("worker " + path + " returned invalid JSON");
    }
  }
  throw WorkerError("worker " + scheme_host_port_ + path + " unreachable after " +
                    std::to_string(config_.max_retries + 1) + " attempts: " + last_error);
}

}  // namespace sparkle::workers
