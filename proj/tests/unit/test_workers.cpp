#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <thread>

#include "sparkle/error.hpp"
#include "sparkle/hash.hpp"
#include "sparkle/workers/client.hpp"
#include "sparkle/workers/wire.hpp"

using namespace sparkle;
using namespace sparkle::workers;

namespace {

media::Frame gradient(int w, int h) {
  media::Frame f(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      f.at(x, y, 0) = static_cast<std::uint8_t>(x * 7);
      f.at(x, y, 1) = static_cast<std::uint8_t>(y * 11);
      f.at(x, y, 2) = static_cast<std::uint8_t>((x + y) * 3);
    }
  return f;
}

WorkerClient mock_client(Json fixture, std::shared_ptr<ScriptedTransport>* out = nullptr) {
  auto t = std::make_shared<ScriptedTransport>(std::move(fixture));
  if (out) *out = t;
  return WorkerClient(WorkerRoutes::all(t));
}

Json box(const std::string& label, int x0, int y0, int x1, int y1) {
  return {{"label", label}, {"x0", x0}, {"y0", y0}, {"x1", x1}, {"y1", y1}};
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

// cpp-httplib server on an ephemeral port, stopped on destruction.
class FakeServer {
 public:
  FakeServer() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Server& server() { return server_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST(Base64, RoundTripsAndRejectsGarbage) {
  for (std::size_t n = 0; n < 20; ++n) {
    std::vector<std::uint8_t> bytes(n);
    for (std::size_t i = 0; i < n; ++i) bytes[i] = static_cast<std::uint8_t>(i * 37 + 1);
    EXPECT_EQ(base64_decode(base64_encode(bytes)), bytes);
  }
  EXPECT_EQ(base64_encode(std::vector<std::uint8_t>{'M', 'a', 'n'}), "TWFu");
  EXPECT_THROW(base64_decode("@@@@"), WorkerError);
}

TEST(Wire, FrameAndMaskRoundTrip) {
  auto f = gradient(5, 3);
  EXPECT_EQ(decode_frame(encode_frame(f)), f);
  bait::BinaryMask m(5, 3);
  m.fill_rect(1, 1, 4, 3);
  EXPECT_EQ(decode_mask(encode_mask(m)), m);
}

TEST(Types, RolesAndRoutes) {
  EXPECT_EQ(route_for(Role::Grounder), "/ground");
  EXPECT_EQ(route_for(Role::Scorer), "/score");
  EXPECT_EQ(parse_role("tracker"), Role::Tracker);
  EXPECT_THROW(parse_role("painter"), ValidationError);
}

TEST(Ground, FixtureEcho) {
  auto client = mock_client({{"c:ground:f000000", {{"boxes", {box("bald man", 10, 5, 30, 60)}}}}});
  auto boxes = client.ground(media::Frame(64, 64), 0, {"bald man"}, "c");
  ASSERT_EQ(boxes.size(), 1u);
  EXPECT_EQ(boxes[0], (BoundingBox{"bald man", 10, 5, 30, 60, 0}));
}

TEST(Ground, LabelAbsentGivesEmptyList) {
  auto client = mock_client({{"c:ground:f000000", {{"boxes", {box("bald man", 10, 5, 30, 60)}}}}});
  EXPECT_TRUE(client.ground(media::Frame(64, 64), 0, {"dog"}, "c").empty());
}

TEST(Ground, InvalidBoxRejected) {
  auto client = mock_client({{"c:ground:f000003", {{"boxes", {box("bald man", 30, 5, 30, 60)}}}}});
  auto msg = error_of([&] { client.ground(media::Frame(64, 64), 3, {"bald man"}, "c"); });
  EXPECT_NE(msg.find("invalid box"), std::string::npos);
  EXPECT_THROW(client.ground(media::Frame(64, 64), 0, {}, "c"), ValidationError);
}

TEST(EditImage, FixtureFramePoliciesAndUnknownKey) {
  auto input = gradient(8, 6);
  auto edited = media::Frame(8, 6, 1, 2, 3);
  const std::string id = request_id::edit("c", "make it snow");
  EXPECT_EQ(id, "c:edit:" + hex64(fnv1a64("make it snow")));
  auto client = mock_client({{id, {{"frame", encode_frame(edited)}}},
                             {request_id::edit("c", "same"), {{"policy", "identity"}}},
                             {request_id::edit("c", "wrong size"), {{"frame", encode_frame(media::Frame(4, 4))}}}});
  EXPECT_EQ(client.edit_image(input, "make it snow", "c", 1), edited);
  EXPECT_EQ(client.edit_image(input, "same", "c", 1), input);
  EXPECT_NE(error_of([&] { client.edit_image(input, "other", "c", 1); }).find("no scripted response"),
            std::string::npos);
  EXPECT_THROW(client.edit_image(input, "wrong size", "c", 1), WorkerError);
  EXPECT_THROW(client.edit_image(input, "", "c", 1), ValidationError);
}

TEST(AnimateBackground, StaticAndDrift) {
  auto input = gradient(10, 4);
  auto client = mock_client({{request_id::animate("c", "still"), {{"policy", "static"}}},
                             {request_id::animate("c", "wind"), {{"policy", "drift"}, {"delta", 2}}}});
  auto still = client.animate_background(input, "still", 5, {8, 1}, "c", 0);
  ASSERT_EQ(still.size(), 5u);
  for (const auto& f : still.frames()) EXPECT_EQ(f, input);

  auto drift = client.animate_background(input, "wind", 4, {8, 1}, "c", 0);
  ASSERT_EQ(drift.size(), 4u);
  for (int k = 0; k < 4; ++k)
    for (int y = 0; y < 4; ++y)
      for (int x = 0; x < 10; ++x)
        EXPECT_EQ(drift.frame(k).at(x, y, 0), input.at(((x - 2 * k) % 10 + 10) % 10, y, 0));
  EXPECT_THROW(client.animate_background(input, "still", 0, {8, 1}, "c", 0), ValidationError);
}

TEST(AnimateBackground, WrongFrameCountFromServer) {
  auto input = gradient(4, 4);
  auto client = mock_client({{request_id::animate("c", "x"), {{"frames", {encode_frame(input)}}}}});
  EXPECT_THROW(client.animate_background(input, "x", 3, {8, 1}, "c", 0), WorkerError);
}

TEST(PropagateMask, BoxFollowWithOffsetsAndDropout) {
  std::vector<media::Frame> frames(6, media::Frame(16, 16));
  media::VideoClip clip(frames, {8, 1});
  BoundingBox anchor{"cat", 2, 2, 6, 6, 2};
  const Json offsets = {{0, 0}, {1, 0}, {2, 0}, {3, 1}, {4, 1}, {5, 2}};
  auto client = mock_client({{"c:track:*", {{"policy", "box-follow"}, {"offsets", offsets}, {"dropout", {4}}}}});

  auto fwd = client.propagate_mask(clip, anchor, TrackDirection::Forward, "c");
  auto bwd = client.propagate_mask(clip, anchor, TrackDirection::Backward, "c");
  ASSERT_EQ(fwd.size(), 6u);
  for (std::size_t t = 0; t < 6; ++t) {
    bait::BinaryMask expected(16, 16);
    if (t != 4) {
      const int dx = offsets[t][0].get<int>() - 2, dy = offsets[t][1].get<int>() - 0;
      expected.fill_rect(2 + dx, 2 + dy, 6 + dx, 6 + dy);
    }
    EXPECT_EQ(fwd[t], t >= 2 ? expected : bait::BinaryMask(16, 16)) << "forward t=" << t;
    EXPECT_EQ(bwd[t], t <= 2 ? expected : bait::BinaryMask(16, 16)) << "backward t=" << t;
  }
  anchor.frame_index = 6;
  EXPECT_THROW(client.propagate_mask(clip, anchor, TrackDirection::Forward, "c"), ValidationError);
}

TEST(PropagateMask, SoftMasksBinarizedAtHalf) {
  media::VideoClip clip(std::vector<media::Frame>(2, media::Frame(8, 8)), {8, 1});
  auto client = mock_client({{"c:track:*", {{"policy", "box-follow"}, {"soft", true}}}});
  auto m = client.propagate_mask(clip, {"x", 1, 1, 3, 3, 0}, TrackDirection::Forward, "c");
  bait::BinaryMask expected(8, 8);
  expected.fill_rect(1, 1, 3, 3);
  EXPECT_EQ(m[1], expected);
}

TEST(PropagateMask, DimensionMismatchFromServer) {
  media::VideoClip clip(std::vector<media::Frame>(2, media::Frame(8, 8)), {8, 1});
  bait::BinaryMask small(4, 4);
  auto client = mock_client({{"c:track:*", {{"masks", {encode_mask(small), encode_mask(small)}}}}});
  EXPECT_THROW(client.propagate_mask(clip, {"x", 1, 1, 3, 3, 0}, TrackDirection::Forward, "c"), WorkerError);
}

TEST(ScoreEdit, FixtureEchoAndRange) {
  auto f = gradient(4, 4);
  auto client = mock_client({{"c:score:final-4frame:f000020", {{"overall", 8.6}}},
                             {"c:score:final-4frame:f000040", {{"overall", 11.2}}}});
  EXPECT_DOUBLE_EQ(client.score_edit(f, f, "p", {"c", "final-4frame", 20}).overall, 8.6);
  EXPECT_NE(error_of([&] { client.score_edit(f, f, "p", {"c", "final-4frame", 40}); }).find("score out of range"),
            std::string::npos);
  EXPECT_THROW(client.score_edit(f, gradient(4, 5), "p", {"c", "x", 0}), ValidationError);
}

TEST(ScriptedTransport, LongestPrefixWinsAndErrorsPropagate) {
  std::shared_ptr<ScriptedTransport> t;
  auto client = mock_client({{"c:describe:*", {{"caption", "generic"}}},
                             {"c:describe:background*", {{"caption", "specific"}}},
                             {"d:describe:*", {{"error", "model overloaded"}}}},
                            &t);
  EXPECT_EQ(client.extract_background_caption("p", "c"), "specific");
  EXPECT_NE(error_of([&] { client.extract_background_caption("p", "d"); }).find("model overloaded"),
            std::string::npos);
  EXPECT_EQ(t->call_count(), 2);
  EXPECT_EQ(t->calls_by_route().at("/describe"), 2);
}

TEST(Http, RequestCarriesEnvelopeFrameAndInstruction) {
  FakeServer srv;
  Json seen;
  std::string auth;
  auto edited = media::Frame(4, 3, 9, 9, 9);
  srv.server().Post("/v1/edit", [&](const httplib::Request& req, httplib::Response& res) {
    seen = Json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(Json{{"id", seen["id"]}, {"result", {{"frame", encode_frame(edited)}}}}.dump(),
                    "application/json");
  });
  auto t = std::make_shared<HttpTransport>(HttpEndpointConfig{srv.url() + "/v1", 5.0, 0, 0.5, 2.0, 4, "tok"});
  WorkerClient client(WorkerRoutes::all(t));
  auto input = gradient(4, 3);
  EXPECT_EQ(client.edit_image(input, "add fog", "clip1", 7), edited);
  EXPECT_EQ(seen["id"], request_id::edit("clip1", "add fog"));
  EXPECT_EQ(seen["payload"]["instruction"], "add fog");
  EXPECT_EQ(decode_frame(seen["payload"]["frame"]), input);
  EXPECT_EQ(auth, "Bearer tok");
}

TEST(Http, TimeoutThenSuccessCountsOneRetry) {
  FakeServer srv;
  std::atomic<int> calls{0};
  srv.server().Post("/score", [&](const httplib::Request& req, httplib::Response& res) {
    if (calls++ == 0) std::this_thread::sleep_for(std::chrono::milliseconds(800));
    auto id = Json::parse(req.body)["id"];
    res.set_content(Json{{"id", id}, {"result", {{"overall", 9.1}}}}.dump(), "application/json");
  });
  auto t = std::make_shared<HttpTransport>(HttpEndpointConfig{srv.url(), 0.3, 2, 0.5, 2.0, 4, ""});
  std::vector<double> sleeps;
  t->set_sleep([&](double s) { sleeps.push_back(s); });
  WorkerClient client(WorkerRoutes::all(t));
  auto f = gradient(4, 4);
  EXPECT_DOUBLE_EQ(client.score_edit(f, f, "p", {"c", "first-frame", 0}).overall, 9.1);
  EXPECT_EQ(t->retry_count(), 1);
  EXPECT_EQ(sleeps, (std::vector<double>{0.5}));
}

TEST(Http, ServerErrorsRetriedWithBackoffThenFail) {
  FakeServer srv;
  std::atomic<int> calls{0};
  srv.server().Post("/score", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 503;
  });
  auto t = std::make_shared<HttpTransport>(HttpEndpointConfig{srv.url(), 2.0, 2, 0.5, 2.0, 4, ""});
  std::vector<double> sleeps;
  t->set_sleep([&](double s) { sleeps.push_back(s); });
  WorkerClient client(WorkerRoutes::all(t));
  auto f = gradient(4, 4);
  EXPECT_THROW(client.score_edit(f, f, "p", {"c", "x", 0}), WorkerError);
  EXPECT_EQ(calls.load(), 3);
  EXPECT_EQ(sleeps, (std::vector<double>{0.5, 1.0}));
}

TEST(Http, ClientErrorsNotRetried) {
  FakeServer srv;
  std::atomic<int> calls{0};
  srv.server().Post("/score", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
  });
  auto t = std::make_shared<HttpTransport>(HttpEndpointConfig{srv.url(), 2.0, 3, 0.5, 2.0, 4, ""});
  t->set_sleep([](double) {});
  WorkerClient client(WorkerRoutes::all(t));
  auto f = gradient(4, 4);
  EXPECT_THROW(client.score_edit(f, f, "p", {"c", "x", 0}), WorkerError);
  EXPECT_EQ(calls.load(), 1);
}

TEST(Http, UnreachableEndpointFailsAfterRetries) {
  int port = 0;
  {
    httplib::Server probe;
    port = probe.bind_to_any_port("127.0.0.1");
  }
  auto t = std::make_shared<HttpTransport>(
      HttpEndpointConfig{"http://127.0.0.1:" + std::to_string(port), 0.5, 1, 0.5, 2.0, 4, ""});
  t->set_sleep([](double) {});
  WorkerClient client(WorkerRoutes::all(t));
  auto msg = error_of([&] { client.extract_background_caption("p", "c"); });
  EXPECT_NE(msg.find("unreachable after 2 attempts"), std::string::npos) << msg;
  EXPECT_EQ(t->retry_count(), 1);
}

TEST(Http, InFlightRequestsBounded) {
  FakeServer srv;
  std::atomic<int> active{0}, peak{0};
  srv.server().new_task_queue = [] { return new httplib::ThreadPool(8); };
  srv.server().Post("/describe", [&](const httplib::Request& req, httplib::Response& res) {
    int now = ++active;
    int prev = peak.load();
    while (now > prev && !peak.compare_exchange_weak(prev, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    --active;
    auto id = Json::parse(req.body)["id"];
    res.set_content(Json{{"id", id}, {"result", {{"caption", "x"}}}}.dump(), "application/json");
  });
  auto t = std::make_shared<HttpTransport>(HttpEndpointConfig{srv.url(), 5.0, 0, 0.5, 2.0, 2, ""});
  WorkerClient client(WorkerRoutes::all(t));
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) threads.emplace_back([&, i] { client.extract_background_caption("p", "c" + std::to_string(i)); });
  for (auto& th : threads) th.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_GE(peak.load(), 1);
}

TEST(Http, ConfigValidation) {
  HttpEndpointConfig cfg;
  cfg.url = "http://x";
  cfg.timeout_s = 0.0;
  EXPECT_THROW(HttpTransport{cfg}, ValidationError);
  cfg.timeout_s = 1.0;
  cfg.max_retries = -1;
  EXPECT_THROW(HttpTransport{cfg}, ValidationError);
  cfg.max_retries = 1;
  cfg.url = "no-scheme";
  EXPECT_THROW(HttpTransport{cfg}, ValidationError);
}
