#include "sparkle/pipeline/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <fstream>
#include <set>

#include "sparkle/error.hpp"

namespace sparkle::pipeline {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

void PipelineConfig::validate() const {
  if (concurrency < 1) throw ValidationError("pipeline.concurrency must be >= 1");
  for (auto [name, v] : {std::pair{"gates.source", thresholds.source},
                         std::pair{"gates.first_frame", thresholds.first_frame},
                         std::pair{"gates.removal", thresholds.removal},
                         std::pair{"gates.final", thresholds.final_video}}) {
    if (!(v >= 0.0 && v <= 10.0)) throw ValidationError(std::string(name) + " must lie in [0, 10]");
  }
  if (workers.mode != "mock" && workers.mode != "http") throw ValidationError("workers.mode must be mock or http");
  if (workers.mode == "http" && workers.url.empty() && workers.role_urls.size() < 7) {
    throw ValidationError("workers.url required in http mode");
  }
  if (!(workers.timeout_s > 0.0)) throw ValidationError("workers.timeout_s must be > 0");
  if (workers.max_retries < 0) throw ValidationError("workers.max_retries must be >= 0");
  if (workers.max_in_flight < 1) throw ValidationError("workers.max_in_flight must be >= 1");
  if (!(motion.r_min >= 0.0 && motion.r_min <= 1.0)) throw ValidationError("motion.r_min must lie in [0, 1]");
  if (!(motion.m_min >= 0.0)) throw ValidationError("motion.m_min must be >= 0");
  if (motion.ransac.iterations < 1 || !(motion.ransac.threshold_px > 0.0) || motion.ransac.grid_stride < 1) {
    throw ValidationError("motion RANSAC parameters must be positive");
  }
  if (motion.flow.levels < 1 || motion.flow.block_size < 1 || motion.flow.search_radius < 0) {
    throw ValidationError("motion flow parameters out of range");
  }
  if (!(canny.low > 0.0 && canny.low < canny.high && canny.high <= 1.0)) {
    throw ValidationError("guidance canny thresholds need 0 < low < high <= 1");
  }
  if (mask_dilation < 0) throw ValidationError("guidance.dilation must be >= 0");
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"pipeline", {"concurrency", "master_seed", "artifact_dir", "vlm_motion_check", "source_gate"}},
      {"workers",
       {"mode", "fixture", "url", "timeout_s", "max_retries", "backoff_base_s", "backoff_factor", "max_in_flight",
        "grounder_url", "editor_url", "animator_url", "tracker_url", "scorer_url", "vlm_url", "judge_url"}},
      {"gates", {"source", "first_frame", "removal", "final"}},
      {"motion",
       {"r_min", "m_min", "sample_fps", "ransac_iterations", "ransac_threshold_px", "ransac_grid_stride",
        "flow_levels", "flow_block_size", "flow_search_radius", "flow_texture_threshold"}},
      {"guidance", {"canny_low", "canny_high", "dilation"}},
  };
  return keys;
}

template <typename T>
void read(const pt::ptree& tree, const std::string& key, T& out) {
  if (auto v = tree.get_optional<std::string>(key)) {
    try {
      out = tree.get<T>(key);
    } catch (const pt::ptree_error&) {
      throw ValidationError("bad value for " + key + ": '" + *v + "'");
    }
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) { return p.empty() || p.is_absolute() ? p : base / p; }

}  // namespace

PipelineConfig load_config(const fs::path& path) {
  pt::ptree tree;
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(std::string("cannot parse config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ValidationError("unknown config section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ValidationError("unknown config key " + section + "." + key);
    }
  }

  PipelineConfig c;
  const fs::path base = path.parent_path();
  std::string artifact_dir = c.artifact_dir.string();
  std::string fixture;
  read(tree, "pipeline.concurrency", c.concurrency);
  read(tree, "pipeline.master_seed", c.master_seed);
  read(tree, "pipeline.artifact_dir", artifact_dir);
  read(tree, "pipeline.vlm_motion_check", c.vlm_motion_check);
  read(tree, "pipeline.source_gate", c.source_gate);
  c.artifact_dir = resolve(base, artifact_dir);

  read(tree, "workers.mode", c.workers.mode);
  read(tree, "workers.fixture", fixture);
  c.workers.fixture = resolve(base, fixture);
  read(tree, "workers.url", c.workers.url);
  read(tree, "workers.timeout_s", c.workers.timeout_s);
  read(tree, "workers.max_retries", c.workers.max_retries);
  read(tree, "workers.backoff_base_s", c.workers.backoff_base_s);
  read(tree, "workers.backoff_factor", c.workers.backoff_factor);
  read(tree, "workers.max_in_flight", c.workers.max_in_flight);
  for (const char* role : {"grounder", "editor", "animator", "tracker", "scorer", "vlm", "judge"}) {
    std::string url;
    read(tree, std::string("workers.") + role + "_url", url);
    if (!url.empty()) c.workers.role_urls[role] = url;
  }

  read(tree, "gates.source", c.thresholds.source);
  read(tree, "gates.first_frame", c.thresholds.first_frame);
  read(tree, "gates.removal", c.thresholds.removal);
  read(tree, "gates.final", c.thresholds.final_video);

  std::string sample_fps;
  read(tree, "motion.r_min", c.motion.r_min);
  read(tree, "motion.m_min", c.motion.m_min);
  read(tree, "motion.sample_fps", sample_fps);
  if (!sample_fps.empty()) c.motion.sample_fps = media::Rational::parse(sample_fps);
  read(tree, "motion.ransac_iterations", c.motion.ransac.iterations);
  read(tree, "motion.ransac_threshold_px", c.motion.ransac.threshold_px);
  read(tree, "motion.ransac_grid_stride", c.motion.ransac.grid_stride);
  read(tree, "motion.flow_levels", c.motion.flow.levels);
  read(tree, "motion.flow_block_size", c.motion.flow.block_size);
  read(tree, "motion.flow_search_radius", c.motion.flow.search_radius);
  read(tree, "motion.flow_texture_threshold", c.motion.flow.texture_threshold);

  read(tree, "guidance.canny_low", c.canny.low);
  read(tree, "guidance.canny_high", c.canny.high);
  read(tree, "guidance.dilation", c.mask_dilation);

  c.validate();
  return c;
}

WorkerSet make_workers(const WorkerConfig& config) {
  WorkerSet set;
  if (config.mode == "mock") {
    if (config.fixture.empty()) throw ValidationError("workers.fixture required in mock mode");
    std::ifstream in(config.fixture);
    if (!in) throw IoError("cannot open mock fixture " + config.fixture.string());
    workers::Json fixture;
    try {
      fixture = workers::Json::parse(in);
    } catch (const workers::Json::parse_error& e) {
      throw ValidationError("malformed mock fixture " + config.fixture.string() + ": " + e.what());
    }
    set.mock = std::make_shared<workers::ScriptedTransport>(std::move(fixture));
    set.client = std::make_shared<workers::WorkerClient>(workers::WorkerRoutes::all(set.mock));
    return set;
  }
  if (config.mode != "http") throw ValidationError("workers.mode must be mock or http");

  std::string token;
  if (const char* env = std::getenv("SPARKLE_WORKER_TOKEN")) token = env;
  std::map<std::string, std::shared_ptr<workers::Transport>> by_url;
  auto transport_for = [&](const std::string& role) -> std::shared_ptr<workers::Transport> {
    auto it = config.role_urls.find(role);
    const std::string url = it != config.role_urls.end() ? it->second : config.url;
    if (url.empty()) throw ValidationError("no worker url for role " + role);
    auto& t = by_url[url];
    if (!t) {
      workers::HttpEndpointConfig ep{url,          config.timeout_s,     config.max_retries, config.backoff_base_s,
                                     config.backoff_factor, config.max_in_flight, token};
      t = std::make_shared<workers::HttpTransport>(ep);
    }
    return t;
  };
  workers::WorkerRoutes routes{transport_for("grounder"), transport_for("editor"), transport_for("animator"),
                               transport_for("tracker"),  transport_for("scorer"), transport_for("vlm"),
                               transport_for("judge")};
  set.client = std::make_shared<workers::WorkerClient>(std::move(routes));
  return set;
}

}  // namespace sparkle::pipeline
