#include "sparkle/pipeline/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include "sparkle/error.hpp"

namespace sparkle::pipeline {

namespace fs = std::filesystem;

std::pair<int, int> parse_stage_range(const std::string& text) {
  auto parse = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v < 1 || v > kStageCount) throw ValidationError("bad stage range '" + text + "'");
    return v;
  };
  const auto dash = text.find('-');
  const int a = parse(text.substr(0, dash));
  const int b = dash == std::string::npos ? a : parse(text.substr(dash + 1));
  if (a > b) throw ValidationError("bad stage range '" + text + "'");
  return {a, b};
}

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

RunReport run_pipeline(const fs::path& manifest, const PipelineConfig& config, StageRoles roles,
                       const RunOptions& options) {
  config.validate();
  if (options.first_stage < 1 || options.last_stage > kStageCount || options.first_stage > options.last_stage) {
    throw ValidationError("bad stage window");
  }
  std::vector<ManifestRecord> records = read_manifest(manifest);
  const StageContext ctx{config, roles, manifest.parent_path()};

  std::mutex writer;
  std::ofstream log;
  if (options.write_log) {
    fs::path log_path = manifest;
    log_path += ".log";
    log.open(log_path, std::ios::app);
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> touched{0}, stages_run{0};
  std::exception_ptr error;

  auto commit = [&](std::size_t i, ManifestRecord updated, int stage) {
    std::lock_guard lock(writer);
    updated.check_invariants();
    records[i] = std::move(updated);
    write_manifest_atomic(manifest, records);
    if (log) {
      log << timestamp() << ' ' << records[i].clip_id << " stage " << stage << ' '
          << to_string(records[i].status(stage)) << '\n';
      log.flush();
    }
  };

  auto work = [&] {
    for (std::size_t i = next++; i < records.size() && !stop; i = next++) {
      try {
        ManifestRecord r = records[i];
        if (r.terminal()) continue;
        bool did_work = false;
        for (int k = options.first_stage; k <= options.last_stage && !stop; ++k) {
          if (r.status(k) == StageStatus::Done) continue;
          if (k > 1 && r.status(k - 1) != StageStatus::Done) break;
          r = run_stage(r, k, ctx);
          did_work = true;
          ++stages_run;
          commit(i, r, k);
          if (options.after_stage) options.after_stage(r, k);
          if (r.status(k) != StageStatus::Done) break;
        }
        if (did_work) ++touched;
      } catch (...) {
        std::lock_guard lock(writer);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(config.concurrency), std::max<std::size_t>(records.size(), 1));
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
  return {touched.load(), stages_run.load(), compute_stats(records)};
}

RunReport run_pipeline(const fs::path& manifest, const PipelineConfig& config, const RunOptions& options) {
  auto set = make_workers(config.workers);
  return run_pipeline(manifest, config, StageRoles::from(*set.client), options);
}

}  // namespace sparkle::pipeline
