// Writes the four-clip mock scenario plus a judge-response file into a fresh
// directory, for the CLI smoke tests.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "fixtures.hpp"
#include "sparkle/bench/protocol.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_scenario <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  sparkle::testing::write_pipeline_scenario(dir);

  std::vector<std::string> names;
  for (const auto& d : sparkle::bench::sparkle6().dimensions) names.push_back(d.name);
  auto rows = sparkle::testing::score_rows_with_means({4.10, 3.40, 3.77, 4.05, 3.54, 3.99}, 100);
  std::ofstream out(dir / "judged.jsonl");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::json j = {{"video_id", "bench-" + std::to_string(i)},
                        {"theme", "Location"},
                        {"subtheme", "urban"},
                        {"scene", "downtown"},
                        {"model", "Kiwi-Sparkle"},
                        {"judge_response_text", sparkle::testing::judge_reply(names, rows[i])}};
    out << j.dump() << "\n";
  }
  return 0;
}
