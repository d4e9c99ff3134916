#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparkle/bench/judge.hpp"
#include "sparkle/bench/protocol.hpp"
#include "sparkle/workers/roles.hpp"

namespace sparkle::bench {

struct EvalRecord {
  std::string video_id;
  std::string theme;
  std::string subtheme;
  std::string scene;
  std::string model;
  std::string protocol;  // protocol name
  DimScores scores;

  /// Unweighted mean of the dimension scores, full precision.
  double overall() const;
};

/// Half-up to 2 decimals, for presentation only.
double round_half_up_2(double value);

enum class GroupBy { Model, ModelTheme, ModelSubtheme };
GroupBy parse_group_by(const std::string& name);  // "model", "model-theme", "model-subtheme"

struct TableRow {
  std::string model;
  std::string theme;     // empty unless grouped by theme/subtheme
  std::string subtheme;  // empty unless grouped by subtheme
  std::string protocol;
  std::size_t n_records = 0;
  std::vector<double> dimension_means;
  double overall = 0.0;  // mean of dimension_means, unrounded
};

/// Per-group dimension means and Overall. Rows sort by theme, subtheme, then
/// ascending Overall. Throws ValidationError on an empty input or mixed
/// protocols.
std::vector<TableRow> aggregate(const std::vector<EvalRecord>& records, GroupBy group_by);

enum class TableFormat { Markdown, Csv };
TableFormat parse_table_format(const std::string& name);

/// Columns: grouping keys, Overall, then protocol dimensions in order.
std::string render_table(const std::vector<TableRow>& rows, TableFormat format);

/// JSONL lines {video_id, theme, subtheme, scene, model, judge_response_text};
/// each response is parsed and capped under `protocol`.
std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path, const Protocol& protocol);
EvalRecord record_from_response(const std::string& video_id, const std::string& theme, const std::string& subtheme,
                                const std::string& scene, const std::string& model, const std::string& response,
                                const Protocol& protocol);

struct JudgeItem {
  std::string video_id;
  std::string theme;
  std::string subtheme;
  std::string scene;
  std::string model;
  std::string instruction;
  std::string source_path;
  std::string edited_path;
};

/// Prompts the judge for every item with at most `concurrency` calls in
/// flight; results keep input order.
std::vector<EvalRecord> judge_all(const std::vector<JudgeItem>& items, const Protocol& protocol,
                                  workers::Judge& judge, int concurrency = 4);

}  // namespace sparkle::bench
