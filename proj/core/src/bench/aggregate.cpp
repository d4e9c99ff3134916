#include "sparkle/bench/aggregate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>
#include <tuple>

#include "sparkle/error.hpp"

namespace sparkle::bench {

double EvalRecord::overall() const {
  if (scores.values.empty()) return 0.0;
  double sum = 0.0;
  for (int v : scores.values) sum += v;
  return sum / static_cast<double>(scores.values.size());
}

double round_half_up_2(double value) {
  // The epsilon absorbs representation error so 3.805 rounds up.
  return std::floor(value * 100.0 + 0.5 + 1e-9) / 100.0;
}

GroupBy parse_group_by(const std::string& name) {
  if (name == "model") return GroupBy::Model;
  if (name == "model-theme") return GroupBy::ModelTheme;
  if (name == "model-subtheme") return GroupBy::ModelSubtheme;
  throw ValidationError("unknown grouping '" + name + "' (expected model, model-theme or model-subtheme)");
}

TableFormat parse_table_format(const std::string& name) {
  if (name == "markdown" || name == "md") return TableFormat::Markdown;
  if (name == "csv") return TableFormat::Csv;
  throw ValidationError("unknown table format '" + name + "'");
}

std::vector<TableRow> aggregate(const std::vector<EvalRecord>& records, GroupBy group_by) {
  if (records.empty()) throw ValidationError("no records to aggregate");
  const Protocol& protocol = protocol_by_name(records.front().protocol);
  using Key = std::tuple<std::string, std::string, std::string>;  // theme, subtheme, model
  std::map<Key, std::vector<const EvalRecord*>> groups;
  for (const auto& r : records) {
    if (r.protocol != protocol.name) throw ValidationError("mixed protocols in one table");
    if (r.scores.values.size() != protocol.size()) throw ValidationError("record " + r.video_id + " has wrong arity");
    Key key{group_by == GroupBy::Model ? "" : r.theme, group_by == GroupBy::ModelSubtheme ? r.subtheme : "", r.model};
    groups[key].push_back(&r);
  }

  std::vector<TableRow> rows;
  for (const auto& [key, members] : groups) {
    TableRow row{std::get<2>(key), std::get<0>(key), std::get<1>(key), protocol.name, members.size(), {}, 0.0};
    row.dimension_means.assign(protocol.size(), 0.0);
    for (const auto* r : members) {
      for (std::size_t d = 0; d < protocol.size(); ++d) row.dimension_means[d] += r->scores.values[d];
    }
    double sum = 0.0;
    for (double& m : row.dimension_means) {
      m /= static_cast<double>(members.size());
      sum += m;
    }
    row.overall = sum / static_cast<double>(protocol.size());
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
    return std::tie(a.theme, a.subtheme, a.overall, a.model) < std::tie(b.theme, b.subtheme, b.overall, b.model);
  });
  return rows;
}

std::string render_table(const std::vector<TableRow>& rows, TableFormat format) {
  if (rows.empty()) throw ValidationError("no rows to render");
  const Protocol& protocol = protocol_by_name(rows.front().protocol);
  bool with_theme = false, with_subtheme = false;
  for (const auto& r : rows) {
    if (r.protocol != protocol.name) throw ValidationError("mixed protocols in one table");
    with_theme |= !r.theme.empty();
    with_subtheme |= !r.subtheme.empty();
  }

  std::vector<std::string> header{"model"};
  if (with_theme) header.push_back("theme");
  if (with_subtheme) header.push_back("subtheme");
  header.push_back("overall");
  for (const auto& d : protocol.dimensions) header.push_back(d.abbrev);

  auto fmt = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << round_half_up_2(v);
    return s.str();
  };
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) {
    std::vector<std::string> cells{r.model};
    if (with_theme) cells.push_back(r.theme);
    if (with_subtheme) cells.push_back(r.subtheme);
    cells.push_back(fmt(r.overall));
    for (double m : r.dimension_means) cells.push_back(fmt(m));
    body.push_back(std::move(cells));
  }

  std::ostringstream out;
  if (format == TableFormat::Csv) {
    auto csv_cell = [](const std::string& s) {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      return q + "\"";
    };
    for (std::size_t i = 0; i < header.size(); ++i) {
      std::string h = header[i];
      std::transform(h.begin(), h.end(), h.begin(), [](unsigned char c) { return std::tolower(c); });
      out << (i ? "," : "") << h;
    }
    out << "\n";
    for (const auto& cells : body) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_cell(cells[i]);
      out << "\n";
    }
    return out.str();
  }

  out << "|";
  for (auto h : header) {
    h[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(h[0])));
    out << " " << h << " |";
  }
  out << "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out << (i < header.size() - protocol.size() - 1 ? "---|" : "---:|");
  out << "\n";
  for (const auto& cells : body) {
    out << "|";
    for (const auto& c : cells) out << " " << c << " |";
    out << "\n";
  }
  return out.str();
}

EvalRecord record_from_response(const std::string& video_id, const std::string& theme, const std::string& subtheme,
                                const std::string& scene, const std::string& model, const std::string& response,
                                const Protocol& protocol) {
  EvalRecord r{video_id, theme, subtheme, scene, model, protocol.name, {}};
  try {
    r.scores = enforce_caps(parse_judge_response(response, protocol), protocol);
  } catch (const ValidationError& e) {
    throw ValidationError("video " + video_id + ": " + e.what());
  }
  return r;
}

std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path, const Protocol& protocol) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<EvalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      records.push_back(record_from_response(j.at("video_id"), j.value("theme", ""), j.value("subtheme", ""),
                                             j.value("scene", ""), j.at("model"), j.at("judge_response_text"),
                                             protocol));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<EvalRecord> judge_all(const std::vector<JudgeItem>& items, const Protocol& protocol,
                                  workers::Judge& judge, int concurrency) {
  std::vector<std::optional<EvalRecord>> results(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      const auto& it = items[i];
      try {
        auto text = judge.judge(build_judge_prompt(protocol, it.instruction), it.video_id, it.source_path,
                                it.edited_path);
        results[i] = record_from_response(it.video_id, it.theme, it.subtheme, it.scene, it.model, text, protocol);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::jthread> pool;
  const int n = std::max(1, std::min<int>(concurrency, static_cast<int>(items.size())));
  for (int t = 0; t < n; ++t) pool.emplace_back(work);
  pool.clear();
  std::vector<EvalRecord> out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*results[i]));
  }
  return out;
}

}  // namespace sparkle::bench
