#include "hfo/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hfo/error.hpp"
#include "hfo/time.hpp"

namespace hfo {

namespace {

using ojson = nlohmann::ordered_json;

ojson class_json(const ClassMetrics& m) { return {{"p", m.precision}, {"r", m.recall}, {"f1", m.f1}}; }

ojson metrics_json(const MetricsReport& m) {
  return {{"completed", class_json(m.completed)}, {"failed", class_json(m.failed)}, {"macro", class_json(m.macro)}};
}

ClassMetrics class_from(const nlohmann::json& j) {
  return {j.at("p").get<double>(), j.at("r").get<double>(), j.at("f1").get<double>()};
}

MetricsReport metrics_from(const nlohmann::json& j) {
  return {class_from(j.at("completed")), class_from(j.at("failed")), class_from(j.at("macro"))};
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string time_cell(const TimingStats& t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3gs + %.3gs", t.train_seconds_per_day, t.infer_seconds_per_job);
  return buf;
}

}  // namespace

ojson to_json(const EvalReport& r) {
  ojson config = {{"alpha", r.online.alpha_days},
                  {"omega", r.online.omega_days},
                  {"split", r.offline.split_fraction},
                  {"seed", r.spec.seed}};
  if (r.spec.kind == ModelKind::Knn) {
    config["k"] = r.spec.k;
    config["distance"] = std::string(to_string(r.spec.distance));
    config["p"] = r.spec.p;
    config["knn_evict"] = r.online.knn_evict;
  }
  if (r.spec.supervised()) config["window_membership"] = std::string(to_string(r.online.membership));

  ojson monthly = ojson::array();
  for (const auto& m : r.metrics.months) {
    ojson row = {{"month", format_month(m.month)},
                 {"counts", {{"tp", m.counts.tp}, {"fp", m.counts.fp}, {"tn", m.counts.tn}, {"fn", m.counts.fn}}}};
    row.update(metrics_json(m.metrics));
    monthly.push_back(std::move(row));
  }
  return {{"model", r.model},
          {"encoding", std::string(to_string(r.encoding))},
          {"setting", std::string(to_string(r.setting))},
          {"config", std::move(config)},
          {"monthly", std::move(monthly)},
          {"monthly_mean", metrics_json(r.metrics.monthly_mean)},
          {"pooled", metrics_json(r.metrics.pooled)},
          {"timing",
           {{"train_s_per_day", r.timing.train_seconds_per_day}, {"infer_s_per_job", r.timing.infer_seconds_per_job}}},
          {"evaluated", r.evaluated},
          {"skipped", r.skipped},
          {"warnings", r.warnings}};
}

ReportRow summarize(const EvalReport& r) { return {r.model, r.setting, r.headline(), r.timing}; }

ReportRow parse_report_row(const nlohmann::json& j) {
  try {
    ReportRow row;
    row.model = j.at("model").get<std::string>();
    const auto setting = parse_setting(j.at("setting").get<std::string>());
    if (!setting) throw ParseError(0, "unknown setting in report");
    row.setting = *setting;
    row.headline = metrics_from(j.at(row.setting == Setting::Offline ? "pooled" : "monthly_mean"));
    const auto& t = j.at("timing");
    row.timing = {t.at("train_s_per_day").get<double>(), t.at("infer_s_per_job").get<double>()};
    return row;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed report: ") + e.what());
  }
}

ReportRow load_report_row(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
  return parse_report_row(j);
}

std::vector<double> metric_columns(const ReportRow& row) {
  const auto& h = row.headline;
  return {h.macro.f1,     h.macro.precision,  h.macro.recall, h.completed.f1, h.completed.precision,
          h.completed.recall, h.failed.f1, h.failed.precision, h.failed.recall};
}

std::string render_table(std::span<const ReportRow> rows) {
  static constexpr const char* kHeader[] = {"Model",  "T F1m", "T Precm", "T Recm", "C F1", "C Prec",
                                            "C Rec", "F F1",  "F Prec",  "F Rec",  "Time"};
  std::vector<std::vector<double>> values;
  for (const auto& r : rows) values.push_back(metric_columns(r));
  std::vector<double> best(9, 0.0);
  for (std::size_t c = 0; c < best.size(); ++c)
    for (std::size_t r = 0; r < values.size(); ++r)
      best[c] = r == 0 ? values[r][c] : std::max(best[c], values[r][c]);

  std::vector<std::vector<std::string>> cells;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<std::string> line{rows[r].model};
    for (std::size_t c = 0; c < best.size(); ++c) {
      auto text = fixed2(values[r][c]);
      if (rows.size() > 1 && values[r][c] == best[c]) text = "**" + text + "**";
      line.push_back(std::move(text));
    }
    line.push_back(time_cell(rows[r].timing));
    cells.push_back(std::move(line));
  }

  std::vector<std::size_t> width;
  for (const char* h : kHeader) width.push_back(std::string_view(h).size());
  for (const auto& line : cells)
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    out << '|';
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << ' ' << line[c] << std::string(width[c] - line[c].size(), ' ') << " |";
    }
    out << '\n';
  };
  emit(std::vector<std::string>(std::begin(kHeader), std::end(kHeader)));
  out << '|';
  for (auto w : width) out << std::string(w + 2, '-') << '|';
  out << '\n';
  for (const auto& line : cells) emit(line);
  return out.str();
}

}  // namespace hfo
