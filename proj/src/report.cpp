#include "evrisk/report.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "evrisk/errors.hpp"
#include "evrisk/format.hpp"

namespace evrisk {

namespace {

using nlohmann::json;

double metric_value(const StrategyOutcome& o, const std::string& metric) {
  if (metric == "impmove_straddle") return o.impmove_straddle;
  if (metric == "impmove_strangle") return o.impmove_strangle;
  if (metric == "straddle_return") return o.straddle_return;
  if (metric == "strangle_return") return o.strangle_return;
  if (metric == "price_return") return o.price_return;
  throw UnknownMetric("'" + metric + "'");
}

bool counts_as_concave(const StrategyOutcome& o, ConcaveFilter f) {
  return f == ConcaveFilter::Definition ? o.is_concave : o.convexest < 0.0;
}

/// Six summary stats from an unsorted sample. The mean accumulates over
/// the sorted values so byte output is independent of input order.
std::array<std::optional<double>, 6> stats_of(std::vector<double> values) {
  std::array<std::optional<double>, 6> out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  out[0] = sum / static_cast<double>(values.size());
  out[1] = values.front();
  out[2] = quantile_sorted(values, 0.25);
  out[3] = quantile_sorted(values, 0.50);
  out[4] = quantile_sorted(values, 0.75);
  out[5] = values.back();
  return out;
}

std::string cell(const std::optional<double>& v, const char* absent) {
  return v ? format_fixed(*v) : std::string(absent);
}

json table_json(const SummaryTable& t) {
  json cols;
  auto fill = [](const std::array<std::optional<double>, 6>& stats) {
    json col;
    for (size_t i = 0; i < kStatNames.size(); ++i) {
      if (stats[i]) col[kStatNames[i]] = *stats[i];
      else col[kStatNames[i]] = nullptr;
    }
    return col;
  };
  cols["concave"] = fill(t.concave);
  cols["non_concave"] = fill(t.non_concave);
  cols["difference"] = fill(t.difference);
  return cols;
}

json outcome_json(const StrategyOutcome& o) {
  json j;
  j["ticker"] = o.ticker;
  j["quarter"] = o.quarter;
  j["is_concave"] = o.is_concave;
  j["label"] = shape_label_name(o.label);
  j["convexest"] = o.convexest;
  j["impmove_straddle"] = o.impmove_straddle;
  j["impmove_strangle"] = o.impmove_strangle;
  j["straddle_return"] = o.straddle_return;
  j["strangle_return"] = o.strangle_return;
  j["price_return"] = o.price_return;
  j["lambda_used"] = o.lambda_used;
  j["modality"] = o.modality;
  j["arbitrage_free"] = o.arbitrage_free;
  j["warnings"] = o.warnings;
  return j;
}

}  // namespace

std::string filter_name(ConcaveFilter f) {
  return f == ConcaveFilter::Definition ? "definition" : "convexest";
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = static_cast<double>(n - 1) * p;
  const size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SummaryTable summarize(const std::vector<StrategyOutcome>& outcomes,
                       const std::string& metric, ConcaveFilter filter) {
  std::vector<double> concave_vals, other_vals;
  for (const auto& o : outcomes) {
    (counts_as_concave(o, filter) ? concave_vals : other_vals)
        .push_back(metric_value(o, metric));
  }
  SummaryTable table;
  table.metric = metric;
  table.concave = stats_of(std::move(concave_vals));
  table.non_concave = stats_of(std::move(other_vals));
  for (size_t i = 0; i < table.difference.size(); ++i) {
    if (table.concave[i] && table.non_concave[i]) {
      table.difference[i] = *table.concave[i] - *table.non_concave[i];
    }
  }
  return table;
}

std::string write_results_csv(const std::vector<StrategyOutcome>& outcomes) {
  std::string out =
      "ticker,quarter,is_concave,label,convexest,impmove_straddle,"
      "impmove_strangle,straddle_return,strangle_return,price_return,"
      "lambda_used,modality\n";
  for (const auto& o : outcomes) {
    out += o.ticker + ',' + o.quarter + ',' + (o.is_concave ? "1" : "0") + ',' +
           shape_label_name(o.label) + ',' + format_fixed(o.convexest) + ',' +
           format_fixed(o.impmove_straddle) + ',' +
           format_fixed(o.impmove_strangle) + ',' +
           format_fixed(o.straddle_return) + ',' +
           format_fixed(o.strangle_return) + ',' +
           format_fixed(o.price_return) + ',' + format_shortest(o.lambda_used) +
           ',' + std::to_string(o.modality) + '\n';
  }
  return out;
}

std::string write_table_csv(const SummaryTable& table) {
  std::string out = "stat,concave,non_concave,difference\n";
  for (size_t i = 0; i < kStatNames.size(); ++i) {
    out += std::string(kStatNames[i]) + ',' + cell(table.concave[i], "") + ',' +
           cell(table.non_concave[i], "") + ',' + cell(table.difference[i], "") +
           '\n';
  }
  return out;
}

std::string render_report(const std::vector<SummaryTable>& tables,
                          const std::vector<StrategyOutcome>& outcomes,
                          ConcaveFilter filter, ReportFormat format) {
  size_t concave_count = 0;
  for (const auto& o : outcomes) {
    if (counts_as_concave(o, filter)) ++concave_count;
  }
  const size_t other_count = outcomes.size() - concave_count;

  switch (format) {
    case ReportFormat::Csv: {
      std::string out = "metric,stat,concave,non_concave,difference\n";
      for (const auto& t : tables) {
        for (size_t i = 0; i < kStatNames.size(); ++i) {
          out += t.metric + ',' + kStatNames[i] + ',' + cell(t.concave[i], "") +
                 ',' + cell(t.non_concave[i], "") + ',' +
                 cell(t.difference[i], "") + '\n';
        }
      }
      return out;
    }
    case ReportFormat::Markdown: {
      std::string out = "# Event summary\n\n";
      if (outcomes.empty()) {
        out += "No events.\n";
      } else {
        out += "Events: " + std::to_string(outcomes.size()) + " (concave " +
               std::to_string(concave_count) + ", non-concave " +
               std::to_string(other_count) + ")\n\n";
      }
      out += "Grouping: " + filter_name(filter) +
             ". Quantiles: linear interpolation between order statistics.\n";
      for (const auto& t : tables) {
        out += "\n## " + t.metric + "\n\n";
        out += "| stat | concave | non_concave | difference |\n";
        out += "|------|---------|-------------|------------|\n";
        for (size_t i = 0; i < kStatNames.size(); ++i) {
          out += std::string("| ") + kStatNames[i] + " | " +
                 cell(t.concave[i], "n/a") + " | " +
                 cell(t.non_concave[i], "n/a") + " | " +
                 cell(t.difference[i], "n/a") + " |\n";
        }
      }
      return out;
    }
    case ReportFormat::Json: {
      json doc;
      doc["conventions"]["grouping"] = filter_name(filter);
      doc["conventions"]["quantiles"] =
          "linear interpolation between order statistics";
      doc["counts"]["concave"] = concave_count;
      doc["counts"]["non_concave"] = other_count;
      doc["counts"]["total"] = outcomes.size();
      doc["events"] = json::array();
      for (const auto& o : outcomes) doc["events"].push_back(outcome_json(o));
      doc["tables"] = json::object();
      for (const auto& t : tables) doc["tables"][t.metric] = table_json(t);
      return doc.dump(2) + "\n";
    }
  }
  throw IoError("unknown report format");
}

}  // namespace evrisk
