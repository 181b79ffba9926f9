#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "evrisk/strategies.hpp"

namespace evrisk {

/// Which events count as "concave" when splitting the sample.
enum class ConcaveFilter { Definition, Convexest };

[[nodiscard]] std::string filter_name(ConcaveFilter f);

inline constexpr std::array<const char*, 6> kStatNames = {
    "mean", "min", "25%", "50%", "75%", "max"};

/// Metrics summarize() accepts; also the tables cmd_analyze emits.
inline constexpr std::array<const char*, 5> kMetricNames = {
    "impmove_straddle", "impmove_strangle", "straddle_return",
    "strangle_return", "price_return"};

struct SummaryTable {
  std::string metric;
  // Index order follows kStatNames. Empty groups leave absent markers.
  std::array<std::optional<double>, 6> concave;
  std::array<std::optional<double>, 6> non_concave;
  std::array<std::optional<double>, 6> difference;  // concave - non_concave
};

enum class ReportFormat { Csv, Json, Markdown };

/// Type-7 quantile (linear interpolation between order statistics) over an
/// ascending-sorted sample; p in [0,1].
[[nodiscard]] double quantile_sorted(const std::vector<double>& sorted, double p);

/// Splits outcomes by the filter and builds the six-row summary for one
/// metric. Throws UnknownMetric for a name outside kMetricNames.
[[nodiscard]] SummaryTable summarize(const std::vector<StrategyOutcome>& outcomes,
                                     const std::string& metric,
                                     ConcaveFilter filter);

/// Per-event rows, sorted (ticker, quarter) by the caller.
[[nodiscard]] std::string write_results_csv(
    const std::vector<StrategyOutcome>& outcomes);

/// One summary table as CSV (stat,concave,non_concave,difference).
[[nodiscard]] std::string write_table_csv(const SummaryTable& table);

/// Whole-report document in the requested format; byte-stable for
/// identical inputs.
[[nodiscard]] std::string render_report(const std::vector<SummaryTable>& tables,
                                        const std::vector<StrategyOutcome>& outcomes,
                                        ConcaveFilter filter,
                                        ReportFormat format);

}  // namespace evrisk
