#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evrisk/errors.hpp"
#include "evrisk/report.hpp"

using namespace evrisk;

namespace {

StrategyOutcome make_outcome(const std::string& ticker, const std::string& quarter,
                             bool concave, double straddle) {
  StrategyOutcome o;
  o.ticker = ticker;
  o.quarter = quarter;
  o.is_concave = concave;
  o.label = concave ? ShapeLabel::InverseU : ShapeLabel::Convex;
  o.convexest = concave ? -0.01 : 0.01;
  o.impmove_straddle = 0.05;
  o.impmove_strangle = 0.02;
  o.straddle_return = straddle;
  o.strangle_return = straddle / 2.0;
  o.price_return = 0.01;
  o.lambda_used = 0.01;
  o.modality = 1;
  return o;
}

}  // namespace

// ---------------------------------------------------------------------------
// quantiles
// ---------------------------------------------------------------------------

TEST_CASE("quantiles interpolate linearly between order statistics") {
  const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile_sorted(sorted, 0.0) == 1.0);
  CHECK(quantile_sorted(sorted, 0.25) == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(quantile_sorted(sorted, 0.50) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(quantile_sorted(sorted, 0.75) == doctest::Approx(3.25).epsilon(1e-14));
  CHECK(quantile_sorted(sorted, 1.0) == 4.0);
  CHECK(quantile_sorted({1.0, 2.0}, 0.5) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("single-sample quantiles collapse to the value") {
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(quantile_sorted({42.0}, p) == 42.0);
  }
}

TEST_CASE("quantiles are monotone in p and bounded by the extremes") {
  std::mt19937 rng(90125u);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::uniform_int_distribution<int> length(2, 40);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> sample(static_cast<size_t>(length(rng)));
    for (double& v : sample) v = value(rng);
    std::sort(sample.begin(), sample.end());
    double previous = sample.front();
    for (int i = 0; i <= 20; ++i) {
      const double q = quantile_sorted(sample, i / 20.0);
      CHECK(q >= previous - 1e-15);
      CHECK(q >= sample.front());
      CHECK(q <= sample.back());
      previous = q;
    }
  }
}

// ---------------------------------------------------------------------------
// summarize
// ---------------------------------------------------------------------------

namespace {

std::vector<StrategyOutcome> six_events() {
  return {make_outcome("AAA", "2025Q1", true, 1.0),
          make_outcome("BBB", "2025Q1", true, 2.0),
          make_outcome("CCC", "2025Q1", true, 3.0),
          make_outcome("DDD", "2025Q1", true, 4.0),
          make_outcome("EEE", "2025Q1", false, 10.0),
          make_outcome("FFF", "2025Q1", false, 20.0)};
}

}  // namespace

TEST_CASE("summarize computes the six stats per group and their difference") {
  const auto table =
      summarize(six_events(), "straddle_return", ConcaveFilter::Definition);
  CHECK(table.metric == "straddle_return");
  // Concave {1,2,3,4}.
  CHECK(*table.concave[0] == doctest::Approx(2.5).epsilon(1e-14));   // mean
  CHECK(*table.concave[1] == 1.0);                                   // min
  CHECK(*table.concave[2] == doctest::Approx(1.75).epsilon(1e-14));  // 25%
  CHECK(*table.concave[3] == doctest::Approx(2.5).epsilon(1e-14));   // 50%
  CHECK(*table.concave[4] == doctest::Approx(3.25).epsilon(1e-14));  // 75%
  CHECK(*table.concave[5] == 4.0);                                   // max
  // Non-concave {10,20}.
  CHECK(*table.non_concave[0] == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(*table.non_concave[3] == doctest::Approx(15.0).epsilon(1e-14));
  // Differences.
  CHECK(*table.difference[0] == doctest::Approx(-12.5).epsilon(1e-14));
  CHECK(*table.difference[1] == doctest::Approx(-9.0).epsilon(1e-14));
  CHECK(*table.difference[5] == doctest::Approx(-16.0).epsilon(1e-14));
}

TEST_CASE("the convexest filter splits on sign rather than the verdict") {
  auto events = six_events();
  // Flip one non-concave event's convexest negative while keeping
  // is_concave false: the two filters now disagree on the split.
  events[4].convexest = -0.005;
  const auto by_def =
      summarize(events, "straddle_return", ConcaveFilter::Definition);
  const auto by_sign =
      summarize(events, "straddle_return", ConcaveFilter::Convexest);
  CHECK(*by_def.concave[5] == 4.0);    // {1,2,3,4}
  CHECK(*by_sign.concave[5] == 10.0);  // {1,2,3,4,10}
  CHECK(*by_def.non_concave[0] == doctest::Approx(15.0).epsilon(1e-14));
  CHECK(*by_sign.non_concave[0] == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("summarize is invariant under input permutation") {
  auto events = six_events();
  const auto baseline =
      write_table_csv(summarize(events, "price_return", ConcaveFilter::Definition));
  std::mt19937 rng(5150u);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(events.begin(), events.end(), rng);
    CHECK(write_table_csv(summarize(events, "price_return",
                                    ConcaveFilter::Definition)) == baseline);
  }
}

TEST_CASE("every published metric is accepted and unknown names throw") {
  const auto events = six_events();
  for (const char* metric : kMetricNames) {
    CHECK_NOTHROW((void)summarize(events, metric, ConcaveFilter::Definition));
  }
  CHECK_THROWS_AS(
      (void)summarize(events, "sharpe_ratio", ConcaveFilter::Definition),
      UnknownMetric);
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

TEST_CASE("results CSV renders fixed six-decimal columns") {
  std::vector<StrategyOutcome> events{make_outcome("ACME", "2025Q1", true, 0.25)};
  events[0].convexest = -0.0025;
  const std::string csv = write_results_csv(events);
  CHECK(csv ==
        "ticker,quarter,is_concave,label,convexest,impmove_straddle,"
        "impmove_strangle,straddle_return,strangle_return,price_return,"
        "lambda_used,modality\n"
        "ACME,2025Q1,1,InverseU,-0.002500,0.050000,0.020000,0.250000,"
        "0.125000,0.010000,0.01,1\n");
}

TEST_CASE("difference cells come from the unrounded difference") {
  // 6e-7 formats to 0.000001 and 4e-7 to 0.000000, but the true difference
  // 2e-7 still formats to 0.000000: subtracting formatted cells would show
  // 0.000001 instead.
  std::vector<StrategyOutcome> events{make_outcome("AAA", "2025Q1", true, 6e-7),
                                      make_outcome("BBB", "2025Q1", false, 4e-7)};
  const auto table =
      summarize(events, "straddle_return", ConcaveFilter::Definition);
  const std::string csv = write_table_csv(table);
  CHECK(csv.find("mean,0.000001,0.000000,0.000000\n") != std::string::npos);

  // The mirrored case produces a tiny negative difference; negative zero is
  // normalized on output.
  std::vector<StrategyOutcome> mirrored{make_outcome("AAA", "2025Q1", true, 4e-7),
                                        make_outcome("BBB", "2025Q1", false, 6e-7)};
  const std::string mirrored_csv = write_table_csv(
      summarize(mirrored, "straddle_return", ConcaveFilter::Definition));
  CHECK(mirrored_csv.find("mean,0.000000,0.000001,0.000000\n") !=
        std::string::npos);
}

TEST_CASE("empty groups leave absent markers per format") {
  const std::vector<StrategyOutcome> only_concave{
      make_outcome("AAA", "2025Q1", true, 1.0),
      make_outcome("BBB", "2025Q1", true, 2.0)};
  const auto table =
      summarize(only_concave, "straddle_return", ConcaveFilter::Definition);
  CHECK_FALSE(table.non_concave[0].has_value());
  CHECK_FALSE(table.difference[0].has_value());

  const std::string csv = write_table_csv(table);
  CHECK(csv.find("mean,1.500000,,\n") != std::string::npos);

  const std::vector<SummaryTable> tables{table};
  const std::string md = render_report(tables, only_concave,
                                       ConcaveFilter::Definition,
                                       ReportFormat::Markdown);
  CHECK(md.find("| mean | 1.500000 | n/a | n/a |") != std::string::npos);

  const std::string js = render_report(tables, only_concave,
                                       ConcaveFilter::Definition,
                                       ReportFormat::Json);
  const auto doc = nlohmann::json::parse(js);
  CHECK(doc["tables"]["straddle_return"]["non_concave"]["mean"].is_null());
  CHECK(doc["tables"]["straddle_return"]["concave"]["mean"].get<double>() ==
        doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("report documents are deterministic and carry the group counts") {
  const auto events = six_events();
  std::vector<SummaryTable> tables;
  for (const char* metric : kMetricNames) {
    tables.push_back(summarize(events, metric, ConcaveFilter::Definition));
  }
  for (ReportFormat format :
       {ReportFormat::Csv, ReportFormat::Markdown, ReportFormat::Json}) {
    const auto a = render_report(tables, events, ConcaveFilter::Definition, format);
    const auto b = render_report(tables, events, ConcaveFilter::Definition, format);
    CHECK(a == b);
  }

  const std::string md = render_report(tables, events, ConcaveFilter::Definition,
                                       ReportFormat::Markdown);
  CHECK(md.find("Events: 6 (concave 4, non-concave 2)") != std::string::npos);
  CHECK(md.find("## straddle_return") != std::string::npos);
  CHECK(md.find("Grouping: definition") != std::string::npos);

  const auto doc = nlohmann::json::parse(render_report(
      tables, events, ConcaveFilter::Definition, ReportFormat::Json));
  CHECK(doc["counts"]["total"].get<int>() == 6);
  CHECK(doc["counts"]["concave"].get<int>() == 4);
  CHECK(doc["counts"]["non_concave"].get<int>() == 2);
  CHECK(doc["events"].size() == 6);
  CHECK(doc["tables"].size() == kMetricNames.size());
  CHECK(doc["events"][0]["ticker"].get<std::string>() == "AAA");

  const std::string csv = render_report(tables, events, ConcaveFilter::Definition,
                                        ReportFormat::Csv);
  CHECK(csv.rfind("metric,stat,concave,non_concave,difference\n", 0) == 0);
  // 5 metrics x 6 stats + header.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 31);
}

TEST_CASE("filter names round-trip") {
  CHECK(filter_name(ConcaveFilter::Definition) == "definition");
  CHECK(filter_name(ConcaveFilter::Convexest) == "convexest");
}
