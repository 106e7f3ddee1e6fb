#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "s2l/layout.hpp"
#include "s2l/metrics.hpp"

namespace s2l {

// Bumped whenever a metric definition changes.
inline constexpr std::string_view kMetricDefsVersion = "1";

struct SampleRecord {
  std::string sample_id;
  double iou = 0.0;
  double miou = 0.0;
  double cos = 0.0;
  double alignment = 0.0;
  double overlap = 0.0;
  bool missing = false;

  bool operator==(const SampleRecord&) const = default;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t count = 0;

  bool operator==(const Aggregate&) const = default;
};

struct MetricsAggregate {
  Aggregate iou, miou, cos, alignment, overlap;

  bool operator==(const MetricsAggregate&) const = default;
};

struct MetricsReport {
  std::vector<SampleRecord> records;
  std::optional<MetricsAggregate> aggregate;  // absent for an empty corpus
};

struct EvalOptions {
  MatchOptions match;
  OverlapOptions overlap;
};

struct EvalPair {
  std::string sample_id;
  std::optional<Layout> pred;  // absent when no prediction was produced
  Layout ref;
};

// Alignment and overlap describe the prediction; the rest compare it to ref.
SampleRecord evaluate_pair(std::string_view sample_id, const Layout& pred, const Layout& ref,
                           const EvalOptions& options = {});

// Records keep input order; aggregates are reduced in that order. Throws
// ValidationError on a repeated sample id.
MetricsReport evaluate_corpus(const std::vector<EvalPair>& pairs, const EvalOptions& options = {},
                              std::size_t jobs = 1);

Aggregate aggregate(const std::vector<double>& values);

nlohmann::json record_to_json(const SampleRecord& record);

// One JSON line per record, then {"aggregate": {...}, "count", "metric_defs_version"}.
void write_report_jsonl(std::ostream& out, const MetricsReport& report);
// Same columns as the records; no aggregate row.
void write_report_csv(std::ostream& out, const MetricsReport& report);

MetricsReport read_report_jsonl(std::istream& in);

}  // namespace s2l
