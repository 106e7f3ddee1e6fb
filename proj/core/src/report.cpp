#include "s2l/report.hpp"

#include <atomic>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "s2l/detail/number.hpp"
#include "s2l/error.hpp"

namespace s2l {

using nlohmann::json;

SampleRecord evaluate_pair(std::string_view sample_id, const Layout& pred, const Layout& ref,
                           const EvalOptions& options) {
  SampleRecord r;
  r.sample_id = std::string(sample_id);
  r.iou = iou_named(pred, ref);
  r.miou = miou(pred, ref, options.match);
  r.cos = cos_score(pred, ref);
  r.alignment = alignment(pred);
  r.overlap = overlap(pred, options.overlap);
  return r;
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  a.count = values.size();
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  a.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return a;
}

MetricsReport evaluate_corpus(const std::vector<EvalPair>& pairs, const EvalOptions& options, std::size_t jobs) {
  std::set<std::string_view> ids;
  for (const auto& p : pairs)
    if (!ids.insert(p.sample_id).second) throw ValidationError(fmt::format("duplicate sample id '{}'", p.sample_id));

  MetricsReport report;
  report.records.resize(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      const auto& p = pairs[i];
      if (p.pred) {
        report.records[i] = evaluate_pair(p.sample_id, *p.pred, p.ref, options);
      } else {
        report.records[i].sample_id = p.sample_id;
        report.records[i].missing = true;
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, pairs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  if (report.records.empty()) return report;
  auto column = [&](double SampleRecord::*field) {
    std::vector<double> v;
    v.reserve(report.records.size());
    for (const auto& r : report.records) v.push_back(r.*field);
    return aggregate(v);
  };
  report.aggregate = MetricsAggregate{column(&SampleRecord::iou), column(&SampleRecord::miou),
                                      column(&SampleRecord::cos), column(&SampleRecord::alignment),
                                      column(&SampleRecord::overlap)};
  return report;
}

json record_to_json(const SampleRecord& r) {
  return json{{"sample_id", r.sample_id}, {"iou", r.iou},         {"miou", r.miou},      {"cos", r.cos},
              {"alignment", r.alignment}, {"overlap", r.overlap}, {"missing", r.missing}};
}

namespace {

json aggregate_to_json(const Aggregate& a) { return json{{"mean", a.mean}, {"stddev", a.stddev}, {"count", a.count}}; }

Aggregate aggregate_from_json(const json& j) {
  return {j.at("mean").get<double>(), j.at("stddev").get<double>(), j.at("count").get<std::size_t>()};
}

}  // namespace

void write_report_jsonl(std::ostream& out, const MetricsReport& report) {
  for (const auto& r : report.records) out << record_to_json(r).dump() << '\n';
  json tail;
  if (report.aggregate) {
    const auto& a = *report.aggregate;
    tail["aggregate"] = {{"iou", aggregate_to_json(a.iou)},
                         {"miou", aggregate_to_json(a.miou)},
                         {"cos", aggregate_to_json(a.cos)},
                         {"alignment", aggregate_to_json(a.alignment)},
                         {"overlap", aggregate_to_json(a.overlap)}};
  } else {
    tail["aggregate"] = nullptr;
  }
  tail["count"] = report.records.size();
  tail["metric_defs_version"] = kMetricDefsVersion;
  out << tail.dump() << '\n';
}

void write_report_csv(std::ostream& out, const MetricsReport& report) {
  using detail::format_number;
  out << "sample_id,iou,miou,cos,alignment,overlap,missing\n";
  for (const auto& r : report.records) {
    std::string id = r.sample_id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : id) q += c == '"' ? std::string("\"\"") : std::string(1, c);
      id = q + "\"";
    }
    out << id << ',' << format_number(r.iou) << ',' << format_number(r.miou) << ',' << format_number(r.cos) << ','
        << format_number(r.alignment) << ',' << format_number(r.overlap) << ',' << (r.missing ? "true" : "false")
        << '\n';
  }
}

MetricsReport read_report_jsonl(std::istream& in) {
  MetricsReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    if (j.contains("metric_defs_version")) {
      if (!j.at("aggregate").is_null()) {
        const auto& a = j.at("aggregate");
        report.aggregate = MetricsAggregate{aggregate_from_json(a.at("iou")), aggregate_from_json(a.at("miou")),
                                            aggregate_from_json(a.at("cos")), aggregate_from_json(a.at("alignment")),
                                            aggregate_from_json(a.at("overlap"))};
      }
      continue;
    }
    SampleRecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.iou = j.at("iou").get<double>();
    r.miou = j.at("miou").get<double>();
    r.cos = j.at("cos").get<double>();
    r.alignment = j.at("alignment").get<double>();
    r.overlap = j.at("overlap").get<double>();
    r.missing = j.at("missing").get<bool>();
    report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace s2l
