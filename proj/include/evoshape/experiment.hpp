#pragma once

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evoshape/attack.hpp"
#include "evoshape/cifar10.hpp"
#include "evoshape/config.hpp"
#include "evoshape/oracle.hpp"
#include "evoshape/png_io.hpp"
#include "evoshape/record.hpp"
#include "evoshape/serialize.hpp"

namespace evoshape {

/// Tag recorded with every run so downstream analysis knows which shape
/// compositing semantics produced the perturbation.
inline constexpr const char* kBlendModeTag = "alpha_over";

struct PlannedImage {
  int image_index = 0;
  Image image;
  int true_label = 0;
};

struct AttackPair {
  int image_index = 0;
  int target_class = 0;

  friend bool operator==(const AttackPair&, const AttackPair&) = default;
};

/// A verified experiment: every planned image is correctly classified by the
/// oracle and every pair's target differs from the image's true label.
struct ExperimentPlan {
  std::vector<PlannedImage> images;
  std::vector<AttackPair> pairs;
  std::vector<AttackConfig> configs;

  const PlannedImage& image_by_index(int image_index) const {
    for (const auto& pi : images)
      if (pi.image_index == image_index) return pi;
    throw std::invalid_argument("ExperimentPlan: unknown image index " +
                                std::to_string(image_index));
  }
};

/// Builds a plan from labeled images. Each candidate is submitted to the
/// oracle once (outside any attack budget, mirroring the protocol of
/// selecting correctly-classified inputs); misclassified candidates are
/// dropped. Without explicit pairs, every image is attacked toward each of
/// the K-1 non-true labels.
inline ExperimentPlan make_plan(const std::vector<LabeledImage>& dataset,
                                const std::vector<int>& indices, ClassifierOracle& oracle,
                                std::vector<AttackConfig> configs,
                                const std::optional<std::vector<AttackPair>>& explicit_pairs =
                                    std::nullopt) {
  if (configs.empty()) throw std::invalid_argument("make_plan: no attack configs");
  for (const auto& config : configs) config.validate();

  ExperimentPlan plan;
  plan.configs = std::move(configs);
  const int num_classes = oracle.num_classes();
  for (int idx : indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= dataset.size())
      throw std::invalid_argument("make_plan: image index " + std::to_string(idx) +
                                  " outside dataset of size " + std::to_string(dataset.size()));
    const LabeledImage& li = dataset[static_cast<std::size_t>(idx)];
    if (li.label < 0 || li.label >= num_classes)
      throw std::invalid_argument("make_plan: label " + std::to_string(li.label) +
                                  " outside oracle class range");
    if (oracle.probabilities(li.image).argmax() != li.label) continue; // misclassified, skip
    plan.images.push_back({idx, li.image, li.label});
  }

  if (explicit_pairs) {
    for (const AttackPair& pair : *explicit_pairs) {
      const PlannedImage& pi = plan.image_by_index(pair.image_index);
      if (pair.target_class < 0 || pair.target_class >= num_classes)
        throw std::invalid_argument("make_plan: target class out of range");
      if (pair.target_class == pi.true_label)
        throw std::invalid_argument("make_plan: target equals true label for image " +
                                    std::to_string(pair.image_index));
      plan.pairs.push_back(pair);
    }
  } else {
    for (const PlannedImage& pi : plan.images)
      for (int target = 0; target < num_classes; ++target)
        if (target != pi.true_label) plan.pairs.push_back({pi.image_index, target});
  }
  return plan;
}

/// One attack run inside a sweep. On oracle failure the record is absent and
/// `error` explains what happened; the sweep itself continues.
struct RunResult {
  int image_index = 0;
  int true_label = 0;
  int target_class = 0;
  int config_index = 0;
  std::uint64_t seed = 0;
  std::optional<AttackRecord> record;
  std::string error;
  double linf_deviation = 0.0;
};

struct ConfigSummary {
  ShapeKind kind = ShapeKind::Circle;
  int num_shapes = 0;
  double targeted_asr = 0.0;
  double untargeted_asr = 0.0;
  std::optional<double> mean_queries; // over targeted successes; absent if none
  int runs = 0;                       // completed attack runs
  int errors = 0;                     // runs lost to oracle failures
};

struct ExperimentSummary {
  std::vector<ConfigSummary> per_config;
  std::vector<RunResult> results; // ordered by (config index, pair order)
};

using OracleFactory = std::function<std::unique_ptr<ClassifierOracle>()>;

namespace detail {

inline RunResult run_one(const ExperimentPlan& plan, ClassifierOracle& oracle,
                         std::uint64_t master_seed, int config_index, int pair_index) {
  const AttackPair& pair = plan.pairs[static_cast<std::size_t>(pair_index)];
  const PlannedImage& pi = plan.image_by_index(pair.image_index);

  RunResult result;
  result.image_index = pair.image_index;
  result.true_label = pi.true_label;
  result.target_class = pair.target_class;
  result.config_index = config_index;

  AttackConfig config = plan.configs[static_cast<std::size_t>(config_index)];
  config.target_class = pair.target_class;
  config.seed = derive_seed(master_seed, static_cast<std::uint64_t>(pair.image_index),
                            static_cast<std::uint64_t>(pair.target_class),
                            static_cast<std::uint64_t>(config_index));
  result.seed = config.seed;

  try {
    AttackRecord record = attack(oracle, pi.image, pi.true_label, config,
                                 LossFunction::targeted(config.target_class));
    result.linf_deviation = linf_distance(record.final_image(), pi.image);
    result.record = std::move(record);
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  return result;
}

inline ExperimentSummary aggregate(const ExperimentPlan& plan, std::vector<RunResult> results) {
  ExperimentSummary summary;
  summary.per_config.resize(plan.configs.size());
  for (std::size_t c = 0; c < plan.configs.size(); ++c) {
    ConfigSummary& cs = summary.per_config[c];
    cs.kind = plan.configs[c].kind;
    cs.num_shapes = plan.configs[c].num_shapes;
  }
  std::vector<long long> query_sums(plan.configs.size(), 0);
  std::vector<int> targeted(plan.configs.size(), 0), untargeted(plan.configs.size(), 0);
  for (const RunResult& r : results) {
    ConfigSummary& cs = summary.per_config[static_cast<std::size_t>(r.config_index)];
    if (!r.record) {
      ++cs.errors;
      continue;
    }
    ++cs.runs;
    if (r.record->success_targeted()) {
      ++targeted[static_cast<std::size_t>(r.config_index)];
      query_sums[static_cast<std::size_t>(r.config_index)] += r.record->queries_used();
    }
    if (r.record->success_untargeted()) ++untargeted[static_cast<std::size_t>(r.config_index)];
  }
  for (std::size_t c = 0; c < plan.configs.size(); ++c) {
    ConfigSummary& cs = summary.per_config[c];
    if (cs.runs > 0) {
      cs.targeted_asr = static_cast<double>(targeted[c]) / cs.runs;
      cs.untargeted_asr = static_cast<double>(untargeted[c]) / cs.runs;
    }
    if (targeted[c] > 0)
      cs.mean_queries = static_cast<double>(query_sums[c]) / targeted[c];
  }
  summary.results = std::move(results);
  return summary;
}

} // namespace detail

/// Runs every (pair x config) attack with per-run seeds derived from the
/// master seed. Workers each own an oracle instance from the factory;
/// results are keyed by job index, so the outcome is independent of
/// scheduling and byte-reproducible given the same master seed.
inline ExperimentSummary run_experiment(const ExperimentPlan& plan, const OracleFactory& factory,
                                        std::uint64_t master_seed, int num_threads = 1) {
  if (plan.configs.empty()) throw std::invalid_argument("run_experiment: no configs");
  if (num_threads < 1) throw std::invalid_argument("run_experiment: num_threads must be >= 1");
  const std::size_t num_jobs = plan.configs.size() * plan.pairs.size();
  std::vector<RunResult> results(num_jobs);

  auto job = [&](ClassifierOracle& oracle, std::size_t job_index) {
    const int config_index = static_cast<int>(job_index / plan.pairs.size());
    const int pair_index = static_cast<int>(job_index % plan.pairs.size());
    results[job_index] = detail::run_one(plan, oracle, master_seed, config_index, pair_index);
  };

  if (num_threads == 1 || num_jobs <= 1) {
    auto oracle = factory();
    for (std::size_t j = 0; j < num_jobs; ++j) job(*oracle, j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const int spawn = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(num_threads), num_jobs));
    workers.reserve(static_cast<std::size_t>(spawn));
    for (int t = 0; t < spawn; ++t) {
      workers.emplace_back([&] {
        auto oracle = factory();
        for (std::size_t j = next.fetch_add(1); j < num_jobs; j = next.fetch_add(1))
          job(*oracle, j);
      });
    }
    for (auto& w : workers) w.join();
  }
  return detail::aggregate(plan, std::move(results));
}

/// Sequential variant driving a caller-owned oracle.
inline ExperimentSummary run_experiment(const ExperimentPlan& plan, ClassifierOracle& oracle,
                                        std::uint64_t master_seed) {
  const std::size_t num_jobs = plan.configs.size() * plan.pairs.size();
  std::vector<RunResult> results(num_jobs);
  for (std::size_t j = 0; j < num_jobs; ++j) {
    const int config_index = static_cast<int>(j / plan.pairs.size());
    const int pair_index = static_cast<int>(j % plan.pairs.size());
    results[j] = detail::run_one(plan, oracle, master_seed, config_index, pair_index);
  }
  return detail::aggregate(plan, std::move(results));
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

} // namespace detail

inline nlohmann::json run_result_to_json(const RunResult& result) {
  nlohmann::json line{{"image_index", result.image_index},
                      {"true_label", result.true_label},
                      {"target_class", result.target_class},
                      {"config_index", result.config_index},
                      {"seed", result.seed},
                      {"blend_mode", kBlendModeTag}};
  if (result.record) {
    line["status"] = "ok";
    line["linf_deviation"] = result.linf_deviation;
    line["record"] = *result.record;
  } else {
    line["status"] = "error";
    line["error"] = result.error;
  }
  return line;
}

/// Writes summary.csv (one row per config), records.jsonl (one line per run,
/// including failed ones), and one adversarial PNG per targeted success under
/// cfg<k>/img<idx>_true<y>_target<c>.png.
inline void write_report(const ExperimentSummary& summary, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  std::ofstream csv(fs::path(dir) / "summary.csv", std::ios::binary);
  if (!csv) throw std::runtime_error("write_report: cannot write summary.csv in " + dir);
  csv << "kind,num_shapes,targeted_asr,untargeted_asr,mean_queries,runs\n";
  for (const ConfigSummary& cs : summary.per_config) {
    csv << to_string(cs.kind) << ',' << cs.num_shapes << ','
        << detail::format_double(cs.targeted_asr) << ','
        << detail::format_double(cs.untargeted_asr) << ','
        << (cs.mean_queries ? detail::format_double(*cs.mean_queries) : std::string()) << ','
        << cs.runs << '\n';
  }
  csv.close();

  std::ofstream jsonl(fs::path(dir) / "records.jsonl", std::ios::binary);
  if (!jsonl) throw std::runtime_error("write_report: cannot write records.jsonl in " + dir);
  for (const RunResult& result : summary.results)
    jsonl << run_result_to_json(result).dump() << '\n';
  jsonl.close();

  for (const RunResult& result : summary.results) {
    if (!result.record || !result.record->success_targeted()) continue;
    const fs::path cfg_dir = fs::path(dir) / ("cfg" + std::to_string(result.config_index));
    fs::create_directories(cfg_dir);
    const std::string name = "img" + std::to_string(result.image_index) + "_true" +
                             std::to_string(result.true_label) + "_target" +
                             std::to_string(result.target_class) + ".png";
    export_png(result.record->final_image(), (cfg_dir / name).string());
  }
}

} // namespace evoshape
