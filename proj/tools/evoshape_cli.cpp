// evoshape command-line driver: single attacks, parameter-study sweeps and
// the shape-based image reconstruction demo.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evoshape/evoshape.hpp"

namespace fs = std::filesystem;
using namespace evoshape;

namespace {

constexpr int kLinearOracleClasses = 10;

struct OracleSpec {
  enum class Kind { Linear, Mlp, Remote } kind;
  std::uint64_t seed = 0;   // linear
  std::string path_or_url;  // mlp / remote
};

OracleSpec parse_oracle_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--oracle", "expected linear:<seed>, mlp:<weights.json> or remote:<url>");
  const std::string head = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  OracleSpec spec;
  if (head == "linear") {
    spec.kind = OracleSpec::Kind::Linear;
    spec.seed = std::stoull(rest);
  } else if (head == "mlp") {
    spec.kind = OracleSpec::Kind::Mlp;
    spec.path_or_url = rest;
  } else if (head == "remote") {
    spec.kind = OracleSpec::Kind::Remote;
    spec.path_or_url = rest;
  } else {
    throw CLI::ValidationError("--oracle", "unknown oracle kind '" + head + "'");
  }
  return spec;
}

std::unique_ptr<ClassifierOracle> make_oracle(const OracleSpec& spec, int height, int width) {
  switch (spec.kind) {
  case OracleSpec::Kind::Linear:
    return std::make_unique<LinearSoftmaxOracle>(height, width, kLinearOracleClasses, spec.seed);
  case OracleSpec::Kind::Mlp:
    return std::make_unique<MlpOracle>(MlpOracle::from_file(spec.path_or_url));
  case OracleSpec::Kind::Remote:
    return std::make_unique<RemoteOracle>(spec.path_or_url);
  }
  throw std::logic_error("unreachable");
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<LabeledImage> load_dataset(const std::string& path) {
  if (has_suffix(path, ".png")) return {LabeledImage{import_png(path), -1}};
  return load_cifar10_batch(path);
}

struct SweepParams {
  std::vector<int> image_indices;
  std::vector<ShapeKind> shapes;
  std::vector<int> num_shapes;
  std::optional<std::vector<AttackPair>> pairs;
  AttackConfig base; // epsilon/beta/b/n_p/budget shared by every config
};

SweepParams parse_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file " + path);
  nlohmann::json doc;
  in >> doc;

  SweepParams params;
  params.image_indices = doc.at("image_indices").get<std::vector<int>>();
  for (const auto& name : doc.at("shapes").get<std::vector<std::string>>())
    params.shapes.push_back(parse_shape_kind(name));
  params.num_shapes = doc.at("num_shapes").get<std::vector<int>>();
  if (doc.contains("pairs")) {
    std::vector<AttackPair> pairs;
    for (const auto& entry : doc.at("pairs")) {
      if (!entry.is_array() || entry.size() != 2)
        throw std::runtime_error("plan pairs must be [image_index, target_class] arrays");
      pairs.push_back({entry[0].get<int>(), entry[1].get<int>()});
    }
    params.pairs = std::move(pairs);
  }
  params.base.epsilon = doc.value("epsilon", params.base.epsilon);
  params.base.beta = doc.value("beta", params.base.beta);
  params.base.b = doc.value("b", params.base.b);
  params.base.n_p = doc.value("n_p", params.base.n_p);
  params.base.budget = doc.value("budget", params.base.budget);
  return params;
}

void write_single_result(const RunResult& result, const std::string& out_dir) {
  fs::create_directories(out_dir);
  std::ofstream jsonl(fs::path(out_dir) / "record.jsonl", std::ios::binary);
  jsonl << run_result_to_json(result).dump() << '\n';
  if (result.record) {
    const std::string name = "img" + std::to_string(result.image_index) + "_true" +
                             std::to_string(result.true_label) + "_target" +
                             std::to_string(result.target_class) + ".png";
    export_png(result.record->final_image(), (fs::path(out_dir) / name).string());
  }
}

int run_attack(const std::string& oracle_text, const std::string& dataset, int image_index,
               AttackConfig config, const std::string& out_dir, bool verbose) {
  const std::vector<LabeledImage> data = load_dataset(dataset);
  if (image_index < 0 || static_cast<std::size_t>(image_index) >= data.size()) {
    std::cerr << "image index " << image_index << " outside dataset of size " << data.size()
              << "\n";
    return 1;
  }
  const Image& x = data[static_cast<std::size_t>(image_index)].image;
  auto oracle = make_oracle(parse_oracle_spec(oracle_text), x.height(), x.width());

  // Selection query, outside the attack budget: the protocol only attacks
  // correctly-classified inputs. A PNG input carries no label, so the
  // oracle's own prediction serves as the true label.
  const int predicted = oracle->probabilities(x).argmax();
  int true_label = data[static_cast<std::size_t>(image_index)].label;
  if (true_label < 0) {
    true_label = predicted;
  } else if (predicted != true_label) {
    std::cerr << "image " << image_index << " is misclassified by the oracle (label "
              << true_label << ", predicted " << predicted << "); pick another image\n";
    return 1;
  }
  if (config.target_class == true_label) {
    std::cerr << "target class equals the true label (" << true_label << ")\n";
    return 1;
  }

  AttackObserver observer;
  if (verbose) {
    observer = [](const AttackStep& step) {
      if (step.queries_used % 500 == 0 || step.queries_used == 1)
        std::fprintf(stderr, "query %6d  best loss %+.6f  mu %.3f\n", step.queries_used,
                     step.best_loss, step.mu);
    };
  }

  RunResult result;
  result.image_index = image_index;
  result.true_label = true_label;
  result.target_class = config.target_class;
  result.seed = config.seed;
  try {
    AttackRecord record =
        attack(*oracle, x, true_label, config, LossFunction::targeted(config.target_class),
               observer);
    result.linf_deviation = linf_distance(record.final_image(), x);
    result.record = std::move(record);
  } catch (const AttackError& e) {
    result.error = e.what();
    std::cerr << "attack aborted after " << e.queries_used() << " queries: " << e.what() << "\n";
    write_single_result(result, out_dir);
    return 1;
  }

  write_single_result(result, out_dir);
  const AttackRecord& record = *result.record;
  std::cout << (record.success_targeted()
                    ? "targeted success"
                    : (record.success_untargeted() ? "untargeted only" : "failure"))
            << "  queries=" << record.queries_used() << "  final_loss="
            << record.loss_trajectory().back() << "  linf=" << result.linf_deviation << "\n";
  return 0;
}

int run_experiment_cmd(const std::string& oracle_text, const std::string& dataset,
                       const std::string& plan_path, std::uint64_t seed, int threads,
                       const std::string& out_dir) {
  const std::vector<LabeledImage> data = load_dataset(dataset);
  const SweepParams params = parse_plan_file(plan_path);

  std::vector<AttackConfig> configs;
  for (ShapeKind kind : params.shapes)
    for (int n : params.num_shapes) {
      AttackConfig config = params.base;
      config.kind = kind;
      config.num_shapes = n;
      configs.push_back(config);
    }

  if (data.empty()) {
    std::cerr << "empty dataset\n";
    return 1;
  }
  const int height = data.front().image.height();
  const int width = data.front().image.width();
  const OracleSpec spec = parse_oracle_spec(oracle_text);
  auto plan_oracle = make_oracle(spec, height, width);
  const ExperimentPlan plan =
      make_plan(data, params.image_indices, *plan_oracle, configs, params.pairs);
  if (plan.pairs.empty()) {
    std::cerr << "plan is empty (no correctly-classified images / no pairs)\n";
    return 1;
  }
  std::cout << "running " << plan.pairs.size() << " pairs x " << plan.configs.size()
            << " configs on " << threads << " thread(s)\n";

  const ExperimentSummary summary = run_experiment(
      plan, [&] { return make_oracle(spec, height, width); }, seed, threads);
  write_report(summary, out_dir);

  for (std::size_t c = 0; c < summary.per_config.size(); ++c) {
    const ConfigSummary& cs = summary.per_config[c];
    std::printf("%-9s N=%-4d targeted ASR %.3f  untargeted ASR %.3f  mean queries %s  runs %d\n",
                to_string(cs.kind), cs.num_shapes, cs.targeted_asr, cs.untargeted_asr,
                cs.mean_queries ? std::to_string(*cs.mean_queries).c_str() : "n/a", cs.runs);
  }
  std::cout << "report written to " << out_dir << "\n";
  return 0;
}

int run_reconstruct(const std::string& reference_path, ShapeKind kind, int num_shapes,
                    int iterations, std::uint64_t seed, double beta, const std::string& out_dir) {
  const Image reference = import_png(reference_path);
  const ReconstructionResult result =
      reconstruct(reference, kind, num_shapes, iterations, seed, beta);

  fs::create_directories(out_dir);
  export_png(result.image, (fs::path(out_dir) / "reconstruction.png").string());
  std::ofstream csv(fs::path(out_dir) / "trajectory.csv", std::ios::binary);
  csv << "iteration,best_fitness\n";
  for (std::size_t i = 0; i < result.fitness_trajectory.size(); ++i)
    csv << (i + 1) << ',' << result.fitness_trajectory[i] << '\n';

  std::printf("final MSE %.6f after %d iterations (initial %.6f)\n",
              -result.fitness_trajectory.back(), iterations, -result.fitness_trajectory.front());
  std::cout << "outputs written to " << out_dir << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box adversarial attacks and image reconstruction with evolved "
               "transparent shapes"};
  app.require_subcommand(1);

  std::string oracle_text, dataset, out_dir, plan_path, reference_path, shape_name = "circle";
  int image_index = 0, target_class = 0, num_shapes = 100, iterations = 10000, threads = 1;
  std::uint64_t seed = 0;
  AttackConfig defaults;
  double epsilon = defaults.epsilon, beta = defaults.beta, b = defaults.b;
  int n_p = defaults.n_p, budget = defaults.budget;
  bool verbose = false;

  CLI::App* attack_cmd = app.add_subcommand("attack", "attack one image from a dataset");
  attack_cmd->add_option("--oracle", oracle_text,
                         "classifier: linear:<seed> | mlp:<weights.json> | remote:<url>")
      ->required();
  attack_cmd->add_option("--dataset", dataset, "CIFAR-10 .bin batch or a .png image")->required();
  attack_cmd->add_option("--image-index", image_index, "record index within the dataset");
  attack_cmd->add_option("--target-class", target_class, "class the model should predict")
      ->required();
  attack_cmd->add_option("--shape", shape_name, "circle | triangle | rectangle");
  attack_cmd->add_option("--num-shapes", num_shapes, "number of shapes N");
  attack_cmd->add_option("--epsilon", epsilon, "L-infinity radius");
  attack_cmd->add_option("--beta", beta, "circle radius divider");
  attack_cmd->add_option("--budget", budget, "max oracle queries");
  attack_cmd->add_option("--b", b, "mutation-rate slope");
  attack_cmd->add_option("--n-p", n_p, "mutation-rate denominator");
  attack_cmd->add_option("--seed", seed, "PRNG seed");
  attack_cmd->add_option("--out", out_dir, "output directory")->required();
  attack_cmd->add_flag("--verbose", verbose, "progress on stderr");

  CLI::App* experiment_cmd = app.add_subcommand("experiment", "run a shape/count parameter sweep");
  experiment_cmd->add_option("--plan", plan_path, "plan JSON file")->required();
  experiment_cmd->add_option("--oracle", oracle_text, "classifier (as in attack)")->required();
  experiment_cmd->add_option("--dataset", dataset, "CIFAR-10 .bin batch or a .png image")
      ->required();
  experiment_cmd->add_option("--seed", seed, "master seed");
  experiment_cmd->add_option("--threads", threads, "parallel attack workers");
  experiment_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI::App* reconstruct_cmd =
      app.add_subcommand("reconstruct", "approximate a PNG with evolved shapes");
  reconstruct_cmd->add_option("--reference", reference_path, "reference PNG")->required();
  reconstruct_cmd->add_option("--shape", shape_name, "circle | triangle | rectangle");
  reconstruct_cmd->add_option("--num-shapes", num_shapes, "number of shapes N");
  reconstruct_cmd->add_option("--iterations", iterations, "evolution iterations");
  reconstruct_cmd->add_option("--seed", seed, "PRNG seed");
  reconstruct_cmd->add_option("--beta", beta, "circle radius divider");
  reconstruct_cmd->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(attack_cmd)) {
      AttackConfig config;
      config.epsilon = epsilon;
      config.num_shapes = num_shapes;
      config.kind = parse_shape_kind(shape_name);
      config.beta = beta;
      config.b = b;
      config.n_p = n_p;
      config.budget = budget;
      config.target_class = target_class;
      config.seed = seed;
      config.validate();
      return run_attack(oracle_text, dataset, image_index, config, out_dir, verbose);
    }
    if (app.got_subcommand(experiment_cmd))
      return run_experiment_cmd(oracle_text, dataset, plan_path, seed, threads, out_dir);
    if (app.got_subcommand(reconstruct_cmd))
      return run_reconstruct(reference_path, parse_shape_kind(shape_name), num_shapes, iterations,
                             seed, beta, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
