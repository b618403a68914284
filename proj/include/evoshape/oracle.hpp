#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evoshape/image.hpp"
#include "evoshape/probability.hpp"

namespace evoshape {

/// The query-only classifier boundary: one probability vector per image, no
/// gradients, no architecture. Implementations validate and renormalize their
/// outputs through ProbVector::from_raw.
class ClassifierOracle {
public:
  virtual ~ClassifierOracle() = default;

  /// Class count K. Remote oracles may not know it before their first query.
  virtual int num_classes() const = 0;

  virtual ProbVector probabilities(const Image& image) = 0;
};

namespace detail {

inline std::vector<double> softmax(std::vector<double> logits) {
  const double m = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : logits) v /= sum;
  return logits;
}

} // namespace detail

/// Deterministic stand-in for a trained classifier: softmax over a random
/// linear map. Weights and biases are standard-normal draws scaled by
/// 1/sqrt(d), generated from the seed in a fixed order (W row-major by class,
/// then biases).
class LinearSoftmaxOracle : public ClassifierOracle {
public:
  LinearSoftmaxOracle(int height, int width, int num_classes, std::uint64_t seed)
      : LinearSoftmaxOracle(height, width, num_classes, {}, {}) {
    const std::size_t d = static_cast<std::size_t>(height) * width * Image::kChannels;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& w : weights_) w = normal(engine) * scale;
    for (double& b : biases_) b = normal(engine) * scale;
  }

  /// Explicit weights; empty vectors mean all zeros.
  LinearSoftmaxOracle(int height, int width, int num_classes, std::vector<double> weights,
                      std::vector<double> biases)
      : height_(height), width_(width), num_classes_(num_classes),
        weights_(std::move(weights)), biases_(std::move(biases)) {
    if (height < 1 || width < 1)
      throw std::invalid_argument("LinearSoftmaxOracle: bad image dimensions");
    if (num_classes < 2)
      throw std::invalid_argument("LinearSoftmaxOracle: need at least 2 classes");
    const std::size_t d = static_cast<std::size_t>(height) * width * Image::kChannels;
    if (weights_.empty()) weights_.resize(static_cast<std::size_t>(num_classes) * d, 0.0);
    if (biases_.empty()) biases_.resize(static_cast<std::size_t>(num_classes), 0.0);
    if (weights_.size() != static_cast<std::size_t>(num_classes) * d ||
        biases_.size() != static_cast<std::size_t>(num_classes))
      throw std::invalid_argument("LinearSoftmaxOracle: weight/bias sizes mismatch");
  }

  int num_classes() const override { return num_classes_; }

  ProbVector probabilities(const Image& image) override {
    if (image.height() != height_ || image.width() != width_)
      throw std::invalid_argument("LinearSoftmaxOracle: image dimensions mismatch");
    const std::vector<double>& x = image.data();
    const std::size_t d = x.size();
    std::vector<double> logits(static_cast<std::size_t>(num_classes_));
    for (int k = 0; k < num_classes_; ++k) {
      const double* row = weights_.data() + static_cast<std::size_t>(k) * d;
      double acc = biases_[static_cast<std::size_t>(k)];
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
      logits[static_cast<std::size_t>(k)] = acc;
    }
    return ProbVector::from_raw(detail::softmax(std::move(logits)), num_classes_);
  }

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& biases() const { return biases_; }

private:
  int height_;
  int width_;
  int num_classes_;
  std::vector<double> weights_; // K x d, row-major by class
  std::vector<double> biases_;
};

/// Fully-connected feed-forward network with relu/identity activations and a
/// softmax head, loadable from a JSON weight file.
class MlpOracle : public ClassifierOracle {
public:
  enum class Activation { Relu, Identity };

  struct Layer {
    int in = 0;
    int out = 0;
    Activation activation = Activation::Identity;
    std::vector<double> weights; // out x in, row-major
    std::vector<double> biases;  // out
  };

  explicit MlpOracle(std::vector<Layer> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw std::invalid_argument("MlpOracle: no layers");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Layer& layer = layers_[l];
      if (layer.in < 1 || layer.out < 1)
        throw std::invalid_argument("MlpOracle: layer dimensions must be positive");
      if (l > 0 && layer.in != layers_[l - 1].out)
        throw std::invalid_argument("MlpOracle: dimension chain broken at layer " +
                                    std::to_string(l));
      if (layer.weights.size() != static_cast<std::size_t>(layer.in) * layer.out)
        throw std::invalid_argument("MlpOracle: weight count mismatch at layer " +
                                    std::to_string(l));
      if (layer.biases.size() != static_cast<std::size_t>(layer.out))
        throw std::invalid_argument("MlpOracle: bias count mismatch at layer " +
                                    std::to_string(l));
    }
    if (layers_.back().out < 2)
      throw std::invalid_argument("MlpOracle: final layer must emit at least 2 classes");
  }

  /// Parses the weight-file schema:
  /// {"arch":[{"in":n,"out":m,"activation":"relu"|"identity"},...],
  ///  "weights":[[...out x in, row-major...],...], "biases":[[...],...]}
  static MlpOracle from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("arch") || !doc.contains("weights") ||
        !doc.contains("biases"))
      throw std::invalid_argument("MlpOracle: weight file needs arch/weights/biases");
    const auto& arch = doc.at("arch");
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    if (!arch.is_array() || arch.size() != weights.size() || arch.size() != biases.size())
      throw std::invalid_argument("MlpOracle: arch/weights/biases lengths disagree");
    std::vector<Layer> layers;
    layers.reserve(arch.size());
    for (std::size_t l = 0; l < arch.size(); ++l) {
      Layer layer;
      layer.in = arch[l].at("in").get<int>();
      layer.out = arch[l].at("out").get<int>();
      const std::string act = arch[l].at("activation").get<std::string>();
      if (act == "relu") {
        layer.activation = Activation::Relu;
      } else if (act == "identity") {
        layer.activation = Activation::Identity;
      } else {
        throw std::invalid_argument("MlpOracle: unknown activation '" + act + "'");
      }
      layer.weights = weights[l].get<std::vector<double>>();
      layer.biases = biases[l].get<std::vector<double>>();
      layers.push_back(std::move(layer));
    }
    return MlpOracle(std::move(layers));
  }

  static MlpOracle from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("MlpOracle: cannot open weight file " + path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("MlpOracle: malformed weight file " + path + ": " + e.what());
    }
    return from_json(doc);
  }

  int num_classes() const override { return layers_.back().out; }

  ProbVector probabilities(const Image& image) override {
    if (image.size() != static_cast<std::size_t>(layers_.front().in))
      throw std::invalid_argument("MlpOracle: flattened image length " +
                                  std::to_string(image.size()) + " != first layer input " +
                                  std::to_string(layers_.front().in));
    std::vector<double> act = image.data();
    for (const Layer& layer : layers_) {
      std::vector<double> next(static_cast<std::size_t>(layer.out));
      for (int o = 0; o < layer.out; ++o) {
        const double* row = layer.weights.data() + static_cast<std::size_t>(o) * layer.in;
        double acc = layer.biases[static_cast<std::size_t>(o)];
        for (int j = 0; j < layer.in; ++j) acc += row[j] * act[static_cast<std::size_t>(j)];
        next[static_cast<std::size_t>(o)] =
            layer.activation == Activation::Relu ? std::max(acc, 0.0) : acc;
      }
      act = std::move(next);
    }
    return ProbVector::from_raw(detail::softmax(std::move(act)), num_classes());
  }

  const std::vector<Layer>& layers() const { return layers_; }

private:
  std::vector<Layer> layers_;
};

} // namespace evoshape
