#pragma once

#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include <httplib.h>

#include "evoshape/oracle.hpp"
#include "evoshape/wire.hpp"

namespace evoshape {

/// Failure surfaced by a remote oracle, classified by what went wrong:
/// Transport (no usable HTTP response after retries), Malformed (an HTTP
/// response that does not follow the protocol), Validation (a well-formed
/// probability array that fails simplex ingest).
class OracleError : public std::runtime_error {
public:
  enum class Kind { Transport, Malformed, Validation };

  OracleError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

/// Queries a classifier served over HTTP: one POST to /v1/probabilities per
/// probabilities() call. Transport failures are retried up to max_retries
/// times; a request that produced any HTTP response is never retried. The
/// class count is learned from the first successful response and enforced on
/// every later one.
///
/// One instance serves one attack run at a time; parallel sweeps create one
/// instance per worker.
class RemoteOracle : public ClassifierOracle {
public:
  struct Options {
    double timeout_seconds = 10.0;
    int max_retries = 2;
  };

  explicit RemoteOracle(const std::string& endpoint) : RemoteOracle(endpoint, Options{}) {}

  RemoteOracle(const std::string& endpoint, Options options) : options_(options) {
    if (options_.max_retries < 0)
      throw std::invalid_argument("RemoteOracle: max_retries must be >= 0");
    parse_endpoint(endpoint);
    client_ = std::make_unique<httplib::Client>(base_);
    const auto usec = std::chrono::microseconds(
        static_cast<long long>(options_.timeout_seconds * 1e6));
    client_->set_connection_timeout(usec);
    client_->set_read_timeout(usec);
    client_->set_write_timeout(usec);
  }

  /// Throws until the first successful query has established K.
  int num_classes() const override {
    if (num_classes_ == 0)
      throw std::logic_error("RemoteOracle: class count unknown before the first query");
    return num_classes_;
  }

  ProbVector probabilities(const Image& image) override {
    const std::string body = wire::encode_request(image);
    httplib::Result result;
    std::string transport_error;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
      result = client_->Post(path_, body, "application/json");
      if (result) break;
      transport_error = httplib::to_string(result.error());
    }
    if (!result)
      throw OracleError(OracleError::Kind::Transport,
                        "no response from " + base_ + path_ + " after " +
                            std::to_string(options_.max_retries + 1) +
                            " attempts: " + transport_error);
    if (result->status != 200)
      throw OracleError(OracleError::Kind::Malformed,
                        "HTTP " + std::to_string(result->status) + " from " + base_ + path_);

    std::vector<double> raw;
    try {
      raw = wire::decode_response(result->body);
    } catch (const std::exception& e) {
      throw OracleError(OracleError::Kind::Malformed, e.what());
    }
    const int expected = num_classes_ == 0 ? static_cast<int>(raw.size()) : num_classes_;
    ProbVector probs;
    try {
      probs = ProbVector::from_raw(std::move(raw), expected);
    } catch (const std::exception& e) {
      throw OracleError(OracleError::Kind::Validation, e.what());
    }
    num_classes_ = expected;
    return probs;
  }

  const std::string& base_url() const { return base_; }
  const std::string& path() const { return path_; }

private:
  void parse_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
      throw std::invalid_argument("RemoteOracle: endpoint must include a scheme, got '" +
                                  endpoint + "'");
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
      base_ = endpoint;
      path_ = wire::kProbabilitiesPath;
    } else {
      base_ = endpoint.substr(0, path_start);
      std::string prefix = endpoint.substr(path_start);
      while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
      path_ = prefix + wire::kProbabilitiesPath;
    }
  }

  Options options_;
  std::string base_;
  std::string path_;
  std::unique_ptr<httplib::Client> client_;
  int num_classes_ = 0;
};

} // namespace evoshape
