#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <json.hpp>

#include "evoshape/image.hpp"
#include "evoshape/remote_oracle.hpp"
#include "evoshape/rng.hpp"
#include "evoshape/wire.hpp"
#include "support/stub_server.hpp"

using namespace evoshape;
using evoshape_test::StubServer;

namespace {

void respond_probs(httplib::Response& res, const std::vector<double>& probs) {
  res.set_content(wire::encode_response(probs), "application/json");
}

} // namespace

TEST_CASE("base64 known vectors and round-trip", "[remote]") {
  auto bytes = [](const std::string& s) {
    return std::vector<std::uint8_t>(s.begin(), s.end());
  };
  CHECK(wire::encode_base64(bytes("Man")) == "TWFu");
  CHECK(wire::encode_base64(bytes("Ma")) == "TWE=");
  CHECK(wire::encode_base64(bytes("M")) == "TQ==");
  CHECK(wire::encode_base64({}) == "");
  CHECK(wire::decode_base64("TWFu") == bytes("Man"));
  CHECK(wire::decode_base64("") == std::vector<std::uint8_t>{});
  CHECK_THROWS_AS(wire::decode_base64("abc"), std::invalid_argument);
  CHECK_THROWS_AS(wire::decode_base64("a=bc"), std::invalid_argument);
  CHECK_THROWS_AS(wire::decode_base64("ab!c"), std::invalid_argument);

  RandomStream rng(6);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::uint8_t> data(static_cast<std::size_t>(rng.uniform_int(0, 40)));
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    REQUIRE(wire::decode_base64(wire::encode_base64(data)) == data);
  }
}

TEST_CASE("request encoding is pinned for a known image", "[remote]") {
  const Image img(1, 1, {0.5, 0.25, 1.0});
  const nlohmann::json body = nlohmann::json::parse(wire::encode_request(img));
  CHECK(body.at("height") == 1);
  CHECK(body.at("width") == 1);
  CHECK(body.at("channels") == 3);
  CHECK(body.at("dtype") == "f32le");
  CHECK(body.at("data") == "AAAAPwAAgD4AAIA/"); // f32le of 0.5, 0.25, 1.0

  const Image back = wire::decode_request(body.dump());
  CHECK(back == img);
}

TEST_CASE("request round-trip is exact at float32 precision", "[remote]") {
  RandomStream rng(12);
  std::vector<double> data(2 * 3 * 3);
  for (auto& v : data) v = rng.uniform_real(0.0, 1.0);
  const Image img(2, 3, std::move(data));
  const Image back = wire::decode_request(wire::encode_request(img));
  REQUIRE(back.same_shape(img));
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(back.data()[i] == static_cast<double>(static_cast<float>(img.data()[i])));
  }
}

TEST_CASE("malformed requests are rejected", "[remote]") {
  const Image img(1, 1, {0.5, 0.25, 1.0});
  nlohmann::json body = nlohmann::json::parse(wire::encode_request(img));
  CHECK_THROWS_AS(wire::decode_request("{bad"), std::invalid_argument);
  nlohmann::json wrong_dtype = body;
  wrong_dtype["dtype"] = "f64le";
  CHECK_THROWS_AS(wire::decode_request(wrong_dtype.dump()), std::invalid_argument);
  nlohmann::json short_data = body;
  short_data["height"] = 2;
  CHECK_THROWS_AS(wire::decode_request(short_data.dump()), std::invalid_argument);
}

TEST_CASE("remote oracle returns the stub's vector", "[remote]") {
  const std::vector<double> fixed{0.1, 0.2, 0.3, 0.4};
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    respond_probs(res, fixed);
  });
  RemoteOracle oracle(server.url());
  CHECK_THROWS_AS(oracle.num_classes(), std::logic_error); // unknown before first query

  const ProbVector p = oracle.probabilities(Image(2, 2, 0.5));
  REQUIRE(p.num_classes() == 4);
  for (int i = 0; i < 4; ++i)
    CHECK_THAT(p[i], Catch::Matchers::WithinAbs(fixed[static_cast<std::size_t>(i)], 1e-12));
  CHECK(oracle.num_classes() == 4);
}

TEST_CASE("server sees one request per logical query", "[remote]") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    respond_probs(res, {0.5, 0.5});
  });
  RemoteOracle oracle(server.url());
  const Image img(2, 2, 0.25);
  for (int i = 1; i <= 5; ++i) {
    (void)oracle.probabilities(img);
    CHECK(server.hits() == i);
  }
}

TEST_CASE("stub handler receives the documented request fields", "[remote]") {
  std::string seen_body;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    respond_probs(res, {1.0, 0.0});
  });
  RemoteOracle oracle(server.url());
  (void)oracle.probabilities(Image(1, 1, {0.5, 0.25, 1.0}));

  const nlohmann::json body = nlohmann::json::parse(seen_body);
  CHECK(body.at("height") == 1);
  CHECK(body.at("width") == 1);
  CHECK(body.at("channels") == 3);
  CHECK(body.at("dtype") == "f32le");
  CHECK(body.at("data") == "AAAAPwAAgD4AAIA/");
}

TEST_CASE("probability sum far from one is a validation error", "[remote]") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    respond_probs(res, {0.25, 0.25}); // sums to 0.5
  });
  RemoteOracle oracle(server.url());
  try {
    (void)oracle.probabilities(Image(2, 2, 0.5));
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.kind() == OracleError::Kind::Validation);
  }
  CHECK(server.hits() == 1); // a well-formed response is never retried
}

TEST_CASE("probability sum within tolerance is renormalized", "[remote]") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    respond_probs(res, {0.5005, 0.5}); // sums to 1.0005
  });
  RemoteOracle oracle(server.url());
  const ProbVector p = oracle.probabilities(Image(2, 2, 0.5));
  CHECK_THAT(p[0] + p[1], Catch::Matchers::WithinAbs(1.0, 1e-15));
  CHECK(p[0] > p[1]);
}

TEST_CASE("non-200 responses are protocol errors and not retried", "[remote]") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
    res.set_content("overloaded", "text/plain");
  });
  RemoteOracle oracle(server.url());
  try {
    (void)oracle.probabilities(Image(2, 2, 0.5));
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.kind() == OracleError::Kind::Malformed);
  }
  CHECK(server.hits() == 1);
}

TEST_CASE("garbage response bodies are malformed", "[remote]") {
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"probabilities\":[1.0]}", "application/json");
  });
  RemoteOracle oracle(server.url());
  try {
    (void)oracle.probabilities(Image(2, 2, 0.5));
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.kind() == OracleError::Kind::Malformed);
  }
}

TEST_CASE("class count changes between responses are validation errors", "[remote]") {
  int call = 0;
  StubServer server([&](const httplib::Request&, httplib::Response& res) {
    if (++call == 1) {
      respond_probs(res, {0.5, 0.5});
    } else {
      respond_probs(res, {0.3, 0.3, 0.4});
    }
  });
  RemoteOracle oracle(server.url());
  (void)oracle.probabilities(Image(2, 2, 0.5));
  try {
    (void)oracle.probabilities(Image(2, 2, 0.5));
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.kind() == OracleError::Kind::Validation);
  }
}

TEST_CASE("unreachable endpoints surface transport errors", "[remote]") {
  RemoteOracle::Options opts;
  opts.timeout_seconds = 0.5;
  opts.max_retries = 1;
  RemoteOracle oracle("http://127.0.0.1:1", opts);
  try {
    (void)oracle.probabilities(Image(2, 2, 0.5));
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.kind() == OracleError::Kind::Transport);
  }
}

TEST_CASE("endpoint parsing keeps base paths", "[remote]") {
  RemoteOracle plain("http://example.com:8080");
  CHECK(plain.base_url() == "http://example.com:8080");
  CHECK(plain.path() == "/v1/probabilities");

  RemoteOracle prefixed("http://example.com:8080/models/cifar/");
  CHECK(prefixed.base_url() == "http://example.com:8080");
  CHECK(prefixed.path() == "/models/cifar/v1/probabilities");

  CHECK_THROWS_AS(RemoteOracle("example.com"), std::invalid_argument);
}
