#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evoshape/image.hpp"

namespace evoshape::wire {

inline constexpr const char* kProbabilitiesPath = "/v1/probabilities";
inline constexpr const char* kDtype = "f32le";

inline std::string encode_base64(const std::vector<std::uint8_t>& bytes) {
  static constexpr char alphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += alphabet[(v >> 18) & 0x3f];
    out += alphabet[(v >> 12) & 0x3f];
    out += alphabet[(v >> 6) & 0x3f];
    out += alphabet[v & 0x3f];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const std::uint32_t v = bytes[i] << 16;
    out += alphabet[(v >> 18) & 0x3f];
    out += alphabet[(v >> 12) & 0x3f];
    out += "==";
  } else if (rest == 2) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out += alphabet[(v >> 18) & 0x3f];
    out += alphabet[(v >> 12) & 0x3f];
    out += alphabet[(v >> 6) & 0x3f];
    out += '=';
  }
  return out;
}

inline std::vector<std::uint8_t> decode_base64(const std::string& text) {
  auto value_of = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0)
    throw std::invalid_argument("base64: length must be a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int vals[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=') {
        if (i + 4 != text.size() || k < 2) throw std::invalid_argument("base64: bad padding");
        vals[k] = 0;
        ++pad;
      } else {
        if (pad > 0) throw std::invalid_argument("base64: data after padding");
        vals[k] = value_of(c);
        if (vals[k] < 0) throw std::invalid_argument("base64: invalid character");
      }
    }
    const std::uint32_t v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(v & 0xff));
  }
  return out;
}

/// Packs image intensities as little-endian 32-bit floats in storage order
/// (row, col, channel).
inline std::vector<std::uint8_t> pack_f32le(const Image& image) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(image.size() * 4);
  for (double v : image.data()) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    bytes.push_back(static_cast<std::uint8_t>(u & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((u >> 8) & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((u >> 16) & 0xff));
    bytes.push_back(static_cast<std::uint8_t>((u >> 24) & 0xff));
  }
  return bytes;
}

inline std::vector<float> unpack_f32le(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() % 4 != 0)
    throw std::invalid_argument("f32le payload length must be a multiple of 4");
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t u = static_cast<std::uint32_t>(bytes[4 * i]) |
                            (static_cast<std::uint32_t>(bytes[4 * i + 1]) << 8) |
                            (static_cast<std::uint32_t>(bytes[4 * i + 2]) << 16) |
                            (static_cast<std::uint32_t>(bytes[4 * i + 3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    out[i] = f;
  }
  return out;
}

/// Request body for POST /v1/probabilities.
inline std::string encode_request(const Image& image) {
  nlohmann::json body{{"height", image.height()},
                      {"width", image.width()},
                      {"channels", Image::kChannels},
                      {"dtype", kDtype},
                      {"data", encode_base64(pack_f32le(image))}};
  return body.dump();
}

/// Parses and validates a request body; intensities are clamped into [0,1]
/// against float rounding at the 32-bit boundary.
inline Image decode_request(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("request is not valid JSON: ") + e.what());
  }
  const int height = doc.at("height").get<int>();
  const int width = doc.at("width").get<int>();
  if (doc.at("channels").get<int>() != Image::kChannels)
    throw std::invalid_argument("request channels must be 3");
  if (doc.at("dtype").get<std::string>() != kDtype)
    throw std::invalid_argument("request dtype must be f32le");
  const std::vector<float> values = unpack_f32le(decode_base64(doc.at("data").get<std::string>()));
  if (values.size() != static_cast<std::size_t>(height) * width * Image::kChannels)
    throw std::invalid_argument("request data length does not match dimensions");
  std::vector<double> data(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    data[i] = std::min(std::max(static_cast<double>(values[i]), 0.0), 1.0);
  return Image(height, width, std::move(data));
}

inline std::string encode_response(const std::vector<double>& probs) {
  return nlohmann::json{{"probs", probs}}.dump();
}

/// Extracts the raw probability array from a response body; simplex
/// validation happens at ProbVector ingest, not here.
inline std::vector<double> decode_response(const std::string& body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("response is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("probs") || !doc.at("probs").is_array())
    throw std::invalid_argument("response lacks a probs array");
  try {
    return doc.at("probs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("probs entries are not numbers: ") + e.what());
  }
}

} // namespace evoshape::wire
