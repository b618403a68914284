#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "evoshape/config.hpp"
#include "evoshape/genome.hpp"
#include "evoshape/image.hpp"
#include "evoshape/record.hpp"

namespace evoshape {

// nlohmann::json ADL hooks. Doubles are emitted in shortest round-trip form,
// so parse(dump(x)) reconstructs bit-identical values.

inline void to_json(nlohmann::json& j, const Image& image) {
  j = nlohmann::json{{"height", image.height()},
                     {"width", image.width()},
                     {"data", image.data()}};
}

inline void from_json(const nlohmann::json& j, Image& image) {
  image = Image(j.at("height").get<int>(), j.at("width").get<int>(),
                j.at("data").get<std::vector<double>>());
}

inline void to_json(nlohmann::json& j, const Genome& genome) {
  j = nlohmann::json{{"kind", to_string(genome.kind())},
                     {"num_shapes", genome.num_shapes()},
                     {"values", genome.values()}};
}

inline void from_json(const nlohmann::json& j, Genome& genome) {
  genome = Genome(parse_shape_kind(j.at("kind").get<std::string>()),
                  j.at("num_shapes").get<int>(), j.at("values").get<std::vector<double>>());
}

inline void to_json(nlohmann::json& j, const AttackConfig& config) {
  j = nlohmann::json{{"epsilon", config.epsilon},
                     {"num_shapes", config.num_shapes},
                     {"kind", to_string(config.kind)},
                     {"beta", config.beta},
                     {"b", config.b},
                     {"n_p", config.n_p},
                     {"budget", config.budget},
                     {"target_class", config.target_class},
                     {"seed", config.seed},
                     {"skip_noop_children", config.skip_noop_children}};
}

inline void from_json(const nlohmann::json& j, AttackConfig& config) {
  config.epsilon = j.at("epsilon").get<double>();
  config.num_shapes = j.at("num_shapes").get<int>();
  config.kind = parse_shape_kind(j.at("kind").get<std::string>());
  config.beta = j.at("beta").get<double>();
  config.b = j.at("b").get<double>();
  config.n_p = j.at("n_p").get<int>();
  config.budget = j.at("budget").get<int>();
  config.target_class = j.at("target_class").get<int>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.skip_noop_children = j.at("skip_noop_children").get<bool>();
}

inline void to_json(nlohmann::json& j, const AttackRecord& record) {
  j = nlohmann::json{{"success_targeted", record.success_targeted()},
                     {"success_untargeted", record.success_untargeted()},
                     {"queries_used", record.queries_used()},
                     {"loss_trajectory", record.loss_trajectory()},
                     {"final_genome", record.final_genome()},
                     {"final_image", record.final_image()},
                     {"seed", record.seed()},
                     {"config", record.config()}};
}

inline void from_json(const nlohmann::json& j, AttackRecord& record) {
  record = AttackRecord(j.at("success_targeted").get<bool>(),
                        j.at("success_untargeted").get<bool>(),
                        j.at("queries_used").get<int>(),
                        j.at("loss_trajectory").get<std::vector<double>>(),
                        j.at("final_genome").get<Genome>(),
                        j.at("final_image").get<Image>(),
                        j.at("seed").get<std::uint64_t>(),
                        j.at("config").get<AttackConfig>());
}

} // namespace evoshape
