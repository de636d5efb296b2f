// Copyright 2026 The Smart Journey Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "smartjourney/train_config.hpp"

#include <nlohmann/json.hpp>

#include "smartjourney/error.hpp"

namespace smartjourney {

using nlohmann::json;

json train_config_to_json(const TrainConfig& c) {
  json j;
  j["model_type"] = std::string(model_type_name(c.model_type));
  j["district"] = c.district;
  j["seed"] = c.seed;
  j["batch_size"] = c.batch_size;
  j["optimizer"] = {{"learning_rate", c.optimizer.learning_rate}, {"momentum", c.optimizer.momentum}};
  j["schedule"] = {{"lr_decay_factor", c.schedule.lr_decay_factor},
                   {"lr_decay_every", c.schedule.lr_decay_every},
                   {"early_stop_patience", c.schedule.early_stop_patience},
                   {"max_epochs", c.schedule.max_epochs}};
  j["boosting"] = {{"max_depth", c.boosting.max_depth},
                   {"min_child_weight", c.boosting.min_child_weight},
                   {"eta", c.boosting.eta},
                   {"subsample", c.boosting.subsample},
                   {"num_rounds", c.boosting.num_rounds},
                   {"early_stop_rounds", c.boosting.early_stop_rounds},
                   {"lambda", c.boosting.lambda}};
  j["lstm"] = {{"window", c.lstm.window},         {"features", c.lstm.features},
               {"conv_filters", c.lstm.conv_filters}, {"hidden1", c.lstm.hidden1},
               {"hidden2", c.lstm.hidden2},       {"head1", c.lstm.head1},
               {"head2", c.lstm.head2},           {"l2_lambda", c.lstm.l2_lambda}};
  j["transformer"] = {{"window", c.transformer.window},
                      {"features", c.transformer.features},
                      {"d_model", c.transformer.d_model},
                      {"heads", c.transformer.heads},
                      {"ffn_hidden", c.transformer.ffn_hidden},
                      {"head1", c.transformer.head1},
                      {"head2", c.transformer.head2},
                      {"l2_lambda", c.transformer.l2_lambda},
                      {"positional_encoding", c.transformer.positional_encoding}};
  j["dataset"] = {{"window", c.dataset.window},
                  {"train_fraction", c.dataset.fractions.train},
                  {"validation_fraction", c.dataset.fractions.validation},
                  {"test_fraction", c.dataset.fractions.test}};
  j["mape_floor"] = c.mape_floor;
  return j;
}

TrainConfig train_config_from_json(const json& j) {
  try {
    TrainConfig c;
    const auto type = parse_model_type(j.at("model_type").get<std::string>());
    if (!type) throw Error(ErrorCode::kUnknownModel, "unknown model_type in train_config");
    c.model_type = *type;
    c.district = j.at("district").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.batch_size = j.at("batch_size").get<std::size_t>();

    const json& o = j.at("optimizer");
    c.optimizer = {o.at("learning_rate").get<double>(), o.at("momentum").get<double>()};

    const json& s = j.at("schedule");
    s.at("lr_decay_factor").get_to(c.schedule.lr_decay_factor);
    s.at("lr_decay_every").get_to(c.schedule.lr_decay_every);
    s.at("early_stop_patience").get_to(c.schedule.early_stop_patience);
    s.at("max_epochs").get_to(c.schedule.max_epochs);

    const json& b = j.at("boosting");
    b.at("max_depth").get_to(c.boosting.max_depth);
    b.at("min_child_weight").get_to(c.boosting.min_child_weight);
    b.at("eta").get_to(c.boosting.eta);
    b.at("subsample").get_to(c.boosting.subsample);
    b.at("num_rounds").get_to(c.boosting.num_rounds);
    b.at("early_stop_rounds").get_to(c.boosting.early_stop_rounds);
    b.at("lambda").get_to(c.boosting.lambda);

    const json& l = j.at("lstm");
    l.at("window").get_to(c.lstm.window);
    l.at("features").get_to(c.lstm.features);
    l.at("conv_filters").get_to(c.lstm.conv_filters);
    l.at("hidden1").get_to(c.lstm.hidden1);
    l.at("hidden2").get_to(c.lstm.hidden2);
    l.at("head1").get_to(c.lstm.head1);
    l.at("head2").get_to(c.lstm.head2);
    l.at("l2_lambda").get_to(c.lstm.l2_lambda);

    const json& t = j.at("transformer");
    t.at("window").get_to(c.transformer.window);
    t.at("features").get_to(c.transformer.features);
    t.at("d_model").get_to(c.transformer.d_model);
    t.at("heads").get_to(c.transformer.heads);
    t.at("ffn_hidden").get_to(c.transformer.ffn_hidden);
    t.at("head1").get_to(c.transformer.head1);
    t.at("head2").get_to(c.transformer.head2);
    t.at("l2_lambda").get_to(c.transformer.l2_lambda);
    t.at("positional_encoding").get_to(c.transformer.positional_encoding);

    const json& d = j.at("dataset");
    d.at("window").get_to(c.dataset.window);
    d.at("train_fraction").get_to(c.dataset.fractions.train);
    d.at("validation_fraction").get_to(c.dataset.fractions.validation);
    d.at("test_fraction").get_to(c.dataset.fractions.test);

    j.at("mape_floor").get_to(c.mape_floor);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("bad train_config: ") + e.what());
  }
}

}  // namespace smartjourney
