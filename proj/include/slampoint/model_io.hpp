#pragma once

// Fitted-model container and its versioned JSON file format: family tag,
// hyperparameters, the fitted feature schema, the training match ids (the
// leakage guard), and the family-specific parameters.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "slampoint/featureset.hpp"
#include "slampoint/models.hpp"

namespace slampoint::models {

struct TrainedModel {
    Family family = Family::Baseline;
    std::variant<BaselineModel, LinearModel, ForestModel, AdaBoostModel, GbtModel> model;
    featureset::FeatureSchema schema;  // fitted on the training rows only
    Hyperparams hyperparams;
    std::vector<std::string> training_match_ids;  // sorted
    std::uint64_t seed = 0;
    int serve = 1;  // serve subset the model was trained on

    std::uint64_t schema_fingerprint() const { return schema.fingerprint(); }
    double predict_one(const std::vector<double>& x) const;
};

// Throws SchemaMismatch when a row's width differs from the schema width.
std::vector<double> predict_proba(const TrainedModel& model, const Matrix& X);
std::vector<int> predict_label(const TrainedModel& model, const Matrix& X,
                               double threshold = 0.5);

std::string serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::string& text);

void write_model_file(const std::string& path, const TrainedModel& model);
TrainedModel load_model_file(const std::string& path);

}  // namespace slampoint::models
