#pragma once

// JSON forms of models, configs, encodings and reports.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bcpr/csv.hpp"
#include "bcpr/pipeline.hpp"
#include "bcpr/synth.hpp"
#include "bcpr/trainers.hpp"

namespace bcpr {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

Json to_json(const Model& model, const Json& meta = Json::object());
Model model_from_json(const Json& j);

void save_model(const std::filesystem::path& path, const Model& model, const Json& meta = Json::object());
Model load_model(const std::filesystem::path& path);

Json teacher_to_json(const SynthResult& result, const Json& spec);

Json to_json(const EncodingMap& map);
EncodingMap encoding_from_json(const Json& j);

Json to_json(const BcpConfig& cfg);
Json to_json(const ReductionPolicy& policy);
Json to_json(const TrainerConfig& cfg);
Json to_json(const FeatureStage& stage);
Json to_json(const PipelineConfig& cfg);
Json to_json(const EvalReport& report);

BcpConfig bcp_config_from_json(const Json& j);
ReductionPolicy policy_from_json(const Json& j);
SvmConfig svm_config_from_json(const Json& j);
MlpConfig mlp_config_from_json(const Json& j);
PerceptronConfig perceptron_config_from_json(const Json& j);
TrainerConfig trainer_config_from_json(const Json& j);
FeatureStage feature_stage_from_json(const Json& j);
PipelineConfig pipeline_config_from_json(const Json& j);
CsvSchema schema_from_json(const Json& j);
DataSpec data_spec_from_json(const Json& j);
BenchGrid bench_grid_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Fixed-order report columns shared by the CSV writer and its readers.
const std::vector<std::string>& bench_csv_columns();
CsvTable bench_rows_to_table(const BenchResult& result);
Json to_json(const BenchResult& result);

}  // namespace bcpr
