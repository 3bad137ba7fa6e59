#pragma once

// The reduce-then-train pipeline and the benchmark grid built on it.
//
//   split -> BCP on the training side -> keep instances near the hyperplane
//         -> train on the kept subset, and separately on the whole training side
//         -> evaluate both models on the same untouched test side

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcpr/bcp.hpp"
#include "bcpr/dataset.hpp"
#include "bcpr/metrics.hpp"
#include "bcpr/reduce.hpp"
#include "bcpr/trainers.hpp"

namespace bcpr {

enum class TrainerKind { Svm, Mlp, Perceptron };

std::string_view to_string(TrainerKind kind) noexcept;
TrainerKind trainer_kind_from_string(std::string_view name);

struct TrainerConfig {
  TrainerKind kind = TrainerKind::Svm;
  SvmConfig svm;
  MlpConfig mlp;
  PerceptronConfig perceptron;

  void validate() const;
  void reseed(std::uint64_t seed);
};

Model train_model(const Dataset& d, const TrainerConfig& cfg);

enum class FeatureStageKind { None, Rff, Poly };

struct FeatureStage {
  FeatureStageKind kind = FeatureStageKind::None;
  Index rff_components = 1000;
  std::optional<double> rff_gamma;  // 1 / p when unset
  std::uint64_t rff_seed = 0;
  int poly_degree = 3;

  void validate() const;
};

/// Applies the feature stage to every row of `d`.
Dataset apply_feature_stage(const Dataset& d, const FeatureStage& stage);

struct PipelineConfig {
  BcpConfig bcp;
  ReductionPolicy policy;
  TrainerConfig trainer;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 0;
  FeatureStage features;

  void validate() const;
};

struct PipelineTimings {
  double bcp_s = 0.0;
  double reduce_s = 0.0;
  double train_reduced_s = 0.0;
  double train_full_s = 0.0;

  double pipeline_s() const noexcept { return bcp_s + reduce_s + train_reduced_s; }
};

struct PipelineReport {
  EvalReport metrics_pipeline;  // wall_time_seconds = bcp + reduce + reduced training
  EvalReport metrics_baseline;  // wall_time_seconds = full training
  PipelineTimings timings;
  Index subset_size = 0;
  Index n_train = 0;
  Index n_test = 0;
  Index bcp_errors = 0;
  int bcp_iterations = 0;
  Split split;
  SubsetSelection selection;  // indices into the training side
  Model model_pipeline;
  Model model_baseline;
  PipelineConfig config;
};

/// Metric fields only; timings are not compared.
bool same_metrics(const EvalReport& a, const EvalReport& b) noexcept;

PipelineReport run_pipeline(const Dataset& d, const PipelineConfig& cfg);

// ---------------------------------------------------------------- bench

enum class DataKind { Linear, Poly, Csv };

std::string_view to_string(DataKind kind) noexcept;

struct DataSpec {
  DataKind kind = DataKind::Linear;
  Index n = 1000;
  Index p = 10;
  int degree = 3;
  double margin_gap = 0.0;
  std::string path;          // csv only
  std::string label_column = "label";
  std::string positive_label = "1";
  bool standardize = false;
};

struct BenchCell {
  std::string id;
  DataSpec data;
  PipelineConfig pipeline;
  int repeats = 1;
  std::uint64_t base_seed = 0;
  bool warmup = true;  // one discarded repetition before the timed ones
  std::string config_error;  // set when the cell's configuration could not be read
};

struct BenchGrid {
  std::vector<BenchCell> cells;
};

struct BenchRow {
  std::string cell_id;
  int repeat = 0;
  std::string kind;
  Index n = 0;
  Index p = 0;
  int degree = 0;
  std::string trainer;
  double keep_fraction = 0.0;
  Index subset_size = 0;
  PipelineTimings timings;
  double acc_pipeline = 0.0;
  double acc_baseline = 0.0;
  std::optional<double> auc_pipeline;
  std::optional<double> auc_baseline;
  std::string error;  // empty on success

  bool ok() const noexcept { return error.empty(); }
};

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct CellSummary {
  std::string cell_id;
  int ok_rows = 0;
  int failed_rows = 0;
  Stat pipeline_s;
  Stat train_full_s;
  Stat acc_pipeline;
  Stat acc_baseline;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<CellSummary> summary;
};

/// Dataset for one repetition of a cell; synthetic kinds use `seed`.
Dataset materialize(const DataSpec& spec, std::uint64_t seed);

/// Cells run one after another; repetition r uses seed base_seed + r for data,
/// split, feature stage and trainer. A failing repetition is recorded in its row.
BenchResult run_bench(const BenchGrid& grid);

}  // namespace bcpr
