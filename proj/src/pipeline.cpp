#include "bcpr/pipeline.hpp"

#include <algorithm>
#include <limits>

#include "bcpr/csv.hpp"
#include "bcpr/error.hpp"
#include "bcpr/features.hpp"
#include "bcpr/synth.hpp"

namespace bcpr {

std::string_view to_string(TrainerKind kind) noexcept {
  switch (kind) {
    case TrainerKind::Svm: return "svm";
    case TrainerKind::Mlp: return "mlp";
    case TrainerKind::Perceptron: return "perceptron";
  }
  return "unknown";
}

TrainerKind trainer_kind_from_string(std::string_view name) {
  if (name == "svm") return TrainerKind::Svm;
  if (name == "mlp") return TrainerKind::Mlp;
  if (name == "perceptron") return TrainerKind::Perceptron;
  fail(ErrorCode::InvalidArgument, "unknown trainer '" + std::string(name) + "'");
}

std::string_view to_string(DataKind kind) noexcept {
  switch (kind) {
    case DataKind::Linear: return "linear";
    case DataKind::Poly: return "poly";
    case DataKind::Csv: return "csv";
  }
  return "unknown";
}

void TrainerConfig::validate() const {
  switch (kind) {
    case TrainerKind::Svm: svm.validate(); break;
    case TrainerKind::Mlp: mlp.validate(); break;
    case TrainerKind::Perceptron: perceptron.validate(); break;
  }
}

void TrainerConfig::reseed(std::uint64_t seed) {
  svm.seed = seed;
  mlp.seed = seed;
  perceptron.seed = seed;
}

Model train_model(const Dataset& d, const TrainerConfig& cfg) {
  switch (cfg.kind) {
    case TrainerKind::Svm: return svm_train(d, cfg.svm);
    case TrainerKind::Mlp: return mlp_train(d, cfg.mlp);
    case TrainerKind::Perceptron: return perceptron_train(d, cfg.perceptron).hyperplane;
  }
  fail(ErrorCode::InvalidArgument, "unknown trainer");
}

void FeatureStage::validate() const {
  if (kind == FeatureStageKind::Rff) {
    require(rff_components >= 1, ErrorCode::InvalidArgument, "rff components must be >= 1");
    if (rff_gamma) require(*rff_gamma > 0.0, ErrorCode::InvalidGamma, "rff gamma must be positive");
  }
  if (kind == FeatureStageKind::Poly) {
    require(poly_degree >= 1, ErrorCode::InvalidArgument, "poly degree must be >= 1");
  }
}

Dataset apply_feature_stage(const Dataset& d, const FeatureStage& stage) {
  stage.validate();
  switch (stage.kind) {
    case FeatureStageKind::None: return d;
    case FeatureStageKind::Rff: {
      const double gamma = stage.rff_gamma.value_or(1.0 / static_cast<double>(d.cols()));
      const auto params = rff_fit<double>(d.cols(), stage.rff_components, gamma, stage.rff_seed);
      return d.with_samples(rff_transform(params, d.samples()));
    }
    case FeatureStageKind::Poly:
      return d.with_samples(poly_expand(d.samples(), monomial_basis(d.cols(), stage.poly_degree)));
  }
  return d;
}

void PipelineConfig::validate() const {
  bcp.validate();
  policy.validate();
  trainer.validate();
  features.validate();
  require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::InvalidArgument, "test_fraction must lie in (0, 1)");
}

bool same_metrics(const EvalReport& a, const EvalReport& b) noexcept {
  return a.accuracy == b.accuracy && a.auc == b.auc && a.tp == b.tp && a.fp == b.fp && a.tn == b.tn && a.fn == b.fn;
}

PipelineReport run_pipeline(const Dataset& input, const PipelineConfig& cfg) {
  cfg.validate();
  const Dataset d = apply_feature_stage(input, cfg.features);
  const Split split = split_dataset(d, cfg.test_fraction, cfg.split_seed);
  const Dataset train = d.subset(split.train);
  const Dataset test = d.subset(split.test);

  PipelineReport report{.metrics_pipeline = {},
                        .metrics_baseline = {},
                        .timings = {},
                        .subset_size = 0,
                        .n_train = train.rows(),
                        .n_test = test.rows(),
                        .bcp_errors = 0,
                        .bcp_iterations = 0,
                        .split = split,
                        .selection = {},
                        .model_pipeline = Hyperplane{},
                        .model_baseline = Hyperplane{},
                        .config = cfg};

  auto bcp = time_block([&] { return bcp_train(train, cfg.bcp); });
  report.timings.bcp_s = bcp.seconds;
  report.bcp_errors = bcp.value.best_error_count;
  report.bcp_iterations = bcp.value.iterations_run;

  auto selection = time_block([&] { return extract_subset(train, bcp.value.best_hyperplane, cfg.policy); });
  report.timings.reduce_s = selection.seconds;
  report.selection = std::move(selection.value);
  report.subset_size = report.selection.size();
  require(report.selection.n_positive > 0 && report.selection.n_negative > 0, ErrorCode::SubsetSingleClass,
          "reduced training set holds a single class");

  const Dataset reduced = train.subset(report.selection.indices);
  auto reduced_model = time_block([&] { return train_model(reduced, cfg.trainer); });
  report.timings.train_reduced_s = reduced_model.seconds;
  report.model_pipeline = std::move(reduced_model.value);

  auto full_model = time_block([&] { return train_model(train, cfg.trainer); });
  report.timings.train_full_s = full_model.seconds;
  report.model_baseline = std::move(full_model.value);

  report.metrics_pipeline = evaluate(report.model_pipeline, test);
  report.metrics_pipeline.wall_time_seconds = report.timings.pipeline_s();
  report.metrics_baseline = evaluate(report.model_baseline, test);
  report.metrics_baseline.wall_time_seconds = report.timings.train_full_s;
  return report;
}

// ---------------------------------------------------------------- bench

Dataset materialize(const DataSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case DataKind::Linear:
      return gen_linear({.n = spec.n, .p = spec.p, .seed = seed, .margin_gap = spec.margin_gap}).dataset;
    case DataKind::Poly:
      return gen_poly({.n = spec.n, .p = spec.p, .seed = seed, .degree = spec.degree, .margin_gap = spec.margin_gap})
          .dataset;
    case DataKind::Csv: {
      CsvSchema schema;
      schema.label_column = spec.label_column;
      schema.positive_label = spec.positive_label;
      schema.standardize = spec.standardize;
      return load_csv(spec.path, schema).dataset;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown data kind");
}

namespace {

Stat summarize(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  return s;
}

struct RepeatOutcome {
  PipelineReport report;
  Index n = 0;
  Index p = 0;
};

RepeatOutcome run_repeat(const BenchCell& cell, std::uint64_t seed) {
  if (!cell.config_error.empty()) fail(ErrorCode::InvalidArgument, cell.config_error);
  PipelineConfig cfg = cell.pipeline;
  cfg.split_seed = seed;
  cfg.features.rff_seed = seed;
  cfg.trainer.reseed(seed);
  const Dataset d = materialize(cell.data, seed);
  return {run_pipeline(d, cfg), d.rows(), d.cols()};
}

}  // namespace

BenchResult run_bench(const BenchGrid& grid) {
  require(!grid.cells.empty(), ErrorCode::InvalidArgument, "bench grid has no cells");
  BenchResult result;
  for (const auto& cell : grid.cells) {
    CellSummary summary;
    summary.cell_id = cell.id;
    std::vector<double> pipeline_s, full_s, acc_p, acc_b;

    if (cell.warmup && cell.repeats >= 1 && cell.config_error.empty()) {
      try {
        (void)run_repeat(cell, cell.base_seed);
      } catch (const std::exception&) {
        // The timed repetition records the failure.
      }
    }

    for (int r = 0; r < cell.repeats; ++r) {
      BenchRow row;
      row.cell_id = cell.id;
      row.repeat = r;
      row.kind = std::string(to_string(cell.data.kind));
      row.n = cell.data.n;
      row.p = cell.data.p;
      row.degree = cell.data.kind == DataKind::Poly ? cell.data.degree : 0;
      row.trainer = std::string(to_string(cell.pipeline.trainer.kind));
      row.keep_fraction = cell.pipeline.policy.keep_fraction;
      try {
        const RepeatOutcome outcome = run_repeat(cell, cell.base_seed + static_cast<std::uint64_t>(r));
        const PipelineReport& rep = outcome.report;
        row.n = outcome.n;
        row.p = outcome.p;
        row.subset_size = rep.subset_size;
        row.timings = rep.timings;
        row.acc_pipeline = rep.metrics_pipeline.accuracy;
        row.acc_baseline = rep.metrics_baseline.accuracy;
        row.auc_pipeline = rep.metrics_pipeline.auc;
        row.auc_baseline = rep.metrics_baseline.auc;
        pipeline_s.push_back(rep.timings.pipeline_s());
        full_s.push_back(rep.timings.train_full_s);
        acc_p.push_back(row.acc_pipeline);
        acc_b.push_back(row.acc_baseline);
        ++summary.ok_rows;
      } catch (const std::exception& e) {
        row.error = e.what();
        ++summary.failed_rows;
      }
      result.rows.push_back(std::move(row));
    }
    summary.pipeline_s = summarize(pipeline_s);
    summary.train_full_s = summarize(full_s);
    summary.acc_pipeline = summarize(acc_p);
    summary.acc_baseline = summarize(acc_b);
    result.summary.push_back(std::move(summary));
  }
  return result;
}

}  // namespace bcpr
