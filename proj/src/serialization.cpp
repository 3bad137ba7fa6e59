#include "bcpr/serialization.hpp"

#include <fstream>
#include <sstream>
#include <initializer_list>
#include <set>

#include "bcpr/error.hpp"

namespace bcpr {

namespace {

void expect_object(const Json& j, const char* what) {
  require(j.is_object(), ErrorCode::SchemaViolation, std::string(what) + " must be a JSON object");
}

void allow_keys(const Json& j, const char* what, std::initializer_list<std::string_view> keys) {
  expect_object(j, what);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || k == key;
    require(known, ErrorCode::SchemaViolation, std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::SchemaViolation, std::string("key '") + key + "': " + e.what());
  }
}

double finite_number(const Json& j, const std::string& where) {
  require(j.is_number(), ErrorCode::SchemaViolation, where + " must be a number");
  const double v = j.get<double>();
  require(std::isfinite(v), ErrorCode::SchemaViolation, where + " must be finite");
  return v;
}

Eigen::VectorXd vector_from(const Json& j, const std::string& where) {
  require(j.is_array(), ErrorCode::SchemaViolation, where + " must be an array");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Index>(k)] = finite_number(j[k], where);
  return v;
}

Json array_of(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

const Json& member(const Json& j, const char* key) {
  require(j.contains(key), ErrorCode::SchemaViolation, std::string("missing key '") + key + "'");
  return j.at(key);
}

void check_version(const Json& j) {
  if (!j.contains("version")) return;
  require(j.at("version").is_number_integer(), ErrorCode::SchemaViolation, "version must be an integer");
  const int v = j.at("version").get<int>();
  require(v == kFormatVersion, ErrorCode::VersionMismatch,
          "file version " + std::to_string(v) + ", supported " + std::to_string(kFormatVersion));
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

// ---------------------------------------------------------------- models

Json to_json(const Model& model, const Json& meta) {
  if (const auto* h = std::get_if<Hyperplane>(&model)) {
    return Json{{"kind", "hyperplane"}, {"version", kFormatVersion}, {"w", array_of(h->w)}, {"theta", h->theta},
                {"meta", meta}};
  }
  const auto& m = std::get<MlpModel>(model);
  Json w1 = Json::array();
  for (Index r = 0; r < m.w1.rows(); ++r) w1.push_back(array_of(m.w1.row(r).transpose()));
  return Json{{"kind", "mlp"}, {"version", kFormatVersion}, {"w1", w1},       {"b1", array_of(m.b1)},
              {"w2", array_of(m.w2)}, {"b2", m.b2},           {"meta", meta}};
}

Model model_from_json(const Json& j) {
  expect_object(j, "model");
  check_version(j);
  const Json& kind = member(j, "kind");
  require(kind.is_string(), ErrorCode::SchemaViolation, "kind must be a string");
  if (kind == "hyperplane") {
    Hyperplane h{vector_from(member(j, "w"), "w"), finite_number(member(j, "theta"), "theta")};
    require(h.dim() >= 1, ErrorCode::SchemaViolation, "w is empty");
    return h;
  }
  if (kind == "mlp") {
    const Json& rows = member(j, "w1");
    require(rows.is_array() && !rows.empty(), ErrorCode::SchemaViolation, "w1 must be a non-empty array of rows");
    MlpModel m;
    const Index hidden = static_cast<Index>(rows.size());
    for (Index r = 0; r < hidden; ++r) {
      const Eigen::VectorXd row = vector_from(rows[static_cast<std::size_t>(r)], "w1 row");
      if (r == 0) {
        require(row.size() >= 1, ErrorCode::SchemaViolation, "w1 rows are empty");
        m.w1.resize(hidden, row.size());
      }
      require(row.size() == m.w1.cols(), ErrorCode::SchemaViolation, "w1 rows differ in length");
      m.w1.row(r) = row.transpose();
    }
    m.b1 = vector_from(member(j, "b1"), "b1");
    m.w2 = vector_from(member(j, "w2"), "w2");
    m.b2 = finite_number(member(j, "b2"), "b2");
    require(m.b1.size() == hidden && m.w2.size() == hidden, ErrorCode::SchemaViolation,
            "b1 and w2 must have one entry per hidden unit");
    return m;
  }
  fail(ErrorCode::SchemaViolation, "unknown model kind '" + kind.get<std::string>() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::SchemaViolation, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  require(out.good(), ErrorCode::Io, "write failed for " + path.string());
}

void save_model(const std::filesystem::path& path, const Model& model, const Json& meta) {
  write_json_file(path, to_json(model, meta));
}

Model load_model(const std::filesystem::path& path) { return model_from_json(read_json_file(path)); }

Json teacher_to_json(const SynthResult& result, const Json& spec) {
  return Json{{"kind", "teacher"},
              {"version", kFormatVersion},
              {"rng", "xoshiro256** / splitmix64 seeding / Box-Muller"},
              {"seed", result.teacher.seed},
              {"lifted_dim", result.lifted_dim},
              {"beta", array_of(result.teacher.beta)},
              {"spec", spec}};
}

// ---------------------------------------------------------------- encoding

Json to_json(const EncodingMap& map) {
  Json cols = Json::array();
  for (const auto& c : map.columns) {
    Json col{{"name", c.name}, {"categorical", c.categorical}};
    if (c.categorical) {
      col["categories"] = c.categories;
    } else {
      col["shift"] = c.shift;
      col["scale"] = c.scale;
    }
    cols.push_back(col);
  }
  return Json{{"kind", "encoding"},
              {"version", kFormatVersion},
              {"label_column", map.label_column},
              {"positive_label", map.positive_label},
              {"standardized", map.standardized},
              {"columns", cols}};
}

EncodingMap encoding_from_json(const Json& j) {
  expect_object(j, "encoding");
  check_version(j);
  require(j.value("kind", "") == "encoding", ErrorCode::SchemaViolation, "not an encoding file");
  EncodingMap map;
  map.label_column = get_or<std::string>(j, "label_column", "label");
  map.positive_label = get_or<std::string>(j, "positive_label", "1");
  map.standardized = get_or<bool>(j, "standardized", false);
  const Json& cols = member(j, "columns");
  require(cols.is_array(), ErrorCode::SchemaViolation, "columns must be an array");
  for (const auto& c : cols) {
    ColumnEncoding col;
    col.name = member(c, "name").get<std::string>();
    col.categorical = get_or<bool>(c, "categorical", false);
    if (col.categorical) {
      col.categories = member(c, "categories").get<std::vector<std::string>>();
    } else {
      col.shift = finite_number(member(c, "shift"), "shift");
      col.scale = finite_number(member(c, "scale"), "scale");
      require(col.scale != 0.0, ErrorCode::SchemaViolation, "scale must be non-zero");
    }
    map.columns.push_back(std::move(col));
  }
  return map;
}

// ---------------------------------------------------------------- configs

Json to_json(const BcpConfig& cfg) {
  return Json{{"max_iters", cfg.max_iters},
              {"increment_mode", cfg.increment_mode == IncrementMode::Clamped ? "clamped" : "literal"},
              {"clamp_low", cfg.clamp_low},
              {"clamp_high", cfg.clamp_high},
              {"target_errors", cfg.target_errors}};
}

Json to_json(const ReductionPolicy& policy) {
  return Json{{"keep_fraction", policy.keep_fraction},
              {"min_per_class", policy.min_per_class},
              {"band_width", optional_number(policy.band_width)}};
}

Json to_json(const TrainerConfig& cfg) {
  return Json{{"algo", std::string(to_string(cfg.kind))},
              {"svm", {{"reg_lambda", cfg.svm.reg_lambda}, {"epochs", cfg.svm.epochs}, {"seed", cfg.svm.seed}}},
              {"mlp",
               {{"hidden_units", cfg.mlp.hidden_units},
                {"learning_rate", cfg.mlp.learning_rate},
                {"epochs", cfg.mlp.epochs},
                {"seed", cfg.mlp.seed},
                {"init_scale", cfg.mlp.init_scale}}},
              {"perceptron",
               {{"max_updates", cfg.perceptron.max_updates},
                {"pocket", cfg.perceptron.pocket},
                {"seed", cfg.perceptron.seed}}}};
}

Json to_json(const FeatureStage& stage) {
  const char* kind = stage.kind == FeatureStageKind::Rff ? "rff" : stage.kind == FeatureStageKind::Poly ? "poly" : "none";
  return Json{{"kind", kind},
              {"components", stage.rff_components},
              {"gamma", optional_number(stage.rff_gamma)},
              {"seed", stage.rff_seed},
              {"degree", stage.poly_degree}};
}

Json to_json(const PipelineConfig& cfg) {
  return Json{{"bcp", to_json(cfg.bcp)},
              {"policy", to_json(cfg.policy)},
              {"trainer", to_json(cfg.trainer)},
              {"test_fraction", cfg.test_fraction},
              {"split_seed", cfg.split_seed},
              {"features", to_json(cfg.features)}};
}

Json to_json(const EvalReport& r) {
  return Json{{"accuracy", r.accuracy}, {"auc", optional_number(r.auc)}, {"tp", r.tp}, {"fp", r.fp},
              {"tn", r.tn},             {"fn", r.fn},                    {"wall_time_seconds", r.wall_time_seconds}};
}

BcpConfig bcp_config_from_json(const Json& j) {
  allow_keys(j, "bcp config", {"max_iters", "increment_mode", "clamp_low", "clamp_high", "target_errors"});
  BcpConfig cfg;
  cfg.max_iters = get_or(j, "max_iters", cfg.max_iters);
  const auto mode = get_or<std::string>(j, "increment_mode", "clamped");
  require(mode == "clamped" || mode == "literal", ErrorCode::SchemaViolation, "increment_mode must be clamped or literal");
  cfg.increment_mode = mode == "clamped" ? IncrementMode::Clamped : IncrementMode::Literal;
  cfg.clamp_low = get_or(j, "clamp_low", cfg.clamp_low);
  cfg.clamp_high = get_or(j, "clamp_high", cfg.clamp_high);
  cfg.target_errors = get_or(j, "target_errors", cfg.target_errors);
  cfg.validate();
  return cfg;
}

ReductionPolicy policy_from_json(const Json& j) {
  allow_keys(j, "reduction policy", {"keep_fraction", "min_per_class", "band_width"});
  ReductionPolicy policy;
  policy.keep_fraction = get_or(j, "keep_fraction", policy.keep_fraction);
  policy.min_per_class = get_or(j, "min_per_class", policy.min_per_class);
  if (j.contains("band_width") && !j.at("band_width").is_null()) policy.band_width = j.at("band_width").get<double>();
  policy.validate();
  return policy;
}

SvmConfig svm_config_from_json(const Json& j) {
  allow_keys(j, "svm config", {"reg_lambda", "epochs", "seed"});
  SvmConfig cfg;
  cfg.reg_lambda = get_or(j, "reg_lambda", cfg.reg_lambda);
  cfg.epochs = get_or(j, "epochs", cfg.epochs);
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

MlpConfig mlp_config_from_json(const Json& j) {
  allow_keys(j, "mlp config", {"hidden_units", "learning_rate", "epochs", "seed", "init_scale"});
  MlpConfig cfg;
  cfg.hidden_units = get_or(j, "hidden_units", cfg.hidden_units);
  cfg.learning_rate = get_or(j, "learning_rate", cfg.learning_rate);
  cfg.epochs = get_or(j, "epochs", cfg.epochs);
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.init_scale = get_or(j, "init_scale", cfg.init_scale);
  cfg.validate();
  return cfg;
}

PerceptronConfig perceptron_config_from_json(const Json& j) {
  allow_keys(j, "perceptron config", {"max_updates", "pocket", "seed"});
  PerceptronConfig cfg;
  cfg.max_updates = get_or(j, "max_updates", cfg.max_updates);
  cfg.pocket = get_or(j, "pocket", cfg.pocket);
  cfg.seed = get_or(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

TrainerConfig trainer_config_from_json(const Json& j) {
  allow_keys(j, "trainer config", {"algo", "svm", "mlp", "perceptron"});
  TrainerConfig cfg;
  cfg.kind = trainer_kind_from_string(get_or<std::string>(j, "algo", "svm"));
  if (j.contains("svm")) cfg.svm = svm_config_from_json(j.at("svm"));
  if (j.contains("mlp")) cfg.mlp = mlp_config_from_json(j.at("mlp"));
  if (j.contains("perceptron")) cfg.perceptron = perceptron_config_from_json(j.at("perceptron"));
  return cfg;
}

FeatureStage feature_stage_from_json(const Json& j) {
  allow_keys(j, "feature stage", {"kind", "components", "gamma", "seed", "degree"});
  FeatureStage stage;
  const auto kind = get_or<std::string>(j, "kind", "none");
  if (kind == "none") {
    stage.kind = FeatureStageKind::None;
  } else if (kind == "rff") {
    stage.kind = FeatureStageKind::Rff;
  } else if (kind == "poly") {
    stage.kind = FeatureStageKind::Poly;
  } else {
    fail(ErrorCode::SchemaViolation, "feature stage kind must be none, rff or poly");
  }
  stage.rff_components = get_or(j, "components", stage.rff_components);
  if (j.contains("gamma") && !j.at("gamma").is_null()) stage.rff_gamma = j.at("gamma").get<double>();
  stage.rff_seed = get_or(j, "seed", stage.rff_seed);
  stage.poly_degree = get_or(j, "degree", stage.poly_degree);
  stage.validate();
  return stage;
}

PipelineConfig pipeline_config_from_json(const Json& j) {
  allow_keys(j, "pipeline config", {"bcp", "policy", "trainer", "test_fraction", "split_seed", "features"});
  PipelineConfig cfg;
  if (j.contains("bcp")) cfg.bcp = bcp_config_from_json(j.at("bcp"));
  if (j.contains("policy")) cfg.policy = policy_from_json(j.at("policy"));
  if (j.contains("trainer")) cfg.trainer = trainer_config_from_json(j.at("trainer"));
  if (j.contains("features")) cfg.features = feature_stage_from_json(j.at("features"));
  cfg.test_fraction = get_or(j, "test_fraction", cfg.test_fraction);
  cfg.split_seed = get_or(j, "split_seed", cfg.split_seed);
  return cfg;
}

CsvSchema schema_from_json(const Json& j) {
  allow_keys(j, "csv schema", {"label_column", "positive_label", "categorical_columns", "standardize"});
  CsvSchema schema;
  schema.label_column = get_or(j, "label_column", schema.label_column);
  schema.positive_label = get_or(j, "positive_label", schema.positive_label);
  if (j.contains("categorical_columns") && !j.at("categorical_columns").is_null()) {
    schema.categorical_columns = j.at("categorical_columns").get<std::vector<std::string>>();
  }
  schema.standardize = get_or(j, "standardize", schema.standardize);
  return schema;
}

DataSpec data_spec_from_json(const Json& j) {
  allow_keys(j, "data spec",
             {"kind", "n", "p", "degree", "margin_gap", "path", "label_column", "positive_label", "standardize"});
  DataSpec spec;
  const auto kind = get_or<std::string>(j, "kind", "linear");
  if (kind == "linear") {
    spec.kind = DataKind::Linear;
  } else if (kind == "poly") {
    spec.kind = DataKind::Poly;
  } else if (kind == "csv") {
    spec.kind = DataKind::Csv;
  } else {
    fail(ErrorCode::SchemaViolation, "data kind must be linear, poly or csv");
  }
  spec.n = get_or(j, "n", spec.n);
  spec.p = get_or(j, "p", spec.p);
  spec.degree = get_or(j, "degree", spec.degree);
  spec.margin_gap = get_or(j, "margin_gap", spec.margin_gap);
  spec.path = get_or(j, "path", spec.path);
  spec.label_column = get_or(j, "label_column", spec.label_column);
  spec.positive_label = get_or(j, "positive_label", spec.positive_label);
  spec.standardize = get_or(j, "standardize", spec.standardize);
  if (spec.kind == DataKind::Csv) require(!spec.path.empty(), ErrorCode::SchemaViolation, "csv data needs a path");
  return spec;
}

BenchGrid bench_grid_from_json(const Json& j) {
  allow_keys(j, "bench config", {"cells"});
  const Json& cells = member(j, "cells");
  require(cells.is_array() && !cells.empty(), ErrorCode::SchemaViolation, "cells must be a non-empty array");
  BenchGrid grid;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Json& c = cells[k];
    allow_keys(c, "bench cell", {"id", "data", "pipeline", "repeats", "base_seed", "warmup"});
    BenchCell cell;
    cell.id = get_or<std::string>(c, "id", "cell" + std::to_string(k));
    // A bad data or pipeline block fails only this cell's rows.
    try {
      cell.data = data_spec_from_json(c.value("data", Json::object()));
      cell.pipeline = pipeline_config_from_json(c.value("pipeline", Json::object()));
    } catch (const Error& e) {
      cell.config_error = e.what();
    }
    cell.repeats = get_or(c, "repeats", cell.repeats);
    cell.base_seed = get_or(c, "base_seed", cell.base_seed);
    cell.warmup = get_or(c, "warmup", cell.warmup);
    require(cell.repeats >= 1, ErrorCode::SchemaViolation, "repeats must be >= 1");
    grid.cells.push_back(std::move(cell));
  }
  return grid;
}

// ---------------------------------------------------------------- reports

const std::vector<std::string>& bench_csv_columns() {
  static const std::vector<std::string> cols{
      "cell_id",         "repeat",       "kind",         "n",           "p",           "degree",
      "trainer",         "keep_fraction", "subset_size", "bcp_s",       "reduce_s",    "train_reduced_s",
      "train_full_s",    "acc_pipeline", "acc_baseline", "auc_pipeline", "auc_baseline", "error"};
  return cols;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

Json stat_json(const Stat& s) { return Json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}}; }

}  // namespace

CsvTable bench_rows_to_table(const BenchResult& result) {
  CsvTable t;
  t.header = bench_csv_columns();
  for (const auto& r : result.rows) {
    const bool ok = r.ok();
    t.rows.push_back({r.cell_id,
                      std::to_string(r.repeat),
                      r.kind,
                      std::to_string(r.n),
                      std::to_string(r.p),
                      std::to_string(r.degree),
                      r.trainer,
                      num(r.keep_fraction),
                      ok ? std::to_string(r.subset_size) : "",
                      ok ? num(r.timings.bcp_s) : "",
                      ok ? num(r.timings.reduce_s) : "",
                      ok ? num(r.timings.train_reduced_s) : "",
                      ok ? num(r.timings.train_full_s) : "",
                      ok ? num(r.acc_pipeline) : "",
                      ok ? num(r.acc_baseline) : "",
                      ok ? opt_num(r.auc_pipeline) : "",
                      ok ? opt_num(r.auc_baseline) : "",
                      r.error});
  }
  return t;
}

Json to_json(const BenchResult& result) {
  Json rows = Json::array();
  for (const auto& r : result.rows) {
    Json row{{"cell_id", r.cell_id}, {"repeat", r.repeat}, {"kind", r.kind},       {"n", r.n},
             {"p", r.p},             {"degree", r.degree}, {"trainer", r.trainer}, {"keep_fraction", r.keep_fraction}};
    if (r.ok()) {
      row["subset_size"] = r.subset_size;
      row["bcp_s"] = r.timings.bcp_s;
      row["reduce_s"] = r.timings.reduce_s;
      row["train_reduced_s"] = r.timings.train_reduced_s;
      row["train_full_s"] = r.timings.train_full_s;
      row["acc_pipeline"] = r.acc_pipeline;
      row["acc_baseline"] = r.acc_baseline;
      row["auc_pipeline"] = optional_number(r.auc_pipeline);
      row["auc_baseline"] = optional_number(r.auc_baseline);
      row["error"] = nullptr;
    } else {
      row["error"] = r.error;
    }
    rows.push_back(row);
  }
  Json summary = Json::array();
  for (const auto& s : result.summary) {
    summary.push_back(Json{{"cell_id", s.cell_id},
                           {"ok_rows", s.ok_rows},
                           {"failed_rows", s.failed_rows},
                           {"pipeline_s", stat_json(s.pipeline_s)},
                           {"train_full_s", stat_json(s.train_full_s)},
                           {"acc_pipeline", stat_json(s.acc_pipeline)},
                           {"acc_baseline", stat_json(s.acc_baseline)}});
  }
  return Json{{"kind", "bench_report"}, {"version", kFormatVersion}, {"rows", rows}, {"summary", summary}};
}

}  // namespace bcpr
