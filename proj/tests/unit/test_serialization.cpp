#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>

#include "bcpr/rng.hpp"
#include "bcpr/serialization.hpp"

using namespace bcpr;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Io;
}

struct TempDir {
  std::filesystem::path path = std::filesystem::temp_directory_path() / "bcpr_serialization_test";
  TempDir() { std::filesystem::create_directories(path); }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("hyperplane files round trip exactly") {
  TempDir tmp;
  Rng rng(1);
  Eigen::VectorXd w(6);
  for (Index k = 0; k < 6; ++k) w[k] = rng.normal() * std::pow(10.0, static_cast<double>(k) * 37 - 100);
  w[5] = std::numeric_limits<double>::denorm_min();
  const Hyperplane h{w, 0.1 + 0.2};
  save_model(tmp.path / "h.json", h, Json{{"note", "x"}});
  const Model back = load_model(tmp.path / "h.json");
  REQUIRE(std::holds_alternative<Hyperplane>(back));
  CHECK(std::get<Hyperplane>(back).w == h.w);
  CHECK(std::get<Hyperplane>(back).theta == h.theta);
  const Json j = read_json_file(tmp.path / "h.json");
  CHECK(j.at("kind") == "hyperplane");
  CHECK(j.at("meta").at("note") == "x");
}

TEST_CASE("mlp files round trip exactly") {
  TempDir tmp;
  MlpModel m = mlp_init(3, MlpConfig{.hidden_units = 4, .seed = 7});
  m.b1 << 0.1, -0.2, 1e-300, 3;
  m.b2 = -1.0 / 3.0;
  save_model(tmp.path / "m.json", m);
  const Model back = load_model(tmp.path / "m.json");
  REQUIRE(std::holds_alternative<MlpModel>(back));
  const auto& b = std::get<MlpModel>(back);
  CHECK(b.w1 == m.w1);
  CHECK(b.b1 == m.b1);
  CHECK(b.w2 == m.w2);
  CHECK(b.b2 == m.b2);
  const Json j = to_json(Model{m});
  CHECK(j.at("w1").size() == 4);
  CHECK(j.at("w1")[0].size() == 3);
}

TEST_CASE("damaged model files are rejected") {
  TempDir tmp;
  const Hyperplane h{Eigen::Vector3d(1, 2, 3), 0.5};
  save_model(tmp.path / "h.json", h);
  std::ifstream in(tmp.path / "h.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  {
    std::ofstream out(tmp.path / "cut.json");
    out << text.substr(0, text.size() / 2);
  }
  CHECK(code_of([&] { load_model(tmp.path / "cut.json"); }) == ErrorCode::SchemaViolation);

  Json j = to_json(Model{h});
  j["version"] = 99;
  CHECK(code_of([&] { model_from_json(j); }) == ErrorCode::VersionMismatch);
  j = to_json(Model{h});
  j["kind"] = "forest";
  CHECK(code_of([&] { model_from_json(j); }) == ErrorCode::SchemaViolation);
  j = to_json(Model{h});
  j.erase("theta");
  CHECK(code_of([&] { model_from_json(j); }) == ErrorCode::SchemaViolation);
  j = to_json(Model{mlp_init(3, MlpConfig{.hidden_units = 4})});
  j["w2"] = Json::array({1.0, 2.0});
  CHECK(code_of([&] { model_from_json(j); }) == ErrorCode::SchemaViolation);
  CHECK(code_of([&] { load_model(tmp.path / "missing.json"); }) == ErrorCode::Io);
}

TEST_CASE("a loaded model still guards its input width") {
  Eigen::VectorXd w = Eigen::VectorXd::Ones(10);
  const Model back = model_from_json(to_json(Model{Hyperplane{w, 0.0}}));
  try {
    model_decision(back, RowMatrix<double>::Zero(4, 9));
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("config readers apply defaults and reject unknown keys") {
  const BcpConfig bcp = bcp_config_from_json(Json{{"max_iters", 42}, {"increment_mode", "literal"}});
  CHECK(bcp.max_iters == 42);
  CHECK(bcp.increment_mode == IncrementMode::Literal);
  CHECK(bcp.clamp_high == BcpConfig{}.clamp_high);
  CHECK(code_of([] { bcp_config_from_json(Json{{"max_iter", 5}}); }) == ErrorCode::SchemaViolation);
  CHECK(code_of([] { bcp_config_from_json(Json{{"increment_mode", "odd"}}); }) == ErrorCode::SchemaViolation);

  const ReductionPolicy pol = policy_from_json(Json{{"band_width", 0.5}, {"min_per_class", 0}});
  CHECK(pol.band_width == 0.5);
  CHECK(pol.min_per_class == 0);

  const TrainerConfig tc = trainer_config_from_json(Json{{"algo", "mlp"}, {"mlp", {{"hidden_units", 3}}}});
  CHECK(tc.kind == TrainerKind::Mlp);
  CHECK(tc.mlp.hidden_units == 3);
  CHECK(tc.mlp.learning_rate == MlpConfig{}.learning_rate);
  CHECK_THROWS_AS(trainer_config_from_json(Json{{"algo", "forest"}}), Error);

  const PipelineConfig pc = pipeline_config_from_json(Json{{"features", {{"kind", "rff"}, {"components", 64}}},
                                                          {"test_fraction", 0.3}});
  CHECK(pc.features.kind == FeatureStageKind::Rff);
  CHECK(pc.features.rff_components == 64);
  CHECK(pc.test_fraction == 0.3);
  // Writing and reading back gives the same JSON.
  CHECK(to_json(pipeline_config_from_json(to_json(pc))) == to_json(pc));

  const CsvSchema schema = schema_from_json(Json{{"label_column", "y"}, {"categorical_columns", {"a", "b"}}});
  CHECK(schema.label_column == "y");
  CHECK(schema.categorical_columns == std::vector<std::string>{"a", "b"});
  CHECK(code_of([] { schema_from_json(Json{{"labels", "y"}}); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("bench grid reader isolates bad cells") {
  const Json j = Json::parse(R"({"cells": [
      {"id": "ok", "data": {"kind": "linear", "n": 100, "p": 3}, "repeats": 2},
      {"id": "bad", "data": {"kind": "weird"}},
      {"data": {"kind": "poly", "degree": 2}, "pipeline": {"trainer": {"algo": "perceptron"}}}]})");
  const BenchGrid grid = bench_grid_from_json(j);
  REQUIRE(grid.cells.size() == 3);
  CHECK(grid.cells[0].config_error.empty());
  CHECK(grid.cells[0].repeats == 2);
  CHECK(grid.cells[0].data.n == 100);
  CHECK_FALSE(grid.cells[1].config_error.empty());
  CHECK(grid.cells[2].id == "cell2");
  CHECK(grid.cells[2].pipeline.trainer.kind == TrainerKind::Perceptron);
  CHECK(code_of([] { bench_grid_from_json(Json{{"cells", Json::array()}}); }) == ErrorCode::SchemaViolation);
  CHECK(code_of([] { bench_grid_from_json(Json{{"cells", {{{"idd", "x"}}}}}); }) == ErrorCode::SchemaViolation);
}

TEST_CASE("bench report columns are fixed") {
  CHECK(bench_csv_columns() ==
        std::vector<std::string>{"cell_id", "repeat", "kind", "n", "p", "degree", "trainer", "keep_fraction",
                                 "subset_size", "bcp_s", "reduce_s", "train_reduced_s", "train_full_s",
                                 "acc_pipeline", "acc_baseline", "auc_pipeline", "auc_baseline", "error"});
  BenchResult r;
  BenchRow ok;
  ok.cell_id = "a";
  ok.acc_pipeline = 0.9;
  ok.auc_pipeline = 0.95;
  BenchRow bad;
  bad.cell_id = "b";
  bad.error = "boom, with comma";
  r.rows = {ok, bad};
  const CsvTable t = bench_rows_to_table(r);
  CHECK(t.header == bench_csv_columns());
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][13] == "0.90000000000000002");
  CHECK(t.rows[0][15] == "0.94999999999999996");
  CHECK(t.rows[0][16].empty());
  CHECK(t.rows[1][17] == "boom, with comma");
  const Json j = to_json(r);
  CHECK(j.at("rows").size() == 2);
}
