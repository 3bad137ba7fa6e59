// Command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data or model error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bcpr/bcp.hpp"
#include "bcpr/csv.hpp"
#include "bcpr/features.hpp"
#include "bcpr/metrics.hpp"
#include "bcpr/pipeline.hpp"
#include "bcpr/reduce.hpp"
#include "bcpr/serialization.hpp"
#include "bcpr/synth.hpp"

namespace fs = std::filesystem;
using namespace bcpr;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config;
};

void add_common(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--seed", c.seed, "Random seed");
  auto* out = cmd->add_option("--out", c.out, "Output path");
  if (out_required) out->required();
  cmd->add_option("--config", c.config, "JSON configuration file")->check(CLI::ExistingFile);
}

// Config files are objects with optional sections: schema, bcp, policy, trainer, pipeline.
Json load_config(const Common& c) {
  if (c.config.empty()) return Json::object();
  Json j = read_json_file(c.config);
  require(j.is_object(), ErrorCode::SchemaViolation, "config must be a JSON object");
  return j;
}

Json section(const Json& cfg, const char* name) { return cfg.contains(name) ? cfg.at(name) : Json::object(); }

CsvSchema schema_for(const Json& cfg, const std::optional<std::string>& label, const std::optional<std::string>& positive) {
  CsvSchema schema = schema_from_json(section(cfg, "schema"));
  if (label) schema.label_column = *label;
  if (positive) schema.positive_label = *positive;
  return schema;
}

fs::path teacher_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension();
  return fs::path(p.string() + ".teacher.json");
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

// The column `reduce` appends is bookkeeping, never a feature.
CsvTable read_input(const fs::path& path) {
  CsvTable table = read_csv_table(path);
  if (const auto col = table.column("bcp_distance")) {
    const auto at = static_cast<std::ptrdiff_t>(*col);
    table.header.erase(table.header.begin() + at);
    for (auto& row : table.rows) {
      if (row.size() > *col) row.erase(row.begin() + at);
    }
  }
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barycentric-correction training-set reduction toolkit"};
  app.require_subcommand(1);

  // gen
  Common gen_c;
  std::string gen_kind = "linear";
  Index gen_n = 1000;
  Index gen_p = 2;
  int gen_degree = 3;
  double gen_gap = 0.0;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  add_common(gen, gen_c);
  gen->add_option("--kind", gen_kind, "linear or poly")->check(CLI::IsMember({"linear", "poly"}));
  gen->add_option("--n", gen_n, "Instances")->check(CLI::PositiveNumber);
  gen->add_option("--p", gen_p, "Features")->check(CLI::PositiveNumber);
  gen->add_option("--degree", gen_degree, "Polynomial degree (poly)");
  gen->add_option("--margin-gap", gen_gap, "Minimum normalized teacher margin");

  // rff
  Common rff_c;
  std::string rff_input;
  Index rff_components = 1000;
  std::optional<double> rff_gamma;
  std::string rff_label = "label";
  auto* rff = app.add_subcommand("rff", "Random Fourier feature lift of a numeric CSV");
  add_common(rff, rff_c);
  rff->add_option("--input", rff_input, "Input CSV")->required()->check(CLI::ExistingFile);
  rff->add_option("--components", rff_components, "Number of random features")->check(CLI::PositiveNumber);
  rff->add_option("--gamma", rff_gamma, "RBF gamma (default 1/p)");
  rff->add_option("--label", rff_label, "Label column");

  // bcp, reduce, train, eval share input/label options
  std::optional<std::string> label;
  std::optional<std::string> positive;
  const auto add_input = [&](CLI::App* cmd, std::string& input) {
    cmd->add_option("--input", input, "Input CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--label", label, "Label column");
    cmd->add_option("--positive", positive, "Label value mapped to +1");
  };

  Common bcp_c;
  std::string bcp_input;
  auto* bcp = app.add_subcommand("bcp", "Fit a hyperplane with the barycentric correction procedure");
  add_common(bcp, bcp_c);
  add_input(bcp, bcp_input);

  Common red_c;
  std::string red_input;
  std::string red_model;
  std::optional<double> red_fraction;
  auto* red = app.add_subcommand("reduce", "Keep the instances nearest the BCP hyperplane");
  add_common(red, red_c);
  add_input(red, red_input);
  red->add_option("--model", red_model, "Hyperplane model (BCP is run when omitted)")->check(CLI::ExistingFile);
  red->add_option("--keep-fraction", red_fraction, "Fraction of rows to keep");

  Common train_c;
  std::string train_input;
  std::optional<std::string> train_algo;
  auto* train = app.add_subcommand("train", "Train a classifier");
  add_common(train, train_c);
  add_input(train, train_input);
  train->add_option("--algo", train_algo, "svm, mlp or perceptron")->check(CLI::IsMember({"svm", "mlp", "perceptron"}));

  Common eval_c;
  std::string eval_input;
  std::string eval_model;
  auto* eval = app.add_subcommand("eval", "Accuracy and AUC of a model on a CSV");
  add_common(eval, eval_c, false);
  add_input(eval, eval_input);
  eval->add_option("--model", eval_model, "Model JSON")->required()->check(CLI::ExistingFile);

  Common bench_c;
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid");
  bench->add_option("--seed", bench_c.seed, "Override every cell's base seed");
  bench->add_option("--config", bench_c.config, "Grid JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--out-dir", bench_c.out, "Report directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const Json cfg = load_config(gen_c);
      (void)cfg;
      const std::uint64_t seed = gen_c.seed.value_or(0);
      SynthResult result = gen_kind == "linear"
                               ? gen_linear({.n = gen_n, .p = gen_p, .seed = seed, .margin_gap = gen_gap})
                               : gen_poly({.n = gen_n, .p = gen_p, .seed = seed, .degree = gen_degree, .margin_gap = gen_gap});
      ensure_parent(gen_c.out);
      write_csv_file(gen_c.out, dataset_to_table(result.dataset));
      const Json spec{{"kind", gen_kind}, {"n", gen_n}, {"p", gen_p}, {"degree", gen_kind == "poly" ? gen_degree : 1},
                      {"margin_gap", gen_gap}, {"seed", seed}};
      write_json_file(teacher_path(gen_c.out), teacher_to_json(result, spec));
    } else if (*rff) {
      (void)load_config(rff_c);
      const Dataset d = load_numeric_csv(rff_input, rff_label);
      const double gamma = rff_gamma.value_or(1.0 / static_cast<double>(d.cols()));
      const auto params = rff_fit<double>(d.cols(), rff_components, gamma, rff_c.seed.value_or(0));
      std::vector<std::string> names;
      for (Index j = 0; j < rff_components; ++j) names.push_back("z" + std::to_string(j));
      ensure_parent(rff_c.out);
      write_csv_file(rff_c.out, dataset_to_table(d.with_samples(rff_transform(params, d.samples()), names)));
    } else if (*bcp) {
      const Json cfg = load_config(bcp_c);
      const LoadedCsv data = build_dataset(read_input(bcp_input), schema_for(cfg, label, positive));
      const BcpResult result = bcp_train(data.dataset, bcp_config_from_json(section(cfg, "bcp")));
      const Json meta{{"trainer", "bcp"},
                      {"best_error_count", result.best_error_count},
                      {"iterations_run", result.iterations_run},
                      {"converged", result.converged},
                      {"encoding", to_json(data.encoding)}};
      ensure_parent(bcp_c.out);
      save_model(bcp_c.out, result.best_hyperplane, meta);
      std::cout << "errors " << result.best_error_count << " after " << result.iterations_run << " iterations\n";
    } else if (*red) {
      const Json cfg = load_config(red_c);
      const CsvTable table = read_input(red_input);
      const LoadedCsv data = build_dataset(table, schema_for(cfg, label, positive));
      ReductionPolicy policy = policy_from_json(section(cfg, "policy"));
      if (red_fraction) policy.keep_fraction = *red_fraction;
      Hyperplane h;
      if (!red_model.empty()) {
        const Model m = load_model(red_model);
        require(std::holds_alternative<Hyperplane>(m), ErrorCode::SchemaViolation, "reduce needs a hyperplane model");
        h = std::get<Hyperplane>(m);
      } else {
        h = bcp_train(data.dataset, bcp_config_from_json(section(cfg, "bcp"))).best_hyperplane;
      }
      const SubsetSelection sel = extract_subset(data.dataset, h, policy);
      CsvTable out;
      out.header = table.header;
      out.header.push_back("bcp_distance");
      for (std::size_t k = 0; k < sel.indices.size(); ++k) {
        auto row = table.rows[data.source_rows[static_cast<std::size_t>(sel.indices[k])]];
        std::ostringstream dist;
        dist.precision(17);
        dist << sel.distances[k];
        row.push_back(dist.str());
        out.rows.push_back(std::move(row));
      }
      ensure_parent(red_c.out);
      write_csv_file(red_c.out, out);
      std::cout << "kept " << sel.size() << " of " << data.dataset.rows() << " rows\n";
    } else if (*train) {
      const Json cfg = load_config(train_c);
      const LoadedCsv data = build_dataset(read_input(train_input), schema_for(cfg, label, positive));
      TrainerConfig tc = trainer_config_from_json(section(cfg, "trainer"));
      if (train_algo) tc.kind = trainer_kind_from_string(*train_algo);
      if (train_c.seed) tc.reseed(*train_c.seed);
      const Model model = train_model(data.dataset, tc);
      ensure_parent(train_c.out);
      save_model(train_c.out, model,
                 Json{{"trainer", to_json(tc)}, {"encoding", to_json(data.encoding)}});
    } else if (*eval) {
      const Json cfg = load_config(eval_c);
      const Json model_json = read_json_file(eval_model);
      const Model model = model_from_json(model_json);
      const CsvTable table = read_input(eval_input);
      Dataset d = model_json.contains("meta") && model_json.at("meta").contains("encoding")
                      ? encode_dataset(encoding_from_json(model_json.at("meta").at("encoding")), table)
                      : build_dataset(table, schema_for(cfg, label, positive)).dataset;
      auto timed = time_block([&] { return evaluate(model, d); });
      timed.value.wall_time_seconds = timed.seconds;
      const Json report = to_json(timed.value);
      if (eval_c.out.empty()) {
        std::cout << report.dump(2) << '\n';
      } else {
        ensure_parent(eval_c.out);
        write_json_file(eval_c.out, report);
      }
    } else if (*bench) {
      BenchGrid grid = bench_grid_from_json(read_json_file(bench_c.config));
      if (bench_c.seed) {
        for (auto& cell : grid.cells) cell.base_seed = *bench_c.seed;
      }
      const BenchResult result = run_bench(grid);
      fs::create_directories(bench_c.out);
      write_csv_file(fs::path(bench_c.out) / "bench.csv", bench_rows_to_table(result));
      write_json_file(fs::path(bench_c.out) / "bench.json", to_json(result));
      for (const auto& s : result.summary) {
        std::cout << s.cell_id << ": ok " << s.ok_rows << ", failed " << s.failed_rows << ", pipeline "
                  << s.pipeline_s.mean << " s, full " << s.train_full_s.mean << " s, acc " << s.acc_pipeline.mean
                  << " vs " << s.acc_baseline.mean << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
