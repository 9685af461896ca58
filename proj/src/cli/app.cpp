#include "padkit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/provenance.hpp"
#include "padkit/det_plot.hpp"
#include "padkit/embeddings.hpp"
#include "padkit/error.hpp"
#include "padkit/manifest.hpp"
#include "padkit/metrics.hpp"
#include "padkit/report.hpp"
#include "padkit/scores.hpp"
#include "padkit/trainer.hpp"
#include "padkit/version.hpp"

namespace padkit {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using cli::RunRecord;
using cli::write_run_record;

struct GlobalArgs {
  std::string config;
  std::string run_record;
};

struct SummarizeArgs {
  std::string manifest;
  std::string format = "text";
  std::string out;
};

struct TrainArgs {
  std::string manifest;
  std::string embeddings;
  std::string out;
  std::string val_scores;
  std::string history;
  std::string grid_report;
  std::string optimizer = "adam";
  std::string score_partition = "test";
  unsigned threads = 1;
  TrainConfig cfg;
};

struct EvaluateArgs {
  std::string scores;
  std::string pai_scope = "pooled";
  std::string report;
  std::string format = "json";
};

struct DetArgs {
  std::string scores;
  std::string out;
  std::string pai_scope = "pooled";
  std::string svg;
  std::string scale = "normal";
  std::string title;
};

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

Partition partition_arg(const std::string& text) {
  if (auto p = parse_partition(text)) return *p;
  throw Error(ErrorCode::Usage, "unknown partition '" + text + "'");
}

json config_file_values(const fs::path& path) {
  json values = json::object();
  for (const auto& item : CLI::ConfigTOML().from_file(path.string())) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    std::string key;
    for (const auto& p : item.parents) key += p + ".";
    key += item.name;
    values[key] = item.inputs.size() == 1 ? json(item.inputs.front()) : json(item.inputs);
  }
  return values;
}

json train_config_json(const TrainArgs& a, const TrainConfig& cfg, bool grid) {
  json j;
  j["manifest"] = a.manifest;
  j["embeddings"] = a.embeddings;
  j["out"] = a.out;
  j["score_partition"] = a.score_partition;
  if (grid) {
    j["lr_grid"] = cfg.lr_grid;
    j["threads"] = a.threads;
  } else {
    j["learning_rate"] = cfg.learning_rate;
  }
  j["epochs"] = cfg.epochs;
  j["batch_size"] = cfg.batch_size;
  j["hidden_width"] = cfg.hidden_width;
  j["seed"] = cfg.seed;
  j["optimizer"] = {{"kind", a.optimizer},
                    {"beta1", cfg.optimizer.beta1},
                    {"beta2", cfg.optimizer.beta2},
                    {"epsilon", cfg.optimizer.epsilon}};
  j["bona_fide_weight"] = cfg.bona_fide_weight;
  j["attack_weight"] = cfg.attack_weight;
  return j;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string text = "epoch,train_loss,val_loss,val_eer\n";
  for (const auto& e : history) {
    text += std::to_string(e.epoch) + ',' + format_double(e.train_loss) + ',' + format_double(e.val_loss) + ',' +
            format_double(e.val_eer) + '\n';
  }
  return text;
}

json grid_json(const GridResult& g) {
  json cells = json::array();
  for (const auto& c : g.cells) {
    json cell{{"learning_rate", c.learning_rate}, {"seed", c.seed}, {"ok", c.ok}};
    if (c.ok) {
      cell["best_epoch"] = c.best_epoch;
      cell["val_eer"] = c.val_eer;
      cell["val_bpcer10"] = c.val_bpcer10;
    } else {
      cell["error"] = c.error;
    }
    cells.push_back(std::move(cell));
  }
  return {{"best_index", g.best_index}, {"best_learning_rate", g.best_config.learning_rate}, {"cells", cells}};
}

void run_summarize(const SummarizeArgs& a, RunRecord& rec, std::ostream& out) {
  const ReportFormat format = parse_report_format(a.format);
  rec.effective = {{"manifest", a.manifest}, {"format", a.format}, {"out", a.out}};
  rec.inputs.push_back(a.manifest);
  const Summary summary = summarize(parse_manifest(fs::path(a.manifest)));
  std::ostringstream text;
  write_summary(summary, format, text);
  if (a.out.empty()) {
    out << text.str();
  } else {
    write_file(a.out, text.str());
    rec.outputs.push_back(a.out);
  }
}

void run_train(const TrainArgs& a, bool grid, RunRecord& rec, std::ostream& out) {
  TrainConfig cfg = a.cfg;
  if (a.optimizer == "adam") {
    cfg.optimizer.kind = OptimizerConfig::Kind::Adam;
  } else if (a.optimizer == "sgd") {
    cfg.optimizer.kind = OptimizerConfig::Kind::Sgd;
  } else {
    throw Error(ErrorCode::Usage, "unknown optimizer '" + a.optimizer + "'");
  }
  validate(cfg);
  const Partition target = partition_arg(a.score_partition);
  rec.effective = train_config_json(a, cfg, grid);
  rec.seed = cfg.seed;
  rec.inputs.push_back(a.manifest);
  rec.inputs.push_back(a.embeddings);

  const Manifest manifest = parse_manifest(fs::path(a.manifest));
  const EmbeddingSet embeddings = read_embeddings(a.embeddings);
  const LabeledData train_data = join(manifest, embeddings, Partition::Train);
  const LabeledData val_data = join(manifest, embeddings, Partition::Val);
  const LabeledData target_data = target == Partition::Train ? train_data
                                  : target == Partition::Val ? val_data
                                                             : join(manifest, embeddings, target);

  TrainResult result;
  if (grid) {
    const unsigned threads = a.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.threads;
    GridResult g = grid_search(train_data, val_data, cfg, cfg.lr_grid, threads);
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
      const GridCell& c = g.cells[i];
      out << "lr " << format_double(c.learning_rate) << " seed " << c.seed << ": ";
      if (c.ok) {
        out << "val EER " << format_double(c.val_eer) << " BPCER10 " << format_double(c.val_bpcer10) << " (epoch "
            << c.best_epoch << ")" << (i == g.best_index ? "  <- selected" : "") << '\n';
      } else {
        out << "failed: " << one_line(c.error) << '\n';
      }
    }
    if (!a.grid_report.empty()) {
      write_file(a.grid_report, grid_json(g).dump(2) + "\n");
      rec.outputs.push_back(a.grid_report);
    }
    result = std::move(g.best);
  } else {
    result = train(train_data, val_data, cfg);
    out << "best epoch " << result.best_epoch << " of " << cfg.epochs << ": val EER "
        << format_double(result.best_val_eer) << '\n';
  }

  write_scores(score(result.head, target_data), fs::path(a.out));
  rec.outputs.push_back(a.out);
  if (!a.val_scores.empty()) {
    write_scores(result.val_scores, fs::path(a.val_scores));
    rec.outputs.push_back(a.val_scores);
  }
  if (!a.history.empty()) {
    write_file(a.history, history_csv(result.history));
    rec.outputs.push_back(a.history);
  }
}

void run_evaluate(const EvaluateArgs& a, RunRecord& rec, std::ostream& out) {
  const ReportFormat format = parse_report_format(a.format);
  const PaiScope scope = PaiScope::parse(a.pai_scope);
  rec.effective = {{"scores", a.scores}, {"pai_scope", scope.name()}, {"report", a.report}, {"format", a.format}};
  rec.inputs.push_back(a.scores);
  const MetricsReport report = full_report(read_scores(fs::path(a.scores)), scope);
  std::ostringstream text;
  write_report(report, format, text);
  if (a.report.empty()) {
    out << text.str();
    return;
  }
  write_file(a.report, text.str());
  rec.outputs.push_back(a.report);
  if (format != ReportFormat::Text) write_report(report, ReportFormat::Text, out);
}

void run_det(const DetArgs& a, RunRecord& rec, std::ostream& out) {
  const PaiScope scope = PaiScope::parse(a.pai_scope);
  DetPlotOptions options;
  if (a.scale == "normal") {
    options.scale = DetAxisScale::NormalDeviate;
  } else if (a.scale == "linear") {
    options.scale = DetAxisScale::Linear;
  } else {
    throw Error(ErrorCode::Usage, "unknown DET scale '" + a.scale + "'");
  }
  options.title = a.title;
  rec.effective = {{"scores", a.scores}, {"pai_scope", scope.name()}, {"out", a.out},
                   {"svg", a.svg},       {"scale", a.scale},         {"title", a.title}};
  rec.inputs.push_back(a.scores);
  const DetCurve curve = det_curve(read_scores(fs::path(a.scores)), scope);
  write_det_csv(curve, fs::path(a.out));
  rec.outputs.push_back(a.out);
  if (!a.svg.empty()) {
    write_file(a.svg, render_det_svg({{scope.name(), curve}}, options));
    rec.outputs.push_back(a.svg);
  }
  out << curve.points.size() << " DET points, EER " << format_double(eer(curve).value) << '\n';
}

void add_train_options(CLI::App& cmd, TrainArgs& a, bool grid) {
  cmd.add_option("--manifest", a.manifest, "Sample manifest CSV")->required();
  cmd.add_option("--embeddings", a.embeddings, "Embedding file")->required();
  cmd.add_option("--out", a.out, "Scores CSV for the scored partition")->required();
  if (grid) {
    cmd.add_option("--lr-grid", a.cfg.lr_grid, "Learning rates to try")->delimiter(',')->capture_default_str();
    cmd.add_option("--threads", a.threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd.add_option("--grid-report", a.grid_report, "JSON summary of every grid cell");
  } else {
    cmd.add_option("--lr", a.cfg.learning_rate, "Learning rate")->capture_default_str();
  }
  cmd.add_option("--hidden", a.cfg.hidden_width, "Hidden layer width")->capture_default_str();
  cmd.add_option("--epochs", a.cfg.epochs, "Training epochs")->capture_default_str();
  cmd.add_option("--batch-size", a.cfg.batch_size, "Mini-batch size")->capture_default_str();
  cmd.add_option("--seed", a.cfg.seed, "Seed for initialization and shuffling")->capture_default_str();
  cmd.add_option("--optimizer", a.optimizer, "adam or sgd")->capture_default_str();
  cmd.add_option("--beta1", a.cfg.optimizer.beta1, "Adam first-moment decay")->capture_default_str();
  cmd.add_option("--beta2", a.cfg.optimizer.beta2, "Adam second-moment decay")->capture_default_str();
  cmd.add_option("--adam-eps", a.cfg.optimizer.epsilon, "Adam denominator epsilon")->capture_default_str();
  cmd.add_option("--bona-fide-weight", a.cfg.bona_fide_weight, "Loss weight of bona fide rows")
      ->capture_default_str();
  cmd.add_option("--attack-weight", a.cfg.attack_weight, "Loss weight of attack rows")->capture_default_str();
  cmd.add_option("--score-partition", a.score_partition, "Partition written to --out")->capture_default_str();
  cmd.add_option("--val-scores", a.val_scores, "Also write validation scores of the selected checkpoint");
  cmd.add_option("--history", a.history, "Per-epoch loss and validation EER CSV");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Presentation attack detection toolkit: manifests, embedding heads, ISO/IEC 30107-3 metrics",
               "padkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.allow_config_extras(CLI::config_extras_mode::error);

  GlobalArgs global;
  app.set_config("--config", "", "TOML-style config file; command-line flags override its values");
  app.add_option("--run-record", global.run_record,
                 "Where to write run.json (default: next to the primary output, else the working directory)");

  SummarizeArgs summarize_args;
  auto* summarize_cmd = app.add_subcommand("summarize", "Count samples per class and partition");
  summarize_cmd->add_option("--manifest", summarize_args.manifest, "Sample manifest CSV")->required();
  summarize_cmd->add_option("--format", summarize_args.format, "text, json or csv")->capture_default_str();
  summarize_cmd->add_option("--out", summarize_args.out, "Write the table here instead of stdout");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train one head and score a partition");
  add_train_options(*train_cmd, train_args, false);

  TrainArgs grid_args;
  auto* grid_cmd = app.add_subcommand("grid-search", "Train one head per learning rate and keep the best");
  add_train_options(*grid_cmd, grid_args, true);

  EvaluateArgs evaluate_args;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "EER, BPCER10/20/100 and per-PAI APCER of a score file");
  evaluate_cmd->add_option("--scores", evaluate_args.scores, "Scores CSV")->required();
  evaluate_cmd->add_option("--pai-scope", evaluate_args.pai_scope, "pooled, worst-case or a species name")
      ->capture_default_str();
  evaluate_cmd->add_option("--report", evaluate_args.report, "Write the report here instead of stdout");
  evaluate_cmd->add_option("--format", evaluate_args.format, "json, csv or text")->capture_default_str();

  DetArgs det_args;
  auto* det_cmd = app.add_subcommand("det", "DET curve points and an optional SVG plot");
  det_cmd->add_option("--scores", det_args.scores, "Scores CSV")->required();
  det_cmd->add_option("--out", det_args.out, "DET CSV (tau,apcer,bpcer)")->required();
  det_cmd->add_option("--pai-scope", det_args.pai_scope, "pooled, worst-case or a species name")
      ->capture_default_str();
  det_cmd->add_option("--svg", det_args.svg, "Also render an SVG plot");
  det_cmd->add_option("--scale", det_args.scale, "normal or linear axes")->capture_default_str();
  det_cmd->add_option("--title", det_args.title, "Plot title");

  auto fail = [&](std::string_view category, std::string_view code, const std::string& message, int status) {
    err << "padkit: error: " << category << ": " << code << ": " << one_line(message) << '\n';
    return status;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    return fail("usage", "Usage", e.what(), exit_code_for(ErrorCategory::Usage));
  }

  RunRecord rec;
  for (int i = 0; i < argc; ++i) rec.argv.emplace_back(argv[i]);
  std::string primary_output;
  if (auto* opt = app.get_config_ptr(); opt && opt->count() > 0) {
    global.config = opt->as<std::string>();
    rec.config_file = global.config;
  }

  int status = 0;
  try {
    if (rec.config_file) {
      rec.config_file_values = config_file_values(*rec.config_file);
      rec.inputs.push_back(*rec.config_file);
    }
    if (summarize_cmd->parsed()) {
      rec.command = "summarize";
      primary_output = summarize_args.out;
      run_summarize(summarize_args, rec, out);
    } else if (train_cmd->parsed()) {
      rec.command = "train";
      primary_output = train_args.out;
      run_train(train_args, false, rec, out);
    } else if (grid_cmd->parsed()) {
      rec.command = "grid-search";
      primary_output = grid_args.out;
      run_train(grid_args, true, rec, out);
    } else if (evaluate_cmd->parsed()) {
      rec.command = "evaluate";
      primary_output = evaluate_args.report;
      run_evaluate(evaluate_args, rec, out);
    } else if (det_cmd->parsed()) {
      rec.command = "det";
      primary_output = det_args.out;
      run_det(det_args, rec, out);
    }
  } catch (const Error& e) {
    rec.error_category = to_string(e.category());
    rec.error_code = to_string(e.code());
    rec.error_message = one_line(e.what());
    status = exit_code_for(e.category());
  } catch (const std::exception& e) {
    // Filesystem and allocation failures surface as I/O problems.
    rec.error_category = to_string(ErrorCategory::Data);
    rec.error_code = to_string(ErrorCode::Io);
    rec.error_message = one_line(e.what());
    status = exit_code_for(ErrorCategory::Data);
  }
  rec.exit_code = status;

  fs::path record_path = global.run_record;
  if (record_path.empty()) {
    const fs::path primary(primary_output);
    record_path = (primary_output.empty() ? fs::path() : primary.parent_path()) / "run.json";
  }
  try {
    write_run_record(rec, record_path);
  } catch (const std::exception& e) {
    // The command's own failure is the more useful report.
    if (status == 0) return fail("data", to_string(ErrorCode::Io), e.what(), exit_code_for(ErrorCategory::Data));
  }

  if (status != 0) return fail(rec.error_category, rec.error_code, rec.error_message, status);
  return 0;
}

}  // namespace padkit
