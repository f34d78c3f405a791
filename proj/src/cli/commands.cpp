#include "adrnet/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>

#include "adrnet/cli/config.hpp"
#include "adrnet/core/error.hpp"
#include "adrnet/core/random.hpp"
#include "adrnet/data/dataset.hpp"
#include "adrnet/data/synthetic.hpp"
#include "adrnet/harness/cross_validation.hpp"
#include "adrnet/models/serialize.hpp"

namespace adrnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kParseError;
  if (dynamic_cast<const DataError*>(&e)) return kDataError;
  if (dynamic_cast<const IoError*>(&e)) return kIoError;
  if (dynamic_cast<const ConfigError*>(&e)) return kConfigError;
  if (dynamic_cast<const NumericError*>(&e)) return kNumericError;
  return kFailure;
}

namespace {

struct StatsArgs {
  std::string interactions;
  std::size_t min_drugs_per_adr = 50;
  std::string allow_list;
};

struct SynthArgs {
  std::string spec;
  std::string out;
  std::vector<std::string> set;
};

struct TrainArgs {
  std::string interactions;
  std::vector<std::string> descriptors;
  std::string model;
  std::string config;
  std::string out;
  std::string save;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> folds;
  std::optional<std::size_t> epochs;
  bool parallel = false;
  bool timing = false;
  bool verbose = false;
  std::vector<std::string> set;
  // grid only
  std::string grid_k;
  std::string grid_lr;
  std::string grid_wd;
};

struct PredictArgs {
  std::string params;
  std::vector<std::string> descriptors;
  long long top = 10;
  std::string out;
};

void add_train_options(CLI::App* cmd, TrainArgs& a) {
  cmd->add_option("--interactions", a.interactions, "drug<TAB>adr interactions file")->required();
  cmd->add_option("--descriptors", a.descriptors, "descriptor files (substructure, then biological)")
      ->expected(1, 2);
  cmd->add_option("--model", a.model, "mf, gmf, mlp, nmf, adrnet or adrnet-noshare");
  cmd->add_option("--config", a.config, "key=value config file");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_option("--folds", a.folds, "number of cross-validation folds");
  cmd->add_option("--epochs", a.epochs, "training epochs");
  cmd->add_flag("--parallel", a.parallel, "train folds concurrently");
  cmd->add_flag("--timing", a.timing, "record wall-clock seconds in the CSV");
  cmd->add_flag("--verbose", a.verbose, "per-epoch log lines on stderr");
  cmd->add_option("--set", a.set, "config override key=value (repeatable)");
}

void write_summary(std::ostream& out, const json& summary) { out << summary.dump() << "\n"; }

std::ofstream open_output(const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  return f;
}

void close_output(std::ofstream& f, const fs::path& path) {
  f.close();
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

void log_config(std::ostream& err, const std::string& text) {
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    err << "config " << text.substr(start, nl - start) << "\n";
    start = nl + 1;
  }
}

struct LoadedRun {
  RunSettings run;
  data::InteractionDataset ds;
  std::optional<data::DescriptorTable> descriptors;

  const data::DescriptorTable* table() const { return descriptors ? &*descriptors : nullptr; }
};

LoadedRun load_run(const TrainArgs& a, std::ostream& err) {
  Settings s;
  if (!a.config.empty()) s = load_settings(a.config);
  if (!a.model.empty()) s["model"] = a.model;
  if (a.seed) s["seed"] = std::to_string(*a.seed);
  if (a.folds) s["folds"] = std::to_string(*a.folds);
  if (a.epochs) s["epochs"] = std::to_string(*a.epochs);
  if (a.parallel) s["parallel"] = "true";
  for (const auto& kv : a.set) apply_assignment(s, kv);

  LoadedRun lr;
  apply_run_settings(lr.run, s);
  auto& model = lr.run.train.model;
  const bool needs = models::uses_descriptors(model.kind);
  if (needs && a.descriptors.empty())
    throw ConfigError("model '" + models::to_string(model.kind) + "' needs --descriptors");

  lr.ds = data::load_interactions(a.interactions);
  if (needs) {
    std::vector<fs::path> paths(a.descriptors.begin(), a.descriptors.end());
    lr.descriptors = data::load_descriptors(paths, lr.ds);
    if (model.descriptor_dim != 0 && model.descriptor_dim != lr.descriptors->dim())
      throw ConfigError("descriptor_dim=" + std::to_string(model.descriptor_dim) + " but the descriptor files have " +
                        std::to_string(lr.descriptors->dim()) + " bits");
    model.descriptor_dim = lr.descriptors->dim();
  }
  lr.run.train.validate();
  if (lr.run.folds < 2) throw ConfigError("folds must be at least 2");
  log_config(err, format_run_settings(lr.run));
  return lr;
}

harness::CvOptions cv_options(const LoadedRun& lr, const TrainArgs& a, std::ostream& err) {
  harness::CvOptions options;
  options.k = lr.run.folds;
  options.parallel = lr.run.parallel;
  if (a.verbose) options.log = &err;
  return options;
}

json report_json(const harness::MetricReport& r) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
  return json{{"model", models::to_string(r.kind)},
              {"K", r.embedding_size},
              {"lr", r.learning_rate},
              {"weight_decay", r.weight_decay},
              {"folds", r.per_fold.size()},
              {"undefined_folds", r.undefined_folds},
              {"mean_auc", r.mean_auc},
              {"sd_auc", r.sd_auc},
              {"mean_aupr", r.mean_aupr},
              {"sd_aupr", r.sd_aupr},
              {"config_hash", hash}};
}

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream&) {
  const auto ds = data::load_interactions(a.interactions);
  std::set<std::string> allowed;
  if (!a.allow_list.empty()) allowed = data::load_allow_list(a.allow_list);
  const auto before = data::dataset_stats(ds);
  out << "before " << data::format_stats(before) << "\n";
  const auto filtered = data::filter_dataset(ds, a.min_drugs_per_adr, a.allow_list.empty() ? nullptr : &allowed);
  const auto after = data::dataset_stats(filtered);
  out << "after " << data::format_stats(after) << "\n";
  write_summary(out, {{"command", "stats"},
                      {"min_drugs_per_adr", a.min_drugs_per_adr},
                      {"drugs", after.drugs},
                      {"adrs", after.adrs},
                      {"interactions", after.interactions},
                      {"density", after.density}});
  return kOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  Settings s;
  if (!a.spec.empty()) s = load_settings(a.spec);
  for (const auto& kv : a.set) apply_assignment(s, kv);
  data::SyntheticSpec spec;
  apply_synth_settings(spec, s);
  spec.validate();
  log_config(err, format_synth_settings(spec));

  const auto data = data::synth_generate(spec);
  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  const fs::path interactions = dir / "interactions.tsv";
  const fs::path descriptors = dir / "descriptors.txt";
  const fs::path truth = dir / "ground_truth.txt";
  data::save_interactions(data.dataset, interactions);
  data::save_descriptors(data.descriptors, descriptors);
  auto f = open_output(truth);
  data::write_ground_truth(data.truth, f);
  close_output(f, truth);

  const auto st = data::dataset_stats(data.dataset);
  out << "wrote " << interactions.string() << "\n"
      << "wrote " << descriptors.string() << "\n"
      << "wrote " << truth.string() << "\n"
      << data::format_stats(st) << "\n";
  write_summary(out, {{"command", "synth"},
                      {"interactions", interactions.string()},
                      {"descriptors", descriptors.string()},
                      {"ground_truth", truth.string()},
                      {"positives", st.interactions},
                      {"bias", data.truth.bias}});
  return kOk;
}

int cmd_cv(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const LoadedRun lr = load_run(a, err);
  const auto options = cv_options(lr, a, err);
  const auto report = harness::cross_validate(lr.ds, lr.table(), lr.run.train, options);

  const fs::path csv(a.out);
  auto f = open_output(csv);
  harness::write_report_csv(report, f, true, a.timing);
  close_output(f, csv);

  if (!a.save.empty()) {
    harness::TrainConfig final_cfg = lr.run.train;
    final_cfg.model.seed = derive_seed(final_cfg.seed, 0x5eedULL);
    std::vector<data::Cell> all;
    all.reserve(lr.ds.num_drugs() * lr.ds.num_adrs());
    for (std::uint32_t i = 0; i < lr.ds.num_drugs(); ++i)
      for (std::uint32_t j = 0; j < lr.ds.num_adrs(); ++j) all.push_back({i, j});
    const auto trained = harness::run_training(lr.ds, lr.table(), all, final_cfg);
    models::save_model(trained.model, lr.ds.drug_ids(), lr.ds.adr_ids(), a.save);
    err << "saved parameters to " << a.save << "\n";
  }

  out << "model=" << models::to_string(report.kind) << " K=" << report.embedding_size
      << " folds=" << report.per_fold.size() << " undefined_folds=" << report.undefined_folds << "\n";
  out << harness::format_scaled("AUC", report.mean_auc, report.sd_auc) << "\n";
  out << harness::format_scaled("AUPR", report.mean_aupr, report.sd_aupr) << "\n";
  json summary = report_json(report);
  summary["command"] = "cv";
  summary["csv"] = a.out;
  write_summary(out, summary);
  return kOk;
}

int cmd_grid(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const LoadedRun lr = load_run(a, err);
  harness::Grid grid;
  if (!a.grid_k.empty()) grid.embedding_sizes = parse_size_list("grid-K", a.grid_k);
  if (!a.grid_lr.empty()) grid.learning_rates = parse_real_list("grid-lr", a.grid_lr);
  if (!a.grid_wd.empty()) grid.weight_decays = parse_real_list("grid-wd", a.grid_wd);
  for (std::size_t k : grid.embedding_sizes)
    if (k == 0) throw ConfigError("grid-K entries must be positive");

  const auto reports = harness::grid_search(lr.ds, lr.table(), lr.run.train, grid, cv_options(lr, a, err));

  const fs::path csv(a.out);
  auto f = open_output(csv);
  harness::write_sweep_csv(reports, f);
  close_output(f, csv);

  for (const auto& r : reports) {
    out << "K=" << r.embedding_size << " lr=" << r.learning_rate << " weight_decay=" << r.weight_decay << " "
        << harness::format_scaled("AUC", r.mean_auc, r.sd_auc) << " "
        << harness::format_scaled("AUPR", r.mean_aupr, r.sd_aupr) << "\n";
  }
  json summary = report_json(reports.front());
  summary["command"] = "grid";
  summary["points"] = reports.size();
  summary["csv"] = a.out;
  write_summary(out, summary);
  return kOk;
}

int cmd_predict(const PredictArgs& a, std::ostream& out, std::ostream&) {
  if (a.top <= 0) throw ConfigError("--top must be positive");
  const auto saved = models::load_model(a.params);
  const auto& model = saved.model;
  const data::InteractionDataset ids(saved.drug_ids, saved.adr_ids);

  std::optional<data::DescriptorTable> table;
  if (models::uses_descriptors(model.kind())) {
    if (a.descriptors.empty())
      throw ConfigError("model '" + models::to_string(model.kind()) + "' needs --descriptors");
    std::vector<fs::path> paths(a.descriptors.begin(), a.descriptors.end());
    table = data::load_descriptors(paths, ids);
    if (table->dim() != model.config().descriptor_dim)
      throw ConfigError("descriptor files have " + std::to_string(table->dim()) + " bits, model expects " +
                        std::to_string(model.config().descriptor_dim));
  }

  std::ofstream file;
  if (!a.out.empty()) file = open_output(a.out);
  std::ostream& dest = a.out.empty() ? out : static_cast<std::ostream&>(file);

  const std::size_t n = model.num_adrs();
  const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(a.top), n);
  std::vector<data::Cell> cells(n);
  std::vector<std::size_t> order(n);
  std::size_t lines = 0;
  char buf[64];
  for (std::uint32_t i = 0; i < model.num_drugs(); ++i) {
    for (std::uint32_t j = 0; j < n; ++j) cells[j] = {i, j};
    const auto scores = model.predict_batch(cells, table ? &*table : nullptr);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return scores[x] > scores[y]; });
    for (std::size_t r = 0; r < top; ++r) {
      std::snprintf(buf, sizeof buf, "%.10g", scores[order[r]]);
      dest << saved.drug_ids[i] << '\t' << saved.adr_ids[order[r]] << '\t' << buf << '\n';
      ++lines;
    }
  }
  if (!a.out.empty()) close_output(file, a.out);
  write_summary(out, {{"command", "predict"},
                      {"model", models::to_string(model.kind())},
                      {"drugs", model.num_drugs()},
                      {"top", top},
                      {"lines", lines}});
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Drug-ADR association prediction with ADRNet and collaborative-filtering baselines", "adrnet"};
  app.require_subcommand(1);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "dataset statistics before and after frequency filtering");
  stats_cmd->add_option("--interactions", stats.interactions, "drug<TAB>adr interactions file")->required();
  stats_cmd->add_option("--min-drugs-per-adr", stats.min_drugs_per_adr,
                        "keep ADRs associated with more than this many drugs");
  stats_cmd->add_option("--allow-list", stats.allow_list, "file of drug ids to keep, one per line");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "generate a planted low-rank dataset");
  synth_cmd->add_option("--spec", synth.spec, "key=value generator spec");
  synth_cmd->add_option("--out", synth.out, "output directory")->required();
  synth_cmd->add_option("--set", synth.set, "spec override key=value (repeatable)");

  TrainArgs cv;
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation of one configuration");
  add_train_options(cv_cmd, cv);
  cv_cmd->add_option("--out", cv.out, "per-fold CSV report")->required();
  cv_cmd->add_option("--save", cv.save, "also train on every cell and save the parameters here");

  TrainArgs grid;
  auto* grid_cmd = app.add_subcommand("grid", "cross-validated hyperparameter sweep");
  add_train_options(grid_cmd, grid);
  grid_cmd->add_option("--out", grid.out, "sweep CSV")->required();
  grid_cmd->add_option("--grid-K", grid.grid_k, "comma-separated embedding sizes");
  grid_cmd->add_option("--grid-lr", grid.grid_lr, "comma-separated learning rates");
  grid_cmd->add_option("--grid-wd", grid.grid_wd, "comma-separated weight decays");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "ranked ADR list per drug from saved parameters");
  predict_cmd->add_option("--params", predict.params, "parameters written by cv --save")->required();
  predict_cmd->add_option("--descriptors", predict.descriptors, "descriptor files")->expected(1, 2);
  predict_cmd->add_option("--top", predict.top, "ADRs per drug");
  predict_cmd->add_option("--out", predict.out, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (*stats_cmd) return cmd_stats(stats, out, err);
    if (*synth_cmd) return cmd_synth(synth, out, err);
    if (*cv_cmd) return cmd_cv(cv, out, err);
    if (*grid_cmd) return cmd_grid(grid, out, err);
    if (*predict_cmd) return cmd_predict(predict, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kFailure;
}

}  // namespace adrnet::cli
