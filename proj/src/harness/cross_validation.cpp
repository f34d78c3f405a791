#include "adrnet/harness/cross_validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "adrnet/core/error.hpp"
#include "adrnet/core/random.hpp"
#include "adrnet/metrics/metrics.hpp"

namespace adrnet::harness {

namespace {

std::string num(double v, int precision = 10) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

}  // namespace

void aggregate(MetricReport& report) {
  std::vector<double> aucs, auprs;
  report.undefined_folds = 0;
  for (const FoldResult& f : report.per_fold) {
    if (!f.defined) {
      ++report.undefined_folds;
      continue;
    }
    aucs.push_back(f.auc);
    auprs.push_back(f.aupr);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.mean_auc = aucs.empty() ? nan : metrics::mean(aucs);
  report.sd_auc = aucs.empty() ? nan : metrics::sample_sd(aucs);
  report.mean_aupr = auprs.empty() ? nan : metrics::mean(auprs);
  report.sd_aupr = auprs.empty() ? nan : metrics::sample_sd(auprs);
}

TrainConfig fold_config(const TrainConfig& cfg, std::size_t fold) {
  TrainConfig out = cfg;
  out.seed = derive_seed(cfg.seed, fold);
  out.model.seed = derive_seed(out.seed, 0x5eedULL);
  return out;
}

FoldResult evaluate_fold(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                         const TrainConfig& cfg, const data::FoldPlan& plan, std::size_t fold,
                         const CvOptions& options, TrainResult* trained) {
  const auto start = std::chrono::steady_clock::now();
  const TrainConfig fcfg = fold_config(cfg, fold);
  const std::vector<data::Cell> train = plan.train_cells(fold);
  const std::span<const data::Cell> test = plan.test_cells(fold);

  TrainHooks hooks;
  if (options.on_batch) hooks.on_batch = [&](std::span<const data::LabeledCell> b) { options.on_batch(fold, b); };
  if (options.log != nullptr && !options.parallel) {
    hooks.on_epoch = [&](std::size_t epoch, double loss) {
      *options.log << "fold " << fold << " epoch " << epoch + 1 << "/" << fcfg.epochs << " loss " << num(loss, 6)
                   << '\n';
    };
  }
  hooks.eval_cells = test;
  if (options.init_hook) hooks.on_model_built = [&](models::Model& m) { options.init_hook(m, fold); };

  TrainResult result = run_training(ds, descriptors, train, fcfg, hooks);

  FoldResult out;
  out.fold = fold;
  out.final_loss = result.loss_trace.empty() ? 0.0 : result.loss_trace.back();
  out.epochs_run = result.loss_trace.size();
  std::vector<double> labels;
  labels.reserve(test.size());
  for (const data::Cell& c : test) labels.push_back(ds.label(c.drug, c.adr));
  const auto scores = result.model.predict_batch(test, descriptors);
  try {
    out.auc = metrics::auc(scores, labels);
    out.aupr = metrics::aupr(scores, labels);
  } catch (const MetricUndefinedError&) {
    out.defined = false;
    out.auc = out.aupr = std::numeric_limits<double>::quiet_NaN();
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (trained != nullptr) *trained = std::move(result);
  return out;
}

MetricReport cross_validate(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                            const TrainConfig& cfg, const CvOptions& options) {
  cfg.validate();
  const data::FoldPlan plan =
      options.plan ? *options.plan : data::make_folds(ds.num_drugs(), ds.num_adrs(), options.k, cfg.seed);
  if (plan.num_drugs() != ds.num_drugs() || plan.num_adrs() != ds.num_adrs()) {
    throw DimensionError("fold plan does not match the dataset shape");
  }
  const std::size_t k = plan.k();

  MetricReport report;
  report.kind = cfg.model.kind;
  report.embedding_size = cfg.model.embedding_size;
  report.learning_rate = cfg.adam.learning_rate;
  report.weight_decay = cfg.adam.weight_decay;
  report.config_hash = config_hash(cfg);
  report.seed = cfg.seed;
  report.config = describe(cfg);
  report.per_fold.resize(k);

  if (!options.parallel) {
    for (std::size_t f = 0; f < k; ++f) report.per_fold[f] = evaluate_fold(ds, descriptors, cfg, plan, f, options);
  } else {
    std::size_t threads = options.max_threads ? options.max_threads : std::thread::hardware_concurrency();
    threads = std::clamp<std::size_t>(threads, 1, k);
    std::vector<std::exception_ptr> errors(k);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t f = t; f < k; f += threads) {
          try {
            report.per_fold[f] = evaluate_fold(ds, descriptors, cfg, plan, f, options);
          } catch (...) {
            errors[f] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  aggregate(report);
  if (options.log != nullptr && report.undefined_folds > 0) {
    *options.log << "warning: " << report.undefined_folds << " fold(s) had single-class test labels\n";
  }
  return report;
}

Grid Grid::standard() {
  return Grid{{16, 32, 64, 128, 256, 512, 1024}, {0.001, 0.005, 0.01, 0.05}, {1e-6, 1e-5, 1e-4, 1e-3}};
}

std::vector<MetricReport> grid_search(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                                      const TrainConfig& base, const Grid& grid, const CvOptions& options) {
  const std::vector<std::size_t> Ks =
      grid.embedding_sizes.empty() ? std::vector<std::size_t>{base.model.embedding_size} : grid.embedding_sizes;
  const std::vector<double> lrs =
      grid.learning_rates.empty() ? std::vector<double>{base.adam.learning_rate} : grid.learning_rates;
  const std::vector<double> wds =
      grid.weight_decays.empty() ? std::vector<double>{base.adam.weight_decay} : grid.weight_decays;

  std::vector<MetricReport> reports;
  for (std::size_t K : Ks) {
    for (double lr : lrs) {
      for (double wd : wds) {
        TrainConfig cfg = base;
        cfg.model = with_embedding_size(base.model, K);
        cfg.adam.learning_rate = lr;
        cfg.adam.weight_decay = wd;
        if (options.log != nullptr) *options.log << "grid point " << reports.size() << ": " << describe(cfg) << '\n';
        MetricReport r = cross_validate(ds, descriptors, cfg, options);
        r.grid_index = reports.size();
        reports.push_back(std::move(r));
      }
    }
  }
  auto key = [](const MetricReport& r) { return std::isnan(r.mean_auc) ? -1.0 : r.mean_auc; };
  std::stable_sort(reports.begin(), reports.end(),
                   [&](const MetricReport& a, const MetricReport& b) { return key(a) > key(b); });
  return reports;
}

std::vector<CurvePoint> embedding_curve(const std::vector<MetricReport>& reports) {
  std::map<std::size_t, CurvePoint> best;
  for (const MetricReport& r : reports) {
    auto it = best.find(r.embedding_size);
    if (it == best.end() || r.mean_auc > it->second.mean_auc) {
      best[r.embedding_size] = CurvePoint{r.embedding_size, r.mean_auc, r.mean_aupr};
    }
  }
  std::vector<CurvePoint> out;
  for (const auto& [K, p] : best) out.push_back(p);
  return out;
}

void write_report_csv(const MetricReport& report, std::ostream& out, bool header, bool timing) {
  if (header) out << "fold,model,K,lr,weight_decay,auc,aupr,final_loss,epochs,wall_seconds\n";
  for (const FoldResult& f : report.per_fold) {
    out << f.fold << ',' << models::to_string(report.kind) << ',' << report.embedding_size << ','
        << num(report.learning_rate) << ',' << num(report.weight_decay) << ',' << num(f.auc) << ',' << num(f.aupr)
        << ',' << num(f.final_loss) << ',' << f.epochs_run << ',' << (timing ? num(f.wall_seconds, 4) : "NA")
        << '\n';
  }
}

void write_sweep_csv(const std::vector<MetricReport>& reports, std::ostream& out) {
  out << "model,K,lr,weight_decay,mean_auc,sd_auc,mean_aupr,sd_aupr,folds,config_hash\n";
  for (const MetricReport& r : reports) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
    out << models::to_string(r.kind) << ',' << r.embedding_size << ',' << num(r.learning_rate) << ','
        << num(r.weight_decay) << ',' << num(r.mean_auc) << ',' << num(r.sd_auc) << ',' << num(r.mean_aupr) << ','
        << num(r.sd_aupr) << ',' << r.per_fold.size() - r.undefined_folds << ',' << hash << '\n';
  }
}

std::string report_summary(const MetricReport& r) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
  std::ostringstream os;
  os << "{\n"
     << "  model: " << models::to_string(r.kind) << ",\n"
     << "  K: " << r.embedding_size << ",\n"
     << "  lr: " << num(r.learning_rate) << ",\n"
     << "  weight_decay: " << num(r.weight_decay) << ",\n"
     << "  folds: " << r.per_fold.size() << ",\n"
     << "  undefined_folds: " << r.undefined_folds << ",\n"
     << "  mean_auc: " << num(r.mean_auc) << ",\n"
     << "  sd_auc: " << num(r.sd_auc) << ",\n"
     << "  mean_aupr: " << num(r.mean_aupr) << ",\n"
     << "  sd_aupr: " << num(r.sd_aupr) << ",\n"
     << "  seed: " << r.seed << ",\n"
     << "  config_hash: " << hash << "\n"
     << "}";
  return os.str();
}

std::string format_scaled(const char* name, double mean, double sd) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s %.2f ± %.2f", name, 100.0 * mean, 100.0 * sd);
  return buf;
}

}  // namespace adrnet::harness
