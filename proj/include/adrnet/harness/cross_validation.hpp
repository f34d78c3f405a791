#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adrnet/data/folds.hpp"
#include "adrnet/harness/training.hpp"

namespace adrnet::harness {

struct FoldResult {
  std::size_t fold = 0;
  // False when the held-out labels are single-class; auc/aupr are NaN then.
  bool defined = true;
  double auc = 0.0;
  double aupr = 0.0;
  double final_loss = 0.0;
  std::size_t epochs_run = 0;
  double wall_seconds = 0.0;
};

struct MetricReport {
  models::ModelKind kind = models::ModelKind::ADRNET;
  std::size_t embedding_size = 0;
  double learning_rate = 0.0;
  double weight_decay = 0.0;
  std::vector<FoldResult> per_fold;
  double mean_auc = 0.0;
  double sd_auc = 0.0;
  double mean_aupr = 0.0;
  double sd_aupr = 0.0;
  // Folds excluded from the aggregates because their metrics were undefined.
  std::size_t undefined_folds = 0;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  // Position in the grid enumeration (0 outside grid_search).
  std::size_t grid_index = 0;
  std::string config;
};

// Recomputes mean/sd over the defined folds.
void aggregate(MetricReport& report);

struct CvOptions {
  std::size_t k = 10;
  // Train folds on separate threads; results are identical to sequential runs.
  bool parallel = false;
  std::size_t max_threads = 0;  // 0: hardware concurrency
  // Use this partition instead of make_folds(M, N, k, cfg.seed).
  std::optional<data::FoldPlan> plan;
  // Runs on each freshly built fold model before training.
  std::function<void(models::Model&, std::size_t fold)> init_hook;
  // Observes every training batch of every fold.
  std::function<void(std::size_t fold, std::span<const data::LabeledCell>)> on_batch;
  // Per-epoch progress lines (sequential mode only).
  std::ostream* log = nullptr;
};

// Trains on the cells outside `fold` and scores the cells inside it.
FoldResult evaluate_fold(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                         const TrainConfig& cfg, const data::FoldPlan& plan, std::size_t fold,
                         const CvOptions& options = {}, TrainResult* trained = nullptr);

// Per-fold config: seed and model seed derived from cfg.seed and the fold index.
TrainConfig fold_config(const TrainConfig& cfg, std::size_t fold);

MetricReport cross_validate(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                            const TrainConfig& cfg, const CvOptions& options = {});

struct Grid {
  std::vector<std::size_t> embedding_sizes;
  std::vector<double> learning_rates;
  std::vector<double> weight_decays;

  // The full tuning grid: lr {0.001, 0.005, 0.01, 0.05}, weight decay
  // {1e-6, 1e-5, 1e-4, 1e-3}, K {16, ..., 1024}.
  static Grid standard();
  std::size_t size() const { return embedding_sizes.size() * learning_rates.size() * weight_decays.size(); }
};

// One cross-validation per grid point (K outermost, weight decay innermost).
// Empty grid axes fall back to the base config's value. Returns reports sorted
// by mean AUC, descending; ties keep grid order.
std::vector<MetricReport> grid_search(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                                      const TrainConfig& base, const Grid& grid, const CvOptions& options = {});

struct CurvePoint {
  std::size_t embedding_size = 0;
  double mean_auc = 0.0;
  double mean_aupr = 0.0;
};

// Best report per embedding size, ordered by K.
std::vector<CurvePoint> embedding_curve(const std::vector<MetricReport>& reports);

// ---- output -----------------------------------------------------------------------------

// Header: fold,model,K,lr,weight_decay,auc,aupr,final_loss,epochs,wall_seconds.
// Without timing the wall_seconds column is written as NA so reruns are byte-identical.
void write_report_csv(const MetricReport& report, std::ostream& out, bool header = true, bool timing = false);
// Header: model,K,lr,weight_decay,mean_auc,sd_auc,mean_aupr,sd_aupr,folds,config_hash.
void write_sweep_csv(const std::vector<MetricReport>& reports, std::ostream& out);
// JSON-like structured summary.
std::string report_summary(const MetricReport& report);
// "AUC 92.23 ± 0.21" style, metrics scaled by 100.
std::string format_scaled(const char* name, double mean, double sd);

}  // namespace adrnet::harness
