#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adrnet/core/adam.hpp"
#include "adrnet/data/dataset.hpp"
#include "adrnet/models/model.hpp"

namespace adrnet::harness {

struct TrainConfig {
  models::ModelConfig model;
  AdamConfig adam;
  std::size_t epochs = 50;
  std::size_t batch_size = 256;
  // When set, each epoch uses every training positive plus ratio x #positives
  // freshly drawn negatives instead of all training cells.
  std::optional<double> neg_subsample_ratio;
  // Evaluate held-out AUC every n epochs when evaluation cells are supplied (0 = never).
  std::size_t eval_every = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Canonical one-line description; the config hash is computed from it.
std::string describe(const TrainConfig& cfg);
std::uint64_t config_hash(const TrainConfig& cfg);

// Same config with embedding size K; width lists are rewritten to end in K
// (and the shallow tower to start at 2K).
models::ModelConfig with_embedding_size(const models::ModelConfig& cfg, std::size_t K);

struct TrainHooks {
  // Called once with the freshly built model, before the first update.
  std::function<void(models::Model&)> on_model_built;
  // Called with every batch before its update.
  std::function<void(std::span<const data::LabeledCell>)> on_batch;
  // Called after each epoch with its mean per-cell loss.
  std::function<void(std::size_t epoch, double mean_loss)> on_epoch;
  // Monitoring set for eval_every.
  std::span<const data::Cell> eval_cells;
};

struct TrainResult {
  models::Model model;
  // Mean per-cell BCE of each epoch (pre-update batch losses).
  std::vector<double> loss_trace;
  // (epoch, AUC) pairs when eval_every > 0.
  std::vector<std::pair<std::size_t, double>> eval_auc_trace;
};

// Builds a fresh model from cfg.model and trains it with Adam on the given
// cells. Each epoch visits a seeded shuffle of the cells in batches of
// cfg.batch_size. Fully determined by cfg.
TrainResult run_training(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                         std::span<const data::Cell> train_cells, const TrainConfig& cfg,
                         const TrainHooks& hooks = {});

}  // namespace adrnet::harness
