#include "adrnet/harness/training.hpp"

#include <cmath>
#include <sstream>

#include "adrnet/core/error.hpp"
#include "adrnet/core/random.hpp"
#include "adrnet/metrics/metrics.hpp"

namespace adrnet::harness {

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (neg_subsample_ratio && !(*neg_subsample_ratio > 0.0)) {
    throw ConfigError("neg_subsample_ratio must be positive");
  }
  adam.validate();
  model.validate();
}

std::string describe(const TrainConfig& cfg) {
  const models::ModelConfig m = cfg.model.resolved();
  std::ostringstream os;
  os.precision(17);
  auto widths = [&](const std::vector<std::size_t>& w) {
    std::string s;
    for (std::size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k]);
    return s;
  };
  os << "model=" << models::to_string(m.kind) << " K=" << m.embedding_size << " deep_widths=" << widths(m.deep_widths)
     << " shallow_widths=" << widths(m.shallow_widths) << " descriptor_dim=" << m.descriptor_dim
     << " init=" << to_string(m.init) << " lr=" << cfg.adam.learning_rate << " beta1=" << cfg.adam.beta1
     << " beta2=" << cfg.adam.beta2 << " epsilon=" << cfg.adam.epsilon << " weight_decay=" << cfg.adam.weight_decay
     << " epochs=" << cfg.epochs << " batch_size=" << cfg.batch_size << " neg_subsample_ratio="
     << (cfg.neg_subsample_ratio ? std::to_string(*cfg.neg_subsample_ratio) : std::string("none"))
     << " seed=" << cfg.seed;
  return os.str();
}

std::uint64_t config_hash(const TrainConfig& cfg) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : describe(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

models::ModelConfig with_embedding_size(const models::ModelConfig& cfg, std::size_t K) {
  models::ModelConfig out = cfg;
  out.embedding_size = K;
  if (!out.deep_widths.empty()) out.deep_widths.back() = K;
  if (!out.shallow_widths.empty()) {
    out.shallow_widths.front() = 2 * K;
    out.shallow_widths.back() = K;
  }
  return out;
}

namespace {

std::vector<data::LabeledCell> epoch_cells(const std::vector<data::LabeledCell>& all,
                                           const std::vector<data::LabeledCell>& positives,
                                           const std::vector<data::LabeledCell>& negatives, const TrainConfig& cfg,
                                           Rng& rng) {
  std::vector<data::LabeledCell> cells;
  if (!cfg.neg_subsample_ratio) {
    cells = all;
  } else {
    const auto wanted = static_cast<std::size_t>(std::llround(*cfg.neg_subsample_ratio * positives.size()));
    const std::size_t take = std::min(wanted, negatives.size());
    cells = positives;
    // Partial Fisher-Yates over a copy of the negatives.
    std::vector<data::LabeledCell> pool = negatives;
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
      std::swap(pool[k], pool[pick]);
      cells.push_back(pool[k]);
    }
  }
  rng.shuffle(std::span<data::LabeledCell>(cells));
  return cells;
}

}  // namespace

TrainResult run_training(const data::InteractionDataset& ds, const data::DescriptorTable* descriptors,
                         std::span<const data::Cell> train_cells, const TrainConfig& cfg, const TrainHooks& hooks) {
  cfg.validate();
  if (train_cells.empty()) throw ConfigError("no training cells");

  TrainResult result{models::Model::build(cfg.model, ds.num_drugs(), ds.num_adrs()), {}, {}};
  models::Model& model = result.model;
  if (hooks.on_model_built) hooks.on_model_built(model);

  std::vector<data::LabeledCell> all, positives, negatives;
  all.reserve(train_cells.size());
  for (const data::Cell& c : train_cells) {
    const data::LabeledCell lc{c.drug, c.adr, ds.label(c.drug, c.adr)};
    all.push_back(lc);
    (lc.label == 1.0 ? positives : negatives).push_back(lc);
  }
  if (cfg.neg_subsample_ratio && positives.empty()) throw DataError("negative subsampling needs training positives");

  std::vector<double> eval_labels;
  for (const data::Cell& c : hooks.eval_cells) eval_labels.push_back(ds.label(c.drug, c.adr));

  Rng rng(cfg.seed);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto cells = epoch_cells(all, positives, negatives, cfg, rng);
    double total = 0.0;
    for (std::size_t start = 0; start < cells.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(cells.size(), start + cfg.batch_size);
      const std::span<const data::LabeledCell> batch(cells.data() + start, end - start);
      if (hooks.on_batch) hooks.on_batch(batch);
      total += model.train_step(batch, descriptors, cfg.adam);
    }
    const double mean_loss = total / static_cast<double>(cells.size());
    result.loss_trace.push_back(mean_loss);
    if (hooks.on_epoch) hooks.on_epoch(epoch, mean_loss);

    if (cfg.eval_every > 0 && !hooks.eval_cells.empty() && (epoch + 1) % cfg.eval_every == 0) {
      try {
        const auto scores = model.predict_batch(hooks.eval_cells, descriptors);
        result.eval_auc_trace.emplace_back(epoch + 1, metrics::auc(scores, eval_labels));
      } catch (const MetricUndefinedError&) {
        // single-class monitoring set; nothing to record
      }
    }
  }
  return result;
}

}  // namespace adrnet::harness
