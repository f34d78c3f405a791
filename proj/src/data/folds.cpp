#include "adrnet/data/folds.hpp"

#include "adrnet/core/error.hpp"
#include "adrnet/core/random.hpp"

namespace adrnet::data {

FoldPlan make_folds(std::size_t num_drugs, std::size_t num_adrs, std::size_t k, std::uint64_t seed) {
  const std::size_t n = num_drugs * num_adrs;
  if (k < 2) throw ConfigError("folds: k must be at least 2");
  if (k > n) throw ConfigError("folds: k=" + std::to_string(k) + " exceeds the " + std::to_string(n) + " cells");

  std::vector<Cell> cells;
  cells.reserve(n);
  for (std::size_t i = 0; i < num_drugs; ++i) {
    for (std::size_t j = 0; j < num_adrs; ++j) {
      cells.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    }
  }
  Rng rng(seed);
  rng.shuffle(std::span<Cell>(cells));

  FoldPlan plan;
  plan.seed_ = seed;
  plan.num_drugs_ = num_drugs;
  plan.num_adrs_ = num_adrs;
  plan.folds_.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t begin = f * n / k;
    const std::size_t end = (f + 1) * n / k;
    plan.folds_[f].assign(cells.begin() + static_cast<std::ptrdiff_t>(begin),
                          cells.begin() + static_cast<std::ptrdiff_t>(end));
  }
  plan.rebuild_assignment();
  return plan;
}

void FoldPlan::rebuild_assignment() {
  assignment_.assign(num_drugs_ * num_adrs_, 0);
  for (std::size_t f = 0; f < folds_.size(); ++f) {
    for (const Cell& c : folds_[f]) assignment_[c.drug * num_adrs_ + c.adr] = static_cast<std::uint32_t>(f);
  }
}

std::vector<Cell> FoldPlan::train_cells(std::size_t fold) const {
  if (fold >= folds_.size()) throw ConfigError("folds: no fold " + std::to_string(fold));
  std::vector<Cell> out;
  out.reserve(num_drugs_ * num_adrs_ - folds_[fold].size());
  for (std::size_t f = 0; f < folds_.size(); ++f) {
    if (f != fold) out.insert(out.end(), folds_[f].begin(), folds_[f].end());
  }
  return out;
}

FoldPlan FoldPlan::relabel_drugs(std::span<const std::size_t> new_index) const {
  if (new_index.size() != num_drugs_) throw DimensionError("relabel_drugs: permutation length mismatch");
  FoldPlan out = *this;
  for (auto& fold : out.folds_) {
    for (Cell& c : fold) c.drug = static_cast<std::uint32_t>(new_index[c.drug]);
  }
  out.rebuild_assignment();
  return out;
}

std::vector<LabeledCell> label_cells(std::span<const Cell> cells, const InteractionDataset& ds) {
  std::vector<LabeledCell> out;
  out.reserve(cells.size());
  for (const Cell& c : cells) out.push_back({c.drug, c.adr, ds.label(c.drug, c.adr)});
  return out;
}

}  // namespace adrnet::data
