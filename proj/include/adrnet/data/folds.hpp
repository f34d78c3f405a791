#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adrnet/data/dataset.hpp"

namespace adrnet::data {

// Partition of all M x N cells into k folds. The cells are shuffled once with
// the seed and cut into k contiguous runs, so fold sizes differ by at most one.
// Each fold keeps its cells in shuffled order; training sets are built by
// concatenating the other folds in fold order.
class FoldPlan {
 public:
  FoldPlan() = default;

  std::size_t k() const { return folds_.size(); }
  std::uint64_t seed() const { return seed_; }
  std::size_t num_drugs() const { return num_drugs_; }
  std::size_t num_adrs() const { return num_adrs_; }

  std::size_t fold_of(std::size_t drug, std::size_t adr) const { return assignment_[drug * num_adrs_ + adr]; }
  std::span<const Cell> test_cells(std::size_t fold) const { return folds_.at(fold); }
  std::vector<Cell> train_cells(std::size_t fold) const;

  // Plan for the same partition after drug i is renamed to new_index[i].
  // Cell order inside each fold is preserved.
  FoldPlan relabel_drugs(std::span<const std::size_t> new_index) const;

  friend FoldPlan make_folds(std::size_t num_drugs, std::size_t num_adrs, std::size_t k, std::uint64_t seed);

 private:
  void rebuild_assignment();

  std::uint64_t seed_ = 0;
  std::size_t num_drugs_ = 0;
  std::size_t num_adrs_ = 0;
  std::vector<std::vector<Cell>> folds_;
  std::vector<std::uint32_t> assignment_;
};

// Throws ConfigError unless 2 <= k <= M * N.
FoldPlan make_folds(std::size_t num_drugs, std::size_t num_adrs, std::size_t k, std::uint64_t seed);

std::vector<LabeledCell> label_cells(std::span<const Cell> cells, const InteractionDataset& ds);

}  // namespace adrnet::data
