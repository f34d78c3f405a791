#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "adrnet/core/error.hpp"
#include "adrnet/metrics/metrics.hpp"

namespace adrnet::metrics {

namespace {

void check_inputs(std::span<const double> scores, std::span<const double> labels, const char* name) {
  if (scores.size() != labels.size()) {
    throw DimensionError(std::string(name) + ": " + std::to_string(scores.size()) + " scores vs " +
                         std::to_string(labels.size()) + " labels");
  }
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw DomainError(std::string(name) + ": labels must be 0 or 1");
  }
}

}  // namespace

double auc(std::span<const double> scores, std::span<const double> labels) {
  check_inputs(scores, labels, "auc");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of positive ranks, ties sharing their midrank (ranks are 1-based).
  double positive_rank_sum = 0.0;
  double positives = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    double group_positives = 0.0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      group_positives += labels[order[j]];
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    positive_rank_sum += group_positives * midrank;
    positives += group_positives;
    i = j;
  }
  const double negatives = static_cast<double>(n) - positives;
  if (positives == 0.0 || negatives == 0.0) {
    throw MetricUndefinedError("auc: needs at least one positive and one negative label");
  }
  const double u = positive_rank_sum - positives * (positives + 1.0) / 2.0;
  return u / (positives * negatives);
}

double aupr(std::span<const double> scores, std::span<const double> labels) {
  check_inputs(scores, labels, "aupr");
  const std::size_t n = scores.size();
  const double positives = std::accumulate(labels.begin(), labels.end(), 0.0);
  if (positives == 0.0) throw MetricUndefinedError("aupr: needs at least one positive label");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  double hits = 0.0;
  double ap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[order[k]] == 1.0) {
      hits += 1.0;
      ap += hits / static_cast<double>(k + 1);
    }
  }
  // Each retrieved positive raises recall by 1 / positives.
  return ap / positives;
}

}  // namespace adrnet::metrics
