#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "adrnet/core/matrix.hpp"
#include "adrnet/data/dataset.hpp"

namespace adrnet::data {

// Planted low-rank generator. Drug and ADR factors have unit-variance normal
// entries; labels are Bernoulli(sigmoid(p*_i . q*_j + bias)) with the bias
// solved so the mean probability hits positive_rate. Descriptor bit b of drug
// i is [w_b . p*_i > 0] for a random hyperplane w_b, replaced by a fair coin
// with probability 1 - descriptor_informativeness.
struct SyntheticSpec {
  std::size_t num_drugs = 100;
  std::size_t num_adrs = 150;
  std::size_t true_rank = 8;
  std::size_t descriptor_dim = 64;
  // Probability that a label is replaced by an independent Bernoulli(positive_rate) draw.
  double noise = 0.0;
  double descriptor_informativeness = 1.0;
  double positive_rate = 0.1;
  std::uint64_t seed = 1;

  void validate() const;
};

struct GroundTruth {
  Matrix drug_factors;  // M x K_true
  Matrix adr_factors;   // N x K_true
  double bias = 0.0;

  double probability(std::size_t drug, std::size_t adr) const;
};

struct SyntheticData {
  InteractionDataset dataset;
  DescriptorTable descriptors;
  GroundTruth truth;
};

// Throws SpecError when the bias search cannot reach positive_rate within 1e-3.
SyntheticData synth_generate(const SyntheticSpec& spec);

// Mean of sigmoid(score + bias) over all cells.
double mean_probability(const GroundTruth& truth);

// Sidecar lines "drug<TAB>i<TAB>k<TAB>value", "adr<TAB>j<TAB>k<TAB>value" and "bias=<value>".
void write_ground_truth(const GroundTruth& truth, std::ostream& out);
GroundTruth read_ground_truth(std::istream& in, const std::string& source = "<stream>");

}  // namespace adrnet::data
