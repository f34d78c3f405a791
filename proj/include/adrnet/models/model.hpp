#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adrnet/core/adam.hpp"
#include "adrnet/core/param.hpp"
#include "adrnet/core/tower.hpp"
#include "adrnet/data/dataset.hpp"

namespace adrnet::models {

enum class ModelKind { MF, GMF, MLP_CF, NMF, ADRNET, ADRNET_NOSHARE };

// Lowercase CLI names: mf, gmf, mlp, nmf, adrnet, adrnet-noshare.
std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

bool uses_descriptors(ModelKind kind);
bool uses_shallow_tower(ModelKind kind);
bool uses_product_head(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::ADRNET;
  std::size_t embedding_size = 64;
  // Include the input width: deep = {D, ..., K}, shallow = {2K, ..., K}.
  // Empty lists mean the defaults {D, 512, 128, K} and {2K, K}.
  std::vector<std::size_t> deep_widths;
  std::vector<std::size_t> shallow_widths;
  std::size_t descriptor_dim = 0;
  InitScheme init = InitScheme::UniformScaled;
  std::uint64_t seed = 0;

  ModelConfig resolved() const;
  // Throws ConfigError if the (resolved) configuration is inconsistent.
  void validate() const;
};

// Output of the deep drug tower for one drug.
struct DeepDrugOutput {
  std::vector<double> representation;  // K-vector, post-activation of the last layer
  double logit = 0.0;                  // h_D . representation
};

// Per-head logits of one cell. `product` is the element-wise product head
// (GMF form); for MF it holds the plain inner product.
struct HeadLogits {
  double deep = 0.0;
  double cf = 0.0;
  double product = 0.0;
  double total() const { return deep + cf + product; }
};

// Learnable parameters and forward/backward for every model kind.
//
// ADRNET:         sigmoid(h_D.phi_i + h_CF.mlp([p_i; q_j]) + h_DCF.(phi_i * q_j))
// ADRNET_NOSHARE: as ADRNET, with a separate Q_alt in the product head
// NMF:            sigmoid(h_CF.mlp([p_i; q_j]) + h_DCF.(p_i * q_j))
// MLP_CF:         sigmoid(h_CF.mlp([p_i; q_j]))
// GMF:            sigmoid(h_DCF.(p_i * q_j))
// MF:             sigmoid(p_i . q_j)
//
// phi_i is the deep tower applied to drug i's multi-hot descriptor. Summing the
// head logits is the same as one output layer over the concatenated head
// inputs with weights [h_D; h_CF; h_DCF].
class Model {
 public:
  // Throws ConfigError on zero dimensions or inconsistent widths.
  static Model build(const ModelConfig& config, std::size_t num_drugs, std::size_t num_adrs);

  const ModelConfig& config() const { return config_; }
  ModelKind kind() const { return config_.kind; }
  std::size_t num_drugs() const { return num_drugs_; }
  std::size_t num_adrs() const { return num_adrs_; }
  std::size_t embedding_size() const { return config_.embedding_size; }

  ParamBlock& drug_factors() { return p_; }
  const ParamBlock& drug_factors() const { return p_; }
  ParamBlock& adr_factors() { return q_; }
  const ParamBlock& adr_factors() const { return q_; }
  // The ADR table read by the product head: Q_alt for ADRNET_NOSHARE, Q otherwise.
  ParamBlock& product_adr_factors() { return q_alt_ ? *q_alt_ : q_; }
  const ParamBlock& product_adr_factors() const { return q_alt_ ? *q_alt_ : q_; }
  bool has_separate_product_factors() const { return q_alt_.has_value(); }

  Tower& deep_tower() { return deep_; }
  const Tower& deep_tower() const { return deep_; }
  Tower& shallow_tower() { return shallow_; }
  const Tower& shallow_tower() const { return shallow_; }
  ParamBlock& deep_head() { return h_deep_; }
  ParamBlock& cf_head() { return h_cf_; }
  ParamBlock& product_head() { return h_product_; }
  const ParamBlock& deep_head() const { return h_deep_; }
  const ParamBlock& cf_head() const { return h_cf_; }
  const ParamBlock& product_head() const { return h_product_; }

  // Blocks that take part in this kind's forward pass, in a fixed order.
  std::vector<ParamBlock*> parameters();
  std::vector<const ParamBlock*> parameters() const;
  ParamBlock* find_parameter(const std::string& name);

  // ---- single-cell forward pieces ------------------------------------------------
  double mf_predict(std::size_t drug, std::size_t adr) const;
  DeepDrugOutput deep_drug_forward(ActiveBits descriptor) const;
  // Dense 0/1 descriptor halves; their lengths must add up to D.
  DeepDrugOutput deep_drug_forward(std::span<const double> pc, std::span<const double> bio) const;
  double shallow_cf_forward(std::size_t drug, std::size_t adr) const;
  double dcf_forward(std::span<const double> drug_representation, std::size_t adr) const;

  HeadLogits head_logits(std::size_t drug, std::size_t adr, const data::DescriptorTable* descriptors) const;
  double predict(std::size_t drug, std::size_t adr, const data::DescriptorTable* descriptors) const;

  // ---- batched -------------------------------------------------------------------
  std::vector<HeadLogits> batch_head_logits(std::span<const data::Cell> cells,
                                            const data::DescriptorTable* descriptors) const;
  std::vector<double> predict_batch(std::span<const data::Cell> cells, const data::DescriptorTable* descriptors) const;
  // Summed BCE over the batch, forward only.
  double loss(std::span<const data::LabeledCell> batch, const data::DescriptorTable* descriptors) const;
  // Forward + backward; adds into the grad buffers and returns the summed BCE.
  double accumulate_gradients(std::span<const data::LabeledCell> batch, const data::DescriptorTable* descriptors);
  // accumulate_gradients followed by one Adam step on every parameter block.
  // Returns the pre-step loss. Throws NumericError on a non-finite loss.
  double train_step(std::span<const data::LabeledCell> batch, const data::DescriptorTable* descriptors,
                    const AdamConfig& adam);

  void zero_grad();
  // Moves row i of the drug table to row new_index[i].
  void permute_drugs(std::span<const std::size_t> new_index);

 private:
  struct BatchTrace;

  Model() = default;
  void check_descriptors(const data::DescriptorTable* descriptors) const;
  std::vector<HeadLogits> forward(std::span<const data::Cell> cells, const data::DescriptorTable* descriptors,
                                  BatchTrace* trace) const;
  void backward(const BatchTrace& trace, std::span<const double> logit_grad);

  ModelConfig config_;
  std::size_t num_drugs_ = 0;
  std::size_t num_adrs_ = 0;
  ParamBlock p_;
  ParamBlock q_;
  std::optional<ParamBlock> q_alt_;
  Tower deep_;
  Tower shallow_;
  ParamBlock h_deep_;
  ParamBlock h_cf_;
  ParamBlock h_product_;
};

}  // namespace adrnet::models
