#include "adrnet/models/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adrnet/core/error.hpp"
#include "adrnet/core/ops.hpp"

namespace adrnet::models {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::MF: return "mf";
    case ModelKind::GMF: return "gmf";
    case ModelKind::MLP_CF: return "mlp";
    case ModelKind::NMF: return "nmf";
    case ModelKind::ADRNET: return "adrnet";
    case ModelKind::ADRNET_NOSHARE: return "adrnet-noshare";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  for (ModelKind k : {ModelKind::MF, ModelKind::GMF, ModelKind::MLP_CF, ModelKind::NMF, ModelKind::ADRNET,
                      ModelKind::ADRNET_NOSHARE}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown model '" + name + "' (expected mf, gmf, mlp, nmf, adrnet or adrnet-noshare)");
}

bool uses_descriptors(ModelKind kind) { return kind == ModelKind::ADRNET || kind == ModelKind::ADRNET_NOSHARE; }

bool uses_shallow_tower(ModelKind kind) {
  return kind == ModelKind::MLP_CF || kind == ModelKind::NMF || uses_descriptors(kind);
}

bool uses_product_head(ModelKind kind) {
  return kind == ModelKind::GMF || kind == ModelKind::NMF || uses_descriptors(kind);
}

ModelConfig ModelConfig::resolved() const {
  ModelConfig out = *this;
  const std::size_t K = embedding_size;
  if (out.deep_widths.empty() && uses_descriptors(kind)) out.deep_widths = {descriptor_dim, 512, 128, K};
  if (out.shallow_widths.empty() && uses_shallow_tower(kind)) out.shallow_widths = {2 * K, K};
  return out;
}

namespace {

std::string widths_string(const std::vector<std::size_t>& w) {
  std::ostringstream os;
  for (std::size_t k = 0; k < w.size(); ++k) os << (k ? "," : "") << w[k];
  return os.str();
}

Matrix gather_rows(const Matrix& table, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), table.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto src = table.row(rows[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

void scatter_add_rows(Matrix& table, std::span<const std::size_t> rows, const Matrix& values) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto dst = table.row(rows[r]);
    auto src = values.row(r);
    for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
  }
}

void check_index(std::size_t value, std::size_t limit, const char* what) {
  if (value >= limit) {
    throw DimensionError(std::string(what) + " index " + std::to_string(value) + " out of range [0, " +
                         std::to_string(limit) + ")");
  }
}

}  // namespace

void ModelConfig::validate() const {
  const ModelConfig c = resolved();
  const std::size_t K = c.embedding_size;
  if (K == 0) throw ConfigError("embedding size must be positive");
  if (uses_descriptors(kind)) {
    if (c.descriptor_dim == 0) throw ConfigError(to_string(kind) + " needs a positive descriptor dimension");
    if (c.deep_widths.size() < 2 || c.deep_widths.front() != c.descriptor_dim || c.deep_widths.back() != K) {
      throw ConfigError("deep widths [" + widths_string(c.deep_widths) + "] must run from D=" +
                        std::to_string(c.descriptor_dim) + " to K=" + std::to_string(K));
    }
  }
  if (uses_shallow_tower(kind)) {
    if (c.shallow_widths.size() < 2 || c.shallow_widths.front() != 2 * K || c.shallow_widths.back() != K) {
      throw ConfigError("shallow widths [" + widths_string(c.shallow_widths) + "] must run from 2K=" +
                        std::to_string(2 * K) + " to K=" + std::to_string(K));
    }
  }
  if (uses_descriptors(kind) && c.deep_widths.size() <= c.shallow_widths.size()) {
    throw ConfigError("the deep tower must have more layers than the shallow tower");
  }
  for (std::size_t w : c.deep_widths)
    if (w == 0) throw ConfigError("deep widths must be positive");
  for (std::size_t w : c.shallow_widths)
    if (w == 0) throw ConfigError("shallow widths must be positive");
}

Model Model::build(const ModelConfig& config, std::size_t num_drugs, std::size_t num_adrs) {
  if (num_drugs == 0 || num_adrs == 0) throw ConfigError("model needs at least one drug and one ADR");
  config.validate();
  Model m;
  m.config_ = config.resolved();
  m.num_drugs_ = num_drugs;
  m.num_adrs_ = num_adrs;
  const std::size_t K = m.config_.embedding_size;
  const InitScheme scheme = m.config_.init;

  Rng rng(m.config_.seed);
  m.p_ = init_params("P", num_drugs, K, scheme, rng);
  m.q_ = init_params("Q", num_adrs, K, scheme, rng);
  if (m.config_.kind == ModelKind::ADRNET_NOSHARE) m.q_alt_ = init_params("Q_alt", num_adrs, K, scheme, rng);
  if (uses_descriptors(m.config_.kind)) m.deep_ = Tower("deep", m.config_.deep_widths, scheme, rng);
  if (uses_shallow_tower(m.config_.kind)) m.shallow_ = Tower("shallow", m.config_.shallow_widths, scheme, rng);
  if (uses_descriptors(m.config_.kind)) m.h_deep_ = init_params("h_D", K, 1, scheme, rng);
  if (uses_shallow_tower(m.config_.kind)) m.h_cf_ = init_params("h_CF", K, 1, scheme, rng);
  if (uses_product_head(m.config_.kind)) m.h_product_ = init_params("h_DCF", K, 1, scheme, rng);
  return m;
}

std::vector<ParamBlock*> Model::parameters() {
  std::vector<ParamBlock*> out{&p_, &q_};
  if (q_alt_) out.push_back(&*q_alt_);
  for (auto* tower : {&deep_, &shallow_}) {
    for (auto& layer : tower->layers()) {
      out.push_back(&layer.W);
      out.push_back(&layer.b);
    }
  }
  if (uses_descriptors(kind())) out.push_back(&h_deep_);
  if (uses_shallow_tower(kind())) out.push_back(&h_cf_);
  if (uses_product_head(kind())) out.push_back(&h_product_);
  return out;
}

std::vector<const ParamBlock*> Model::parameters() const {
  auto mutable_params = const_cast<Model*>(this)->parameters();
  return {mutable_params.begin(), mutable_params.end()};
}

ParamBlock* Model::find_parameter(const std::string& name) {
  for (ParamBlock* b : parameters())
    if (b->name == name) return b;
  return nullptr;
}

void Model::check_descriptors(const data::DescriptorTable* descriptors) const {
  if (!uses_descriptors(kind())) return;
  if (descriptors == nullptr) throw ConfigError(to_string(kind()) + " needs drug descriptors");
  if (descriptors->dim() != config_.descriptor_dim) {
    throw DimensionError("descriptor width " + std::to_string(descriptors->dim()) + " but the model expects " +
                         std::to_string(config_.descriptor_dim));
  }
  if (descriptors->num_drugs() != num_drugs_) {
    throw DimensionError("descriptor table has " + std::to_string(descriptors->num_drugs()) + " drugs, model has " +
                         std::to_string(num_drugs_));
  }
}

// ---- single-cell pieces ----------------------------------------------------------------

double Model::mf_predict(std::size_t drug, std::size_t adr) const {
  check_index(drug, num_drugs_, "drug");
  check_index(adr, num_adrs_, "ADR");
  return sigmoid(dot(p_.value.row(drug), q_.value.row(adr)));
}

DeepDrugOutput Model::deep_drug_forward(ActiveBits descriptor) const {
  if (!uses_descriptors(kind())) throw ConfigError(to_string(kind()) + " has no deep drug tower");
  const ActiveBits rows[] = {descriptor};
  Matrix phi = deep_.forward_sparse(rows);
  DeepDrugOutput out;
  out.representation.assign(phi.row(0).begin(), phi.row(0).end());
  out.logit = dot(out.representation, h_deep_.value.values());
  return out;
}

DeepDrugOutput Model::deep_drug_forward(std::span<const double> pc, std::span<const double> bio) const {
  if (pc.size() + bio.size() != config_.descriptor_dim) {
    throw DimensionError("descriptor halves of length " + std::to_string(pc.size()) + " + " +
                         std::to_string(bio.size()) + " do not add up to D=" + std::to_string(config_.descriptor_dim));
  }
  std::vector<std::uint32_t> bits;
  auto collect = [&](std::span<const double> part, std::size_t offset) {
    for (std::size_t k = 0; k < part.size(); ++k) {
      if (part[k] == 1.0) {
        bits.push_back(static_cast<std::uint32_t>(offset + k));
      } else if (part[k] != 0.0) {
        throw DomainError("descriptor entries must be 0 or 1");
      }
    }
  };
  collect(pc, 0);
  collect(bio, pc.size());
  return deep_drug_forward(bits);
}

double Model::shallow_cf_forward(std::size_t drug, std::size_t adr) const {
  if (!uses_shallow_tower(kind())) throw ConfigError(to_string(kind()) + " has no shallow tower");
  check_index(drug, num_drugs_, "drug");
  check_index(adr, num_adrs_, "ADR");
  Matrix z = concat(Matrix::row_vector(p_.value.row(drug)), Matrix::row_vector(q_.value.row(adr)));
  Matrix out = shallow_.forward(z);
  return dot(out.row(0), h_cf_.value.values());
}

double Model::dcf_forward(std::span<const double> drug_representation, std::size_t adr) const {
  if (!uses_product_head(kind())) throw ConfigError(to_string(kind()) + " has no product head");
  check_index(adr, num_adrs_, "ADR");
  if (drug_representation.size() != embedding_size()) {
    throw DimensionError("drug representation of length " + std::to_string(drug_representation.size()) +
                         ", expected K=" + std::to_string(embedding_size()));
  }
  Matrix e = elementwise_product(Matrix::row_vector(drug_representation),
                                 Matrix::row_vector(product_adr_factors().value.row(adr)));
  return dot(e.row(0), h_product_.value.values());
}

HeadLogits Model::head_logits(std::size_t drug, std::size_t adr, const data::DescriptorTable* descriptors) const {
  const data::Cell cell{static_cast<std::uint32_t>(drug), static_cast<std::uint32_t>(adr)};
  return batch_head_logits(std::span(&cell, 1), descriptors).front();
}

double Model::predict(std::size_t drug, std::size_t adr, const data::DescriptorTable* descriptors) const {
  return sigmoid(head_logits(drug, adr, descriptors).total());
}

// ---- batched forward / backward ------------------------------------------------------

struct Model::BatchTrace {
  std::vector<std::size_t> drugs;
  std::vector<std::size_t> adrs;
  // Deep tower runs once per distinct drug in the batch.
  std::vector<std::size_t> slot;
  std::vector<std::size_t> unique_drugs;
  TowerCache deep_cache;
  Matrix representation;  // U x K
  TowerCache shallow_cache;
  Matrix shallow_out;  // B x K
  Matrix left;         // B x K, phi or P rows
  Matrix right;        // B x K, Q (or Q_alt) rows
  Matrix product;      // B x K
};

std::vector<HeadLogits> Model::forward(std::span<const data::Cell> cells, const data::DescriptorTable* descriptors,
                                       BatchTrace* trace) const {
  check_descriptors(descriptors);
  const std::size_t B = cells.size();
  BatchTrace local;
  BatchTrace& t = trace ? *trace : local;
  t = BatchTrace{};
  t.drugs.resize(B);
  t.adrs.resize(B);
  for (std::size_t r = 0; r < B; ++r) {
    check_index(cells[r].drug, num_drugs_, "drug");
    check_index(cells[r].adr, num_adrs_, "ADR");
    t.drugs[r] = cells[r].drug;
    t.adrs[r] = cells[r].adr;
  }
  std::vector<HeadLogits> logits(B);

  if (uses_descriptors(kind())) {
    std::vector<std::size_t> slot_of(num_drugs_, SIZE_MAX);
    t.slot.resize(B);
    for (std::size_t r = 0; r < B; ++r) {
      std::size_t& s = slot_of[t.drugs[r]];
      if (s == SIZE_MAX) {
        s = t.unique_drugs.size();
        t.unique_drugs.push_back(t.drugs[r]);
      }
      t.slot[r] = s;
    }
    std::vector<ActiveBits> bits;
    bits.reserve(t.unique_drugs.size());
    for (std::size_t i : t.unique_drugs) bits.push_back(descriptors->active(i));
    t.representation = deep_.forward_sparse(bits, trace ? &t.deep_cache : nullptr);
    const Matrix deep_logit = matmul(t.representation, h_deep_.value);
    for (std::size_t r = 0; r < B; ++r) logits[r].deep = deep_logit[t.slot[r]];
  }

  if (uses_shallow_tower(kind())) {
    const Matrix z = concat(gather_rows(p_.value, t.drugs), gather_rows(q_.value, t.adrs));
    t.shallow_out = shallow_.forward(z, trace ? &t.shallow_cache : nullptr);
    const Matrix cf_logit = matmul(t.shallow_out, h_cf_.value);
    for (std::size_t r = 0; r < B; ++r) logits[r].cf = cf_logit[r];
  }

  if (kind() == ModelKind::MF || uses_product_head(kind())) {
    if (uses_descriptors(kind())) {
      t.left = gather_rows(t.representation, t.slot);
    } else {
      t.left = gather_rows(p_.value, t.drugs);
    }
    t.right = gather_rows(product_adr_factors().value, t.adrs);
    t.product = elementwise_product(t.left, t.right);
    if (kind() == ModelKind::MF) {
      for (std::size_t r = 0; r < B; ++r) {
        double s = 0.0;
        for (double x : t.product.row(r)) s += x;
        logits[r].product = s;
      }
    } else {
      const Matrix product_logit = matmul(t.product, h_product_.value);
      for (std::size_t r = 0; r < B; ++r) logits[r].product = product_logit[r];
    }
  }
  return logits;
}

void Model::backward(const BatchTrace& t, std::span<const double> logit_grad) {
  const std::size_t B = logit_grad.size();
  const std::size_t K = embedding_size();
  const Matrix g(B, 1, std::vector<double>(logit_grad.begin(), logit_grad.end()));

  Matrix d_representation;
  if (uses_descriptors(kind())) {
    Matrix g_drug(t.unique_drugs.size(), 1);
    for (std::size_t r = 0; r < B; ++r) g_drug[t.slot[r]] += g[r];
    const Matrix dh = matmul_at_b(t.representation, g_drug);
    for (std::size_t k = 0; k < K; ++k) h_deep_.grad[k] += dh[k];
    d_representation = matmul_a_bt(g_drug, h_deep_.value);
  }

  if (uses_shallow_tower(kind())) {
    const Matrix dh = matmul_at_b(t.shallow_out, g);
    for (std::size_t k = 0; k < K; ++k) h_cf_.grad[k] += dh[k];
    const Matrix d_out = matmul_a_bt(g, h_cf_.value);
    const Matrix dz = shallow_.backward(t.shallow_cache, d_out);
    auto [dp, dq] = concat_backward(dz, K);
    scatter_add_rows(p_.grad, t.drugs, dp);
    scatter_add_rows(q_.grad, t.adrs, dq);
  }

  if (kind() == ModelKind::MF || uses_product_head(kind())) {
    Matrix d_product;
    if (kind() == ModelKind::MF) {
      d_product = Matrix(B, K);
      for (std::size_t r = 0; r < B; ++r)
        for (std::size_t k = 0; k < K; ++k) d_product(r, k) = g[r];
    } else {
      const Matrix dh = matmul_at_b(t.product, g);
      for (std::size_t k = 0; k < K; ++k) h_product_.grad[k] += dh[k];
      d_product = matmul_a_bt(g, h_product_.value);
    }
    auto [d_left, d_right] = elementwise_product_backward(t.left, t.right, d_product);
    if (uses_descriptors(kind())) {
      scatter_add_rows(d_representation, t.slot, d_left);
    } else {
      scatter_add_rows(p_.grad, t.drugs, d_left);
    }
    scatter_add_rows(product_adr_factors().grad, t.adrs, d_right);
  }

  if (uses_descriptors(kind())) deep_.backward(t.deep_cache, d_representation);
}

std::vector<HeadLogits> Model::batch_head_logits(std::span<const data::Cell> cells,
                                                 const data::DescriptorTable* descriptors) const {
  return forward(cells, descriptors, nullptr);
}

std::vector<double> Model::predict_batch(std::span<const data::Cell> cells,
                                         const data::DescriptorTable* descriptors) const {
  const auto logits = forward(cells, descriptors, nullptr);
  std::vector<double> out(logits.size());
  for (std::size_t r = 0; r < logits.size(); ++r) out[r] = sigmoid(logits[r].total());
  return out;
}

namespace {

std::vector<data::Cell> strip_labels(std::span<const data::LabeledCell> batch, std::vector<double>& labels) {
  std::vector<data::Cell> cells(batch.size());
  labels.resize(batch.size());
  for (std::size_t r = 0; r < batch.size(); ++r) {
    cells[r] = {batch[r].drug, batch[r].adr};
    labels[r] = batch[r].label;
  }
  return cells;
}

}  // namespace

double Model::loss(std::span<const data::LabeledCell> batch, const data::DescriptorTable* descriptors) const {
  std::vector<double> labels;
  const auto cells = strip_labels(batch, labels);
  return bce_loss(predict_batch(cells, descriptors), labels);
}

double Model::accumulate_gradients(std::span<const data::LabeledCell> batch,
                                   const data::DescriptorTable* descriptors) {
  if (batch.empty()) throw ConfigError("empty training batch");
  std::vector<double> labels;
  const auto cells = strip_labels(batch, labels);
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw DomainError("training labels must be 0 or 1");
  }
  BatchTrace trace;
  const auto logits = forward(cells, descriptors, &trace);
  std::vector<double> y_hat(logits.size());
  for (std::size_t r = 0; r < logits.size(); ++r) y_hat[r] = sigmoid(logits[r].total());
  const double batch_loss = bce_loss(y_hat, labels);
  if (!std::isfinite(batch_loss)) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& l : logits) {
      lo = std::min(lo, l.total());
      hi = std::max(hi, l.total());
    }
    std::ostringstream msg;
    msg << "non-finite loss on a batch of " << batch.size() << " cells (logit range [" << lo << ", " << hi << "])";
    throw NumericError(msg.str());
  }
  std::vector<double> logit_grad(y_hat.size());
  for (std::size_t r = 0; r < y_hat.size(); ++r) logit_grad[r] = sigmoid_bce_logit_grad(y_hat[r], labels[r]);
  backward(trace, logit_grad);
  return batch_loss;
}

double Model::train_step(std::span<const data::LabeledCell> batch, const data::DescriptorTable* descriptors,
                         const AdamConfig& adam) {
  const double batch_loss = accumulate_gradients(batch, descriptors);
  for (ParamBlock* block : parameters()) adam_step(*block, adam);
  return batch_loss;
}

void Model::zero_grad() {
  for (ParamBlock* block : parameters()) block->zero_grad();
}

void Model::permute_drugs(std::span<const std::size_t> new_index) {
  if (new_index.size() != num_drugs_) throw DimensionError("permute_drugs: permutation length mismatch");
  auto permute = [&](Matrix& m) {
    Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < num_drugs_; ++i) {
      std::copy(m.row(i).begin(), m.row(i).end(), out.row(new_index[i]).begin());
    }
    m = std::move(out);
  };
  permute(p_.value);
  permute(p_.grad);
  permute(p_.m);
  permute(p_.v);
}

}  // namespace adrnet::models
