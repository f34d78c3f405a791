#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "adrnet/core/error.hpp"
#include "adrnet/core/grad_check.hpp"
#include "adrnet/core/ops.hpp"
#include "adrnet/models/model.hpp"
#include "adrnet/models/serialize.hpp"
#include "oracles.hpp"

using namespace adrnet;
using models::Model;
using models::ModelConfig;
using models::ModelKind;

namespace {

constexpr ModelKind kAllKinds[] = {ModelKind::MF,  ModelKind::GMF,    ModelKind::MLP_CF,
                                   ModelKind::NMF, ModelKind::ADRNET, ModelKind::ADRNET_NOSHARE};

ModelConfig small_config(ModelKind kind, std::uint64_t seed = 1) {
  ModelConfig c;
  c.kind = kind;
  c.embedding_size = 4;
  c.descriptor_dim = 32;
  c.deep_widths = {32, 8, 4};
  c.shallow_widths = {8, 4};
  c.seed = seed;
  return c;
}

data::DescriptorTable random_descriptors(Rng& rng, std::size_t drugs, std::size_t dim) {
  std::vector<std::string> ids;
  std::vector<std::vector<std::uint32_t>> rows(drugs);
  for (std::size_t i = 0; i < drugs; ++i) {
    ids.push_back("d" + std::to_string(i));
    for (std::uint32_t b = 0; b < dim; ++b)
      if (rng.bernoulli(0.3)) rows[i].push_back(b);
  }
  return data::DescriptorTable(ids, dim, 0, rows);
}

// Spreads every parameter over a wider range and keeps biases positive so
// most ReLU units are active.
void randomize(Model& m, Rng& rng) {
  for (ParamBlock* p : m.parameters()) {
    const bool bias = p->name.size() > 2 && p->name.substr(p->name.size() - 2) == ".b";
    for (auto& v : p->value.values()) v = bias ? rng.uniform(0.05, 0.5) : rng.uniform(-1.0, 1.0);
  }
}

std::vector<data::LabeledCell> random_batch(Rng& rng, std::size_t n, std::size_t drugs, std::size_t adrs) {
  std::vector<data::LabeledCell> batch;
  for (std::size_t k = 0; k < n; ++k)
    batch.push_back({static_cast<std::uint32_t>(rng.below(drugs)), static_cast<std::uint32_t>(rng.below(adrs)),
                     rng.bernoulli(0.5) ? 1.0 : 0.0});
  return batch;
}

void copy_values(Model& dst, const Model& src) {
  for (const ParamBlock* p : src.parameters()) {
    ParamBlock* q = dst.find_parameter(p->name);
    ASSERT_NE(q, nullptr) << p->name;
    q->value = p->value;
  }
}

}  // namespace

// ---- build / config --------------------------------------------------------------------

TEST(Build, LatentShapes) {
  ModelConfig c;
  c.kind = ModelKind::MF;
  c.embedding_size = 16;
  const Model m = Model::build(c, 828, 1385);
  EXPECT_EQ(m.drug_factors().rows(), 828u);
  EXPECT_EQ(m.drug_factors().cols(), 16u);
  EXPECT_EQ(m.adr_factors().rows(), 1385u);
  EXPECT_EQ(m.adr_factors().cols(), 16u);
}

TEST(Build, NoShareHasIndependentQAlt) {
  const Model m = Model::build(small_config(ModelKind::ADRNET_NOSHARE), 5, 6);
  ASSERT_TRUE(m.has_separate_product_factors());
  EXPECT_NE(m.adr_factors().value, m.product_adr_factors().value);
  const Model shared = Model::build(small_config(ModelKind::ADRNET), 5, 6);
  EXPECT_FALSE(shared.has_separate_product_factors());
  EXPECT_EQ(&shared.adr_factors(), &shared.product_adr_factors());
}

TEST(Build, DeepWidthsMustEndAtK) {
  ModelConfig c;
  c.kind = ModelKind::ADRNET;
  c.embedding_size = 64;
  c.descriptor_dim = 7593;
  c.deep_widths = {7593, 512, 128, 64};
  EXPECT_NO_THROW(c.validate());
  c.deep_widths = {7593, 512, 128, 32};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Build, Rejections) {
  EXPECT_THROW(Model::build(small_config(ModelKind::MF), 0, 5), ConfigError);
  auto c = small_config(ModelKind::ADRNET);
  c.deep_widths = {32, 4};  // not deeper than the shallow tower
  EXPECT_THROW(Model::build(c, 3, 3), ConfigError);
  c = small_config(ModelKind::ADRNET);
  c.shallow_widths = {6, 4};
  EXPECT_THROW(Model::build(c, 3, 3), ConfigError);
  c = small_config(ModelKind::ADRNET);
  c.descriptor_dim = 0;
  c.deep_widths.clear();
  EXPECT_THROW(Model::build(c, 3, 3), ConfigError);
}

TEST(Build, DefaultWidths) {
  ModelConfig c;
  c.embedding_size = 16;
  c.descriptor_dim = 100;
  const auto r = c.resolved();
  EXPECT_EQ(r.deep_widths, (std::vector<std::size_t>{100, 512, 128, 16}));
  EXPECT_EQ(r.shallow_widths, (std::vector<std::size_t>{32, 16}));
}

TEST(Build, KindNames) {
  for (ModelKind k : kAllKinds) EXPECT_EQ(models::parse_model_kind(models::to_string(k)), k);
  EXPECT_EQ(models::to_string(ModelKind::ADRNET_NOSHARE), "adrnet-noshare");
  EXPECT_EQ(models::to_string(ModelKind::MLP_CF), "mlp");
  EXPECT_THROW(models::parse_model_kind("ADRNet"), ConfigError);
}

TEST(Build, SameSeedSameParameters) {
  const Model a = Model::build(small_config(ModelKind::ADRNET, 7), 4, 5);
  const Model b = Model::build(small_config(ModelKind::ADRNET, 7), 4, 5);
  const auto pa = a.parameters(), pb = b.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) EXPECT_EQ(pa[i]->value, pb[i]->value);
}

// ---- MF --------------------------------------------------------------------------------

TEST(MfPredict, Examples) {
  auto c = small_config(ModelKind::MF);
  c.embedding_size = 2;
  Model m = Model::build(c, 1, 2);
  m.drug_factors().value = Matrix::row_vector({1, 2});
  m.adr_factors().value = Matrix(2, 2, std::vector<double>{3, 4, 0, 0});
  EXPECT_DOUBLE_EQ(m.mf_predict(0, 0), sigmoid(11.0));
  EXPECT_EQ(m.mf_predict(0, 1), 0.5);
  EXPECT_THROW(m.mf_predict(1, 0), Error);
  EXPECT_THROW(m.mf_predict(0, 2), Error);
}

TEST(MfPredict, MatchesLoopDot) {
  Rng rng(3);
  auto c = small_config(ModelKind::MF);
  c.embedding_size = 9;
  Model m = Model::build(c, 6, 7);
  randomize(m, rng);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 7; ++j) {
      const double s = oracle::loop_dot(m.drug_factors().value.row(i), m.adr_factors().value.row(j));
      EXPECT_NEAR(logit(m.mf_predict(i, j)), s, 1e-12 * std::max(1.0, std::abs(s)) * 1e3);
      EXPECT_NEAR(m.batch_head_logits(std::vector<data::Cell>{{uint32_t(i), uint32_t(j)}}, nullptr)[0].product, s,
                  1e-12);
    }
}

// ---- deep tower ------------------------------------------------------------------------

TEST(DeepDrug, ZeroDescriptorDependsOnlyOnBiases) {
  Rng rng(4);
  Model m = Model::build(small_config(ModelKind::ADRNET), 2, 2);
  randomize(m, rng);
  const std::vector<std::uint32_t> none;
  const auto before = m.deep_drug_forward(none);
  const auto ref = oracle::loop_tower(m.deep_tower(), std::vector<double>(32, 0.0));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(before.representation[k], ref[k], 1e-12);
  for (auto& v : m.deep_tower().layers()[0].W.value.values()) v = rng.uniform(-5, 5);
  const auto after = m.deep_drug_forward(none);
  EXPECT_EQ(before.representation, after.representation);
}

TEST(DeepDrug, OneActiveBitSelectsWeightRow) {
  Rng rng(5);
  Model m = Model::build(small_config(ModelKind::ADRNET), 2, 2);
  randomize(m, rng);
  const auto& layer = m.deep_tower().layers()[0];
  for (std::uint32_t k : {0u, 13u, 31u}) {
    const std::vector<std::uint32_t> bits{k};
    const std::vector<ActiveBits> rows{bits};
    TowerCache cache;
    m.deep_tower().forward_sparse(rows, &cache);
    for (std::size_t o = 0; o < layer.W.cols(); ++o)
      EXPECT_EQ(cache.pre_activation[0](0, o), layer.W.value(k, o) + layer.b.value(0, o));
  }
}

TEST(DeepDrug, DenseAndSparsePathsAgree) {
  Rng rng(6);
  auto c = small_config(ModelKind::ADRNET);
  Model m = Model::build(c, 2, 2);
  randomize(m, rng);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pc(20, 0.0), bio(12, 0.0);
    std::vector<std::uint32_t> bits;
    for (std::uint32_t b = 0; b < 32; ++b)
      if (rng.bernoulli(0.25)) {
        bits.push_back(b);
        (b < 20 ? pc[b] : bio[b - 20]) = 1.0;
      }
    const auto sparse = m.deep_drug_forward(bits);
    const auto dense = m.deep_drug_forward(pc, bio);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(sparse.representation[k], dense.representation[k], 1e-12);
    EXPECT_NEAR(sparse.logit, dense.logit, 1e-12);
  }
}

TEST(DeepDrug, DescriptorLengthAndValueChecks) {
  Model m = Model::build(small_config(ModelKind::ADRNET), 2, 2);
  std::vector<double> pc(20, 0.0), bio(11, 0.0);
  EXPECT_THROW(m.deep_drug_forward(pc, bio), DimensionError);
  bio.push_back(0.5);
  EXPECT_THROW(m.deep_drug_forward(pc, bio), Error);
}

TEST(DeepDrug, DeepLogitIsConstantAcrossAdrs) {
  Rng rng(7);
  Model m = Model::build(small_config(ModelKind::ADRNET), 3, 9);
  randomize(m, rng);
  const auto desc = random_descriptors(rng, 3, 32);
  for (std::uint32_t i = 0; i < 3; ++i) {
    std::vector<data::Cell> cells;
    for (std::uint32_t j = 0; j < 9; ++j) cells.push_back({i, j});
    const auto logits = m.batch_head_logits(cells, &desc);
    for (const auto& h : logits) EXPECT_EQ(h.deep, logits[0].deep);
  }
}

// ---- shallow tower ---------------------------------------------------------------------

TEST(ShallowCf, ZeroLatentsGiveHalf) {
  auto c = small_config(ModelKind::MLP_CF);
  c.init = InitScheme::Zeros;
  const Model m = Model::build(c, 3, 3);
  EXPECT_EQ(m.shallow_cf_forward(1, 2), 0.0);
  EXPECT_EQ(m.predict(1, 2, nullptr), 0.5);
}

TEST(ShallowCf, SwappingDrugRowsSwapsLogits) {
  Rng rng(8);
  Model m = Model::build(small_config(ModelKind::NMF), 4, 5);
  randomize(m, rng);
  std::vector<double> before0, before2;
  for (std::size_t j = 0; j < 5; ++j) {
    before0.push_back(m.shallow_cf_forward(0, j));
    before2.push_back(m.shallow_cf_forward(2, j));
  }
  auto& P = m.drug_factors().value;
  for (std::size_t k = 0; k < P.cols(); ++k) std::swap(P(0, k), P(2, k));
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_EQ(m.shallow_cf_forward(0, j), before2[j]);
    EXPECT_EQ(m.shallow_cf_forward(2, j), before0[j]);
  }
}

TEST(ShallowCf, MatchesLoopOracle) {
  Rng rng(9);
  Model m = Model::build(small_config(ModelKind::ADRNET), 4, 5);
  randomize(m, rng);
  const std::vector<std::uint32_t> none;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const auto h = oracle::loop_head_inputs(m, i, j, none);
      const double ref = oracle::loop_dot(h.cf, m.cf_head().value.values());
      EXPECT_NEAR(m.shallow_cf_forward(i, j), ref, 1e-12);
    }
}

// ---- product head ----------------------------------------------------------------------

TEST(Dcf, UnitHeadReducesToInnerProduct) {
  Rng rng(10);
  Model m = Model::build(small_config(ModelKind::ADRNET), 2, 3);
  randomize(m, rng);
  m.product_head().value.fill(1.0);
  const std::vector<double> phi{0.3, 1.2, 0.0, 2.5};
  for (std::size_t j = 0; j < 3; ++j)
    EXPECT_NEAR(m.dcf_forward(phi, j), oracle::loop_dot(phi, m.adr_factors().value.row(j)), 1e-12);
}

TEST(Dcf, ZeroAdrVectorGivesZero) {
  Rng rng(11);
  Model m = Model::build(small_config(ModelKind::ADRNET), 2, 3);
  randomize(m, rng);
  for (std::size_t k = 0; k < 4; ++k) m.adr_factors().value(1, k) = 0.0;
  EXPECT_EQ(m.dcf_forward(std::vector<double>{1, 2, 3, 4}, 1), 0.0);
}

TEST(Dcf, MatchesLoopOracleBothKinds) {
  Rng rng(12);
  for (ModelKind kind : {ModelKind::ADRNET, ModelKind::ADRNET_NOSHARE}) {
    Model m = Model::build(small_config(kind), 2, 6);
    randomize(m, rng);
    std::vector<double> phi(4);
    for (auto& v : phi) v = rng.uniform(0, 2);
    for (std::size_t j = 0; j < 6; ++j) {
      double ref = 0.0;
      for (std::size_t k = 0; k < 4; ++k)
        ref += m.product_head().value[k] * phi[k] * m.product_adr_factors().value(j, k);
      EXPECT_NEAR(m.dcf_forward(phi, j), ref, 1e-12);
    }
  }
}

TEST(Dcf, GmfUsesDrugFactorsInPlaceOfPhi) {
  Rng rng(13);
  Model m = Model::build(small_config(ModelKind::GMF), 3, 4);
  randomize(m, rng);
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 4; ++j) {
      const auto p = m.drug_factors().value.row(i);
      const double ref = m.dcf_forward(std::vector<double>(p.begin(), p.end()), j);
      EXPECT_NEAR(logit(m.predict(i, j, nullptr)), ref, 1e-9);
    }
}

// ---- predict ---------------------------------------------------------------------------

TEST(Predict, ZeroAndCancellingLogits) {
  EXPECT_EQ(sigmoid(models::HeadLogits{0, 0, 0}.total()), 0.5);
  EXPECT_EQ(sigmoid(models::HeadLogits{2, -2, 0}.total()), 0.5);
  auto c = small_config(ModelKind::ADRNET);
  c.init = InitScheme::Zeros;
  Rng rng(1);
  const auto desc = random_descriptors(rng, 2, 32);
  const Model m = Model::build(c, 2, 2);
  EXPECT_EQ(m.predict(0, 1, &desc), 0.5);
}

TEST(Predict, LogitSumEqualsExplicitConcatenatedHead) {
  Rng rng(14);
  for (int draw = 0; draw < 1000; ++draw) {
    Model m = Model::build(small_config(ModelKind::ADRNET, draw), 3, 4);
    randomize(m, rng);
    const auto desc = random_descriptors(rng, 3, 32);
    const std::uint32_t i = rng.below(3), j = rng.below(4);
    const auto h = oracle::loop_head_inputs(m, i, j, desc.active(i));
    std::vector<double> z, w;
    z.insert(z.end(), h.deep.begin(), h.deep.end());
    z.insert(z.end(), h.cf.begin(), h.cf.end());
    z.insert(z.end(), h.product.begin(), h.product.end());
    for (const auto* head : {&m.deep_head(), &m.cf_head(), &m.product_head()})
      w.insert(w.end(), head->value.values().begin(), head->value.values().end());
    const double ref = oracle::plain_sigmoid(oracle::loop_dot(w, z));
    ASSERT_NEAR(m.predict(i, j, &desc), ref, 1e-12);
  }
}

TEST(Predict, NmfIsCfPlusGmfLogit) {
  Rng rng(15);
  Model m = Model::build(small_config(ModelKind::NMF), 3, 4);
  randomize(m, rng);
  for (std::uint32_t i = 0; i < 3; ++i)
    for (std::uint32_t j = 0; j < 4; ++j) {
      const auto p = m.drug_factors().value.row(i);
      const double ref = m.shallow_cf_forward(i, j) + m.dcf_forward(std::vector<double>(p.begin(), p.end()), j);
      EXPECT_NEAR(m.head_logits(i, j, nullptr).total(), ref, 1e-12);
    }
}

TEST(Predict, MissingDescriptorsIsConfigError) {
  const Model m = Model::build(small_config(ModelKind::ADRNET), 2, 2);
  EXPECT_THROW(m.predict(0, 0, nullptr), ConfigError);
}

TEST(Predict, PermutingAdrsPermutesPredictions) {
  Rng rng(16);
  for (ModelKind kind : kAllKinds) {
    Model a = Model::build(small_config(kind), 3, 5);
    randomize(a, rng);
    Model b = a;
    const std::vector<std::size_t> perm{3, 0, 4, 1, 2};
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = 0; k < 4; ++k) {
        b.adr_factors().value(perm[j], k) = a.adr_factors().value(j, k);
        if (a.has_separate_product_factors())
          b.product_adr_factors().value(perm[j], k) = a.product_adr_factors().value(j, k);
      }
    const auto desc = random_descriptors(rng, 3, 32);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(a.predict(i, j, &desc), b.predict(i, perm[j], &desc));
  }
}

TEST(Predict, BatchMatchesSingleCell) {
  Rng rng(17);
  for (ModelKind kind : kAllKinds) {
    Model m = Model::build(small_config(kind), 4, 5);
    randomize(m, rng);
    const auto desc = random_descriptors(rng, 4, 32);
    std::vector<data::Cell> cells;
    for (int k = 0; k < 12; ++k) cells.push_back({uint32_t(rng.below(4)), uint32_t(rng.below(5))});
    const auto batch = m.predict_batch(cells, &desc);
    for (std::size_t k = 0; k < cells.size(); ++k)
      EXPECT_NEAR(batch[k], m.predict(cells[k].drug, cells[k].adr, &desc), 1e-15);
  }
}

// ---- training --------------------------------------------------------------------------

TEST(TrainStep, GradientCheckEveryKind) {
  Rng rng(18);
  for (ModelKind kind : kAllKinds) {
    Model m = Model::build(small_config(kind), 6, 7);
    randomize(m, rng);
    const auto desc = random_descriptors(rng, 6, 32);
    const auto batch = random_batch(rng, 8, 6, 7);
    m.zero_grad();
    m.accumulate_gradients(batch, &desc);
    const auto params = m.parameters();
    const auto r = grad_check([&] { return m.loss(batch, &desc); }, params, {.seed = 3});
    EXPECT_LT(r.max_relative_error, 1e-4) << models::to_string(kind) << " worst " << r.worst_block->name;
  }
}

TEST(TrainStep, ExactPredictionMeansNoUpdate) {
  auto c = small_config(ModelKind::MF);
  c.embedding_size = 2;
  Model m = Model::build(c, 1, 2);
  m.drug_factors().value = Matrix::row_vector({30, 30});
  m.adr_factors().value = Matrix(2, 2, std::vector<double>{30, 30, -30, -30});
  const Model before = m;
  const std::vector<data::LabeledCell> batch{{0, 0, 1.0}, {0, 1, 0.0}};
  const double loss = m.train_step(batch, nullptr, AdamConfig{});
  EXPECT_LT(loss, 1e-11);
  EXPECT_EQ(m.drug_factors().value, before.drug_factors().value);
  EXPECT_EQ(m.adr_factors().value, before.adr_factors().value);
  for (const auto* p : m.parameters())
    for (double g : p->grad.values()) EXPECT_EQ(g, 0.0);
}

TEST(TrainStep, SharedQGradientIsSumOfPaths) {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    Model shared = Model::build(small_config(ModelKind::ADRNET, trial), 4, 5);
    randomize(shared, rng);
    Model twin = Model::build(small_config(ModelKind::ADRNET_NOSHARE, trial), 4, 5);
    copy_values(twin, shared);
    twin.product_adr_factors().value = shared.adr_factors().value;
    const auto desc = random_descriptors(rng, 4, 32);
    const auto batch = random_batch(rng, 1, 4, 5);
    shared.zero_grad();
    twin.zero_grad();
    shared.accumulate_gradients(batch, &desc);
    twin.accumulate_gradients(batch, &desc);
    const auto& gq = shared.adr_factors().grad;
    const auto& g_cf = twin.adr_factors().grad;
    const auto& g_dcf = twin.product_adr_factors().grad;
    for (std::size_t k = 0; k < gq.size(); ++k) ASSERT_NEAR(gq[k], g_cf[k] + g_dcf[k], 1e-10);
  }
}

TEST(TrainStep, SharingDivergesOnlyThroughProductPath) {
  Rng rng(20);
  const auto desc = random_descriptors(rng, 4, 32);
  const auto batch = random_batch(rng, 6, 4, 5);
  for (bool silence_product : {false, true}) {
    Model shared = Model::build(small_config(ModelKind::ADRNET, 3), 4, 5);
    randomize(shared, rng);
    if (silence_product) shared.product_head().value.fill(0.0);
    Model twin = Model::build(small_config(ModelKind::ADRNET_NOSHARE, 3), 4, 5);
    copy_values(twin, shared);
    twin.product_adr_factors().value = shared.adr_factors().value;
    shared.train_step(batch, &desc, AdamConfig{});
    twin.train_step(batch, &desc, AdamConfig{});
    if (silence_product)
      EXPECT_EQ(shared.adr_factors().value, twin.adr_factors().value);
    else
      EXPECT_NE(shared.adr_factors().value, twin.adr_factors().value);
  }
}

TEST(TrainStep, RepeatedStepsReduceLoss) {
  Rng rng(21);
  for (ModelKind kind : kAllKinds) {
    Model m = Model::build(small_config(kind), 6, 7);
    const auto desc = random_descriptors(rng, 6, 32);
    const auto batch = random_batch(rng, 16, 6, 7);
    double prev = m.train_step(batch, &desc, AdamConfig{});
    const double first = prev;
    for (int s = 0; s < 50; ++s) {
      const double now = m.train_step(batch, &desc, AdamConfig{});
      EXPECT_LE(now, prev + 1e-12) << models::to_string(kind) << " step " << s;
      prev = now;
    }
    EXPECT_LT(prev, first);
  }
}

TEST(TrainStep, NonFiniteLossIsNumericError) {
  Model m = Model::build(small_config(ModelKind::MF), 2, 2);
  m.drug_factors().value(0, 0) = std::nan("");
  const std::vector<data::LabeledCell> batch{{0, 0, 1.0}};
  EXPECT_THROW(m.train_step(batch, nullptr, AdamConfig{}), NumericError);
}

TEST(TrainStep, PermuteDrugsMovesRows) {
  Rng rng(22);
  Model m = Model::build(small_config(ModelKind::NMF), 3, 2);
  randomize(m, rng);
  Model p = m;
  const std::vector<std::size_t> perm{2, 0, 1};
  p.permute_drugs(perm);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(m.predict(i, j, nullptr), p.predict(perm[i], j, nullptr));
}

// ---- serialization ---------------------------------------------------------------------

TEST(Serialize, RoundTripIsBitExact) {
  Rng rng(23);
  for (ModelKind kind : kAllKinds) {
    Model m = Model::build(small_config(kind), 3, 4);
    randomize(m, rng);
    const std::vector<std::string> drugs{"a", "b", "c"}, adrs{"w", "x", "y", "z"};
    std::stringstream ss;
    models::write_model(m, drugs, adrs, ss);
    const auto back = models::read_model(ss);
    EXPECT_EQ(back.drug_ids, drugs);
    EXPECT_EQ(back.adr_ids, adrs);
    EXPECT_EQ(back.model.kind(), kind);
    const auto pa = m.parameters();
    const auto pb = back.model.parameters();
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t k = 0; k < pa.size(); ++k) {
      EXPECT_EQ(pa[k]->name, pb[k]->name);
      EXPECT_EQ(pa[k]->value, pb[k]->value);
    }
  }
}

TEST(Serialize, MalformedInputIsParseError) {
  std::stringstream bad("not-a-model\n");
  EXPECT_THROW(models::read_model(bad), ParseError);
  Model m = Model::build(small_config(ModelKind::MF), 2, 2);
  std::stringstream ss;
  models::write_model(m, {"a", "b"}, {"x", "y"}, ss);
  std::string text = ss.str();
  text.resize(text.size() / 2);
  std::stringstream truncated(text);
  EXPECT_THROW(models::read_model(truncated), ParseError);
}
