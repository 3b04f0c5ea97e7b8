// Copyright 2026 The eoqc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "eoqc/drlpe.hpp"
#include "eoqc/gates.hpp"
#include "eoqc/stats.hpp"

namespace eoqc {
namespace {

SystemSpec hadamard_system(int n = 100) {
  return SystemSpec(1, build_drift(DriftParams::one_qubit_z(1.0), 1), {control_from_label("x1", 1)}, 2 * kPi, n);
}

const Eigen::VectorXd kBanditObs = Eigen::VectorXd::Ones(1);

RewardParts bandit_reward(const PulseSet& a) {
  RewardParts r;
  r.reward = -(a(0, 0) - 0.3) * (a(0, 0) - 0.3);
  return r;
}

TrainConfig bandit_config(std::uint64_t seed) {
  TrainConfig c;
  c.n_episodes = 2000;
  c.learning_rate = 0.01;
  c.hidden_layers = {8};
  c.seed = seed;
  return c;
}

MlpPolicy bandit_policy(std::uint64_t seed) { return MlpPolicy::create(1, {8}, 1, 1, 1.0, seed); }

EpisodeRecord record(const SampledAction& s, double sigma, double reward, const Eigen::VectorXd& obs) {
  EpisodeRecord r;
  r.observation = obs;
  r.action = s.action;
  r.sample = s.sample;
  r.sigma = sigma;
  r.log_prob = s.log_prob;
  r.reward = reward;
  return r;
}

TEST(Policy, ShapesAndInit) {
  const MlpPolicy p = MlpPolicy::create(8, {200, 100, 50, 30, 10}, 1, 100, 1.0, 3);
  EXPECT_EQ(p.layer_sizes, (std::vector<int>{8, 200, 100, 50, 30, 10, 100}));
  EXPECT_EQ(p.weights.size(), 6u);
  EXPECT_EQ(p.weights[0].rows(), 200);
  EXPECT_EQ(p.weights[0].cols(), 8);
  EXPECT_TRUE(p.finite());
  EXPECT_EQ(MlpPolicy::create(8, {16}, 1, 4, 1.0, 3), MlpPolicy::create(8, {16}, 1, 4, 1.0, 3));
}

TEST(Policy, ZeroWeightsGiveZeroMeans) {
  MlpPolicy p = MlpPolicy::create(4, {6, 5}, 2, 3, 1.0, 0);
  for (auto& w : p.weights) w.setZero();
  EXPECT_EQ(policy_forward(p, Eigen::VectorXd::Ones(4)), Eigen::VectorXd::Zero(6));
}

TEST(Policy, MeansBoundedAndDeterministic) {
  MlpPolicy p = MlpPolicy::create(4, {6}, 2, 3, 0.7, 0, 50.0);
  const Eigen::VectorXd obs = Eigen::VectorXd::LinSpaced(4, -3.0, 3.0);
  const Eigen::VectorXd m = policy_forward(p, obs);
  EXPECT_LE(m.cwiseAbs().maxCoeff(), 0.7);
  EXPECT_EQ(m, policy_forward(p, obs));
  EXPECT_THROW(policy_forward(p, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST(SampleAction, ZeroSpreadReturnsMeans) {
  MlpPolicy p = MlpPolicy::create(2, {5}, 1, 4, 1.0, 1, 1.0);
  p.set_std(1e-300);
  std::mt19937_64 rng(0);
  const Eigen::VectorXd obs = Eigen::VectorXd::Ones(2);
  const SampledAction s = sample_action(p, obs, rng);
  EXPECT_EQ(vector_from_pulses(s.action), policy_forward(p, obs));
}

TEST(SampleAction, SameSeedSameAction) {
  const MlpPolicy p = MlpPolicy::create(2, {5}, 2, 4, 1.0, 1);
  std::mt19937_64 a(42), b(42);
  const Eigen::VectorXd obs = Eigen::VectorXd::Ones(2);
  EXPECT_EQ(sample_action(p, obs, a).action, sample_action(p, obs, b).action);
}

TEST(SampleAction, ClippedToBound) {
  MlpPolicy p = MlpPolicy::create(2, {5}, 2, 10, 0.5, 1, 10.0);
  p.set_std(3.0);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) EXPECT_LE(sample_action(p, Eigen::VectorXd::Ones(2), rng).action.max_abs(), 0.5);
}

TEST(SampleAction, EmpiricalMeanMatchesPolicyMean) {
  MlpPolicy p = MlpPolicy::create(2, {5}, 1, 3, 1.0, 9, 1.0);
  const double sigma = 0.2;
  p.set_std(sigma);
  const Eigen::VectorXd obs = Eigen::VectorXd::Ones(2);
  std::mt19937_64 rng(11);
  const int samples = 10000;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
  for (int i = 0; i < samples; ++i) sum += sample_action(p, obs, rng).sample;
  const Eigen::VectorXd diff = sum / samples - policy_forward(p, obs);
  EXPECT_LE(diff.cwiseAbs().maxCoeff(), 3.0 * sigma / std::sqrt(samples));
}

TEST(SampleAction, LogProbIsGaussianDensity) {
  MlpPolicy p = MlpPolicy::create(2, {5}, 1, 3, 1.0, 9, 1.0);
  p.set_std(0.3);
  std::mt19937_64 rng(1);
  const Eigen::VectorXd obs = Eigen::VectorXd::Ones(2);
  const SampledAction s = sample_action(p, obs, rng);
  double expected = 0.0;
  for (Eigen::Index i = 0; i < 3; ++i) {
    const double z = (s.sample(i) - s.mean(i)) / 0.3;
    expected += -0.5 * z * z - std::log(0.3 * std::sqrt(2 * kPi));
  }
  EXPECT_NEAR(s.log_prob, expected, 1e-12);
}

TEST(Rla1Reward, PerfectNoiselessPulses) {
  const SystemSpec spec = hadamard_system(20);
  const PulseSet p = PulseSet::uniform(1, 20, 1.0, 4);
  const Matrix target = propagate_closed(spec, p).total;
  EXPECT_NEAR(rla1_reward(spec, p, target, Weights::normalized(1.0, 0.0)).reward, 1.0, 1e-6);
}

TEST(Rla1Reward, ZeroPulsesEnergyOnly) {
  const SystemSpec spec = hadamard_system(20);
  const PulseSet zero = PulseSet::zeros(1, 20);
  const double c = (std::sqrt(2.0) / 2.0) / std::sqrt(2.5);
  EXPECT_NEAR(rla1_reward(spec, zero, gate_matrix(NamedGate::Hadamard), Weights::normalized(0.0, 1.0)).reward,
              1.0 - c, 1e-12);
}

TEST(Rla1Reward, LinearInWeights) {
  const SystemSpec spec = hadamard_system(20).with_noise({5.0, 4.0});
  const PulseSet p = PulseSet::uniform(1, 20, 1.0, 2);
  const Matrix target = gate_matrix(NamedGate::Hadamard);
  const RewardParts f = rla1_reward(spec, p, target, Weights::normalized(1.0, 0.0));
  const RewardParts e = rla1_reward(spec, p, target, Weights::normalized(0.0, 1.0));
  for (double wf : {0.1, 0.35, 0.8}) {
    const RewardParts mix = rla1_reward(spec, p, target, Weights::normalized(wf, 1.0 - wf));
    EXPECT_NEAR(mix.reward, wf * f.reward + (1.0 - wf) * e.reward, 1e-12);
  }
  EXPECT_GE(f.reward, 0.0);
  EXPECT_LE(f.reward, 1.0);
}

TEST(Rla2Reward, Examples) {
  const PulseSet a = PulseSet::uniform(2, 5, 1.0, 1);
  EXPECT_EQ(rla2_reward(a, a), 0.0);
  PulseSet b = a;
  b(1, 3) += 1.0;
  EXPECT_DOUBLE_EQ(rla2_reward(a, b), -1.0);
  b(0, 0) -= 2.0;
  EXPECT_DOUBLE_EQ(rla2_reward(a, b), -5.0);
  EXPECT_DOUBLE_EQ(rla2_reward(a, b, ImitationNorm::L1), -3.0);
  Eigen::MatrixXd pa = a.amplitudes().rowwise().reverse(), pb = b.amplitudes().rowwise().reverse();
  EXPECT_DOUBLE_EQ(rla2_reward(PulseSet(pa), PulseSet(pb)), rla2_reward(a, b));
  EXPECT_THROW(rla2_reward(a, PulseSet::zeros(2, 4)), std::invalid_argument);
}

TEST(Reinforce, ConstantRewardsLeaveParametersUnchanged) {
  const MlpPolicy p = bandit_policy(1);
  std::mt19937_64 rng(0);
  std::vector<EpisodeRecord> batch;
  for (int i = 0; i < 16; ++i) batch.push_back(record(sample_action(p, kBanditObs, rng), 0.5, -0.25, kBanditObs));
  OptimizerState state;
  const MlpPolicy next = reinforce_update(p, batch, bandit_config(0), state);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    EXPECT_LE((next.weights[l] - p.weights[l]).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((next.biases[l] - p.biases[l]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Reinforce, DeterministicGivenBatch) {
  const MlpPolicy p = bandit_policy(2);
  std::mt19937_64 rng(5);
  std::vector<EpisodeRecord> batch;
  for (int i = 0; i < 16; ++i) {
    const SampledAction s = sample_action(p, kBanditObs, rng);
    batch.push_back(record(s, 0.5, bandit_reward(s.action).reward, kBanditObs));
  }
  OptimizerState s1, s2;
  EXPECT_EQ(reinforce_update(p, batch, bandit_config(0), s1), reinforce_update(p, batch, bandit_config(0), s2));
}

TEST(Reinforce, NonFiniteRewardAbortsBatch) {
  const MlpPolicy p = bandit_policy(2);
  std::mt19937_64 rng(5);
  std::vector<EpisodeRecord> batch{
      record(sample_action(p, kBanditObs, rng), 0.5, std::numeric_limits<double>::quiet_NaN(), kBanditObs)};
  OptimizerState state;
  EXPECT_THROW(reinforce_update(p, batch, bandit_config(0), state), NonFiniteGradient);
  EXPECT_FALSE(state.baseline.has_value());
  EXPECT_THROW(reinforce_update(p, {}, bandit_config(0), state), std::invalid_argument);

  TrainConfig cfg = bandit_config(0);
  cfg.n_episodes = 64;
  const TrainResult r = train_policy(p, cfg, kBanditObs, [](const PulseSet&) {
    return RewardParts{std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0};
  });
  EXPECT_EQ(r.aborted_batches, 4);
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    EXPECT_EQ(r.policy.weights[l], p.weights[l]);
    EXPECT_EQ(r.policy.biases[l], p.biases[l]);
  }
}

TEST(Reinforce, BanditConvergesToOptimum) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const TrainResult r = train_policy(bandit_policy(seed), bandit_config(seed), kBanditObs, bandit_reward);
    EXPECT_NEAR(policy_forward(r.policy, kBanditObs)(0), 0.3, 0.05) << "seed " << seed;
    EXPECT_EQ(r.episodes.size(), 2000u);
  }
}

// d E[r] / d mean for r = -(u - 0.3)^2 with an unclipped Gaussian is -2 (mean - 0.3).
TEST(Reinforce, EstimatorSignMatchesAnalyticGradient) {
  const MlpPolicy p = bandit_policy(4);
  const double mean = policy_forward(p, kBanditObs)(0);
  const double analytic = -2.0 * (mean - 0.3);
  MlpPolicy sampler = p;
  sampler.set_std(0.2);
  std::mt19937_64 rng(8);
  int agree = 0;
  const int batches = 200;
  for (int b = 0; b < batches; ++b) {
    std::vector<EpisodeRecord> batch;
    std::vector<double> adv;
    double mean_r = 0.0;
    for (int i = 0; i < 64; ++i) {
      const SampledAction s = sample_action(sampler, kBanditObs, rng);
      const double r = -(s.sample(0) - 0.3) * (s.sample(0) - 0.3);
      batch.push_back(record(s, 0.2, r, kBanditObs));
      mean_r += r / 64.0;
    }
    for (const auto& e : batch) adv.push_back(e.reward - mean_r);
    // The output bias gradient is d/dmean times a positive factor.
    const PolicyGradient g = policy_gradient(p, batch, adv);
    agree += (g.biases.back()(0) > 0) == (analytic > 0);
  }
  EXPECT_GE(agree, 0.95 * batches);
}

TEST(Reinforce, BaselineDoesNotBiasTheEstimator) {
  const MlpPolicy p = bandit_policy(4);
  MlpPolicy sampler = p;
  sampler.set_std(0.3);
  std::mt19937_64 rng(21);
  const int batches = 400;
  std::vector<double> diffs;
  for (int b = 0; b < batches; ++b) {
    std::vector<EpisodeRecord> batch;
    std::vector<double> raw, shifted;
    for (int i = 0; i < 64; ++i) {
      const SampledAction s = sample_action(sampler, kBanditObs, rng);
      const double r = -(s.sample(0) - 0.3) * (s.sample(0) - 0.3);
      batch.push_back(record(s, 0.3, r, kBanditObs));
      raw.push_back(r);
      shifted.push_back(r + 0.2);  // fixed baseline of -0.2
    }
    diffs.push_back(policy_gradient(p, batch, raw).biases.back()(0) -
                    policy_gradient(p, batch, shifted).biases.back()(0));
  }
  double m = 0.0, s2 = 0.0;
  for (double d : diffs) m += d / batches;
  for (double d : diffs) s2 += (d - m) * (d - m) / (batches - 1);
  EXPECT_LE(std::abs(m), 3.0 * std::sqrt(s2 / batches));
}

TEST(Reinforce, TrainingIsReproducible) {
  TrainConfig cfg = bandit_config(3);
  cfg.n_episodes = 200;
  const TrainResult a = train_policy(bandit_policy(3), cfg, kBanditObs, bandit_reward);
  const TrainResult b = train_policy(bandit_policy(3), cfg, kBanditObs, bandit_reward);
  ASSERT_EQ(a.episodes.size(), b.episodes.size());
  for (std::size_t i = 0; i < a.episodes.size(); ++i) EXPECT_EQ(a.episodes[i].reward, b.episodes[i].reward);
  EXPECT_EQ(a.policy, b.policy);
}

TEST(TrainConfig, RejectsInvalid) {
  TrainConfig c;
  c.batch_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.baseline_decay = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.hidden_layers.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  EXPECT_DOUBLE_EQ(c.sigma_at(0), 0.5);
  EXPECT_DOUBLE_EQ(c.sigma_at(c.n_episodes - 1), 0.05);
}

TEST(Rla1, TraceLengthAndClipping) {
  const SystemSpec spec = hadamard_system(20);
  TrainConfig cfg;
  cfg.n_episodes = 37;
  cfg.hidden_layers = {16, 8};
  const TrainResult r = train_rla1(spec, gate_matrix(NamedGate::Hadamard), cfg);
  ASSERT_EQ(r.episodes.size(), 37u);
  for (const auto& e : r.episodes) {
    EXPECT_LE(e.action.max_abs(), spec.amplitude_bound());
    EXPECT_TRUE(std::isfinite(e.reward));
  }
}

TEST(Rla1, NoiselessHadamardReachesHighFidelity) {
  const SystemSpec spec = hadamard_system();
  TrainConfig cfg;
  cfg.n_episodes = 10000;
  cfg.weights = Weights::normalized(0.8, 0.2);
  const TrainResult r = train_rla1(spec, gate_matrix(NamedGate::Hadamard), cfg);
  std::vector<double> fid;
  for (const auto& e : r.episodes) fid.push_back(e.fidelity);
  EXPECT_GE(moving_average(fid, 200, EdgeMode::Valid).back(), 0.9);
}

TEST(Rla2, ZeroTargetConvergesToZero) {
  const SystemSpec spec = hadamard_system();
  TrainConfig cfg;
  cfg.learning_rate = 3e-4;
  const PulseSet zero = PulseSet::zeros(1, 100);
  const ImitationResult r = train_rla2(spec, zero, gate_matrix(NamedGate::Hadamard), cfg);
  EXPECT_LT(r.final_distance, 0.1 * std::sqrt(100.0));
}

class WarmStart : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new SystemSpec(hadamard_system());
    GrapeConfig g;
    g.weights = Weights::normalized(0.7, 0.3);
    grape_ = new GrapeTrace(optimize(*spec_, g, gate_matrix(NamedGate::Hadamard)));
    TrainConfig c;
    c.learning_rate = 3e-4;
    rla2_ = new ImitationResult(train_rla2(*spec_, grape_->final_pulses, gate_matrix(NamedGate::Hadamard), c));
  }
  static void TearDownTestSuite() {
    delete rla2_;
    delete grape_;
    delete spec_;
  }
  static SystemSpec* spec_;
  static GrapeTrace* grape_;
  static ImitationResult* rla2_;
};

SystemSpec* WarmStart::spec_ = nullptr;
GrapeTrace* WarmStart::grape_ = nullptr;
ImitationResult* WarmStart::rla2_ = nullptr;

TEST_F(WarmStart, ImitationReducesDistanceWithPositiveTrend) {
  EXPECT_LT(rla2_->final_distance, rla2_->initial_distance);
  std::vector<double> rewards;
  for (const auto& e : rla2_->episodes) rewards.push_back(e.reward);
  EXPECT_GT(trend(moving_average(rewards, 100, EdgeMode::Valid)), 0.5);
}

TEST_F(WarmStart, CopyPreservesOutputs) {
  const MlpPolicy copy = warm_start(rla2_->policy, layer_sizes_for(*spec_, TrainConfig{}));
  const Eigen::VectorXd obs = target_observation(gate_matrix(NamedGate::Hadamard));
  EXPECT_EQ(policy_forward(copy, obs), policy_forward(rla2_->policy, obs));
  TrainConfig other;
  other.hidden_layers = {64, 32};
  EXPECT_THROW(warm_start(rla2_->policy, layer_sizes_for(*spec_, other)), std::invalid_argument);
}

TEST_F(WarmStart, InitialMeanActionCostNearGrape) {
  const Eigen::VectorXd obs = target_observation(gate_matrix(NamedGate::Hadamard));
  const PulseSet mean = pulses_from_vector(policy_forward(rla2_->policy, obs), 1, spec_->n_slices());
  EXPECT_NEAR(energetic_cost(*spec_, mean), grape_->final_energetic_cost, 0.1 * grape_->final_energetic_cost);
}

TEST_F(WarmStart, EpisodeZeroRewardBeatsRandomInit) {
  double warm = 0.0, cold = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    TrainConfig c;
    c.n_episodes = 1;
    c.seed = seed;
    warm += train_rla1(*spec_, gate_matrix(NamedGate::Hadamard), c, warm_start(rla2_->policy, layer_sizes_for(*spec_, c)))
                .episodes[0]
                .reward;
    cold += train_rla1(*spec_, gate_matrix(NamedGate::Hadamard), c).episodes[0].reward;
  }
  EXPECT_GT(warm / 20, cold / 20);
}

TEST(Checkpoint, RoundTripIsExact) {
  MlpPolicy p = MlpPolicy::create(8, {12, 7}, 1, 10, 1.0, 5);
  p.set_std(0.123);
  std::stringstream ss;
  save_policy(p, ss);
  EXPECT_EQ(load_policy(ss), p);
}

TEST(Checkpoint, RejectsBadHeaderAndTruncation) {
  std::stringstream bad("eoqc-policy 9\n");
  EXPECT_THROW(load_policy(bad), std::runtime_error);
  std::stringstream full;
  save_policy(MlpPolicy::create(2, {3}, 1, 2, 1.0, 5), full);
  std::string text = full.str();
  std::stringstream cut(text.substr(0, text.size() / 2));
  EXPECT_THROW(load_policy(cut), std::runtime_error);
}

}  // namespace
}  // namespace eoqc
