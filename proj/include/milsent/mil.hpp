#pragma once

// Multi-instance sentence classifier trained from document labels.
//
// Instances are scored by a logistic model s_i = sigmoid(theta . [x_i; 1]).
// Training minimizes, over a batch of n instances in K groups,
//
//   (1/n^2) sum_i sum_j S(x_i, x_j) (s_i - s_j)^2
//     + (lambda/K) sum_k (mean_{i in G_k} s_i - l_k)^2
//
// with S(x, y) = exp(-gamma |x - y|^2), by minibatch SGD with classical
// momentum. The first term pulls similar sentences to the same score, the
// second ties mean sentence scores to the document label.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "milsent/corpus.hpp"
#include "milsent/error.hpp"

namespace milsent {

class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

struct TrainConfig {
  double lambda = 10.0;         // document-error weight
  double learning_rate = 0.05;
  double momentum = 0.8;
  std::size_t epochs = 25;
  std::size_t groups_per_batch = 32;
  double kernel_gamma = 1.0;
  bool median_gamma = false;    // replace kernel_gamma by 1/median squared distance
  bool use_bias = true;         // constant feature appended to every instance
  bool trace_full_loss = true;  // exact full-data loss once per epoch
  std::uint64_t seed = 0;
  std::size_t threads = 1;      // parallel rows of the pairwise term; results do not depend on it

  void validate() const;
};

struct GridSpec {
  std::vector<double> lambdas{10.0};
  std::vector<double> learning_rates{0.05};
  std::vector<double> momenta{0.8};

  void validate() const;
};

struct MilModel {
  std::vector<double> theta;  // length dim + 1; last entry is the bias weight
  std::size_t dim = 0;
  TrainConfig config;

  bool operator==(const MilModel& other) const;
};

enum class DocumentRule { majority, mean_score };

struct DocumentPrediction {
  Polarity label;
  std::size_t positive = 0;
  std::size_t negative = 0;
  double mean_score = 0.0;
};

/// Non-owning view of the groups in one minibatch.
using GroupRefs = std::span<const MilGroup* const>;

std::vector<const MilGroup*> group_refs(std::span<const MilGroup> groups);

struct LossSettings {
  double lambda = 10.0;
  double gamma = 1.0;
  bool use_bias = true;
  std::size_t threads = 1;
};

struct LossAndGradient {
  double loss = 0.0;
  std::vector<double> gradient;
};

double sigmoid(double z);
double rbf_similarity(std::span<const double> x, std::span<const double> y, double gamma);

/// theta . [x; 1] (bias term dropped when use_bias is false).
double linear_score(std::span<const double> theta, std::span<const double> x, bool use_bias);

double instance_score(const MilModel& model, std::span<const double> x);
double group_score(const MilModel& model, const InstanceMatrix& group);

double mil_loss(std::span<const double> theta, GroupRefs batch, const LossSettings& settings);
std::vector<double> mil_gradient(std::span<const double> theta, GroupRefs batch,
                                 const LossSettings& settings);
LossAndGradient mil_loss_and_gradient(std::span<const double> theta, GroupRefs batch,
                                      const LossSettings& settings);

double loss(const MilModel& model, std::span<const MilGroup> batch, double lambda, double gamma);
std::vector<double> gradient(const MilModel& model, std::span<const MilGroup> batch, double lambda,
                             double gamma);

/// 1 / median(|x_i - x_j|^2) over up to `max_pairs` seeded random pairs.
double median_heuristic_gamma(const MilDataset& data, std::uint64_t seed, std::size_t max_pairs = 2000);

/// Theta drawn uniformly from [-0.01, 0.01] using config.seed.
MilModel initial_model(std::size_t dim, const TrainConfig& config);

struct TrainResult {
  MilModel model;
  // [0] is the loss at initialization, [e] after epoch e. Empty when disabled.
  std::vector<double> loss_trace;
};

TrainResult train(const MilDataset& data, const TrainConfig& config);

SentencePrediction predict_sentence(const MilModel& model, std::span<const double> x);
DocumentPrediction predict_document(const MilModel& model, const InstanceMatrix& group,
                                    DocumentRule rule = DocumentRule::majority);

/// Fraction of groups whose predicted document label equals the group label.
double document_accuracy(const MilModel& model, const MilDataset& data,
                         DocumentRule rule = DocumentRule::majority);

struct GridCell {
  double lambda = 0.0;
  double learning_rate = 0.0;
  double momentum = 0.0;
  std::optional<double> accuracy;  // in-sample document accuracy
  std::optional<double> final_loss;
  std::string error;               // set when training this cell failed
};

struct GridReport {
  std::vector<GridCell> cells;  // lambda-major Cartesian order
  std::size_t best = 0;
};

struct GridResult {
  TrainConfig best_config;
  TrainResult best;
  GridReport report;
};

/// Trains every combination; picks the highest in-sample document accuracy,
/// ties broken by smaller lambda, then learning rate, then momentum.
GridResult grid_search(const MilDataset& data, const GridSpec& grid, const TrainConfig& base);

struct SyntheticData {
  MilDataset dataset;
  std::vector<std::vector<int>> instance_labels;  // per group, 0/1
};

/// Two Gaussian clusters at +/- separation * u, u = (1,...,1)/sqrt(dim), unit
/// covariance. Each group has a latent polarity; exactly round(noise_fraction * N)
/// instances are moved to the opposite cluster. Group label = majority of the
/// instance labels (latent polarity on ties).
SyntheticData generate_synthetic(std::size_t n_groups, std::size_t instances_per_group,
                                 std::size_t dim, double separation, double noise_fraction,
                                 std::uint64_t seed);

// Versioned text model file; layout in docs/model_format.md.
void write_model(std::ostream& out, const MilModel& model);
MilModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const MilModel& model);
MilModel load_model(const std::filesystem::path& path);

}  // namespace milsent
