#include "milsent/mil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "milsent/random.hpp"

namespace milsent {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    d += diff * diff;
  }
  return d;
}

// Flattened view of a batch: instance rows with their owning group.
struct BatchLayout {
  std::vector<std::span<const double>> rows;
  std::vector<std::size_t> group_of;
  std::size_t dim = 0;
};

BatchLayout layout(GroupRefs batch) {
  if (batch.empty()) throw DataError("empty batch");
  BatchLayout l;
  l.dim = batch.front()->instances.cols();
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto& m = batch[k]->instances;
    if (m.rows() == 0) throw DataError("empty group in batch");
    if (m.cols() != l.dim) throw DataError("inconsistent instance dimension in batch");
    for (std::size_t r = 0; r < m.rows(); ++r) {
      l.rows.push_back(m.row(r));
      l.group_of.push_back(k);
    }
  }
  return l;
}

// Calls fn(begin, end) over [0, n) split into at most `threads` contiguous chunks.
template <typename Fn>
void parallel_rows(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n / 64 + 1));
  if (threads == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must lie in [0, 1)");
  if (groups_per_batch == 0) throw ConfigError("groups_per_batch must be >= 1");
  if (!(kernel_gamma > 0.0) || !std::isfinite(kernel_gamma)) throw ConfigError("kernel_gamma must be > 0");
  if (threads == 0) throw ConfigError("threads must be >= 1");
}

void GridSpec::validate() const {
  if (lambdas.empty() || learning_rates.empty() || momenta.empty()) {
    throw ConfigError("every grid list must be non-empty");
  }
}

bool MilModel::operator==(const MilModel& other) const {
  const auto& a = config;
  const auto& b = other.config;
  return theta == other.theta && dim == other.dim && a.lambda == b.lambda &&
         a.learning_rate == b.learning_rate && a.momentum == b.momentum && a.epochs == b.epochs &&
         a.groups_per_batch == b.groups_per_batch && a.kernel_gamma == b.kernel_gamma &&
         a.median_gamma == b.median_gamma && a.use_bias == b.use_bias && a.seed == b.seed;
}

std::vector<const MilGroup*> group_refs(std::span<const MilGroup> groups) {
  std::vector<const MilGroup*> refs;
  refs.reserve(groups.size());
  for (const auto& g : groups) refs.push_back(&g);
  return refs;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double rbf_similarity(std::span<const double> x, std::span<const double> y, double gamma) {
  if (x.size() != y.size()) throw DataError("rbf_similarity: dimension mismatch");
  return std::exp(-gamma * squared_distance(x, y));
}

double linear_score(std::span<const double> theta, std::span<const double> x, bool use_bias) {
  if (theta.size() != x.size() + 1) throw DataError("instance dimension does not match the model");
  double z = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) z += theta[i] * x[i];
  if (use_bias) z += theta[x.size()];
  return z;
}

double instance_score(const MilModel& model, std::span<const double> x) {
  return sigmoid(linear_score(model.theta, x, model.config.use_bias));
}

double group_score(const MilModel& model, const InstanceMatrix& group) {
  if (group.rows() == 0) throw DataError("group_score: empty group");
  double sum = 0.0;
  for (std::size_t r = 0; r < group.rows(); ++r) sum += instance_score(model, group.row(r));
  return sum / static_cast<double>(group.rows());
}

LossAndGradient mil_loss_and_gradient(std::span<const double> theta, GroupRefs batch,
                                      const LossSettings& settings) {
  const BatchLayout l = layout(batch);
  if (theta.size() != l.dim + 1) throw DataError("theta length does not match instance dimension");
  const std::size_t n = l.rows.size();
  const std::size_t groups = batch.size();

  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = sigmoid(linear_score(theta, l.rows[i], settings.use_bias));
  }

  // Row i of the pairwise term: sum_j S_ij (s_i - s_j)^2 and sum_j S_ij (s_i - s_j).
  std::vector<double> row_loss(n, 0.0);
  std::vector<double> row_pull(n, 0.0);
  parallel_rows(n, settings.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double lsum = 0.0, psum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double diff = scores[i] - scores[j];
        if (diff == 0.0) continue;
        const double s = std::exp(-settings.gamma * squared_distance(l.rows[i], l.rows[j]));
        lsum += s * diff * diff;
        psum += s * diff;
      }
      row_loss[i] = lsum;
      row_pull[i] = psum;
    }
  });

  std::vector<double> group_mean(groups, 0.0);
  for (std::size_t i = 0; i < n; ++i) group_mean[l.group_of[i]] += scores[i];
  for (std::size_t k = 0; k < groups; ++k) {
    group_mean[k] /= static_cast<double>(batch[k]->instances.rows());
  }

  const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
  const double group_weight = settings.lambda / static_cast<double>(groups);

  LossAndGradient out;
  double pair_term = 0.0;
  for (double v : row_loss) pair_term += v;
  double group_term = 0.0;
  for (std::size_t k = 0; k < groups; ++k) {
    const double e = group_mean[k] - static_cast<double>(batch[k]->label);
    group_term += e * e;
  }
  out.loss = inv_n2 * pair_term + group_weight * group_term;

  out.gradient.assign(l.dim + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = l.group_of[i];
    const double group_error = group_mean[k] - static_cast<double>(batch[k]->label);
    const double coeff = 4.0 * inv_n2 * row_pull[i] +
                         2.0 * group_weight * group_error /
                             static_cast<double>(batch[k]->instances.rows());
    const double w = coeff * scores[i] * (1.0 - scores[i]);
    if (w == 0.0) continue;
    const auto x = l.rows[i];
    for (std::size_t c = 0; c < l.dim; ++c) out.gradient[c] += w * x[c];
    if (settings.use_bias) out.gradient[l.dim] += w;
  }
  return out;
}

double mil_loss(std::span<const double> theta, GroupRefs batch, const LossSettings& settings) {
  const BatchLayout l = layout(batch);
  if (theta.size() != l.dim + 1) throw DataError("theta length does not match instance dimension");
  const std::size_t n = l.rows.size();
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = sigmoid(linear_score(theta, l.rows[i], settings.use_bias));
  }
  std::vector<double> row_loss(n, 0.0);
  parallel_rows(n, settings.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double lsum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double diff = scores[i] - scores[j];
        if (j == i || diff == 0.0) continue;
        lsum += std::exp(-settings.gamma * squared_distance(l.rows[i], l.rows[j])) * diff * diff;
      }
      row_loss[i] = lsum;
    }
  });
  double pair_term = 0.0;
  for (double v : row_loss) pair_term += v;

  std::vector<double> group_mean(batch.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) group_mean[l.group_of[i]] += scores[i];
  double group_term = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const double e = group_mean[k] / static_cast<double>(batch[k]->instances.rows()) -
                     static_cast<double>(batch[k]->label);
    group_term += e * e;
  }
  return pair_term / (static_cast<double>(n) * static_cast<double>(n)) +
         settings.lambda / static_cast<double>(batch.size()) * group_term;
}

std::vector<double> mil_gradient(std::span<const double> theta, GroupRefs batch,
                                 const LossSettings& settings) {
  return mil_loss_and_gradient(theta, batch, settings).gradient;
}

double loss(const MilModel& model, std::span<const MilGroup> batch, double lambda, double gamma) {
  const auto refs = group_refs(batch);
  return mil_loss(model.theta, refs, {lambda, gamma, model.config.use_bias, model.config.threads});
}

std::vector<double> gradient(const MilModel& model, std::span<const MilGroup> batch, double lambda,
                             double gamma) {
  const auto refs = group_refs(batch);
  return mil_gradient(model.theta, refs, {lambda, gamma, model.config.use_bias, model.config.threads});
}

double median_heuristic_gamma(const MilDataset& data, std::uint64_t seed, std::size_t max_pairs) {
  std::vector<std::span<const double>> rows;
  for (const auto& g : data.groups) {
    for (std::size_t r = 0; r < g.instances.rows(); ++r) rows.push_back(g.instances.row(r));
  }
  if (rows.size() < 2) throw DataError("median heuristic needs at least two instances");
  Rng rng(mix64(seed ^ 0x6d656469616eULL));
  std::vector<double> d2;
  d2.reserve(max_pairs);
  for (std::size_t p = 0; p < max_pairs; ++p) {
    const std::size_t i = rng.below(rows.size());
    std::size_t j = rng.below(rows.size() - 1);
    if (j >= i) ++j;
    d2.push_back(squared_distance(rows[i], rows[j]));
  }
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(d2.size() / 2), d2.end());
  const double median = d2[d2.size() / 2];
  if (!(median > 0.0)) throw DataError("median squared distance is zero; cannot set gamma");
  return 1.0 / median;
}

MilModel initial_model(std::size_t dim, const TrainConfig& config) {
  MilModel model;
  model.dim = dim;
  model.config = config;
  model.theta.resize(dim + 1);
  Rng rng(config.seed);
  for (auto& t : model.theta) t = rng.uniform(-0.01, 0.01);
  if (!config.use_bias) model.theta[dim] = 0.0;
  return model;
}

TrainResult train(const MilDataset& data, const TrainConfig& config) {
  config.validate();
  if (data.groups.empty()) throw DataError("cannot train on an empty dataset");
  if (data.dim == 0) throw DataError("dataset has zero dimension");
  for (const auto& g : data.groups) {
    if (g.instances.rows() == 0) throw DataError("dataset contains an empty group");
    if (g.instances.cols() != data.dim) throw DataError("dataset group has the wrong dimension");
  }

  TrainConfig resolved = config;
  if (config.median_gamma) resolved.kernel_gamma = median_heuristic_gamma(data, config.seed);

  TrainResult result;
  result.model = initial_model(data.dim, resolved);
  auto& theta = result.model.theta;
  const LossSettings settings{resolved.lambda, resolved.kernel_gamma, resolved.use_bias,
                              resolved.threads};

  const auto all = group_refs(data.groups);
  if (resolved.trace_full_loss && resolved.epochs > 0) {
    result.loss_trace.push_back(mil_loss(theta, all, settings));
  }

  // Shuffling draws from a stream independent of the initialization stream.
  Rng rng(mix64(resolved.seed));
  std::vector<const MilGroup*> order = all;
  std::vector<double> velocity(theta.size(), 0.0);
  const std::size_t batch_size = resolved.groups_per_batch;

  for (std::size_t epoch = 1; epoch <= resolved.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size, ++batch_no) {
      const std::size_t len = std::min(batch_size, order.size() - start);
      const auto lg = mil_loss_and_gradient(theta, GroupRefs(order).subspan(start, len), settings);
      if (!std::isfinite(lg.loss) || !all_finite(lg.gradient)) {
        std::ostringstream msg;
        msg << "non-finite loss or gradient at epoch " << epoch << ", batch " << batch_no;
        throw TrainingError(msg.str());
      }
      for (std::size_t c = 0; c < theta.size(); ++c) {
        velocity[c] = resolved.momentum * velocity[c] - resolved.learning_rate * lg.gradient[c];
        theta[c] += velocity[c];
      }
      if (!all_finite(theta)) {
        std::ostringstream msg;
        msg << "parameters became non-finite at epoch " << epoch << ", batch " << batch_no;
        throw TrainingError(msg.str());
      }
    }
    if (resolved.trace_full_loss) {
      const double full = mil_loss(theta, all, settings);
      if (!std::isfinite(full)) {
        throw TrainingError("non-finite full-data loss after epoch " + std::to_string(epoch));
      }
      result.loss_trace.push_back(full);
    }
  }
  return result;
}

SentencePrediction predict_sentence(const MilModel& model, std::span<const double> x) {
  if (x.size() != model.dim) throw DataError("sentence vector dimension does not match the model");
  const double score = instance_score(model, x);
  return {score >= 0.5 ? Polarity::positive : Polarity::negative, score};
}

DocumentPrediction predict_document(const MilModel& model, const InstanceMatrix& group,
                                    DocumentRule rule) {
  if (group.rows() == 0) throw DataError("predict_document: empty group");
  DocumentPrediction out;
  double sum = 0.0;
  for (std::size_t r = 0; r < group.rows(); ++r) {
    const auto p = predict_sentence(model, group.row(r));
    sum += p.score;
    if (p.label == Polarity::positive) {
      ++out.positive;
    } else {
      ++out.negative;
    }
  }
  out.mean_score = sum / static_cast<double>(group.rows());
  const bool mean_positive = out.mean_score >= 0.5;
  if (rule == DocumentRule::mean_score || out.positive == out.negative) {
    out.label = mean_positive ? Polarity::positive : Polarity::negative;
  } else {
    out.label = out.positive > out.negative ? Polarity::positive : Polarity::negative;
  }
  return out;
}

double document_accuracy(const MilModel& model, const MilDataset& data, DocumentRule rule) {
  if (data.groups.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& g : data.groups) {
    if (static_cast<int>(predict_document(model, g.instances, rule).label) == g.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.groups.size());
}

GridResult grid_search(const MilDataset& data, const GridSpec& grid, const TrainConfig& base) {
  grid.validate();
  GridResult out;
  std::optional<std::size_t> best;
  for (double lambda : grid.lambdas) {
    for (double lr : grid.learning_rates) {
      for (double m : grid.momenta) {
        GridCell cell{lambda, lr, m, std::nullopt, std::nullopt, {}};
        TrainConfig cfg = base;
        cfg.lambda = lambda;
        cfg.learning_rate = lr;
        cfg.momentum = m;
        try {
          TrainResult r = train(data, cfg);
          cell.accuracy = document_accuracy(r.model, data);
          if (!r.loss_trace.empty()) cell.final_loss = r.loss_trace.back();
          auto better = [&](const GridCell& a, const GridCell& b) {
            if (*a.accuracy != *b.accuracy) return *a.accuracy > *b.accuracy;
            if (a.lambda != b.lambda) return a.lambda < b.lambda;
            if (a.learning_rate != b.learning_rate) return a.learning_rate < b.learning_rate;
            return a.momentum < b.momentum;
          };
          if (!best || better(cell, out.report.cells[*best])) {
            best = out.report.cells.size();
            out.best = std::move(r);
            out.best_config = cfg;
          }
        } catch (const std::exception& e) {
          cell.error = e.what();
        }
        out.report.cells.push_back(std::move(cell));
      }
    }
  }
  if (!best) throw TrainingError("every grid configuration failed to train");
  out.report.best = *best;
  return out;
}

SyntheticData generate_synthetic(std::size_t n_groups, std::size_t instances_per_group,
                                 std::size_t dim, double separation, double noise_fraction,
                                 std::uint64_t seed) {
  if (n_groups == 0 || instances_per_group == 0 || dim == 0) {
    throw ConfigError("generate_synthetic: counts and dimension must be positive");
  }
  if (!(separation > 0.0) || !std::isfinite(separation)) {
    throw ConfigError("generate_synthetic: separation must be > 0");
  }
  if (!(noise_fraction >= 0.0 && noise_fraction <= 1.0)) {
    throw ConfigError("generate_synthetic: noise_fraction must lie in [0, 1]");
  }

  Rng rng(seed);
  const std::size_t total = n_groups * instances_per_group;
  std::vector<int> latent(n_groups);
  for (auto& p : latent) p = static_cast<int>(rng.next() >> 63);

  std::vector<int> labels(total);
  for (std::size_t i = 0; i < total; ++i) labels[i] = latent[i / instances_per_group];
  const auto flips = static_cast<std::size_t>(std::llround(noise_fraction * static_cast<double>(total)));
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(std::span(idx));
  for (std::size_t f = 0; f < flips; ++f) labels[idx[f]] = 1 - labels[idx[f]];

  const double u = 1.0 / std::sqrt(static_cast<double>(dim));
  SyntheticData out;
  out.dataset.dim = dim;
  out.instance_labels.resize(n_groups);
  std::vector<double> x(dim);
  for (std::size_t k = 0; k < n_groups; ++k) {
    MilGroup g;
    std::size_t positives = 0;
    for (std::size_t r = 0; r < instances_per_group; ++r) {
      const int y = labels[k * instances_per_group + r];
      const double centre = (y == 1 ? separation : -separation) * u;
      for (auto& c : x) c = centre + rng.normal();
      g.instances.append_row(x);
      out.instance_labels[k].push_back(y);
      positives += static_cast<std::size_t>(y);
    }
    const std::size_t negatives = instances_per_group - positives;
    g.label = positives == negatives ? latent[k] : (positives > negatives ? 1 : 0);
    out.dataset.groups.push_back(std::move(g));
  }
  return out;
}

}  // namespace milsent
