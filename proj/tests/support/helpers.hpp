#pragma once

// Independent reference implementations and fixtures shared by the unit and
// acceptance binaries. The references are written from the formulas directly
// and deliberately share no code with the library.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "milsent/corpus.hpp"
#include "milsent/random.hpp"

namespace testing_support {

namespace fs = std::filesystem;

// Pairwise smoothness term plus lambda-weighted squared group error.
inline double naive_loss(const std::vector<double>& theta, const std::vector<milsent::MilGroup>& groups,
                         double lambda, double gamma, bool use_bias = true) {
  std::vector<std::vector<double>> xs;
  std::vector<double> scores;
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& m = groups[k].instances;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      std::vector<double> x(row.begin(), row.end());
      double z = use_bias ? theta.back() : 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) z += theta[c] * x[c];
      xs.push_back(x);
      scores.push_back(1.0 / (1.0 + std::exp(-z)));
      owner.push_back(k);
    }
  }
  const double n = static_cast<double>(xs.size());
  double pair = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      double d2 = 0.0;
      for (std::size_t c = 0; c < xs[i].size(); ++c) d2 += (xs[i][c] - xs[j][c]) * (xs[i][c] - xs[j][c]);
      const double diff = scores[i] - scores[j];
      pair += std::exp(-gamma * d2) * diff * diff;
    }
  }
  double group_term = 0.0;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    double sum = 0.0;
    double count = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (owner[i] == k) {
        sum += scores[i];
        count += 1.0;
      }
    }
    const double e = sum / count - groups[k].label;
    group_term += e * e;
  }
  return pair / (n * n) + lambda / static_cast<double>(groups.size()) * group_term;
}

inline std::vector<double> central_difference(const std::vector<double>& theta,
                                              const std::vector<milsent::MilGroup>& groups, double lambda,
                                              double gamma, double h) {
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    auto up = theta;
    auto down = theta;
    up[i] += h;
    down[i] -= h;
    g[i] = (naive_loss(up, groups, lambda, gamma) - naive_loss(down, groups, lambda, gamma)) / (2.0 * h);
  }
  return g;
}

inline double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i] + b[i] * b[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num) / std::sqrt(den);
}

inline std::vector<milsent::MilGroup> random_batch(milsent::Rng& rng, std::size_t max_groups,
                                                   std::size_t max_instances, std::size_t dim) {
  std::vector<milsent::MilGroup> groups(1 + rng.below(max_groups));
  for (auto& g : groups) {
    g.label = static_cast<int>(rng.below(2));
    const std::size_t rows = 1 + rng.below(max_instances);
    g.instances = milsent::InstanceMatrix(rows, dim);
    for (std::size_t r = 0; r < rows; ++r) {
      for (auto& v : g.instances.row(r)) v = rng.normal() * 0.5;
    }
  }
  return groups;
}

inline std::vector<double> random_theta(milsent::Rng& rng, std::size_t size, double scale = 1.0) {
  std::vector<double> t(size);
  for (auto& v : t) v = rng.normal() * scale;
  return t;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = fs::temp_directory_path() /
            ("milsent-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testing_support
