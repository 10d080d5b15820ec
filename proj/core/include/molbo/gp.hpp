// Copyright 2026 The molbo Authors
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

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "molbo/chem/fingerprint.hpp"

namespace molbo::gp {

enum class KernelKind { kRbf, kTanimoto };

std::string_view KernelKindName(KernelKind kind);

struct KernelConfig {
  KernelKind kind = KernelKind::kTanimoto;
  /// Prior standard deviation sigma; k(x, x) = amplitude^2.
  double amplitude = 1.0;
  /// RBF range; ignored by the Tanimoto kernel.
  double lengthscale = 1.0;

  /// Throws InputError unless amplitude > 0 (and lengthscale > 0 for RBF).
  void Validate() const;
};

struct GPConfig {
  KernelConfig kernel;
  double noise_variance = 1e-4;
  /// Constant prior mean; not fitted.
  double prior_mean = 0.0;

  void Validate() const;
};

/// Smallest diagonal term used when factorizing, and the escalation cap.
inline constexpr double kJitterFloor = 1e-8;
inline constexpr double kJitterCap = 1e-2;

using RealVector = std::vector<double>;

/// sigma^2 exp(-|x - x'|^2 / (2 l^2)).
double RbfKernel(std::span<const double> x, std::span<const double> y,
                 const KernelConfig& cfg);

/// sigma^2 T(a, b) with T the binary or count Tanimoto coefficient.
double TanimotoKernel(const chem::Fingerprint& a, const chem::Fingerprint& b,
                      const KernelConfig& cfg);

/// Dispatches on input type; throws InputError if `cfg.kind` does not match.
double Kernel(const KernelConfig& cfg, const RealVector& a, const RealVector& b);
double Kernel(const KernelConfig& cfg, const chem::Fingerprint& a,
              const chem::Fingerprint& b);

template <typename Input>
Eigen::MatrixXd GramMatrix(const KernelConfig& cfg, std::span<const Input> inputs);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;

  double Std() const;
};

/// Exact GP posterior. Immutable once fitted; Predict is const and
/// thread-safe.
template <typename Input>
class PosteriorState {
 public:
  /// Factorizes K + noise I with noise = max(noise_variance, 1e-8),
  /// doubling the jitter up to 1e-2 on failure. Throws NumericalError with
  /// the last jitter tried, InputError on empty/mismatched data.
  static PosteriorState Fit(std::vector<Input> inputs, std::vector<double> labels,
                            const GPConfig& cfg);

  Prediction Predict(const Input& query) const;
  /// Mean only; skips the triangular solve.
  double PredictMean(const Input& query) const;

  /// -1/2 r^T (K + noise I)^-1 r - sum log diag(L) - n/2 log 2 pi,
  /// with r = y - prior_mean.
  double LogMarginalLikelihood() const;

  const GPConfig& config() const { return config_; }
  const std::vector<Input>& train_inputs() const { return inputs_; }
  const std::vector<double>& train_labels() const { return labels_; }
  /// Lower Cholesky factor of K + jitter I.
  const Eigen::MatrixXd& chol() const { return chol_; }
  const Eigen::VectorXd& solve_vec() const { return solve_vec_; }
  /// Diagonal term actually used in the factorization.
  double jitter() const { return jitter_; }
  std::size_t size() const { return labels_.size(); }

 private:
  PosteriorState() = default;

  GPConfig config_;
  std::vector<Input> inputs_;
  std::vector<double> labels_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd solve_vec_;
  double jitter_ = 0.0;
};

extern template class PosteriorState<RealVector>;
extern template class PosteriorState<chem::Fingerprint>;

template <typename Input>
struct GridFit {
  std::size_t best_index = 0;
  GPConfig best;
  /// Log marginal likelihood per grid entry; -inf where factorization failed.
  std::vector<double> scores;
};

/// Argmax of the log marginal likelihood over `grid` (earliest index wins
/// ties). Throws InputError on an empty grid, NumericalError if every entry
/// fails to factorize.
template <typename Input>
GridFit<Input> FitHypersGrid(const std::vector<Input>& inputs,
                             const std::vector<double>& labels,
                             std::span<const GPConfig> grid);

/// Log-spaced amplitude x noise grid for a fixed kernel kind/lengthscale.
std::vector<GPConfig> LogGrid(const GPConfig& base, std::span<const double> amplitudes,
                              std::span<const double> noises);

}  // namespace molbo::gp
