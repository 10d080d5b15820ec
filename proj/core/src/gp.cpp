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

#include "molbo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "molbo/error.hpp"

namespace molbo::gp {

std::string_view KernelKindName(KernelKind kind) {
  return kind == KernelKind::kRbf ? "rbf" : "tanimoto";
}

void KernelConfig::Validate() const {
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) {
    throw InputError(fmt::format("kernel amplitude must be positive, got {}", amplitude));
  }
  if (kind == KernelKind::kRbf && (!(lengthscale > 0.0) || !std::isfinite(lengthscale))) {
    throw InputError(fmt::format("RBF lengthscale must be positive, got {}", lengthscale));
  }
}

void GPConfig::Validate() const {
  kernel.Validate();
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw InputError(fmt::format("noise variance must be >= 0, got {}", noise_variance));
  }
  if (!std::isfinite(prior_mean)) throw InputError("prior mean must be finite");
}

double RbfKernel(std::span<const double> x, std::span<const double> y,
                 const KernelConfig& cfg) {
  if (x.size() != y.size()) {
    throw InputError(fmt::format("RBF inputs of dimension {} and {}", x.size(), y.size()));
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sq += d * d;
  }
  const double s2 = cfg.amplitude * cfg.amplitude;
  return s2 * std::exp(-sq / (2.0 * cfg.lengthscale * cfg.lengthscale));
}

double TanimotoKernel(const chem::Fingerprint& a, const chem::Fingerprint& b,
                      const KernelConfig& cfg) {
  return cfg.amplitude * cfg.amplitude * chem::Tanimoto(a, b);
}

double Kernel(const KernelConfig& cfg, const RealVector& a, const RealVector& b) {
  if (cfg.kind != KernelKind::kRbf) {
    throw InputError("real-vector inputs require the rbf kernel");
  }
  return RbfKernel(a, b, cfg);
}

double Kernel(const KernelConfig& cfg, const chem::Fingerprint& a,
              const chem::Fingerprint& b) {
  if (cfg.kind != KernelKind::kTanimoto) {
    throw InputError("fingerprint inputs require the tanimoto kernel");
  }
  return TanimotoKernel(a, b, cfg);
}

template <typename Input>
Eigen::MatrixXd GramMatrix(const KernelConfig& cfg, std::span<const Input> inputs) {
  const auto n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = Kernel(cfg, inputs[i], inputs[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = Kernel(cfg, inputs[i], inputs[j]);
    }
  }
  return k;
}

template Eigen::MatrixXd GramMatrix<RealVector>(const KernelConfig&,
                                                std::span<const RealVector>);
template Eigen::MatrixXd GramMatrix<chem::Fingerprint>(
    const KernelConfig&, std::span<const chem::Fingerprint>);

double Prediction::Std() const { return std::sqrt(std::max(variance, 0.0)); }

template <typename Input>
PosteriorState<Input> PosteriorState<Input>::Fit(std::vector<Input> inputs,
                                                 std::vector<double> labels,
                                                 const GPConfig& cfg) {
  cfg.Validate();
  if (inputs.empty()) throw InputError("GP fit needs at least one training point");
  if (inputs.size() != labels.size()) {
    throw InputError(fmt::format("{} inputs but {} labels", inputs.size(), labels.size()));
  }
  for (double y : labels) {
    if (!std::isfinite(y)) throw InputError("GP labels must be finite");
  }

  PosteriorState state;
  state.config_ = cfg;
  const Eigen::MatrixXd gram = GramMatrix<Input>(cfg.kernel, inputs);
  const auto n = gram.rows();

  double jitter = std::max(cfg.noise_variance, kJitterFloor);
  while (true) {
    Eigen::MatrixXd a = gram;
    a.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
      state.chol_ = llt.matrixL();
      break;
    }
    if (jitter >= kJitterCap) {
      throw NumericalError(fmt::format(
          "Cholesky factorization failed; last jitter tried {:g}", jitter));
    }
    jitter = std::min(jitter * 2.0, kJitterCap);
  }
  state.jitter_ = jitter;

  Eigen::VectorXd resid(n);
  for (Eigen::Index i = 0; i < n; ++i) resid(i) = labels[i] - cfg.prior_mean;
  const Eigen::VectorXd half = state.chol_.template triangularView<Eigen::Lower>().solve(resid);
  state.solve_vec_ = state.chol_.transpose().template triangularView<Eigen::Upper>().solve(half);
  state.inputs_ = std::move(inputs);
  state.labels_ = std::move(labels);
  return state;
}

template <typename Input>
Prediction PosteriorState<Input>::Predict(const Input& query) const {
  const auto n = static_cast<Eigen::Index>(inputs_.size());
  Eigen::VectorXd k(n);
  for (Eigen::Index i = 0; i < n; ++i) k(i) = Kernel(config_.kernel, query, inputs_[i]);
  Prediction p;
  p.mean = config_.prior_mean + k.dot(solve_vec_);
  const Eigen::VectorXd v = chol_.template triangularView<Eigen::Lower>().solve(k);
  p.variance = std::max(0.0, Kernel(config_.kernel, query, query) - v.squaredNorm());
  return p;
}

template <typename Input>
double PosteriorState<Input>::PredictMean(const Input& query) const {
  double mean = config_.prior_mean;
  for (std::size_t i = 0; i < inputs_.size(); ++i) {
    mean += Kernel(config_.kernel, query, inputs_[i]) *
            solve_vec_(static_cast<Eigen::Index>(i));
  }
  return mean;
}

template <typename Input>
double PosteriorState<Input>::LogMarginalLikelihood() const {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  double fit = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    fit += (labels_[i] - config_.prior_mean) * solve_vec_(i);
  }
  const double log_det_half = chol_.diagonal().array().log().sum();
  return -0.5 * fit - log_det_half -
         0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

template class PosteriorState<RealVector>;
template class PosteriorState<chem::Fingerprint>;

template <typename Input>
GridFit<Input> FitHypersGrid(const std::vector<Input>& inputs,
                             const std::vector<double>& labels,
                             std::span<const GPConfig> grid) {
  if (grid.empty()) throw InputError("hyperparameter grid is empty");
  GridFit<Input> out;
  out.scores.assign(grid.size(), -std::numeric_limits<double>::infinity());
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      const auto state = PosteriorState<Input>::Fit(inputs, labels, grid[i]);
      out.scores[i] = state.LogMarginalLikelihood();
    } catch (const NumericalError&) {
      continue;
    }
    if (!any || out.scores[i] > out.scores[out.best_index]) out.best_index = i;
    any = true;
  }
  if (!any) throw NumericalError("every grid entry failed to factorize");
  out.best = grid[out.best_index];
  return out;
}

template GridFit<RealVector> FitHypersGrid(const std::vector<RealVector>&,
                                           const std::vector<double>&,
                                           std::span<const GPConfig>);
template GridFit<chem::Fingerprint> FitHypersGrid(const std::vector<chem::Fingerprint>&,
                                                  const std::vector<double>&,
                                                  std::span<const GPConfig>);

std::vector<GPConfig> LogGrid(const GPConfig& base, std::span<const double> amplitudes,
                              std::span<const double> noises) {
  std::vector<GPConfig> grid;
  for (double a : amplitudes) {
    for (double s : noises) {
      GPConfig c = base;
      c.kernel.amplitude = a;
      c.noise_variance = s;
      grid.push_back(c);
    }
  }
  return grid;
}

}  // namespace molbo::gp
