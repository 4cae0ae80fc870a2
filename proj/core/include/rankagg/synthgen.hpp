#pragma once

// Seeded synthetic data generators. Every generator draws from independent
// counter-based substreams, so changing n never reshuffles earlier draws.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "rankagg/core.hpp"

namespace rankagg {

/// Two logistic labels over features uniform on [-1, 1]^2:
/// eta1 = sigma(tau w1.x), eta2 = sigma(tau2 (w2.x - rho)).
struct SigmoidSynthConfig {
    std::size_t n = 1000;
    double tau = 1.0;
    double rho = 0.0;
    std::uint64_t seed = 0;
    std::array<double, 2> w1{0.70710678118654752, 0.70710678118654752};
    std::array<double, 2> w2{0.0, 1.0};
    /// Scale of the second label; defaults to tau.
    std::optional<double> tau2;

    void validate() const;
};

double sigmoid(double z) noexcept;

Dataset gen_sigmoid_pair(const SigmoidSynthConfig& config);

/// eta table of the sigmoid model at fixed features, without sampling labels.
EtaTable sigmoid_eta(const InstanceSet& x, const SigmoidSynthConfig& config);

/// Two thresholded components of a zero-mean Gaussian with covariance A A^T,
/// A entries uniform on [0, 1]. Labels are deterministic; eta equals them.
Dataset gen_gaussian_bilevel(std::size_t n, std::uint64_t seed);

/// Logistic labels with directions w1, w2 uniform on [-1, 1]^2 and scale tau.
Dataset gen_d3_training_pair(std::size_t n, std::uint64_t seed, double tau);

/// Resamples rows with replacement so that round(target n) rows are positive
/// on label k, then shuffles. Row count is preserved.
Dataset resample_to_skew(const Dataset& data, std::size_t k, double target, std::uint64_t seed);

/// Samples Bernoulli(eta) labels, one substream draw per (row, label).
SampledLabels sample_labels(const EtaTable& eta, std::uint64_t seed);

}  // namespace rankagg
