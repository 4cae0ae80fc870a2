#include "rankagg/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "rankagg/rng.hpp"

namespace rankagg {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

InstanceSet uniform_square(std::size_t n, std::uint64_t seed) {
    RandomStream rng(seed, Stream::Features);
    Matrix<double> x(n, 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
    return InstanceSet(std::move(x));
}

}  // namespace

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

void SigmoidSynthConfig::validate() const {
    require(n >= 1, "n must be >= 1");
    require(std::isfinite(tau) && std::isfinite(rho), "tau and rho must be finite");
    if (tau2) require(std::isfinite(*tau2), "tau2 must be finite");
}

SampledLabels sample_labels(const EtaTable& eta, std::uint64_t seed) {
    const RandomStream base(seed, Stream::Labels);
    Matrix<std::uint8_t> y(eta.n(), eta.K());
    for (std::size_t k = 0; k < eta.K(); ++k) {
        RandomStream rng = base.fork(k);
        for (std::size_t i = 0; i < eta.n(); ++i) y(i, k) = rng.bernoulli(eta(i, k)) ? 1 : 0;
    }
    return SampledLabels(std::move(y));
}

EtaTable sigmoid_eta(const InstanceSet& x, const SigmoidSynthConfig& c) {
    require(x.d() == 2, "the sigmoid model needs two features");
    const double t2 = c.tau2.value_or(c.tau);
    Matrix<double> eta(x.n(), 2);
    for (std::size_t i = 0; i < x.n(); ++i) {
        const auto r = x.row(i);
        eta(i, 0) = sigmoid(c.tau * (c.w1[0] * r[0] + c.w1[1] * r[1]));
        eta(i, 1) = sigmoid(t2 * (c.w2[0] * r[0] + c.w2[1] * r[1] - c.rho));
    }
    return EtaTable(std::move(eta));
}

Dataset gen_sigmoid_pair(const SigmoidSynthConfig& config) {
    config.validate();
    InstanceSet x = uniform_square(config.n, config.seed);
    EtaTable eta = sigmoid_eta(x, config);
    SampledLabels y = sample_labels(eta, config.seed);
    return Dataset{std::move(x), std::move(y), std::move(eta)};
}

Dataset gen_gaussian_bilevel(std::size_t n, std::uint64_t seed) {
    require(n >= 2, "n must be >= 2");
    RandomStream cov(seed, Stream::Covariance);
    double a[2][2];
    for (auto& row : a)
        for (double& v : row) v = cov.uniform();
    RandomStream rng(seed, Stream::Features);
    Matrix<double> x(n, 2);
    Matrix<std::uint8_t> y(n, 2);
    Matrix<double> eta(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double z0 = rng.normal(), z1 = rng.normal();
        // A z has covariance A A^T.
        const double s[2] = {a[0][0] * z0 + a[0][1] * z1, a[1][0] * z0 + a[1][1] * z1};
        for (std::size_t k = 0; k < 2; ++k) {
            x(i, k) = s[k];
            y(i, k) = s[k] > 0.0 ? 1 : 0;
            eta(i, k) = y(i, k);
        }
    }
    return Dataset{InstanceSet(std::move(x)), SampledLabels(std::move(y)), EtaTable(std::move(eta))};
}

Dataset gen_d3_training_pair(std::size_t n, std::uint64_t seed, double tau) {
    require(n >= 1, "n must be >= 1");
    require(std::isfinite(tau), "tau must be finite");
    RandomStream w(seed, Stream::Weights);
    SigmoidSynthConfig c;
    c.n = n;
    c.tau = tau;
    c.seed = seed;
    c.w1 = {w.uniform(-1.0, 1.0), w.uniform(-1.0, 1.0)};
    c.w2 = {w.uniform(-1.0, 1.0), w.uniform(-1.0, 1.0)};
    return gen_sigmoid_pair(c);
}

Dataset resample_to_skew(const Dataset& data, std::size_t k, double target, std::uint64_t seed) {
    data.validate();
    require(k < data.K(), "label index out of range");
    if (!(target > 0.0 && target < 1.0))
        throw DegenerateLabel("target prior must lie strictly between 0 and 1", k);
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < data.n(); ++i) (data.labels(i, k) ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty())
        throw DegenerateLabel("label " + std::to_string(k) + " has a single class", k);
    const std::size_t n = data.n();
    auto n_pos = static_cast<std::size_t>(std::llround(target * static_cast<double>(n)));
    n_pos = std::clamp<std::size_t>(n_pos, n > 1 ? 1 : 0, n > 1 ? n - 1 : n);

    RandomStream rng(seed, Stream::Resample);
    std::vector<std::size_t> rows(n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto& pool = r < n_pos ? pos : neg;
        rows[r] = pool[rng.below(pool.size())];
    }
    RandomStream shuffle(seed, Stream::Shuffle);
    for (std::size_t r = n; r > 1; --r) std::swap(rows[r - 1], rows[shuffle.below(r)]);
    return data.select(rows);
}

}  // namespace rankagg
