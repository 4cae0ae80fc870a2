#pragma once

// Slow, direct reference implementations used as test oracles. They share no
// code with the library beyond the plain data types.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "rankagg/core.hpp"
#include "rankagg/rng.hpp"

namespace oracle_ref {

inline double H(double a, double b) { return a > b ? 1.0 : (a == b ? 0.5 : 0.0); }

/// Empirical AUC by the double loop over positive/negative pairs.
inline double auc_pairs(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (y[i] == 1 && y[j] == 0) num += H(s[i], s[j]), den += 1.0;
    return num / den;
}

/// Population AUC over all ordered pairs, diagonal included.
inline double auc_population(const std::vector<double>& s, const std::vector<double>& eta) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double w = eta[i] * (1.0 - eta[j]);
            num += w * H(s[i], s[j]);
            den += w;
        }
    return num / den;
}

/// Empirical multipartite AUC with cost function c(hi, lo) over integer levels.
inline double multipartite_pairs(const std::vector<double>& s, const std::vector<int>& lv,
                                 const std::function<double(int, int)>& c) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (lv[i] > lv[j]) {
                const double w = c(lv[i], lv[j]);
                num += w * H(s[i], s[j]);
                den += w;
            }
    return num / den;
}

/// Probability of label combination `combo` under independent labels.
inline double joint_prob(const rankagg::EtaTable& eta, std::size_t i, std::uint32_t combo) {
    double p = 1.0;
    for (std::size_t k = 0; k < eta.K(); ++k) p *= ((combo >> k) & 1) ? eta(i, k) : 1.0 - eta(i, k);
    return p;
}

/// Population multipartite AUC of the Sum aggregate by enumerating every
/// pair of label combinations; costs c(hi, lo) over integer sums.
inline double label_agg_population(const std::vector<double>& s, const rankagg::EtaTable& eta,
                                   const std::function<double(int, int)>& c) {
    const std::uint32_t combos = 1u << eta.K();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            for (std::uint32_t a = 0; a < combos; ++a)
                for (std::uint32_t b = 0; b < combos; ++b) {
                    const int ya = __builtin_popcount(a), yb = __builtin_popcount(b);
                    if (ya <= yb) continue;
                    const double w = joint_prob(eta, i, a) * joint_prob(eta, j, b) * c(ya, yb);
                    num += w * H(s[i], s[j]);
                    den += w;
                }
    return num / den;
}

/// Maximum of sum_{i,j} W(i,j) H(f_i - f_j) over every map {0..n-1} -> {0..n-1}.
inline double brute_force_max(const rankagg::Matrix<double>& w) {
    const std::size_t n = w.rows();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= n;
    double best = -1e300;
    std::vector<double> f(n);
    for (std::size_t code = 0; code < total; ++code) {
        for (std::size_t i = 0, c = code; i < n; ++i, c /= n) f[i] = static_cast<double>(c % n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) v += w(i, j) * H(f[i], f[j]);
        best = std::max(best, v);
    }
    return best;
}

inline rankagg::EtaTable random_eta(std::size_t n, std::size_t K, std::uint64_t seed, double lo = 0.0,
                                    double hi = 1.0) {
    rankagg::RandomStream r(seed, rankagg::Stream::Eval);
    rankagg::Matrix<double> m(n, K);
    for (double& v : m.data()) v = r.uniform(lo, hi);
    return rankagg::EtaTable(std::move(m));
}

}  // namespace oracle_ref
