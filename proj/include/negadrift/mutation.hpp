#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "negadrift/core.hpp"

namespace negadrift {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Probability mass function on {0, 1, ..., size-1}.
using Pmf = Vector<double>;

// ---------------------------------------------------------------------------
// Operators

/// Standard bit mutation: every bit flips independently with probability p.
struct FixedRate {
    double p;
};

struct RateWeight {
    double p;  ///< mutation rate
    double q;  ///< probability of drawing this rate
};

/// Standard bit mutation whose rate is drawn afresh per invocation.
struct MixedRate {
    std::vector<RateWeight> rates;
};

/// Power-law rate: i in [1..N] drawn with Pr[i] ~ i^-beta, then rate i/n.
struct HeavyTailed {
    double beta = 1.5;
    std::size_t N = 0;  ///< 0 selects floor(n/2)
};

using MutationOperator = std::variant<FixedRate, MixedRate, HeavyTailed>;

/// Throws std::invalid_argument unless rates lie in [0,1], weights are
/// non-negative and sum to 1 within 1e-12, and beta > 1.
void validate(const MutationOperator& op);

/// The operator as an explicit list of (rate, weight) pairs for length n.
std::vector<RateWeight> rate_distribution(const MutationOperator& op, std::size_t n);

/// Largest rate the operator can draw at length n.
double max_rate(const MutationOperator& op, std::size_t n);

// ---------------------------------------------------------------------------
// Power-law constants

/// Pr[i] = i^-beta / C(beta, N) for i = 1..N, stored at index i-1.
Pmf heavy_tailed_pmf(double beta, std::size_t N);

/// C(beta, N) = sum_{i=1}^N i^-beta.
double power_law_normalizer(double beta, std::size_t N);

/// A_N = sum_{i=1}^N Pr[i] e^{-i}: probability that heavy-tailed mutation at
/// rate i/n behaves like a copy, in the large-n limit.
double a_constant(double beta, std::size_t N);

struct Bracket {
    double lower;
    double upper;
};

/// zeta(beta) enclosed by `terms` explicit summands plus integral tail bounds.
Bracket zeta_bracket(double beta, std::size_t terms);

/// Enclosure of lim_{N->inf} A_N using the first `terms` summands, zeta_bracket
/// for the normalizer, and e^{-(terms+1)} for the truncated tail.
Bracket a_constant_limit(double beta, std::size_t terms = 100, std::size_t zeta_terms = 1000000);

// ---------------------------------------------------------------------------
// Exact offspring law under standard bit mutation

/// Binomial(m, p) pmf. Terms built by a running sum of log-ratios so that no
/// factorial is formed and small leading terms cannot underflow the rest.
template <typename Scalar = double>
Vector<Scalar> binomial_pmf(std::size_t m, Scalar p) {
    if (!(p >= Scalar(0) && p <= Scalar(1))) {
        throw std::invalid_argument("binomial_pmf: p outside [0,1]");
    }
    Vector<Scalar> pmf = Vector<Scalar>::Zero(static_cast<Eigen::Index>(m + 1));
    if (p == Scalar(0)) {
        pmf(0) = Scalar(1);
        return pmf;
    }
    if (p == Scalar(1)) {
        pmf(static_cast<Eigen::Index>(m)) = Scalar(1);
        return pmf;
    }
    using std::exp;
    using std::log;
    const Scalar log_odds = log(p) - log(Scalar(1) - p);
    Scalar log_term = static_cast<Scalar>(m) * log(Scalar(1) - p);
    pmf(0) = exp(log_term);
    for (std::size_t k = 0; k < m; ++k) {
        log_term += log(static_cast<Scalar>(m - k) / static_cast<Scalar>(k + 1)) + log_odds;
        pmf(static_cast<Eigen::Index>(k + 1)) = exp(log_term);
    }
    return pmf;
}

/// Law of H(mut(x), x*) on [0..n] given H(x, x*) = d, for flip rate p:
/// d - Bin(d, p) + Bin(n - d, p).
template <typename Scalar = double>
Vector<Scalar> offspring_distance_pmf(std::size_t d, std::size_t n, Scalar p) {
    if (d > n) {
        throw std::invalid_argument("offspring_distance_pmf: d exceeds n");
    }
    const Vector<Scalar> closer = binomial_pmf<Scalar>(d, p);
    const Vector<Scalar> farther = binomial_pmf<Scalar>(n - d, p);
    Vector<Scalar> pmf = Vector<Scalar>::Zero(static_cast<Eigen::Index>(n + 1));
    for (Eigen::Index j = 0; j < closer.size(); ++j) {
        if (closer(j) == Scalar(0)) {
            continue;
        }
        const Eigen::Index base = static_cast<Eigen::Index>(d) - j;
        pmf.segment(base, farther.size()) += closer(j) * farther;
    }
    return pmf;
}

/// E[exp(-kappa (H(y,x*) - d))] for y = mut(x), H(x,x*) = d:
/// (1 + p(e^kappa - 1))^d (1 - p(1 - e^-kappa))^(n-d), evaluated as a log-sum.
template <typename Scalar = double>
Scalar mgf_sbm(std::size_t d, std::size_t n, Scalar p, Scalar kappa) {
    if (d > n) {
        throw std::invalid_argument("mgf_sbm: d exceeds n");
    }
    if (!(p >= Scalar(0) && p <= Scalar(1))) {
        throw std::invalid_argument("mgf_sbm: p outside [0,1]");
    }
    using std::exp;
    using std::expm1;
    using std::log1p;
    const Scalar up = static_cast<Scalar>(d) * log1p(p * expm1(kappa));
    const Scalar down = static_cast<Scalar>(n - d) * log1p(p * expm1(-kappa));
    return exp(up + down);
}

/// Rate-mixture of mgf_sbm: sum_i q_i mgf_sbm(d, n, p_i, kappa).
double mgf_mixed(std::size_t d, std::size_t n, const MutationOperator& op, double kappa);

/// Offspring distance law under any operator (mixture of offspring_distance_pmf).
Pmf offspring_distance_pmf(std::size_t d, std::size_t n, const MutationOperator& op);

// ---------------------------------------------------------------------------
// Sampling

/// Mutation operator bound to a string length, with its rate table prepared.
/// Heavy-tailed rates are drawn by binary search over a cumulative table.
class MutationKernel {
public:
    MutationKernel(MutationOperator op, std::size_t n);

    const MutationOperator& op() const noexcept { return op_; }
    std::size_t length() const noexcept { return n_; }

    /// Draws the flip rate for one invocation.
    double draw_rate(Rng& rng) const;

    BitString apply(const BitString& x, Rng& rng) const;

private:
    MutationOperator op_;
    std::size_t n_;
    std::vector<double> rates_;
    std::vector<double> cumulative_;
};

/// Flips every bit of x independently with probability p.
void flip_bits(BitString& x, double p, Rng& rng);

BitString mutate(const BitString& x, const MutationOperator& op, Rng& rng);

}  // namespace negadrift
