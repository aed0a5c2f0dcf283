#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "negadrift/bounds.hpp"
#include "negadrift/engine.hpp"
#include "negadrift/mutation.hpp"

/// Verification laboratory: exact oracles on small chains, analytic checks of
/// the drift conditions, Monte Carlo drift measurement, and stochastic
/// domination tests.
///
/// Not implemented: the observation that the fitness *sum* of a simple-GA
/// population need not dominate Bin(mu n, 1/2). Its separating event has
/// probability around (20n)^-n, far below anything a desk-scale run can see.
namespace negadrift {

// ---------------------------------------------------------------------------
// Finite chains

/// A Markov chain on states 0..N-1 carrying labels X(s) >= 0. The hitting
/// time is T = min{t : X_t >= M}.
struct FiniteChain {
    Eigen::VectorXd labels;
    Eigen::MatrixXd transition;  ///< row-stochastic
    double M;
    Eigen::VectorXd start;  ///< initial distribution

    Eigen::Index size() const noexcept { return labels.size(); }

    /// Throws std::invalid_argument on bad shapes, rows not summing to 1
    /// within 1e-12, or negative / non-finite labels.
    void validate() const;
};

struct DriftCertificate {
    double delta;
    double Delta;
};

/// Smallest Delta >= 0 with E[X'|s] <= (1-delta) X(s) + Delta in every state.
double minimal_disturbance(const FiniteChain& chain, double delta);

/// Searches delta on a logarithmic grid in (0,1). For each delta the
/// disturbance is minimal_disturbance, raised if needed so that
/// E[X_0] <= Delta/delta. Returns the pair with the smallest Delta/delta,
/// or nothing when even that is not below M.
std::optional<DriftCertificate> chain_drift_check(const FiniteChain& chain,
                                                  std::size_t grid_points = 200);

/// Exact re-verification of the pointwise drift inequality.
bool satisfies_drift(const FiniteChain& chain, const DriftCertificate& cert,
                     double tolerance = 1e-12);

struct HittingResult {
    std::vector<double> prob_hit_before;  ///< [L-1] = Pr[T < L], L = 1..horizon
    double expected_time;                 ///< +inf when Pr[T = inf] > 0
    bool truncated;                       ///< expected_time is only a partial sum
};

/// Threshold states (X >= M) are made absorbing. Pr[T < L] comes from L-step
/// propagation; E[T] from a linear solve on the states that are absorbed
/// almost surely. Requires at most 10^4 states.
HittingResult chain_exact_hitting(const FiniteChain& chain, std::size_t horizon);

/// E[X_t] for t = 0..steps under the unmodified chain.
std::vector<double> chain_expected_labels(const FiniteChain& chain, std::size_t steps);

/// Hamming-distance chain of a (1,1) process: state d = H(x, x*),
/// labels e^{-kappa d}, M = e^{-kappa a}, start Bin(n, 1/2).
FiniteChain distance_chain(std::size_t n, const MutationOperator& op, double kappa,
                           std::size_t a);

/// Random chain with at most max_states states whose labels tend to drift
/// downward; a few high-label states play the role of the threshold.
FiniteChain random_drift_chain(Rng& rng, std::size_t max_states);

struct OracleCase {
    std::size_t candidate;  ///< index of the generating seed
    std::uint64_t seed;
    std::size_t states;
    DriftCertificate certificate;
    double M;
    double worst_prob_ratio;    ///< max_L exact Pr[T<L] / (L Delta/(delta M))
    double expected_time;       ///< exact (or +inf)
    double expected_time_bound; ///< delta M/(2 Delta) - 1/2
    double max_mean_label;      ///< max_t E[X_t]
    bool prob_ok;
    bool expected_ok;
    bool equilibrium_ok;        ///< max_t E[X_t] <= Delta/delta

    bool ok() const noexcept { return prob_ok && expected_ok && equilibrium_ok; }
};

/// Checks one chain against the drift-lemma bounds; empty if the drift
/// check rejects it.
std::optional<OracleCase> lemma1_oracle_case(const FiniteChain& chain, std::size_t horizon);

struct OracleSuite {
    std::vector<OracleCase> cases;  ///< the first `chains` accepted candidates
    std::size_t candidates;         ///< candidates generated
};

/// Generates candidates with seeds derive_seed(master, k), k = 0, 1, ...,
/// until `chains` are accepted. Deterministic for any worker count.
OracleSuite lemma1_oracle_suite(std::uint64_t master_seed, std::size_t chains,
                                std::size_t max_states, std::size_t horizon,
                                std::size_t workers = 1);

nlohmann::json to_json(const OracleCase& c);

// ---------------------------------------------------------------------------
// Drift conditions for standard bit mutation with Hamming potential

struct LevelValue {
    std::size_t d;
    double value;
};

struct LevelReport {
    std::vector<LevelValue> levels;  ///< mgf at each level a < d < b
    double threshold;                ///< (1-delta)/alpha
    bool holds;
    std::optional<LevelValue> tightest;
};

/// E[exp(-kappa (g(mut(x)) - g(x)))] <= (1-delta)/alpha for every a < g(x) < b.
LevelReport verify_condition_ii(const MutationOperator& op, std::size_t n, double kappa,
                                double alpha, double delta, std::size_t a, std::size_t b);

struct ConditionIIIReport {
    bool holds;
    bool exhaustive;     ///< every d in [b..n] checked, else only d = b
    std::size_t worst_level;
    double worst_value;  ///< max_d E[exp(-kappa g(mut(x)))] e^{kappa b}
    double D;
};

/// E[exp(-kappa g(mut(x)))] <= D e^{-kappa b} for every g(x) >= b. Exhaustive
/// for n <= 1000; beyond that only d = b, the worst case by domination.
ConditionIIIReport verify_condition_iii(const MutationOperator& op, std::size_t n, double kappa,
                                        std::size_t b, double D);

nlohmann::json to_json(const LevelReport& r);
nlohmann::json to_json(const ConditionIIIReport& r);

// ---------------------------------------------------------------------------
// Monte Carlo drift

struct DriftMeasurement {
    double log_current;        ///< ln X(P)
    double mean_ratio;         ///< estimate of E[X' | P] / X(P)
    double half_width_ratio;   ///< 95% half-width, same units
    std::size_t reps;
};

/// One generation from P, repeated `reps` times; X = exp(population_potential).
DriftMeasurement measure_drift(const PsmProcess& proc, const Population& population, double kappa,
                               std::size_t reps, Rng& rng);

/// E[X' | P] / X(P) computed exactly from expected reproduction numbers and
/// the per-individual mgf.
double expected_drift_ratio(const PsmProcess& proc, const Population& population, double kappa);

/// ((1-delta) X(P) + lambda D e^{-kappa b}) / X(P).
double drift_rhs_ratio(double log_current, double delta, std::size_t lambda, double D, double kappa,
                       std::size_t b);

// ---------------------------------------------------------------------------
// Stochastic domination

enum class DominationMethod { exact, statistical };

struct DominationVerdict {
    bool holds;
    std::size_t worst_point;  ///< support point of the largest CDF excess
    double worst_gap;         ///< max_k F_high(k) - F_low(k) (exact) or F_emp - F_ref (statistical)
    DominationMethod method;
    double significance;      ///< statistical only
    double slack;             ///< tolerance (exact) or DKW slack (statistical)
};

/// Exact CDF comparison: pmf_high dominates pmf_low iff F_high <= F_low
/// everywhere (up to 1e-12 rounding).
DominationVerdict domination_test_exact(const Pmf& pmf_low, const Pmf& pmf_high,
                                        double tolerance = 1e-12);

/// One-sided DKW test that the sample law dominates the reference:
/// rejects if F_emp(k) - F_ref(k) > sqrt(ln(1/significance) / (2m)) anywhere.
/// reference_cdf(k) = Pr[X <= k]; beyond its support F_ref = 1.
DominationVerdict domination_test_statistical(std::span<const std::size_t> samples,
                                              const Eigen::VectorXd& reference_cdf,
                                              double significance);

/// E[f(low)] <= E[f(high)] for f non-decreasing (tabulated on the support).
/// Throws std::invalid_argument when f is not monotone or the pair is not
/// ordered by domination.
bool monotone_expectation_check(const Pmf& pmf_low, const Pmf& pmf_high,
                                const Eigen::VectorXd& f);

nlohmann::json to_json(const DominationVerdict& v);

Eigen::VectorXd cdf(const Pmf& pmf);

// ---------------------------------------------------------------------------
// Simple GA

/// Exact law of OneMax(P_1^(t)) for the mutation-only simple GA on OneMax
/// (uniform start, fitness-proportionate selection, flip rate p). Lumps
/// populations by their fitness tuples, which is exact because both
/// operators only see OneMax values. Cost (n+1)^(2 mu) per generation.
Pmf simple_ga_exact_onemax_pmf(std::size_t n, std::size_t mu, double p, std::size_t t);

/// OneMax(P_0^(t)) of `runs` independent simple-GA runs, one list per
/// requested t (ascending). Runs use seeds derive_seed(master, k).
std::vector<std::vector<std::size_t>> simple_ga_fitness_samples(std::size_t n, std::size_t mu,
                                                                std::span<const std::size_t> times,
                                                                std::size_t runs,
                                                                std::uint64_t master_seed,
                                                                std::size_t workers = 1);

}  // namespace negadrift
