#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "negadrift/errors.hpp"
#include "negadrift/mutation.hpp"

namespace negadrift {

/// A lower bound on E[T] and an upper bound on Pr[T < L], carried as logs.
///
/// E[T] >= exp(log_expected_time_term) - 1/2 and
/// Pr[T < L] <= min(1, exp(log_prob_raw)). The raw probability log is kept
/// even when it exceeds 0, so a vacuous bound stays visible.
struct BoundReport {
    std::string kind;
    double log_expected_time_term = 0.0;
    double log_prob_raw = 0.0;
    std::vector<std::pair<std::string, double>> constants;

    /// exp(term) - 1/2; +inf once exp(term) leaves the double range.
    double expected_time_lower() const;
    double prob_upper() const;
    double constant(const std::string& name) const;
};

/// Flat JSON object: kind, the four bound fields, then every constant by name.
/// Values outside the double range are written as null.
nlohmann::json to_json(const BoundReport& report);

// ---------------------------------------------------------------------------
// Negative multiplicative drift: E[X_{t+1}] <= (1 - delta) E[X_t] + Delta.

struct DriftBoundInput {
    double delta;
    double Delta;
    double M;
    std::size_t L;
};

/// E[T] >= delta M / (2 Delta) - 1/2 and Pr[T < L] <= L Delta / (delta M)
/// for T the first time the process reaches M. Requires M > Delta / delta.
BoundReport negdrift_lemma_bounds(const DriftBoundInput& in);

// ---------------------------------------------------------------------------
// Populations with an exponential potential.

struct PopulationBoundInput {
    double kappa;
    std::size_t a;
    std::size_t b;
    double alpha;
    double delta;
    double D;
    std::size_t lambda;
    std::size_t L;
};

/// E[T] >= delta/(2 D lambda) e^{kappa(b-a)} - 1/2,
/// Pr[T < L] <= L lambda (D/delta) e^{-kappa(b-a)}.
BoundReport populations_bounds(const PopulationBoundInput& in);

struct StartCondition {
    bool holds;
    double margin;  ///< ln(right side / left side)
};

/// Whether lambda (1/2 + e^{-kappa}/2)^n <= lambda D e^{-kappa b} / delta,
/// i.e. uniform initialization is admissible. Requires e^kappa >= 2.
StartCondition check_start_condition(std::size_t n, double kappa, std::size_t b, double D,
                                     double delta, std::size_t lambda);

// ---------------------------------------------------------------------------
// Standard bit mutation, Hamming potential.

struct SbmBoundInput {
    std::size_t n;
    double p;
    double alpha;
    double delta;
    std::size_t a;
    std::size_t b;
    std::size_t lambda;
    std::size_t L;
};

/// With eps = 1 - ln(alpha/(1-delta))/(pn), B = 2/eps, kappa = ln B and
/// D = max{(1-delta)/alpha, delta}. Rejects eps <= 0 and b > n/(B^2-1).
BoundReport sbm_bounds(const SbmBoundInput& in);

/// delta-free variant with gamma = 1 - ln(alpha)/(pn) and
/// b = floor((1 - 4/n) n / (4/gamma^2 - 1)). Requires gamma >= 1/n and a <= b.
BoundReport sbm_corollary_bounds(std::size_t n, double p, double alpha, std::size_t a,
                                 std::size_t lambda, std::size_t L);

/// The safe level b used by sbm_corollary_bounds.
std::ptrdiff_t corollary_level(std::size_t n, double gamma);

// ---------------------------------------------------------------------------
// Random mutation rates.

struct MixedBoundInput {
    std::size_t n;
    MutationOperator op;
    double alpha;
    double delta;
    double B;
    std::size_t a;
    std::size_t b;
    std::size_t lambda;
    std::size_t L;
};

/// Left side of the admissibility condition for B:
/// sum_i q_i exp(-p_i n (1 - 2/B)).
double mixed_admissibility_lhs(std::size_t n, const MutationOperator& op, double B);

/// Requires B > 2, all rates <= 1/2, the admissibility condition
/// lhs <= (1-delta)/alpha, and a < b <= n/(B^2-1). kappa = ln B.
BoundReport mixed_bounds(const MixedBoundInput& in);

struct MixedParams {
    double delta;
    double B;
};

/// delta = gamma/2 and B = 2 (1 - ln((1-gamma/2)/alpha) / ln((1-gamma)/alpha))^{-1}.
/// The caller must ensure sum_i q_i e^{-p_i n} <= (1-gamma)/alpha.
MixedParams mixed_params_from_gamma(double alpha, double gamma);

/// sum_i q_i e^{-p_i n}, the quantity gamma is read off from.
double copy_probability_limit(std::size_t n, const MutationOperator& op);

// ---------------------------------------------------------------------------
// Mutation-only simple GA on OneMax.

struct SimpleGaParameters {
    double alpha;     ///< (1 - a_frac)/(1/2 - eps): reproduction-rate cap
    double gamma;     ///< 1 - ln(alpha) at p = 1/n
    std::ptrdiff_t b; ///< corollary_level(n, gamma)
    double s;         ///< fitness floor (1/2 - eps) n
    std::size_t a;    ///< target distance floor(a_frac n)
};

SimpleGaParameters simple_ga_parameters(std::size_t n, double eps, double a_frac);

}  // namespace negadrift
