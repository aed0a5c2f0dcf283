#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "negadrift/core.hpp"
#include "negadrift/mutation.hpp"
#include "negadrift/selection.hpp"

namespace negadrift {

/// lambda i.i.d. uniform bit strings.
struct UniformRandom {};

/// mu uniform base points; each member is a mutated copy of a random base.
/// Every member is then marginally uniform, though members are dependent.
struct MuLambdaSeeded {
    std::size_t mu;
};

using Initializer = std::variant<UniformRandom, MuLambdaSeeded>;

/// A population selection-mutation process on {0,1}^n.
struct PsmProcess {
    using FitnessRule = std::function<double(const BitString&)>;

    std::size_t n;
    std::size_t lambda;
    SelectionOperator selection;
    MutationOperator mutation;
    Initializer initializer;
    PotentialSpec potential;
    FitnessRule fitness;  ///< empty: n - g(x)

    /// Throws std::invalid_argument if the pieces do not fit together.
    void validate() const;

    double evaluate(const BitString& x) const;
};

/// (mu,lambda) EA with standard bit mutation at rate p, maximizing closeness
/// to `target` (OneMax when target is all ones), seeded initialization.
PsmProcess mu_lambda_ea(std::size_t n, std::size_t mu, std::size_t lambda, double p,
                        std::optional<BitString> target = std::nullopt);

/// Mutation-only simple GA on OneMax: fitness-proportionate selection,
/// standard bit mutation at rate 1/n, uniform initialization, lambda = mu.
PsmProcess simple_ga(std::size_t n, std::size_t mu);

Population init_population(const PsmProcess& proc, Rng& rng);

struct StepResult {
    Population population;
    SelectionOutcome selection;
    std::size_t evaluations;  ///< fitness calls made (always lambda)
};

/// One generation: evaluate, select lambda parents, mutate each once.
StepResult step(const Population& population, const PsmProcess& proc, Rng& rng);

/// Same, reusing a kernel bound to proc.mutation.
StepResult step(const Population& population, const PsmProcess& proc, const MutationKernel& kernel,
                Rng& rng);

struct IterationRecord {
    std::size_t t;
    std::size_t min_potential;
    double log_potential;
    bool hit;
};

struct RunTrace {
    std::uint64_t seed;
    std::vector<IterationRecord> records;
    std::optional<std::size_t> hitting_time;  ///< empty: censored, no hit in [0..L]
    std::size_t horizon;                      ///< L
    std::size_t evaluations;

    bool censored() const noexcept { return !hitting_time.has_value(); }
};

struct RunOptions {
    std::size_t a;        ///< target level: hit when min g <= a
    std::size_t horizon;  ///< L >= 1; generations 0..L are observed
    double kappa = 1.0;   ///< scaling of the recorded population potential
    bool record = true;   ///< keep per-iteration records
};

/// Runs from a fresh initial population until min g <= a or t = L.
RunTrace run_until(const PsmProcess& proc, const RunOptions& options, std::uint64_t seed);

/// Same, from a given initial population.
RunTrace run_until(const PsmProcess& proc, const RunOptions& options, Population start, Rng& rng,
                   std::uint64_t seed);

struct ReplicateResult {
    std::size_t replicate;
    std::uint64_t seed;
    std::optional<std::size_t> hitting_time;
};

struct ExperimentSummary {
    std::size_t reps;
    std::size_t horizon;
    std::size_t hits_before_horizon;  ///< #runs with T < L
    std::size_t hits_at_horizon;      ///< #runs with T = L
    std::size_t censored;             ///< #runs with T > L
    double prob_hit_before_horizon;
    std::optional<double> mean_uncensored;
    std::vector<ReplicateResult> runs;  ///< ordered by replicate index
};

/// `reps` runs with seeds derive_seed(master_seed, k), spread over `workers`
/// threads. The result does not depend on the worker count.
ExperimentSummary hitting_time_experiment(const PsmProcess& proc, const RunOptions& options,
                                          std::size_t reps, std::uint64_t master_seed,
                                          std::size_t workers = 1);

/// Runs `task(k)` for k in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

/// CSV: t,min_g,log_potential,hit
void write_trace_csv(std::ostream& out, const RunTrace& trace);

}  // namespace negadrift
