#include "negadrift/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

namespace negadrift {

void PsmProcess::validate() const {
    if (n == 0 || lambda == 0) {
        throw std::invalid_argument("process needs n >= 1 and lambda >= 1");
    }
    if (potential.target().size() != n) {
        throw std::invalid_argument("potential target length differs from n");
    }
    if (const auto* t = std::get_if<TruncationUniform>(&selection)) {
        if (t->mu == 0 || t->mu > lambda) {
            throw std::invalid_argument("truncation selection needs 1 <= mu <= lambda");
        }
    }
    if (const auto* s = std::get_if<MuLambdaSeeded>(&initializer)) {
        if (s->mu == 0) {
            throw std::invalid_argument("seeded initialization needs mu >= 1");
        }
    }
    negadrift::validate(mutation);
}

double PsmProcess::evaluate(const BitString& x) const {
    if (fitness) {
        return fitness(x);
    }
    return static_cast<double>(n) - static_cast<double>(potential(x));
}

PsmProcess mu_lambda_ea(std::size_t n, std::size_t mu, std::size_t lambda, double p,
                        std::optional<BitString> target) {
    PsmProcess proc{
        .n = n,
        .lambda = lambda,
        .selection = TruncationUniform{mu},
        .mutation = FixedRate{p},
        .initializer = MuLambdaSeeded{mu},
        .potential = PotentialSpec(target ? *target : BitString(n, true)),
        .fitness = {},
    };
    proc.validate();
    return proc;
}

PsmProcess simple_ga(std::size_t n, std::size_t mu) {
    PsmProcess proc{
        .n = n,
        .lambda = mu,
        .selection = FitnessProportionate{},
        .mutation = FixedRate{1.0 / static_cast<double>(n)},
        .initializer = UniformRandom{},
        .potential = PotentialSpec::all_ones(n),
        .fitness = [](const BitString& x) { return static_cast<double>(onemax(x)); },
    };
    proc.validate();
    return proc;
}

Population init_population(const PsmProcess& proc, Rng& rng) {
    std::vector<BitString> members;
    members.reserve(proc.lambda);
    if (const auto* seeded = std::get_if<MuLambdaSeeded>(&proc.initializer)) {
        std::vector<BitString> base;
        base.reserve(seeded->mu);
        for (std::size_t i = 0; i < seeded->mu; ++i) {
            base.push_back(BitString::random(proc.n, rng));
        }
        const MutationKernel kernel(proc.mutation, proc.n);
        std::uniform_int_distribution<std::size_t> pick(0, seeded->mu - 1);
        for (std::size_t i = 0; i < proc.lambda; ++i) {
            members.push_back(kernel.apply(base[pick(rng)], rng));
        }
    } else {
        for (std::size_t i = 0; i < proc.lambda; ++i) {
            members.push_back(BitString::random(proc.n, rng));
        }
    }
    return Population(std::move(members));
}

StepResult step(const Population& population, const PsmProcess& proc, const MutationKernel& kernel,
                Rng& rng) {
    std::vector<double> fitness;
    fitness.reserve(population.lambda());
    for (const auto& x : population) {
        fitness.push_back(proc.evaluate(x));
    }
    auto selection = select(population, fitness, proc.selection, rng);
    std::vector<BitString> offspring;
    offspring.reserve(population.lambda());
    for (auto q : selection.parents) {
        offspring.push_back(kernel.apply(population[q], rng));
    }
    return {Population(std::move(offspring)), std::move(selection), fitness.size()};
}

StepResult step(const Population& population, const PsmProcess& proc, Rng& rng) {
    return step(population, proc, MutationKernel(proc.mutation, proc.n), rng);
}

RunTrace run_until(const PsmProcess& proc, const RunOptions& options, Population start, Rng& rng,
                   std::uint64_t seed) {
    proc.validate();
    if (options.a > proc.n) {
        throw std::invalid_argument("run_until: a must lie in [0..n]");
    }
    if (options.horizon == 0) {
        throw std::invalid_argument("run_until: horizon L must be at least 1");
    }
    const MutationKernel kernel(proc.mutation, proc.n);
    RunTrace trace{seed, {}, std::nullopt, options.horizon, 0};
    Population current = std::move(start);
    for (std::size_t t = 0;; ++t) {
        const auto g = potentials(current, proc.potential);
        const auto g_min = *std::min_element(g.begin(), g.end());
        const bool hit = g_min <= options.a;
        if (options.record) {
            trace.records.push_back({t, g_min, log_potential(g, options.kappa), hit});
        }
        if (hit) {
            trace.hitting_time = t;
            break;
        }
        if (t == options.horizon) {
            break;
        }
        auto next = step(current, proc, kernel, rng);
        trace.evaluations += next.evaluations;
        current = std::move(next.population);
    }
    return trace;
}

RunTrace run_until(const PsmProcess& proc, const RunOptions& options, std::uint64_t seed) {
    Rng rng(seed);
    auto start = init_population(proc, rng);
    return run_until(proc, options, std::move(start), rng, seed);
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) {
            task(k);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) {
                try {
                    task(k);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

ExperimentSummary hitting_time_experiment(const PsmProcess& proc, const RunOptions& options,
                                          std::size_t reps, std::uint64_t master_seed,
                                          std::size_t workers) {
    if (reps == 0) {
        throw std::invalid_argument("hitting_time_experiment: reps must be positive");
    }
    proc.validate();
    RunOptions quiet = options;
    quiet.record = false;

    std::vector<ReplicateResult> runs(reps);
    parallel_for(reps, workers, [&](std::size_t k) {
        const auto seed = derive_seed(master_seed, k);
        const auto trace = run_until(proc, quiet, seed);
        runs[k] = {k, seed, trace.hitting_time};
    });

    ExperimentSummary summary{reps, options.horizon, 0, 0, 0, 0.0, std::nullopt, {}};
    double total = 0.0;
    std::size_t observed = 0;
    for (const auto& r : runs) {
        if (!r.hitting_time) {
            ++summary.censored;
            continue;
        }
        ++observed;
        total += static_cast<double>(*r.hitting_time);
        if (*r.hitting_time < options.horizon) {
            ++summary.hits_before_horizon;
        } else {
            ++summary.hits_at_horizon;
        }
    }
    summary.prob_hit_before_horizon =
        static_cast<double>(summary.hits_before_horizon) / static_cast<double>(reps);
    if (observed > 0) {
        summary.mean_uncensored = total / static_cast<double>(observed);
    }
    summary.runs = std::move(runs);
    return summary;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << "t,min_g,log_potential,hit\n";
    const auto old_precision = out.precision(17);
    for (const auto& r : trace.records) {
        out << r.t << ',' << r.min_potential << ',' << r.log_potential << ',' << (r.hit ? 1 : 0)
            << '\n';
    }
    out.precision(old_precision);
}

}  // namespace negadrift
