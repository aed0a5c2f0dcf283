#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "negadrift/core.hpp"

namespace negadrift {

/// Keep a mu-subset of maximal fitness (ties broken at random), then draw
/// every parent uniformly from it. This is the (mu,lambda) EA's selection.
struct TruncationUniform {
    std::size_t mu;
};

/// Each parent drawn independently with probability proportional to fitness.
struct FitnessProportionate {};

/// Each parent drawn independently and uniformly.
struct UniformAll {};

using SelectionOperator = std::variant<TruncationUniform, FitnessProportionate, UniformAll>;

/// Indices are zero-based: Q_j in [0, lambda).
struct SelectionOutcome {
    std::vector<std::size_t> parents;  ///< Q
    std::vector<std::size_t> counts;   ///< R(i, P)
};

/// fp(n_1, ..., n_mu): proportional to the values, uniform when all are zero.
/// Throws std::invalid_argument on a negative or non-finite entry.
std::vector<double> fp_probabilities(std::span<const double> fitness);

/// Indices of a mu-subset of maximal fitness; ties shuffled with `rng`.
std::vector<std::size_t> truncate(std::span<const double> fitness, std::size_t mu, Rng& rng);

/// One lambda-tuple of parent indices. `fitness` is aligned with the
/// population; it is read, never recomputed.
SelectionOutcome select(std::span<const double> fitness, const SelectionOperator& op, Rng& rng);

inline SelectionOutcome select(const Population& population, std::span<const double> fitness,
                               const SelectionOperator& op, Rng& rng) {
    if (fitness.size() != population.lambda()) {
        throw std::invalid_argument("select: fitness not aligned with population");
    }
    return select(fitness, op, rng);
}

/// R(i) = |{j : Q_j = i}|. Throws on an index outside [0, lambda).
std::vector<std::size_t> reproduction_numbers(std::span<const std::size_t> parents,
                                              std::size_t lambda);

/// Exact E[R(i, P)] for every i. Truncation ties share the boundary slots
/// evenly, which is what random tie-breaking yields in expectation.
std::vector<double> expected_reproduction_numbers(std::span<const double> fitness,
                                                  const SelectionOperator& op);

struct Estimate {
    double mean;
    double half_width;  ///< normal-approximation 95% half-width
};

/// Monte Carlo mean of R(i, P) over `reps` independent selections.
Estimate estimate_reproduction_rate(std::span<const double> fitness, const SelectionOperator& op,
                                    std::size_t i, std::size_t reps, Rng& rng);

}  // namespace negadrift
