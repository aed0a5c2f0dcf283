#include "negadrift/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace negadrift {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_truncation(const TruncationUniform& t, std::size_t lambda) {
    if (t.mu == 0 || t.mu > lambda) {
        throw std::invalid_argument("truncation selection needs 1 <= mu <= lambda");
    }
}

}  // namespace

std::vector<double> fp_probabilities(std::span<const double> fitness) {
    if (fitness.empty()) {
        throw std::invalid_argument("fp_probabilities: empty fitness vector");
    }
    double total = 0.0;
    for (double f : fitness) {
        if (!(f >= 0.0) || !std::isfinite(f)) {
            throw std::invalid_argument("fitness proportionate selection needs finite f >= 0");
        }
        total += f;
    }
    std::vector<double> probs(fitness.size());
    if (total == 0.0) {
        std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(fitness.size()));
        return probs;
    }
    std::transform(fitness.begin(), fitness.end(), probs.begin(),
                   [total](double f) { return f / total; });
    return probs;
}

std::vector<std::size_t> truncate(std::span<const double> fitness, std::size_t mu, Rng& rng) {
    check_truncation({mu}, fitness.size());
    std::vector<std::size_t> order(fitness.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return fitness[x] > fitness[y]; });
    order.resize(mu);
    return order;
}

SelectionOutcome select(std::span<const double> fitness, const SelectionOperator& op, Rng& rng) {
    const std::size_t lambda = fitness.size();
    if (lambda == 0) {
        throw std::invalid_argument("select: empty population");
    }
    SelectionOutcome out;
    out.parents.resize(lambda);
    std::visit(overloaded{
                   [&](const TruncationUniform& t) {
                       const auto best = truncate(fitness, t.mu, rng);
                       std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
                       for (auto& q : out.parents) {
                           q = best[pick(rng)];
                       }
                   },
                   [&](const FitnessProportionate&) {
                       const auto probs = fp_probabilities(fitness);
                       std::vector<double> cumulative(lambda);
                       std::partial_sum(probs.begin(), probs.end(), cumulative.begin());
                       std::uniform_real_distribution<double> unit(0.0, 1.0);
                       for (auto& q : out.parents) {
                           const double u = unit(rng) * cumulative.back();
                           const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
                           // u < cumulative.back(), so zero-weight entries are never returned.
                           q = static_cast<std::size_t>(it - cumulative.begin());
                       }
                   },
                   [&](const UniformAll&) {
                       std::uniform_int_distribution<std::size_t> pick(0, lambda - 1);
                       for (auto& q : out.parents) {
                           q = pick(rng);
                       }
                   },
               },
               op);
    out.counts = reproduction_numbers(out.parents, lambda);
    return out;
}

std::vector<std::size_t> reproduction_numbers(std::span<const std::size_t> parents,
                                              std::size_t lambda) {
    std::vector<std::size_t> counts(lambda, 0);
    for (auto q : parents) {
        if (q >= lambda) {
            throw std::invalid_argument("reproduction_numbers: parent index out of range");
        }
        ++counts[q];
    }
    return counts;
}

std::vector<double> expected_reproduction_numbers(std::span<const double> fitness,
                                                  const SelectionOperator& op) {
    const std::size_t lambda = fitness.size();
    const double lam = static_cast<double>(lambda);
    return std::visit(
        overloaded{
            [&](const TruncationUniform& t) {
                check_truncation(t, lambda);
                std::vector<double> sorted(fitness.begin(), fitness.end());
                std::sort(sorted.begin(), sorted.end(), std::greater<>());
                const double cut = sorted[t.mu - 1];
                const auto above = static_cast<std::size_t>(
                    std::count_if(fitness.begin(), fitness.end(), [&](double f) { return f > cut; }));
                const auto tied = static_cast<std::size_t>(
                    std::count(fitness.begin(), fitness.end(), cut));
                const double share = lam / static_cast<double>(t.mu);
                const double tied_share =
                    share * static_cast<double>(t.mu - above) / static_cast<double>(tied);
                std::vector<double> rates(lambda, 0.0);
                for (std::size_t i = 0; i < lambda; ++i) {
                    if (fitness[i] > cut) {
                        rates[i] = share;
                    } else if (fitness[i] == cut) {
                        rates[i] = tied_share;
                    }
                }
                return rates;
            },
            [&](const FitnessProportionate&) {
                auto rates = fp_probabilities(fitness);
                for (auto& r : rates) {
                    r *= lam;
                }
                return rates;
            },
            [&](const UniformAll&) { return std::vector<double>(lambda, 1.0); },
        },
        op);
}

Estimate estimate_reproduction_rate(std::span<const double> fitness, const SelectionOperator& op,
                                    std::size_t i, std::size_t reps, Rng& rng) {
    if (reps == 0) {
        throw std::invalid_argument("estimate_reproduction_rate: reps must be positive");
    }
    if (i >= fitness.size()) {
        throw std::invalid_argument("estimate_reproduction_rate: index out of range");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto outcome = select(fitness, op, rng);
        const auto c = static_cast<double>(outcome.counts[i]);
        sum += c;
        sum_sq += c * c;
    }
    const double n = static_cast<double>(reps);
    const double mean = sum / n;
    const double var = reps > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, 1.96 * std::sqrt(var / n)};
}

}  // namespace negadrift
