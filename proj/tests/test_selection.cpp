#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "negadrift/selection.hpp"

using namespace negadrift;

TEST(FitnessProportionate, Probabilities) {
    const std::vector<double> f = {1.0, 3.0, 0.0, 4.0};
    const auto p = fp_probabilities(f);
    EXPECT_DOUBLE_EQ(p[0], 0.125);
    EXPECT_DOUBLE_EQ(p[1], 0.375);
    EXPECT_DOUBLE_EQ(p[2], 0.0);
    EXPECT_DOUBLE_EQ(p[3], 0.5);
}

TEST(FitnessProportionate, UniformWhenAllZero) {
    const std::vector<double> f = {0.0, 0.0, 0.0};
    for (double p : fp_probabilities(f)) {
        EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
    }
}

TEST(FitnessProportionate, RejectsNegativeOrNonFinite) {
    const std::vector<double> neg = {1.0, -1.0};
    EXPECT_THROW(fp_probabilities(neg), std::invalid_argument);
    const std::vector<double> inf = {1.0, INFINITY};
    EXPECT_THROW(fp_probabilities(inf), std::invalid_argument);
}

TEST(FitnessProportionate, NeverSelectsZeroFitness) {
    const std::vector<double> f = {0.0, 2.0, 0.0, 1.0};
    Rng rng(4);
    for (int r = 0; r < 2000; ++r) {
        for (auto q : select(f, FitnessProportionate{}, rng).parents) {
            EXPECT_TRUE(q == 1 || q == 3);
        }
    }
}

TEST(FitnessProportionate, EmpiricalFrequencies) {
    const std::vector<double> f = {1.0, 2.0, 3.0, 4.0};
    Rng rng(8);
    std::vector<double> counts(4, 0.0);
    const int reps = 25000;
    for (int r = 0; r < reps; ++r) {
        for (auto q : select(f, FitnessProportionate{}, rng).parents) {
            counts[q] += 1.0;
        }
    }
    const double draws = 4.0 * reps;
    for (std::size_t i = 0; i < 4; ++i) {
        const double p = f[i] / 10.0;
        EXPECT_NEAR(counts[i] / draws, p, 5 * std::sqrt(p * (1 - p) / draws));
    }
}

TEST(Truncation, KeepsTheBestMu) {
    const std::vector<double> f = {5.0, 1.0, 9.0, 3.0, 7.0};
    Rng rng(2);
    auto kept = truncate(f, 2, rng);
    std::sort(kept.begin(), kept.end());
    EXPECT_EQ(kept, (std::vector<std::size_t>{2, 4}));
    const auto outcome = select(f, TruncationUniform{2}, rng);
    EXPECT_EQ(outcome.parents.size(), 5u);
    for (auto q : outcome.parents) {
        EXPECT_TRUE(q == 2 || q == 4);
    }
}

TEST(Truncation, TiesAreBrokenUniformly) {
    // Indices 1, 2, 3 tie for the last slot next to index 0.
    const std::vector<double> f = {9.0, 4.0, 4.0, 4.0, 1.0};
    Rng rng(12);
    std::vector<int> chosen(5, 0);
    const int reps = 30000;
    for (int r = 0; r < reps; ++r) {
        for (auto i : truncate(f, 2, rng)) {
            ++chosen[i];
        }
    }
    EXPECT_EQ(chosen[0], reps);
    EXPECT_EQ(chosen[4], 0);
    for (int i = 1; i <= 3; ++i) {
        EXPECT_NEAR(chosen[i] / static_cast<double>(reps), 1.0 / 3.0, 0.015);
    }
}

TEST(Truncation, RejectsBadMu) {
    const std::vector<double> f = {1.0, 2.0};
    Rng rng(1);
    EXPECT_THROW(truncate(f, 0, rng), std::invalid_argument);
    EXPECT_THROW(truncate(f, 3, rng), std::invalid_argument);
}

TEST(UniformAll, EveryIndexPossible) {
    const std::vector<double> f = {0.0, 0.0, 5.0};
    Rng rng(3);
    std::vector<int> seen(3, 0);
    for (int r = 0; r < 300; ++r) {
        for (auto q : select(f, UniformAll{}, rng).parents) {
            ++seen[q];
        }
    }
    for (int s : seen) {
        EXPECT_GT(s, 200);
    }
}

TEST(ReproductionNumbers, CountsParents) {
    const std::vector<std::size_t> parents = {0, 2, 2, 3, 2};
    EXPECT_EQ(reproduction_numbers(parents, 5), (std::vector<std::size_t>{1, 0, 3, 1, 0}));
    const std::vector<std::size_t> bad = {5};
    EXPECT_THROW(reproduction_numbers(bad, 5), std::invalid_argument);
}

TEST(ReproductionNumbers, OutcomeCountsAgreeWithParents) {
    const std::vector<double> f = {3.0, 1.0, 2.0, 2.0};
    Rng rng(6);
    for (const SelectionOperator& op :
         {SelectionOperator{TruncationUniform{2}}, SelectionOperator{FitnessProportionate{}},
          SelectionOperator{UniformAll{}}}) {
        const auto outcome = select(f, op, rng);
        EXPECT_EQ(outcome.counts, reproduction_numbers(outcome.parents, f.size()));
        EXPECT_EQ(std::accumulate(outcome.counts.begin(), outcome.counts.end(), std::size_t{0}),
                  f.size());
    }
}

TEST(ExpectedReproduction, ExactValues) {
    const std::vector<double> f = {5.0, 1.0, 9.0, 3.0, 7.0, 7.0};
    const auto trunc = expected_reproduction_numbers(f, TruncationUniform{3});
    // Best three: 9, 7, 7, each lambda/mu = 2.
    EXPECT_EQ(trunc, (std::vector<double>{0.0, 0.0, 2.0, 0.0, 2.0, 2.0}));

    const std::vector<double> tied = {9.0, 4.0, 4.0, 4.0};
    const auto shared = expected_reproduction_numbers(tied, TruncationUniform{2});
    EXPECT_DOUBLE_EQ(shared[0], 2.0);
    for (int i = 1; i <= 3; ++i) {
        EXPECT_DOUBLE_EQ(shared[static_cast<std::size_t>(i)], 2.0 / 3.0);
    }

    const auto fp = expected_reproduction_numbers(std::vector<double>{1.0, 3.0}, FitnessProportionate{});
    EXPECT_DOUBLE_EQ(fp[0], 0.5);
    EXPECT_DOUBLE_EQ(fp[1], 1.5);

    const auto uni = expected_reproduction_numbers(std::vector<double>{1.0, 3.0, 2.0}, UniformAll{});
    for (double r : uni) {
        EXPECT_DOUBLE_EQ(r, 1.0);
    }
}

TEST(ExpectedReproduction, MonteCarloAgrees) {
    const std::vector<double> f = {9.0, 4.0, 4.0, 4.0, 1.0, 0.5};
    const auto exact = expected_reproduction_numbers(f, TruncationUniform{2});
    Rng rng(44);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto e = estimate_reproduction_rate(f, TruncationUniform{2}, i, 20000, rng);
        EXPECT_NEAR(e.mean, exact[i], std::max(2.0 * e.half_width, 1e-12)) << "i=" << i;
    }
}
