#include "negadrift/driftlab.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <stdexcept>

namespace negadrift {

namespace {

constexpr double kRowTolerance = 1e-12;
constexpr double kRelTolerance = 1e-12;

bool leq_rel(double lhs, double rhs) {
    return lhs <= rhs + kRelTolerance * std::max(1.0, std::abs(rhs));
}

nlohmann::json number(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

/// States that can reach `targets` (including the targets themselves).
std::vector<bool> backward_reachable(const Eigen::MatrixXd& transition,
                                     const std::vector<bool>& targets) {
    const auto n = transition.rows();
    std::vector<bool> reach(targets);
    std::deque<Eigen::Index> queue;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (reach[static_cast<std::size_t>(s)]) {
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const auto j = queue.front();
        queue.pop_front();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!reach[static_cast<std::size_t>(i)] && transition(i, j) > 0.0) {
                reach[static_cast<std::size_t>(i)] = true;
                queue.push_back(i);
            }
        }
    }
    return reach;
}

}  // namespace

// ---------------------------------------------------------------------------
// Finite chains

void FiniteChain::validate() const {
    const auto n = labels.size();
    if (n == 0 || transition.rows() != n || transition.cols() != n || start.size() != n) {
        throw std::invalid_argument("chain: inconsistent dimensions");
    }
    for (Eigen::Index s = 0; s < n; ++s) {
        if (!(labels(s) >= 0.0) || !std::isfinite(labels(s))) {
            throw std::invalid_argument("chain: labels must be finite and non-negative");
        }
        if ((transition.row(s).array() < 0.0).any() ||
            std::abs(transition.row(s).sum() - 1.0) > kRowTolerance) {
            throw std::invalid_argument("chain: transition rows must be distributions");
        }
    }
    if ((start.array() < 0.0).any() || std::abs(start.sum() - 1.0) > kRowTolerance) {
        throw std::invalid_argument("chain: start must be a distribution");
    }
}

double minimal_disturbance(const FiniteChain& chain, double delta) {
    const Eigen::VectorXd next = chain.transition * chain.labels;
    const double excess = (next - (1.0 - delta) * chain.labels).maxCoeff();
    return std::max(0.0, excess);
}

std::optional<DriftCertificate> chain_drift_check(const FiniteChain& chain,
                                                  std::size_t grid_points) {
    chain.validate();
    if (grid_points < 2) {
        throw std::invalid_argument("chain_drift_check: grid needs at least two points");
    }
    const double start_mean = chain.start.dot(chain.labels);
    const double lo = std::log(1e-4);
    const double hi = std::log(0.9999);
    std::optional<DriftCertificate> best;
    double best_level = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid_points; ++k) {
        const double delta = std::exp(lo + (hi - lo) * static_cast<double>(k) /
                                               static_cast<double>(grid_points - 1));
        const double Delta = std::max(minimal_disturbance(chain, delta), delta * start_mean);
        const double level = Delta / delta;
        if (level <= best_level) {
            best_level = level;
            best = DriftCertificate{delta, Delta};
        }
    }
    if (!best || !(best_level < chain.M)) {
        return std::nullopt;
    }
    return best;
}

bool satisfies_drift(const FiniteChain& chain, const DriftCertificate& cert, double tolerance) {
    const Eigen::VectorXd next = chain.transition * chain.labels;
    for (Eigen::Index s = 0; s < chain.size(); ++s) {
        const double rhs = (1.0 - cert.delta) * chain.labels(s) + cert.Delta;
        if (next(s) > rhs + tolerance * std::max(1.0, std::abs(rhs))) {
            return false;
        }
    }
    return true;
}

HittingResult chain_exact_hitting(const FiniteChain& chain, std::size_t horizon) {
    chain.validate();
    const auto n = chain.size();
    if (n > 10000) {
        throw std::invalid_argument("chain_exact_hitting: at most 10^4 states");
    }
    std::vector<bool> absorbing(static_cast<std::size_t>(n));
    Eigen::MatrixXd stopped = chain.transition;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (chain.labels(s) >= chain.M) {
            absorbing[static_cast<std::size_t>(s)] = true;
            stopped.row(s).setZero();
            stopped(s, s) = 1.0;
        }
    }
    auto absorbed_mass = [&](const Eigen::VectorXd& v) {
        double m = 0.0;
        for (Eigen::Index s = 0; s < n; ++s) {
            if (absorbing[static_cast<std::size_t>(s)]) {
                m += v(s);
            }
        }
        return std::min(m, 1.0);
    };

    HittingResult result;
    result.prob_hit_before.reserve(horizon);
    Eigen::RowVectorXd v = chain.start.transpose();
    for (std::size_t L = 1; L <= horizon; ++L) {
        result.prob_hit_before.push_back(absorbed_mass(v.transpose()));
        if (L < horizon) {
            v = v * stopped;
        }
    }

    // Transient states from which absorption may fail have infinite E[T].
    const auto reaches_target = backward_reachable(chain.transition, absorbing);
    std::vector<bool> stuck(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < stuck.size(); ++s) {
        stuck[s] = !reaches_target[s];
    }
    const auto may_escape = backward_reachable(chain.transition, stuck);

    std::vector<Eigen::Index> transient;
    for (Eigen::Index s = 0; s < n; ++s) {
        const auto i = static_cast<std::size_t>(s);
        if (absorbing[i]) {
            continue;
        }
        if (may_escape[i]) {
            if (chain.start(s) > 0.0) {
                result.expected_time = std::numeric_limits<double>::infinity();
                result.truncated = false;
                return result;
            }
            continue;
        }
        transient.push_back(s);
    }
    result.truncated = false;
    if (transient.empty()) {
        result.expected_time = 0.0;
        return result;
    }
    const auto m = static_cast<Eigen::Index>(transient.size());
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd weights(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        weights(i) = chain.start(transient[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < m; ++j) {
            system(i, j) -= chain.transition(transient[static_cast<std::size_t>(i)],
                                             transient[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    const Eigen::VectorXd times = lu.solve(Eigen::VectorXd::Ones(m));
    const double residual = (system * times - Eigen::VectorXd::Ones(m)).lpNorm<Eigen::Infinity>();
    if (!lu.isInvertible() || !times.allFinite() || residual > 1e-8) {
        // Partial sum of Pr[T > t]; a lower bound on E[T].
        double partial = 0.0;
        for (double p : result.prob_hit_before) {
            partial += 1.0 - p;
        }
        result.expected_time = partial;
        result.truncated = true;
        return result;
    }
    result.expected_time = weights.dot(times);
    return result;
}

std::vector<double> chain_expected_labels(const FiniteChain& chain, std::size_t steps) {
    chain.validate();
    std::vector<double> means;
    means.reserve(steps + 1);
    Eigen::RowVectorXd v = chain.start.transpose();
    for (std::size_t t = 0; t <= steps; ++t) {
        means.push_back(v.dot(chain.labels.transpose()));
        v = v * chain.transition;
    }
    return means;
}

FiniteChain distance_chain(std::size_t n, const MutationOperator& op, double kappa,
                           std::size_t a) {
    const auto size = static_cast<Eigen::Index>(n + 1);
    FiniteChain chain{Eigen::VectorXd(size), Eigen::MatrixXd(size, size),
                      std::exp(-kappa * static_cast<double>(a)), binomial_pmf<double>(n, 0.5)};
    for (Eigen::Index d = 0; d < size; ++d) {
        chain.labels(d) = std::exp(-kappa * static_cast<double>(d));
        chain.transition.row(d) =
            offspring_distance_pmf(static_cast<std::size_t>(d), n, op).transpose();
    }
    return chain;
}

FiniteChain random_drift_chain(Rng& rng, std::size_t max_states) {
    if (max_states < 3) {
        throw std::invalid_argument("random_drift_chain: need at least 3 states");
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const auto states = std::uniform_int_distribution<std::size_t>(3, max_states)(rng);
    const std::size_t high = states > 6 ? 1 + std::uniform_int_distribution<std::size_t>(0, 1)(rng) : 1;
    const std::size_t low = states - high;
    const double scale = uniform(1.0, 10.0);
    const double M = scale * uniform(1.2, 6.0);
    const double pull = uniform(0.05, 2.0);

    const auto n = static_cast<Eigen::Index>(states);
    FiniteChain chain{Eigen::VectorXd(n), Eigen::MatrixXd::Zero(n, n), M, Eigen::VectorXd::Zero(n)};
    for (std::size_t s = 0; s < states; ++s) {
        chain.labels(static_cast<Eigen::Index>(s)) =
            s == 0 ? 0.0 : (s < low ? scale * unit(rng) : M * uniform(1.0, 2.0));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (unit(rng) < 0.7) {
                chain.transition(i, j) = unit(rng) * std::exp(-pull * chain.labels(j) / scale);
            }
        }
        if (chain.transition.row(i).sum() <= 0.0) {
            const auto j = std::uniform_int_distribution<std::size_t>(0, low - 1)(rng);
            chain.transition(i, static_cast<Eigen::Index>(j)) = 1.0;
        }
        chain.transition.row(i) /= chain.transition.row(i).sum();
    }
    if (unit(rng) < 0.5) {
        chain.start(static_cast<Eigen::Index>(std::uniform_int_distribution<std::size_t>(0, low - 1)(rng))) = 1.0;
    } else {
        for (std::size_t s = 0; s < low; ++s) {
            chain.start(static_cast<Eigen::Index>(s)) = unit(rng);
        }
        chain.start /= chain.start.sum();
    }
    return chain;
}

std::optional<OracleCase> lemma1_oracle_case(const FiniteChain& chain, std::size_t horizon) {
    const auto cert = chain_drift_check(chain);
    if (!cert || !(cert->Delta > 0.0)) {
        return std::nullopt;
    }
    const auto report = negdrift_lemma_bounds({cert->delta, cert->Delta, chain.M, horizon});
    const auto hitting = chain_exact_hitting(chain, horizon);

    OracleCase c{};
    c.states = static_cast<std::size_t>(chain.size());
    c.certificate = *cert;
    c.M = chain.M;
    const double per_step = cert->Delta / (cert->delta * chain.M);
    c.prob_ok = true;
    c.worst_prob_ratio = 0.0;
    for (std::size_t L = 1; L <= horizon; ++L) {
        const double bound = static_cast<double>(L) * per_step;
        const double exact = hitting.prob_hit_before[L - 1];
        c.worst_prob_ratio = std::max(c.worst_prob_ratio, exact / bound);
        if (!leq_rel(exact, bound)) {
            c.prob_ok = false;
        }
    }
    c.expected_time = hitting.expected_time;
    c.expected_time_bound = report.expected_time_lower();
    c.expected_ok = std::isinf(hitting.expected_time) ||
                    leq_rel(c.expected_time_bound, hitting.expected_time);
    const auto means = chain_expected_labels(chain, horizon);
    c.max_mean_label = *std::max_element(means.begin(), means.end());
    c.equilibrium_ok = leq_rel(c.max_mean_label, cert->Delta / cert->delta);
    return c;
}

OracleSuite lemma1_oracle_suite(std::uint64_t master_seed, std::size_t chains,
                                std::size_t max_states, std::size_t horizon, std::size_t workers) {
    OracleSuite suite{{}, 0};
    const std::size_t batch = std::max<std::size_t>(64, 8 * workers);
    const std::size_t cap = std::max<std::size_t>(1000, 1000 * chains);
    std::size_t next = 0;
    while (suite.cases.size() < chains) {
        if (next >= cap) {
            throw std::runtime_error("lemma1_oracle_suite: too few candidate chains accepted");
        }
        std::vector<std::optional<OracleCase>> results(batch);
        parallel_for(batch, workers, [&](std::size_t i) {
            const std::uint64_t seed = derive_seed(master_seed, next + i);
            Rng rng(seed);
            results[i] = lemma1_oracle_case(random_drift_chain(rng, max_states), horizon);
            if (results[i]) {
                results[i]->candidate = next + i;
                results[i]->seed = seed;
            }
        });
        for (std::size_t i = 0; i < batch && suite.cases.size() < chains; ++i) {
            suite.candidates = next + i + 1;
            if (results[i]) {
                suite.cases.push_back(*results[i]);
            }
        }
        next += batch;
    }
    return suite;
}

nlohmann::json to_json(const OracleCase& c) {
    return {{"candidate", c.candidate},
            {"seed", c.seed},
            {"states", c.states},
            {"delta", number(c.certificate.delta)},
            {"Delta", number(c.certificate.Delta)},
            {"M", number(c.M)},
            {"worst_prob_ratio", number(c.worst_prob_ratio)},
            {"expected_time", number(c.expected_time)},
            {"expected_time_bound", number(c.expected_time_bound)},
            {"max_mean_label", number(c.max_mean_label)},
            {"prob_ok", c.prob_ok},
            {"expected_ok", c.expected_ok},
            {"equilibrium_ok", c.equilibrium_ok},
            {"ok", c.ok()}};
}

// ---------------------------------------------------------------------------
// Drift conditions

LevelReport verify_condition_ii(const MutationOperator& op, std::size_t n, double kappa,
                                double alpha, double delta, std::size_t a, std::size_t b) {
    if (!(kappa > 0.0)) {
        throw std::invalid_argument("verify_condition_ii: kappa must be positive");
    }
    LevelReport report{{}, (1.0 - delta) / alpha, true, std::nullopt};
    for (std::size_t d = a + 1; d < b && d <= n; ++d) {
        const LevelValue level{d, mgf_mixed(d, n, op, kappa)};
        report.levels.push_back(level);
        report.holds = report.holds && leq_rel(level.value, report.threshold);
        if (!report.tightest || level.value > report.tightest->value) {
            report.tightest = level;
        }
    }
    return report;
}

ConditionIIIReport verify_condition_iii(const MutationOperator& op, std::size_t n, double kappa,
                                        std::size_t b, double D) {
    if (b > n) {
        throw std::invalid_argument("verify_condition_iii: b exceeds n");
    }
    ConditionIIIReport report{true, n <= 1000, b, -std::numeric_limits<double>::infinity(), D};
    const std::size_t last = report.exhaustive ? n : b;
    for (std::size_t d = b; d <= last; ++d) {
        const double value =
            mgf_mixed(d, n, op, kappa) * std::exp(-kappa * static_cast<double>(d - b));
        if (value > report.worst_value) {
            report.worst_value = value;
            report.worst_level = d;
        }
    }
    report.holds = leq_rel(report.worst_value, D);
    return report;
}

nlohmann::json to_json(const LevelReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.levels) {
        levels.push_back({{"d", l.d}, {"value", number(l.value)}});
    }
    nlohmann::json j{{"kind", "condition_ii"},
                     {"holds", r.holds},
                     {"threshold", number(r.threshold)},
                     {"levels", levels}};
    j["tightest_level"] = r.tightest ? nlohmann::json(r.tightest->d) : nlohmann::json(nullptr);
    j["tightest_value"] = r.tightest ? number(r.tightest->value) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const ConditionIIIReport& r) {
    return {{"kind", "condition_iii"},   {"holds", r.holds},
            {"exhaustive", r.exhaustive}, {"worst_level", r.worst_level},
            {"worst_value", number(r.worst_value)}, {"D", number(r.D)}};
}

// ---------------------------------------------------------------------------
// Monte Carlo drift

DriftMeasurement measure_drift(const PsmProcess& proc, const Population& population, double kappa,
                               std::size_t reps, Rng& rng) {
    if (reps < 100) {
        throw std::invalid_argument("measure_drift: at least 100 repetitions");
    }
    proc.validate();
    const MutationKernel kernel(proc.mutation, proc.n);
    const double current = population_potential(population, kappa, proc.potential);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        const auto next = step(population, proc, kernel, rng);
        const double ratio =
            std::exp(population_potential(next.population, kappa, proc.potential) - current);
        sum += ratio;
        sum_sq += ratio * ratio;
    }
    const double m = static_cast<double>(reps);
    const double mean = sum / m;
    const double var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    return {current, mean, 1.96 * std::sqrt(var / m), reps};
}

double expected_drift_ratio(const PsmProcess& proc, const Population& population, double kappa) {
    std::vector<double> fitness;
    for (const auto& x : population) {
        fitness.push_back(proc.evaluate(x));
    }
    const auto rates = expected_reproduction_numbers(fitness, proc.selection);
    const auto g = potentials(population, proc.potential);
    const auto g_min = *std::min_element(g.begin(), g.end());
    double next = 0.0;
    double current = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double weight = std::exp(-kappa * static_cast<double>(g[i] - g_min));
        current += weight;
        next += rates[i] * mgf_mixed(g[i], proc.n, proc.mutation, kappa) * weight;
    }
    return next / current;
}

double drift_rhs_ratio(double log_current, double delta, std::size_t lambda, double D, double kappa,
                       std::size_t b) {
    return (1.0 - delta) + static_cast<double>(lambda) * D *
                               std::exp(-kappa * static_cast<double>(b) - log_current);
}

// ---------------------------------------------------------------------------
// Stochastic domination

Eigen::VectorXd cdf(const Pmf& pmf) {
    Eigen::VectorXd out(pmf.size());
    double running = 0.0;
    for (Eigen::Index k = 0; k < pmf.size(); ++k) {
        running += pmf(k);
        out(k) = running;
    }
    return out;
}

DominationVerdict domination_test_exact(const Pmf& pmf_low, const Pmf& pmf_high, double tolerance) {
    if (pmf_low.size() != pmf_high.size() || pmf_low.size() == 0) {
        throw std::invalid_argument("domination_test_exact: supports differ");
    }
    const Eigen::VectorXd gap = cdf(pmf_high) - cdf(pmf_low);
    Eigen::Index worst = 0;
    const double worst_gap = gap.maxCoeff(&worst);
    return {worst_gap <= tolerance, static_cast<std::size_t>(worst), worst_gap,
            DominationMethod::exact, 0.0, tolerance};
}

DominationVerdict domination_test_statistical(std::span<const std::size_t> samples,
                                              const Eigen::VectorXd& reference_cdf,
                                              double significance) {
    if (samples.empty()) {
        throw std::invalid_argument("domination_test_statistical: no samples");
    }
    if (!(significance > 0.0 && significance <= 0.1)) {
        throw std::invalid_argument("domination_test_statistical: significance must lie in (0, 0.1]");
    }
    const auto support = reference_cdf.size();
    std::vector<std::size_t> counts(static_cast<std::size_t>(support), 0);
    for (auto s : samples) {
        if (s < counts.size()) {
            ++counts[s];
        }
    }
    const double m = static_cast<double>(samples.size());
    const double slack = std::sqrt(std::log(1.0 / significance) / (2.0 * m));
    double running = 0.0;
    double worst_gap = -std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    for (Eigen::Index k = 0; k < support; ++k) {
        running += static_cast<double>(counts[static_cast<std::size_t>(k)]);
        const double gap = running / m - reference_cdf(k);
        if (gap > worst_gap) {
            worst_gap = gap;
            worst = static_cast<std::size_t>(k);
        }
    }
    return {worst_gap <= slack, worst, worst_gap, DominationMethod::statistical, significance, slack};
}

bool monotone_expectation_check(const Pmf& pmf_low, const Pmf& pmf_high,
                                const Eigen::VectorXd& f) {
    if (f.size() != pmf_low.size()) {
        throw std::invalid_argument("monotone_expectation_check: f does not match the support");
    }
    for (Eigen::Index k = 1; k < f.size(); ++k) {
        if (f(k) < f(k - 1)) {
            throw std::invalid_argument("monotone_expectation_check: f is not non-decreasing");
        }
    }
    if (!domination_test_exact(pmf_low, pmf_high).holds) {
        throw std::invalid_argument("monotone_expectation_check: pair is not ordered by domination");
    }
    const double low = f.dot(pmf_low);
    const double high = f.dot(pmf_high);
    return leq_rel(low, high);
}

nlohmann::json to_json(const DominationVerdict& v) {
    return {{"kind", "domination"},
            {"method", v.method == DominationMethod::exact ? "exact" : "statistical"},
            {"holds", v.holds},
            {"worst_point", v.worst_point},
            {"worst_gap", number(v.worst_gap)},
            {"significance", number(v.significance)},
            {"slack", number(v.slack)}};
}

// ---------------------------------------------------------------------------
// Simple GA

Pmf simple_ga_exact_onemax_pmf(std::size_t n, std::size_t mu, double p, std::size_t t) {
    if (mu == 0) {
        throw std::invalid_argument("simple_ga_exact_onemax_pmf: mu must be positive");
    }
    const auto levels = static_cast<Eigen::Index>(n + 1);
    const double state_count = std::pow(static_cast<double>(levels), static_cast<double>(mu));
    if (state_count > 2e4) {
        throw std::invalid_argument("simple_ga_exact_onemax_pmf: (n+1)^mu too large");
    }
    const auto states = static_cast<Eigen::Index>(state_count);

    // kernel(k, j) = Pr[child has j ones | parent has k ones]
    Eigen::MatrixXd kernel(levels, levels);
    for (Eigen::Index k = 0; k < levels; ++k) {
        const auto dist = offspring_distance_pmf<double>(n - static_cast<std::size_t>(k), n, p);
        kernel.row(k) = dist.reverse().transpose();
    }
    auto product_law = [&](const Eigen::VectorXd& single) {
        Eigen::VectorXd law = single;
        for (std::size_t i = 1; i < mu; ++i) {
            Eigen::VectorXd next(law.size() * levels);
            // Member i occupies the i-th base-(n+1) digit.
            for (Eigen::Index hi = 0; hi < levels; ++hi) {
                next.segment(hi * law.size(), law.size()) = single(hi) * law;
            }
            law = std::move(next);
        }
        return law;
    };
    auto decode = [&](Eigen::Index s) {
        std::vector<double> values(mu);
        for (std::size_t i = 0; i < mu; ++i) {
            values[i] = static_cast<double>(s % levels);
            s /= levels;
        }
        return values;
    };

    Eigen::VectorXd law = product_law(binomial_pmf<double>(n, 0.5));
    for (std::size_t step = 0; step < t; ++step) {
        Eigen::VectorXd next = Eigen::VectorXd::Zero(states);
        for (Eigen::Index s = 0; s < states; ++s) {
            if (law(s) == 0.0) {
                continue;
            }
            const auto values = decode(s);
            const auto select = fp_probabilities(values);
            Eigen::VectorXd child = Eigen::VectorXd::Zero(levels);
            for (std::size_t v = 0; v < mu; ++v) {
                child += select[v] * kernel.row(static_cast<Eigen::Index>(values[v])).transpose();
            }
            next += law(s) * product_law(child);
        }
        law = std::move(next);
    }

    Pmf marginal = Pmf::Zero(levels);
    for (Eigen::Index s = 0; s < states; ++s) {
        marginal(s % levels) += law(s);
    }
    return marginal;
}

std::vector<std::vector<std::size_t>> simple_ga_fitness_samples(std::size_t n, std::size_t mu,
                                                                std::span<const std::size_t> times,
                                                                std::size_t runs,
                                                                std::uint64_t master_seed,
                                                                std::size_t workers) {
    if (!std::is_sorted(times.begin(), times.end())) {
        throw std::invalid_argument("simple_ga_fitness_samples: times must be ascending");
    }
    const auto proc = simple_ga(n, mu);
    const MutationKernel kernel(proc.mutation, proc.n);
    std::vector<std::vector<std::size_t>> samples(times.size(), std::vector<std::size_t>(runs));
    parallel_for(runs, workers, [&](std::size_t k) {
        Rng rng(derive_seed(master_seed, k));
        auto population = init_population(proc, rng);
        std::size_t t = 0;
        for (std::size_t idx = 0; idx < times.size(); ++idx) {
            for (; t < times[idx]; ++t) {
                population = step(population, proc, kernel, rng).population;
            }
            samples[idx][k] = onemax(population[0]);
        }
    });
    return samples;
}

}  // namespace negadrift
