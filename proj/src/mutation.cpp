#include "negadrift/mutation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace negadrift {

namespace {

constexpr double kWeightTolerance = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::size_t resolved_n(const HeavyTailed& op, std::size_t n) {
    return op.N == 0 ? n / 2 : op.N;
}

}  // namespace

void validate(const MutationOperator& op) {
    std::visit(overloaded{
                   [](const FixedRate& f) {
                       if (!(f.p >= 0.0 && f.p <= 1.0)) {
                           throw std::invalid_argument("mutation rate outside [0,1]");
                       }
                   },
                   [](const MixedRate& m) {
                       if (m.rates.empty()) {
                           throw std::invalid_argument("mixed-rate operator without rates");
                       }
                       double total = 0.0;
                       for (const auto& r : m.rates) {
                           if (!(r.p >= 0.0 && r.p <= 1.0)) {
                               throw std::invalid_argument("mutation rate outside [0,1]");
                           }
                           if (!(r.q >= 0.0)) {
                               throw std::invalid_argument("negative rate weight");
                           }
                           total += r.q;
                       }
                       if (std::abs(total - 1.0) > kWeightTolerance) {
                           throw std::invalid_argument("rate weights must sum to 1");
                       }
                   },
                   [](const HeavyTailed& h) {
                       if (!(h.beta > 1.0)) {
                           throw std::invalid_argument("heavy-tailed exponent must exceed 1");
                       }
                   },
               },
               op);
}

std::vector<RateWeight> rate_distribution(const MutationOperator& op, std::size_t n) {
    validate(op);
    return std::visit(
        overloaded{
            [](const FixedRate& f) { return std::vector<RateWeight>{{f.p, 1.0}}; },
            [](const MixedRate& m) { return m.rates; },
            [n](const HeavyTailed& h) {
                const std::size_t N = resolved_n(h, n);
                if (N == 0 || N > n) {
                    throw std::invalid_argument("heavy-tailed N must lie in [1..n]");
                }
                const Pmf pmf = heavy_tailed_pmf(h.beta, N);
                std::vector<RateWeight> out;
                out.reserve(N);
                for (std::size_t i = 1; i <= N; ++i) {
                    out.push_back({static_cast<double>(i) / static_cast<double>(n),
                                   pmf(static_cast<Eigen::Index>(i - 1))});
                }
                return out;
            },
        },
        op);
}

double max_rate(const MutationOperator& op, std::size_t n) {
    double best = 0.0;
    for (const auto& r : rate_distribution(op, n)) {
        if (r.q > 0.0) {
            best = std::max(best, r.p);
        }
    }
    return best;
}

double power_law_normalizer(double beta, std::size_t N) {
    double c = 0.0;
    // Smallest terms first.
    for (std::size_t i = N; i >= 1; --i) {
        c += std::pow(static_cast<double>(i), -beta);
    }
    return c;
}

Pmf heavy_tailed_pmf(double beta, std::size_t N) {
    if (N == 0) {
        throw std::invalid_argument("heavy_tailed_pmf: N must be positive");
    }
    if (!(beta > 1.0)) {
        throw std::invalid_argument("heavy_tailed_pmf: beta must exceed 1");
    }
    Pmf pmf(static_cast<Eigen::Index>(N));
    for (std::size_t i = 1; i <= N; ++i) {
        pmf(static_cast<Eigen::Index>(i - 1)) = std::pow(static_cast<double>(i), -beta);
    }
    return pmf / power_law_normalizer(beta, N);
}

double a_constant(double beta, std::size_t N) {
    const Pmf pmf = heavy_tailed_pmf(beta, N);
    double sum = 0.0;
    // e^{-i} underflows past i ~ 745; the omitted mass is below 1e-300.
    const std::size_t upto = std::min<std::size_t>(N, 740);
    for (std::size_t i = upto; i >= 1; --i) {
        sum += pmf(static_cast<Eigen::Index>(i - 1)) * std::exp(-static_cast<double>(i));
    }
    return sum;
}

Bracket zeta_bracket(double beta, std::size_t terms) {
    if (!(beta > 1.0) || terms == 0) {
        throw std::invalid_argument("zeta_bracket: need beta > 1 and terms >= 1");
    }
    const double head = power_law_normalizer(beta, terms);
    const double k = static_cast<double>(terms);
    return {head + std::pow(k + 1.0, 1.0 - beta) / (beta - 1.0),
            head + std::pow(k, 1.0 - beta) / (beta - 1.0)};
}

Bracket a_constant_limit(double beta, std::size_t terms, std::size_t zeta_terms) {
    const Bracket zeta = zeta_bracket(beta, zeta_terms);
    double head = 0.0;
    for (std::size_t i = std::min<std::size_t>(terms, 740); i >= 1; --i) {
        head += std::pow(static_cast<double>(i), -beta) * std::exp(-static_cast<double>(i));
    }
    return {head / zeta.upper, head / zeta.lower + std::exp(-static_cast<double>(terms + 1))};
}

double mgf_mixed(std::size_t d, std::size_t n, const MutationOperator& op, double kappa) {
    double value = 0.0;
    for (const auto& r : rate_distribution(op, n)) {
        if (r.q > 0.0) {
            value += r.q * mgf_sbm<double>(d, n, r.p, kappa);
        }
    }
    return value;
}

Pmf offspring_distance_pmf(std::size_t d, std::size_t n, const MutationOperator& op) {
    Pmf pmf = Pmf::Zero(static_cast<Eigen::Index>(n + 1));
    for (const auto& r : rate_distribution(op, n)) {
        if (r.q > 0.0) {
            pmf += r.q * offspring_distance_pmf<double>(d, n, r.p);
        }
    }
    return pmf;
}

MutationKernel::MutationKernel(MutationOperator op, std::size_t n) : op_(std::move(op)), n_(n) {
    for (const auto& r : rate_distribution(op_, n_)) {
        rates_.push_back(r.p);
        cumulative_.push_back((cumulative_.empty() ? 0.0 : cumulative_.back()) + r.q);
    }
    cumulative_.back() = 1.0;
}

double MutationKernel::draw_rate(Rng& rng) const {
    if (rates_.size() == 1) {
        return rates_.front();
    }
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto index = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()),
                                             rates_.size() - 1);
    return rates_[index];
}

BitString MutationKernel::apply(const BitString& x, Rng& rng) const {
    BitString y = x;
    flip_bits(y, draw_rate(rng), rng);
    return y;
}

void flip_bits(BitString& x, double p, Rng& rng) {
    const std::size_t n = x.size();
    if (p <= 0.0 || n == 0) {
        return;
    }
    if (p >= 1.0) {
        x.flip_all();
        return;
    }
    // Gaps between flipped positions are geometric.
    std::geometric_distribution<std::size_t> gap(p);
    for (std::size_t i = gap(rng); i < n; i += gap(rng) + 1) {
        x.flip(i);
    }
}

BitString mutate(const BitString& x, const MutationOperator& op, Rng& rng) {
    return MutationKernel(op, x.size()).apply(x, rng);
}

}  // namespace negadrift
