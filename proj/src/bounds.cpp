#include "negadrift/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace negadrift {

namespace {

// Boundary comparisons (b <= b_tilde, admissibility of B, ...) involve
// logarithms, so they are done in floating point with this relative slack.
constexpr double kGuard = 1e-12;

// Largest x with exp(x) finite.
const double kMaxLog = std::log(std::numeric_limits<double>::max());

bool leq_guarded(double lhs, double rhs) {
    return lhs <= rhs + kGuard * std::max(1.0, std::abs(rhs));
}

double floor_guarded(double x) { return std::floor(x + kGuard * std::max(1.0, std::abs(x))); }

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw PreconditionError(what);
    }
}

double log_count(std::size_t v) {
    return v == 0 ? -std::numeric_limits<double>::infinity() : std::log(static_cast<double>(v));
}

std::string to_str(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double BoundReport::expected_time_lower() const {
    if (log_expected_time_term > kMaxLog) {
        return std::numeric_limits<double>::infinity();
    }
    return std::exp(log_expected_time_term) - 0.5;
}

double BoundReport::prob_upper() const {
    return log_prob_raw >= 0.0 ? 1.0 : std::exp(log_prob_raw);
}

double BoundReport::constant(const std::string& name) const {
    for (const auto& [key, value] : constants) {
        if (key == name) {
            return value;
        }
    }
    throw std::out_of_range("BoundReport has no constant '" + name + "'");
}

nlohmann::json to_json(const BoundReport& report) {
    auto number = [](double v) -> nlohmann::json {
        if (!std::isfinite(v)) {
            return nullptr;
        }
        return v;
    };
    nlohmann::json j = nlohmann::json::object();
    j["kind"] = report.kind;
    j["log_expected_time_term"] = number(report.log_expected_time_term);
    j["expected_time_lower"] = number(report.expected_time_lower());
    j["log_prob_upper_raw"] = number(report.log_prob_raw);
    j["prob_upper"] = number(report.prob_upper());
    for (const auto& [key, value] : report.constants) {
        j[key] = number(value);
    }
    return j;
}

BoundReport negdrift_lemma_bounds(const DriftBoundInput& in) {
    require(in.delta > 0.0 && in.delta < 1.0, "delta must lie in (0,1)");
    require(in.Delta > 0.0, "Delta must be positive");
    require(in.M > in.Delta / in.delta,
            "M must exceed Delta/delta = " + to_str(in.Delta / in.delta));
    const double ratio = in.delta * in.M / in.Delta;
    BoundReport r;
    r.kind = "lemma1";
    r.log_expected_time_term = std::log(ratio / 2.0);
    r.log_prob_raw = log_count(in.L) - std::log(ratio);
    r.constants = {{"delta", in.delta},
                   {"Delta", in.Delta},
                   {"M", in.M},
                   {"L", static_cast<double>(in.L)},
                   {"equilibrium", in.Delta / in.delta}};
    return r;
}

BoundReport populations_bounds(const PopulationBoundInput& in) {
    require(in.kappa > 0.0, "kappa must be positive");
    require(in.a <= in.b, "need a <= b");
    require(in.alpha >= 1.0, "alpha must be at least 1");
    require(in.delta > 0.0 && in.delta < 1.0, "delta must lie in (0,1)");
    require(in.D >= in.delta, "need D >= delta");
    require(in.lambda >= 1, "lambda must be positive");
    const double gap = static_cast<double>(in.b - in.a);
    const double lam = static_cast<double>(in.lambda);
    BoundReport r;
    r.kind = "psm";
    r.log_expected_time_term = std::log(in.delta / (2.0 * in.D * lam)) + in.kappa * gap;
    r.log_prob_raw = log_count(in.L) + std::log(lam * in.D / in.delta) - in.kappa * gap;
    r.constants = {{"kappa", in.kappa},
                   {"a", static_cast<double>(in.a)},
                   {"b", static_cast<double>(in.b)},
                   {"alpha", in.alpha},
                   {"delta", in.delta},
                   {"D", in.D},
                   {"lambda", lam},
                   {"L", static_cast<double>(in.L)},
                   {"Delta", lam * in.D * std::exp(-in.kappa * static_cast<double>(in.b))}};
    return r;
}

StartCondition check_start_condition(std::size_t n, double kappa, std::size_t b, double D,
                                     double delta, std::size_t lambda) {
    require(kappa >= std::log(2.0) - kGuard, "start condition needs B = e^kappa >= 2");
    require(delta > 0.0 && D > 0.0 && lambda >= 1, "need D, delta > 0 and lambda >= 1");
    const double lam = std::log(static_cast<double>(lambda));
    const double lhs = lam + static_cast<double>(n) * std::log(0.5 + 0.5 * std::exp(-kappa));
    const double rhs = lam + std::log(D / delta) - kappa * static_cast<double>(b);
    return {lhs <= rhs, rhs - lhs};
}

BoundReport sbm_bounds(const SbmBoundInput& in) {
    require(in.n >= 1, "n must be positive");
    require(in.p >= 0.0 && in.p <= 0.5, "mutation rate must lie in [0, 1/2]");
    require(in.alpha >= 1.0, "alpha must be at least 1");
    require(in.delta > 0.0 && in.delta < 1.0, "delta must lie in (0,1)");
    require(in.a < in.b, "need a < b");
    const double pn = in.p * static_cast<double>(in.n);
    const double log_ratio = std::log(in.alpha / (1.0 - in.delta));
    require(log_ratio < pn, "epsilon must be positive: ln(alpha/(1-delta)) >= pn");
    const double eps = 1.0 - log_ratio / pn;
    const double B = 2.0 / eps;
    const double b_tilde = static_cast<double>(in.n) / (B * B - 1.0);
    require(leq_guarded(static_cast<double>(in.b), b_tilde),
            "b exceeds b_tilde = " + to_str(b_tilde));
    const double kappa = std::log(B);
    const double D = std::max((1.0 - in.delta) / in.alpha, in.delta);

    BoundReport r = populations_bounds(
        {kappa, in.a, in.b, in.alpha, in.delta, D, in.lambda, in.L});
    r.kind = "sbm";
    const auto start = check_start_condition(in.n, kappa, in.b, D, in.delta, in.lambda);
    r.constants.insert(r.constants.begin(),
                       {{"n", static_cast<double>(in.n)},
                        {"p", in.p},
                        {"epsilon", eps},
                        {"B", B},
                        {"b_tilde", b_tilde}});
    r.constants.push_back({"min_factor", std::min(in.delta * in.alpha / (1.0 - in.delta), 1.0)});
    r.constants.push_back({"max_factor", std::max((1.0 - in.delta) / (in.delta * in.alpha), 1.0)});
    r.constants.push_back({"start_condition_margin", start.margin});
    return r;
}

std::ptrdiff_t corollary_level(std::size_t n, double gamma) {
    const double g2 = gamma * gamma;
    // (1 - 4/n) n / (4/gamma^2 - 1) == (n - 4) gamma^2 / (4 - gamma^2)
    const double level = (static_cast<double>(n) - 4.0) * g2 / (4.0 - g2);
    return static_cast<std::ptrdiff_t>(floor_guarded(level));
}

BoundReport sbm_corollary_bounds(std::size_t n, double p, double alpha, std::size_t a,
                                 std::size_t lambda, std::size_t L) {
    require(n >= 1, "n must be positive");
    require(p > 0.0 && p <= 0.5, "mutation rate must lie in (0, 1/2]");
    require(alpha >= 1.0, "alpha must be at least 1");
    require(lambda >= 1, "lambda must be positive");
    const double nd = static_cast<double>(n);
    const double gamma = 1.0 - std::log(alpha) / (p * nd);
    require(leq_guarded(1.0 / nd, gamma), "gamma must be at least 1/n: ln(alpha) > p(n-1)");
    const auto b = corollary_level(n, gamma);
    require(b >= 0 && static_cast<std::ptrdiff_t>(a) <= b,
            "a exceeds the safe level b = " + std::to_string(b));
    const double gap = static_cast<double>(b - static_cast<std::ptrdiff_t>(a));
    const double rate = std::log(2.0 / gamma);
    const double pa = p * alpha;
    const double lam = static_cast<double>(lambda);

    BoundReport r;
    r.kind = "corollary";
    r.log_expected_time_term =
        std::log(pa / (4.0 * lam * nd)) + std::log(std::min(1.0, 2.0 * nd / pa)) + rate * gap;
    r.log_prob_raw = log_count(L) + std::log(2.0 * lam * nd / pa) +
                     std::log(std::max(1.0, pa / (2.0 * nd))) - rate * gap;
    r.constants = {{"n", nd},
                   {"p", p},
                   {"alpha", alpha},
                   {"gamma", gamma},
                   {"b", static_cast<double>(b)},
                   {"a", static_cast<double>(a)},
                   {"kappa", rate},
                   {"delta", p / (2.0 * nd)},
                   {"lambda", lam},
                   {"L", static_cast<double>(L)}};
    return r;
}

double mixed_admissibility_lhs(std::size_t n, const MutationOperator& op, double B) {
    const double nd = static_cast<double>(n);
    double lhs = 0.0;
    for (const auto& r : rate_distribution(op, n)) {
        lhs += r.q * std::exp(-r.p * nd * (1.0 - 2.0 / B));
    }
    return lhs;
}

double copy_probability_limit(std::size_t n, const MutationOperator& op) {
    const double nd = static_cast<double>(n);
    double sum = 0.0;
    for (const auto& r : rate_distribution(op, n)) {
        sum += r.q * std::exp(-r.p * nd);
    }
    return sum;
}

BoundReport mixed_bounds(const MixedBoundInput& in) {
    require(in.n >= 1, "n must be positive");
    require(in.alpha >= 1.0, "alpha must be at least 1");
    require(in.delta > 0.0 && in.delta < 1.0, "delta must lie in (0,1)");
    require(in.B > 2.0, "B must exceed 2");
    require(in.a < in.b, "need a < b");
    for (const auto& r : rate_distribution(in.op, in.n)) {
        require(r.q == 0.0 || r.p <= 0.5, "every mutation rate must be at most 1/2");
    }
    const double lhs = mixed_admissibility_lhs(in.n, in.op, in.B);
    const double rhs = (1.0 - in.delta) / in.alpha;
    require(leq_guarded(lhs, rhs),
            "B not admissible: sum q_i exp(-p_i n (1-2/B)) = " + to_str(lhs) + " > " + to_str(rhs));
    const double b_tilde = static_cast<double>(in.n) / (in.B * in.B - 1.0);
    require(leq_guarded(static_cast<double>(in.b), b_tilde),
            "b exceeds b_tilde = " + to_str(b_tilde));
    const double D = std::max(rhs, in.delta);

    BoundReport r = populations_bounds(
        {std::log(in.B), in.a, in.b, in.alpha, in.delta, D, in.lambda, in.L});
    r.kind = "mixed";
    r.constants.insert(r.constants.begin(), {{"n", static_cast<double>(in.n)},
                                             {"B", in.B},
                                             {"b_tilde", b_tilde},
                                             {"admissibility_lhs", lhs},
                                             {"admissibility_rhs", rhs}});
    return r;
}

MixedParams mixed_params_from_gamma(double alpha, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("gamma must lie in (0,1)");
    }
    if (!(alpha >= 1.0)) {
        throw std::invalid_argument("alpha must be at least 1");
    }
    const double ratio = std::log((1.0 - gamma / 2.0) / alpha) / std::log((1.0 - gamma) / alpha);
    return {gamma / 2.0, 2.0 / (1.0 - ratio)};
}

SimpleGaParameters simple_ga_parameters(std::size_t n, double eps, double a_frac) {
    if (!(eps > 0.0 && eps < 0.5)) {
        throw std::invalid_argument("eps must lie in (0, 1/2)");
    }
    if (!(a_frac > 0.0 && a_frac < 0.5 - eps)) {
        throw std::invalid_argument("a_frac must lie in (0, 1/2 - eps)");
    }
    const double alpha = (1.0 - a_frac) / (0.5 - eps);
    const double gamma = 1.0 - std::log(alpha);
    require(gamma > 0.0, "alpha >= e leaves gamma <= 0");
    const double nd = static_cast<double>(n);
    return {alpha, gamma, corollary_level(n, gamma), (0.5 - eps) * nd,
            static_cast<std::size_t>(floor_guarded(a_frac * nd))};
}

}  // namespace negadrift
