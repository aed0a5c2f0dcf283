#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "negadrift/bounds.hpp"
#include "negadrift/driftlab.hpp"
#include "negadrift/engine.hpp"
#include "negadrift/errors.hpp"

namespace negadrift::cli {

namespace {

using nlohmann::json;

class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ParamDef {
    std::string name;
    std::string help;
    std::optional<std::string> fallback;
};

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_real(const std::string& key, const std::string& text) {
    auto parse_one = [&](const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) {
            throw SchemaError("parameter " + key + ": not a number: '" + text + "'");
        }
        return v;
    };
    double v = 0.0;
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        v = parse_one(text.substr(0, slash)) / parse_one(text.substr(slash + 1));
    } else {
        v = parse_one(text);
    }
    if (!std::isfinite(v)) {
        throw SchemaError("parameter " + key + ": not a finite number: '" + text + "'");
    }
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
    if (text.empty() || !std::all_of(text.begin(), text.end(),
                                     [](char c) { return c >= '0' && c <= '9'; })) {
        throw SchemaError("parameter " + key + ": not a non-negative integer: '" + text + "'");
    }
    errno = 0;
    const auto v = std::strtoull(text.c_str(), nullptr, 10);
    if (errno == ERANGE) {
        throw SchemaError("parameter " + key + ": out of range: '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        parts.push_back(item);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

class Params {
public:
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    const std::string& text(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            throw SchemaError("missing parameter --" + key);
        }
        return it->second;
    }
    double real(const std::string& key) const { return parse_real("--" + key, text(key)); }
    std::size_t count(const std::string& key) const {
        return static_cast<std::size_t>(parse_count("--" + key, text(key)));
    }
    std::uint64_t u64(const std::string& key) const { return parse_count("--" + key, text(key)); }

private:
    std::map<std::string, std::string> values_;
};

std::uint64_t master_seed(const Params& p) {
    if (p.has("seed")) {
        return p.u64("seed");
    }
    if (const char* env = std::getenv("NEGADRIFT_SEED"); env != nullptr && *env != '\0') {
        return parse_count("NEGADRIFT_SEED", env);
    }
    throw SchemaError("a master seed is required: pass --seed or set NEGADRIFT_SEED");
}

std::size_t worker_count(const Params& p) {
    const auto w = p.count("workers");
    if (w > 0) {
        return w;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Mutation and process specifications

MutationOperator parse_mutation(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    MutationOperator op;
    if (kind == "sbm") {
        op = FixedRate{parse_real("--mutation", rest)};
    } else if (kind == "mixed") {
        MixedRate mixed;
        for (const auto& entry : split(rest, ',')) {
            const auto at = entry.find('@');
            if (at == std::string::npos) {
                throw SchemaError("--mutation mixed entries must read rate@weight: '" + entry + "'");
            }
            mixed.rates.push_back({parse_real("--mutation", entry.substr(0, at)),
                                   parse_real("--mutation", entry.substr(at + 1))});
        }
        op = mixed;
    } else if (kind == "heavy") {
        const auto parts = split(rest, ':');
        if (parts.empty() || parts.size() > 2) {
            throw SchemaError("--mutation heavy expects heavy:beta or heavy:beta:N");
        }
        HeavyTailed heavy{parse_real("--mutation", parts[0]), 0};
        if (parts.size() == 2) {
            heavy.N = static_cast<std::size_t>(parse_count("--mutation", parts[1]));
        }
        op = heavy;
    } else {
        throw SchemaError("--mutation must start with sbm:, mixed: or heavy: ('" + spec + "')");
    }
    validate(op);
    return op;
}

MutationOperator mutation_from(const Params& p, std::size_t n) {
    if (p.has("mutation")) {
        if (p.has("p")) {
            throw SchemaError("--p and --mutation are mutually exclusive");
        }
        return parse_mutation(p.text("mutation"));
    }
    return FixedRate{p.has("p") ? p.real("p") : 1.0 / static_cast<double>(n)};
}

double fixed_rate_of(const Params& p, std::size_t n) {
    const auto op = mutation_from(p, n);
    if (const auto* fixed = std::get_if<FixedRate>(&op)) {
        return fixed->p;
    }
    throw SchemaError("this command needs standard bit mutation (--p or --mutation sbm:P)");
}

const std::vector<ParamDef> kProcessParams = {
    {"process", "mu-lambda or simple-ga", "mu-lambda"},
    {"n", "bit-string length", std::nullopt},
    {"mu", "parent count (population size for simple-ga)", "1"},
    {"lambda", "offspring count (mu-lambda only)", "1"},
    {"p", "standard bit mutation rate (default 1/n)", std::nullopt},
    {"mutation", "mutation operator: sbm:P | mixed:P@Q,... | heavy:BETA[:N]", std::nullopt},
};

PsmProcess build_process(const Params& p) {
    const auto kind = p.text("process");
    const auto n = p.count("n");
    if (n == 0) {
        throw SchemaError("--n must be positive");
    }
    PsmProcess proc = [&] {
        if (kind == "mu-lambda") {
            return mu_lambda_ea(n, p.count("mu"), p.count("lambda"), 1.0 / static_cast<double>(n));
        }
        if (kind == "simple-ga") {
            return simple_ga(n, p.count("mu"));
        }
        throw SchemaError("--process must be mu-lambda or simple-ga");
    }();
    proc.mutation = mutation_from(p, n);
    proc.validate();
    return proc;
}

// ---------------------------------------------------------------------------
// Bounds

const std::vector<std::string> kBoundKinds = {"lemma1", "psm", "sbm", "corollary", "mixed",
                                              "simple-ga"};

std::vector<ParamDef> bound_params(const std::string& kind) {
    if (kind == "lemma1") {
        return {{"delta", "multiplicative drift rate in (0,1)", std::nullopt},
                {"Delta", "additive disturbance", std::nullopt},
                {"M", "threshold", std::nullopt},
                {"L", "horizon", std::nullopt}};
    }
    if (kind == "psm") {
        return {{"kappa", "potential scaling", std::nullopt},
                {"a", "target level", std::nullopt},
                {"b", "safe level", std::nullopt},
                {"alpha", "reproduction-rate cap", std::nullopt},
                {"delta", "drift rate", std::nullopt},
                {"D", "disturbance factor", std::nullopt},
                {"lambda", "population size", std::nullopt},
                {"L", "horizon", std::nullopt}};
    }
    if (kind == "sbm") {
        return {{"n", "bit-string length", std::nullopt},
                {"p", "mutation rate (default 1/n)", std::nullopt},
                {"alpha", "reproduction-rate cap", std::nullopt},
                {"delta", "drift rate", std::nullopt},
                {"a", "target level", std::nullopt},
                {"b", "safe level", std::nullopt},
                {"lambda", "population size", std::nullopt},
                {"L", "horizon", std::nullopt}};
    }
    if (kind == "corollary") {
        return {{"n", "bit-string length", std::nullopt},
                {"p", "mutation rate (default 1/n)", std::nullopt},
                {"alpha", "reproduction-rate cap", std::nullopt},
                {"a", "target level", std::nullopt},
                {"lambda", "population size", std::nullopt},
                {"L", "horizon", std::nullopt}};
    }
    if (kind == "mixed") {
        return {{"n", "bit-string length", std::nullopt},
                {"mutation", "mixed:P@Q,... or heavy:BETA[:N]", std::nullopt},
                {"alpha", "reproduction-rate cap", std::nullopt},
                {"delta", "drift rate (or give --gamma)", std::nullopt},
                {"B", "potential base e^kappa (or give --gamma)", std::nullopt},
                {"gamma", "derive delta = gamma/2 and B from gamma", std::nullopt},
                {"a", "target level", std::nullopt},
                {"b", "safe level", std::nullopt},
                {"lambda", "population size", std::nullopt},
                {"L", "horizon", std::nullopt}};
    }
    if (kind == "simple-ga") {
        return {{"n", "bit-string length", std::nullopt},
                {"eps", "fitness floor offset in (0, 1/2)", std::nullopt},
                {"a-frac", "target distance as a fraction of n", std::nullopt},
                {"mu", "population size", std::nullopt},
                {"L", "horizon", std::nullopt}};
    }
    throw SchemaError("unknown bound kind '" + kind + "'");
}

BoundReport compute_bound(const std::string& kind, const Params& p) {
    if (kind == "lemma1") {
        return negdrift_lemma_bounds({p.real("delta"), p.real("Delta"), p.real("M"), p.count("L")});
    }
    if (kind == "psm") {
        return populations_bounds({p.real("kappa"), p.count("a"), p.count("b"), p.real("alpha"),
                                   p.real("delta"), p.real("D"), p.count("lambda"), p.count("L")});
    }
    if (kind == "sbm") {
        const auto n = p.count("n");
        return sbm_bounds({n, fixed_rate_of(p, n), p.real("alpha"), p.real("delta"), p.count("a"),
                           p.count("b"), p.count("lambda"), p.count("L")});
    }
    if (kind == "corollary") {
        const auto n = p.count("n");
        return sbm_corollary_bounds(n, fixed_rate_of(p, n), p.real("alpha"), p.count("a"),
                                    p.count("lambda"), p.count("L"));
    }
    if (kind == "mixed") {
        const auto n = p.count("n");
        double delta = 0.0;
        double B = 0.0;
        if (p.has("gamma")) {
            if (p.has("delta") || p.has("B")) {
                throw SchemaError("--gamma excludes --delta and --B");
            }
            const auto derived = mixed_params_from_gamma(p.real("alpha"), p.real("gamma"));
            delta = derived.delta;
            B = derived.B;
        } else {
            delta = p.real("delta");
            B = p.real("B");
        }
        return mixed_bounds({n, parse_mutation(p.text("mutation")), p.real("alpha"), delta, B,
                             p.count("a"), p.count("b"), p.count("lambda"), p.count("L")});
    }
    if (kind == "simple-ga") {
        const auto n = p.count("n");
        const auto eps = p.real("eps");
        const auto a_frac = p.real("a-frac");
        const auto params = simple_ga_parameters(n, eps, a_frac);
        auto report = sbm_corollary_bounds(n, 1.0 / static_cast<double>(n), params.alpha, params.a,
                                           p.count("mu"), p.count("L"));
        report.kind = "simple-ga";
        report.constants.push_back({"eps", eps});
        report.constants.push_back({"a_frac", a_frac});
        report.constants.push_back({"s", params.s});
        return report;
    }
    throw SchemaError("unknown bound kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Commands

struct Command {
    std::vector<std::string> path;
    std::string description;
    std::vector<ParamDef> params;
    std::function<void(const Params&, std::ostream&)> run;
    bool sweep = false;
};

std::vector<ParamDef> concat(std::vector<ParamDef> a, const std::vector<ParamDef>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

const ParamDef kOutput{"output", "write records to this file instead of stdout", std::nullopt};
const ParamDef kSeed{"seed", "master seed (default: $NEGADRIFT_SEED)", std::nullopt};
const ParamDef kWorkers{"workers", "worker threads (0: machine parallelism)", "0"};

void run_simulate(const Params& p, std::ostream& out) {
    const auto proc = build_process(p);
    const RunOptions options{p.count("a"), p.count("L"), p.real("kappa"), true};
    write_trace_csv(out, run_until(proc, options, master_seed(p)));
}

void run_experiment(const Params& p, std::ostream& out) {
    const auto proc = build_process(p);
    const RunOptions options{p.count("a"), p.count("L"), p.real("kappa"), false};
    const auto summary =
        hitting_time_experiment(proc, options, p.count("reps"), master_seed(p), worker_count(p));
    out << "reps,horizon,hits_before_horizon,hits_at_horizon,censored,prob_hit_before_horizon,"
           "mean_uncensored\n";
    out << summary.reps << ',' << summary.horizon << ',' << summary.hits_before_horizon << ','
        << summary.hits_at_horizon << ',' << summary.censored << ','
        << format_number(summary.prob_hit_before_horizon) << ','
        << (summary.mean_uncensored ? format_number(*summary.mean_uncensored) : "") << '\n';
    if (p.has("runs-output")) {
        std::ofstream runs(p.text("runs-output"));
        if (!runs) {
            throw SchemaError("cannot open --runs-output '" + p.text("runs-output") + "'");
        }
        runs << "replicate,seed,hitting_time,censored\n";
        for (const auto& r : summary.runs) {
            runs << r.replicate << ',' << r.seed << ','
                 << (r.hitting_time ? std::to_string(*r.hitting_time) : "") << ','
                 << (r.hitting_time ? 0 : 1) << '\n';
        }
    }
}

json numeric(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

void run_verify_drift(const Params& p, std::ostream& out) {
    const auto proc = build_process(p);
    const double kappa = p.real("kappa");
    Rng rng(master_seed(p));
    auto population = init_population(proc, rng);
    const MutationKernel kernel(proc.mutation, proc.n);
    for (std::size_t g = 0; g < p.count("generations"); ++g) {
        population = step(population, proc, kernel, rng).population;
    }
    const auto measured = measure_drift(proc, population, kappa, p.count("reps"), rng);
    const double exact = expected_drift_ratio(proc, population, kappa);
    json record{{"kind", "drift"},
                {"log_current", numeric(measured.log_current)},
                {"mean_ratio", numeric(measured.mean_ratio)},
                {"half_width_ratio", numeric(measured.half_width_ratio)},
                {"reps", measured.reps},
                {"expected_ratio", numeric(exact)}};
    const bool with_rhs = p.has("delta") || p.has("D") || p.has("b");
    if (with_rhs) {
        const double rhs = drift_rhs_ratio(measured.log_current, p.real("delta"), proc.lambda,
                                           p.real("D"), kappa, p.count("b"));
        record["rhs_ratio"] = numeric(rhs);
        record["holds"] = exact <= rhs * (1.0 + 1e-12);
    }
    out << record.dump() << '\n';
}

void run_verify_conditions(const Params& p, std::ostream& out) {
    const auto n = p.count("n");
    const auto op = mutation_from(p, n);
    const double alpha = p.real("alpha");
    const double delta = p.real("delta");
    double kappa = 0.0;
    if (p.has("kappa")) {
        kappa = p.real("kappa");
    } else if (p.has("B")) {
        kappa = std::log(p.real("B"));
    } else if (const auto* fixed = std::get_if<FixedRate>(&op)) {
        const double pn = fixed->p * static_cast<double>(n);
        const double eps = 1.0 - std::log(alpha / (1.0 - delta)) / pn;
        if (!(eps > 0.0)) {
            throw PreconditionError("epsilon must be positive: ln(alpha/(1-delta)) >= pn");
        }
        kappa = std::log(2.0 / eps);
    } else {
        throw SchemaError("missing parameter --kappa (or --B)");
    }
    const double D = p.has("D") ? p.real("D") : std::max((1.0 - delta) / alpha, delta);
    const auto a = p.count("a");
    const auto b = p.count("b");
    auto ii = to_json(verify_condition_ii(op, n, kappa, alpha, delta, a, b));
    ii["kappa"] = numeric(kappa);
    auto iii = to_json(verify_condition_iii(op, n, kappa, b, D));
    iii["kappa"] = numeric(kappa);
    out << ii.dump() << '\n' << iii.dump() << '\n';
}

void run_verify_domination(const Params& p, std::ostream& out) {
    const auto mode = p.text("mode");
    const auto n = p.count("n");
    if (mode == "offspring") {
        const auto op = mutation_from(p, n);
        const auto d1 = p.count("d1");
        const auto d2 = p.count("d2");
        if (d1 > n || d2 > n) {
            throw SchemaError("--d1 and --d2 must lie in [0..n]");
        }
        auto record = to_json(domination_test_exact(offspring_distance_pmf(d2, n, op),
                                                    offspring_distance_pmf(d1, n, op)));
        record["d1"] = d1;
        record["d2"] = d2;
        out << record.dump() << '\n';
        return;
    }
    if (mode != "simple-ga") {
        throw SchemaError("--mode must be offspring or simple-ga");
    }
    std::vector<std::size_t> times;
    for (const auto& t : split(p.text("times"), ',')) {
        times.push_back(static_cast<std::size_t>(parse_count("--times", t)));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const auto samples = simple_ga_fitness_samples(n, p.count("mu"), times, p.count("runs"),
                                                   master_seed(p), worker_count(p));
    const Eigen::VectorXd reference = cdf(binomial_pmf<double>(n, 0.5));
    for (std::size_t i = 0; i < times.size(); ++i) {
        auto record =
            to_json(domination_test_statistical(samples[i], reference, p.real("significance")));
        record["t"] = times[i];
        record["samples"] = samples[i].size();
        out << record.dump() << '\n';
    }
}

void run_lemma1_oracle(const Params& p, std::ostream& out) {
    const auto suite = lemma1_oracle_suite(master_seed(p), p.count("chains"), p.count("max-states"),
                                           p.count("horizon"), worker_count(p));
    std::size_t violations = 0;
    for (const auto& c : suite.cases) {
        violations += c.ok() ? 0 : 1;
        out << to_json(c).dump() << '\n';
    }
    out << json{{"kind", "lemma1_oracle_summary"},
                {"chains", suite.cases.size()},
                {"candidates", suite.candidates},
                {"violations", violations},
                {"ok", violations == 0}}
               .dump()
        << '\n';
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        quoted += c;
        if (c == '"') {
            quoted += '"';
        }
    }
    return quoted + '"';
}

void run_sweep(const std::string& kind, const Params& base, const std::vector<std::string>& grid,
               std::ostream& out) {
    const auto defs = bound_params(kind);
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (const auto& entry : grid) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == entry.size()) {
            throw SchemaError("--grid expects key=v1,v2,...: '" + entry + "'");
        }
        const auto key = entry.substr(0, eq);
        if (std::none_of(defs.begin(), defs.end(), [&](const ParamDef& d) { return d.name == key; })) {
            throw SchemaError("--grid key '" + key + "' is not a parameter of bound " + kind);
        }
        if (std::any_of(axes.begin(), axes.end(), [&](const auto& a) { return a.first == key; })) {
            throw SchemaError("--grid key '" + key + "' given twice");
        }
        auto values = split(entry.substr(eq + 1), ',');
        if (std::any_of(values.begin(), values.end(), [](const auto& v) { return v.empty(); })) {
            throw SchemaError("--grid entry has an empty value: '" + entry + "'");
        }
        axes.emplace_back(key, std::move(values));
    }

    struct Row {
        std::vector<std::string> point;
        std::optional<BoundReport> report;
        std::string reason;
    };
    std::vector<Row> rows;
    std::vector<std::size_t> index(axes.size(), 0);
    for (;;) {
        Params point = base;
        Row row;
        for (std::size_t i = 0; i < axes.size(); ++i) {
            const auto& value = axes[i].second[index[i]];
            point.set(axes[i].first, value);
            row.point.push_back(value);
        }
        try {
            row.report = compute_bound(kind, point);
        } catch (const PreconditionError& e) {
            row.reason = e.what();
        } catch (const std::invalid_argument& e) {
            row.reason = e.what();
        }
        rows.push_back(std::move(row));
        // Odometer over the grid, last axis fastest.
        std::size_t i = axes.size();
        while (i > 0 && ++index[i - 1] == axes[i - 1].second.size()) {
            index[i - 1] = 0;
            --i;
        }
        if (i == 0) {
            break;
        }
    }

    std::vector<std::string> constant_names;
    for (const auto& row : rows) {
        if (!row.report) {
            continue;
        }
        for (const auto& [name, value] : row.report->constants) {
            const bool is_axis = std::any_of(axes.begin(), axes.end(),
                                             [&](const auto& a) { return a.first == name; });
            if (!is_axis && std::find(constant_names.begin(), constant_names.end(), name) ==
                                constant_names.end()) {
                constant_names.push_back(name);
            }
        }
    }

    std::vector<std::string> header;
    for (const auto& axis : axes) {
        header.push_back(axis.first);
    }
    for (const char* name : {"status", "reason", "log_expected_time_term", "expected_time_lower",
                             "log_prob_upper_raw", "prob_upper"}) {
        header.emplace_back(name);
    }
    for (const auto& name : constant_names) {
        header.push_back(name);
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << csv_field(header[i]);
    }
    out << '\n';
    for (const auto& row : rows) {
        std::vector<std::string> cells = row.point;
        if (row.report) {
            const auto& r = *row.report;
            cells.insert(cells.end(), {"ok", "", format_number(r.log_expected_time_term),
                                       format_number(r.expected_time_lower()),
                                       format_number(r.log_prob_raw), format_number(r.prob_upper())});
            for (const auto& name : constant_names) {
                const auto it = std::find_if(r.constants.begin(), r.constants.end(),
                                             [&](const auto& c) { return c.first == name; });
                cells.push_back(it == r.constants.end() ? "" : format_number(it->second));
            }
        } else {
            cells.insert(cells.end(), {"rejected", row.reason, "", "", "", ""});
            cells.resize(header.size());
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << csv_field(cells[i]);
        }
        out << '\n';
    }
}

constexpr const char* kSchema = R"(negadrift output formats

bound <kind>            one JSON object per line
  kind                    lemma1 | psm | sbm | corollary | mixed | simple-ga
  log_expected_time_term  ln of the leading term of the E[T] lower bound
  expected_time_lower     exp(log_expected_time_term) - 1/2 (null if beyond double range)
  log_prob_upper_raw      ln of the raw Pr[T < L] upper bound, kept even when > 0
  prob_upper              min(1, exp(log_prob_upper_raw))
  <constant>              every derived constant (n, p, epsilon, B, b_tilde, kappa, D, ...)

simulate                CSV trace, one row per generation t = 0..T or 0..L
  t              generation index
  min_g          smallest potential (Hamming distance to the target) in the population
  log_potential  ln sum_i exp(-kappa g(P_i))
  hit            1 if min_g <= a, else 0

experiment hitting-time summary CSV, one row
  reps                     number of replicate runs
  horizon                  L
  hits_before_horizon      runs with T < L
  hits_at_horizon          runs with T = L
  censored                 runs without a hit in generations 0..L
  prob_hit_before_horizon  hits_before_horizon / reps
  mean_uncensored          mean T over runs with a hit (empty if none)
--runs-output CSV, one row per replicate in replicate order
  replicate, seed, hitting_time (empty if censored), censored (0/1)

verify drift            one JSON object
  log_current, mean_ratio, half_width_ratio, reps, expected_ratio[, rhs_ratio, holds]
verify conditions       two JSON objects: condition_ii, condition_iii
verify domination       one JSON object per comparison
  method, holds, worst_point, worst_gap, significance, slack[, d1, d2 | t, samples]
verify lemma1-oracle    one JSON object per accepted chain, then a summary object
  candidate, seed, states, delta, Delta, M, worst_prob_ratio, expected_time,
  expected_time_bound, max_mean_label, prob_ok, expected_ok, equilibrium_ok, ok
  summary: kind = lemma1_oracle_summary, chains, candidates, violations, ok

sweep <kind>            CSV, one row per grid point (last --grid key varies fastest)
  <grid keys>...   the point's coordinates
  status           ok | rejected
  reason           rejection message (empty when ok)
  log_expected_time_term, expected_time_lower, log_prob_upper_raw, prob_upper
  <constants>...   union of the constants reported by accepted points

errors                  one JSON object on stderr
  error    usage_error | schema_violation | precondition_rejected | internal_error
  message  human-readable detail
exit codes: 0 success, 2 usage/schema/precondition error, 1 internal error
)";

std::vector<Command> command_table() {
    std::vector<Command> commands;
    for (const auto& kind : kBoundKinds) {
        commands.push_back({{"bound", kind},
                            "evaluate the " + kind + " bound",
                            concat(bound_params(kind), {kOutput}),
                            [kind](const Params& p, std::ostream& out) {
                                out << to_json(compute_bound(kind, p)).dump() << '\n';
                            }});
        commands.push_back({{"sweep", kind},
                            "evaluate the " + kind + " bound on a parameter grid",
                            concat(bound_params(kind), {kOutput}),
                            {},
                            true});
    }
    const std::vector<ParamDef> run_params = {
        {"a", "target level: hit when min g <= a", "0"},
        {"L", "horizon", std::nullopt},
        {"kappa", "scaling of the recorded potential", "1"},
    };
    commands.push_back({{"simulate"},
                        "run one process and write its trace",
                        concat(concat(kProcessParams, run_params), {kSeed, kOutput}),
                        run_simulate});
    commands.push_back({{"experiment", "hitting-time"},
                        "replicate runs and summarize hitting times",
                        concat(concat(kProcessParams, run_params),
                               {{"reps", "number of replicates", std::nullopt},
                                kSeed,
                                kWorkers,
                                {"runs-output", "per-replicate CSV path", std::nullopt},
                                kOutput}),
                        run_experiment});
    commands.push_back({{"verify", "drift"},
                        "measure the one-step drift of the population potential",
                        concat(kProcessParams,
                               {{"kappa", "potential scaling", "1"},
                                {"reps", "Monte Carlo repetitions", "1000"},
                                {"generations", "generations to advance before measuring", "0"},
                                {"delta", "drift rate for the right-hand side", std::nullopt},
                                {"D", "disturbance factor for the right-hand side", std::nullopt},
                                {"b", "safe level for the right-hand side", std::nullopt},
                                kSeed,
                                kOutput}),
                        run_verify_drift});
    commands.push_back({{"verify", "conditions"},
                        "check the per-level drift conditions for a mutation operator",
                        {{"n", "bit-string length", std::nullopt},
                         {"p", "mutation rate (default 1/n)", std::nullopt},
                         {"mutation", "sbm:P | mixed:P@Q,... | heavy:BETA[:N]", std::nullopt},
                         {"alpha", "reproduction-rate cap", std::nullopt},
                         {"delta", "drift rate", std::nullopt},
                         {"a", "target level", std::nullopt},
                         {"b", "safe level", std::nullopt},
                         {"kappa", "potential scaling (default ln(2/epsilon) for sbm)", std::nullopt},
                         {"B", "potential base, kappa = ln B", std::nullopt},
                         {"D", "disturbance factor (default max((1-delta)/alpha, delta))", std::nullopt},
                         kOutput},
                        run_verify_conditions});
    commands.push_back({{"verify", "domination"},
                        "test stochastic domination (exact offspring laws or simple-GA samples)",
                        {{"mode", "offspring or simple-ga", "offspring"},
                         {"n", "bit-string length", std::nullopt},
                         {"p", "mutation rate (default 1/n)", std::nullopt},
                         {"mutation", "sbm:P | mixed:P@Q,... | heavy:BETA[:N]", std::nullopt},
                         {"d1", "larger parent distance (offspring mode)", std::nullopt},
                         {"d2", "smaller parent distance (offspring mode)", std::nullopt},
                         {"mu", "population size (simple-ga mode)", "20"},
                         {"times", "generations to sample (simple-ga mode)", "1,5,10,25,50"},
                         {"runs", "independent runs (simple-ga mode)", "10000"},
                         {"significance", "DKW significance level", "0.001"},
                         kSeed,
                         kWorkers,
                         kOutput},
                        run_verify_domination});
    commands.push_back({{"verify", "lemma1-oracle"},
                        "check the drift lemma on random finite chains",
                        {{"chains", "accepted chains required", "200"},
                         {"max-states", "largest chain size", "30"},
                         {"horizon", "largest L checked", "1000"},
                         kSeed,
                         kWorkers,
                         kOutput},
                        run_lemma1_oracle});
    commands.push_back({{"schema"}, "describe the output formats", {}, [](const Params&, std::ostream& out) {
                            out << kSchema;
                        }});
    return commands;
}

std::string config_value(const std::string& key, const json& value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_number_integer() || value.is_number_unsigned()) {
        return value.dump();
    }
    if (value.is_number_float()) {
        return format_number(value.get<double>());
    }
    if (value.is_boolean()) {
        return value.get<bool>() ? "true" : "false";
    }
    throw SchemaError("config key '" + key + "' must be a string or number");
}

struct Leaf {
    const Command* command = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> flags;
    std::map<std::string, CLI::Option*> options;
    std::string config;
    CLI::Option* config_option = nullptr;
    std::vector<std::string> grid;
};

Params resolve(Leaf& leaf) {
    Params params;
    for (const auto& def : leaf.command->params) {
        if (def.fallback) {
            params.set(def.name, *def.fallback);
        }
    }
    if (leaf.config_option->count() > 0) {
        std::ifstream file(leaf.config);
        if (!file) {
            throw SchemaError("cannot read config file '" + leaf.config + "'");
        }
        json doc;
        try {
            doc = json::parse(file);
        } catch (const json::exception& e) {
            throw SchemaError("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!doc.is_object()) {
            throw SchemaError("config file must hold a single flat JSON object");
        }
        for (const auto& [key, value] : doc.items()) {
            if (key == "grid" && leaf.command->sweep) {
                if (leaf.grid.empty()) {
                    std::vector<std::string> entries;
                    for (const auto& item : value.is_array() ? value : json::array({value})) {
                        entries.push_back(config_value(key, item));
                    }
                    leaf.grid = std::move(entries);
                }
                continue;
            }
            const auto& defs = leaf.command->params;
            if (std::none_of(defs.begin(), defs.end(),
                             [&](const ParamDef& d) { return d.name == key; })) {
                throw SchemaError("unknown config key '" + key + "'");
            }
            params.set(key, config_value(key, value));
        }
    }
    for (const auto& [name, option] : leaf.options) {
        if (name != "grid" && option->count() > 0) {
            params.set(name, leaf.flags[name]);
        }
    }
    return params;
}

void error_record(std::ostream& err, const std::string& name, const std::string& message) {
    err << json{{"error", name}, {"message", message}}.dump() << '\n';
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto commands = command_table();
    CLI::App app{"Runtime bounds, simulations and verification suites for population "
                 "selection-mutation processes."};
    app.name("negadrift");
    app.require_subcommand(1);

    std::map<std::string, CLI::App*> groups;
    std::list<Leaf> leaves;
    for (const auto& command : commands) {
        CLI::App* parent = &app;
        if (command.path.size() == 2) {
            auto& group = groups[command.path[0]];
            if (group == nullptr) {
                group = app.add_subcommand(command.path[0], command.path[0] + " subcommands");
                group->require_subcommand(1);
            }
            parent = group;
        }
        auto& leaf = leaves.emplace_back();
        leaf.command = &command;
        leaf.app = parent->add_subcommand(command.path.back(), command.description);
        for (const auto& def : command.params) {
            const auto help = def.fallback ? def.help + " [default: " + *def.fallback + "]" : def.help;
            leaf.options[def.name] = leaf.app->add_option("--" + def.name, leaf.flags[def.name], help);
        }
        if (command.sweep) {
            leaf.options["grid"] =
                leaf.app->add_option("--grid", leaf.grid, "grid axis key=v1,v2,... (repeatable)");
        }
        leaf.config_option =
            leaf.app->add_option("--config", leaf.config, "flat JSON file of parameters; flags win");
    }

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        error_record(err, "usage_error", e.what());
        return 2;
    }

    Leaf* chosen = nullptr;
    for (auto& leaf : leaves) {
        if (leaf.app->parsed()) {
            chosen = &leaf;
        }
    }
    if (chosen == nullptr) {
        error_record(err, "usage_error", "no command given");
        return 2;
    }

    try {
        const auto params = resolve(*chosen);
        std::ofstream file;
        if (params.has("output")) {
            file.open(params.text("output"));
            if (!file) {
                throw SchemaError("cannot open --output '" + params.text("output") + "'");
            }
        }
        std::ostream& sink = params.has("output") ? file : out;
        if (chosen->command->sweep) {
            run_sweep(chosen->command->path.back(), params, chosen->grid, sink);
        } else {
            chosen->command->run(params, sink);
        }
        sink.flush();
        return 0;
    } catch (const SchemaError& e) {
        error_record(err, "schema_violation", e.what());
        return 2;
    } catch (const PreconditionError& e) {
        error_record(err, "precondition_rejected", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        error_record(err, "precondition_rejected", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_record(err, "internal_error", e.what());
        return 1;
    }
}

}  // namespace negadrift::cli
