#include "pcc/occupancy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "pcc/error.hpp"

namespace pcc {

namespace {

// (1-p)^m without losing precision for small p.
double survive(double p, std::uint64_t m) {
    if (m == 0) return 1.0;
    if (p < 0.5) return std::exp(static_cast<double>(m) * std::log1p(-p));
    return std::pow(1.0 - p, static_cast<double>(m));
}

// 1 - (1-p)^m, accurate when m p is tiny.
double hit(double p, std::uint64_t m) {
    if (p < 0.5) return -std::expm1(static_cast<double>(m) * std::log1p(-p));
    return 1.0 - std::pow(1.0 - p, static_cast<double>(m));
}

std::string param_string(const char* name, double value) {
    return std::string(name) + "=" + format_double(value);
}

}  // namespace

OccupancyProfile profile(std::span<const Symbol> sequence) {
    OccupancyProfile prof;
    prof.n = sequence.size();
    for (Symbol s : sequence) ++prof.counts[s];
    prof.K = prof.counts.size();
    for (const auto& [symbol, count] : prof.counts) ++prof.K_r[count];
    return prof;
}

OccupancyProfile profile(std::span<const Symbol> sequence, const SourceSpec& spec) {
    OccupancyProfile prof = profile(sequence);
    CompensatedSum seen;
    for (const auto& [symbol, count] : prof.counts) seen += spec.pmf(symbol);
    prof.missing_mass = std::clamp(1.0 - seen.value(), 0.0, 1.0);
    return prof;
}

double expected_K(const SourceSpec& spec, std::uint64_t n) {
    if (n == 0) return 0.0;
    return spec.sum_all([n](double, double p) { return hit(p, n); });
}

double expected_K1(const SourceSpec& spec, std::uint64_t n) {
    if (n == 0) return 0.0;
    const double dn = static_cast<double>(n);
    return spec.sum_all([n, dn](double, double p) { return dn * p * survive(p, n - 1); });
}

double expected_missing_mass(const SourceSpec& spec, std::uint64_t n) {
    return spec.sum_all([n](double, double p) { return p * survive(p, n); });
}

InverseKEstimate estimate_inverse_K(const SourceSpec& spec, std::uint64_t n, std::size_t trials,
                                    std::uint64_t seed) {
    if (n == 0) throw DomainError("E[1/K_n] needs n >= 1");
    // Control variate from the tangent of 1/x at E K_n: the correction has
    // mean zero and, by convexity, every per-trial value is >= 1/E K_n.
    const double ek = expected_K(spec, n);
    std::vector<double> inv(trials, 0.0);
    parallel_for(trials, [&](std::size_t t) {
        const Message sample = spec.sample(n, trial_seed(seed, t));
        std::unordered_set<Symbol> distinct(sample.begin(), sample.end());
        const double k = static_cast<double>(distinct.size());
        inv[t] = 1.0 / k + (k - ek) / (ek * ek);
    });
    const auto stats = sample_stats(inv);
    return {stats.mean, stats.std_error};
}

bool LemmaRow::holds() const {
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    return std::isfinite(lhs) && std::isfinite(rhs) && slack() >= -1e-12 * scale;
}

bool LemmaReport::all_hold() const {
    return std::all_of(rows.begin(), rows.end(), [](const LemmaRow& r) { return r.holds(); });
}

void LemmaReport::require() const {
    for (const auto& r : rows) {
        if (!r.holds()) {
            throw LemmaViolation(r.lemma + " fails at n=" + std::to_string(r.n) + " " + r.param +
                                 ": " + format_double(r.lhs) + " > " + format_double(r.rhs));
        }
    }
}

LemmaReport evaluate_occupancy_lemma(const SourceSpec& spec, std::uint64_t n,
                                     const MonteCarloOptions& options) {
    if (n == 0) throw DomainError("occupancy lemma needs n >= 1");
    const double dn = static_cast<double>(n);
    const double ek = expected_K(spec, n);
    const double ek1 = expected_K1(spec, n);
    const double em = expected_missing_mass(spec, n);
    const double x = 1.0 / dn;
    const double count = static_cast<double>(spec.count_at_least(x));
    const double small_mass = spec.mass_at_most(x, false);
    const auto inv = estimate_inverse_K(spec, n, options.trials, options.seed);
    const double product = ek * inv.mean;
    const double margin = options.sigmas * ek * inv.std_error;
    const std::string trials = param_string("trials", static_cast<double>(options.trials));

    LemmaReport report;
    report.rows.push_back({"missing_mass_vs_singletons", n, "", em, ek1 / dn});
    report.rows.push_back({"singletons_vs_distinct", n, "", ek1 / dn, ek / dn});
    report.rows.push_back(
        {"distinct_lower", n, "", (std::numbers::e - 1.0) / std::numbers::e * count, ek});
    report.rows.push_back({"distinct_upper", n, "", ek, count + dn * small_mass});
    report.rows.push_back({"inverse_distinct_lower", n, trials, 1.0, product + margin});
    report.rows.push_back({"inverse_distinct_upper", n, trials, product - margin, 3.0});
    return report;
}

LemmaReport check_occupancy_lemma(const SourceSpec& spec, std::uint64_t n,
                                  const MonteCarloOptions& options) {
    auto report = evaluate_occupancy_lemma(spec, n, options);
    report.require();
    return report;
}

LemmaRow evaluate_binomial_inverse(std::uint64_t n, double p) {
    if (n == 0 || !(p > 0.0 && p < 1.0)) throw DomainError("binomial lemma needs n >= 1, p in (0,1)");
    const double dn = static_cast<double>(n);
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    const double lgn = std::lgamma(dn + 1.0);
    CompensatedSum acc;
    for (std::uint64_t k = 1; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double log_pmf =
            lgn - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0) + dk * log_p + (dn - dk) * log_q;
        acc += std::exp(log_pmf) / (dk - 0.5);
    }
    const double positive = -std::expm1(dn * log_q);
    const double np = dn * p;
    return {"binomial_inverse", n, param_string("p", p), acc.value() / positive,
            (1.0 / np) * (1.0 + 9.0 / np)};
}

double check_binomial_inverse_lemma(std::uint64_t n, double p) {
    const auto row = evaluate_binomial_inverse(n, p);
    LemmaReport{{row}}.require();
    return row.slack();
}

LemmaRow evaluate_poisson_tail(double lambda, double t) {
    if (!(lambda > 0.0) || !(t >= 0.0)) throw DomainError("poisson tail needs lambda > 0, t >= 0");
    const double start = std::ceil(lambda + t);
    CompensatedSum acc;
    for (double k = start;; k += 1.0) {
        const double term = std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
        acc += term;
        if (k > lambda && term < 1e-300 + 1e-18 * acc.value()) break;
    }
    const double bound = std::exp(-t * t / (2.0 * (lambda + t / 3.0)));
    return {"poisson_tail", 0, param_string("lambda", lambda) + ";" + param_string("t", t),
            acc.value(), bound};
}

double check_poisson_tail(double lambda, double t) {
    const auto row = evaluate_poisson_tail(lambda, t);
    LemmaReport{{row}}.require();
    return row.slack();
}

}  // namespace pcc
