#include "pcc/redundancy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "pcc/elias.hpp"
#include "pcc/error.hpp"
#include "pcc/occupancy.hpp"
#include "pcc/pc_codec.hpp"

namespace pcc {

namespace {

double log2_or_zero(double j) { return j <= 1.0 ? 0.0 : std::log2(j); }

double ideal_extra(double j) { return 2.0 * std::log2(1.0 + log2_or_zero(j)); }

double realized_extra(Symbol j) {
    return static_cast<double>(elias_length(j)) - 1.0 - log2_or_zero(static_cast<double>(j));
}

double survive(double p, std::uint64_t m) {
    if (p < 0.5) return std::exp(static_cast<double>(m) * std::log1p(-p));
    return std::pow(1.0 - p, static_cast<double>(m));
}

// sum_j p_j elias_length(j), taken over the blocks of j on which the length
// is constant.
double realized_length_mass(const SourceSpec& spec) {
    CompensatedSum acc;
    for (unsigned b = 1; b <= 62; ++b) {
        const std::uint64_t lo = (std::uint64_t{1} << b) - 1;
        const std::uint64_t hi = (std::uint64_t{1} << (b + 1)) - 2;
        const double before = spec.mass_after(lo - 1);
        if (before <= 0.0) break;
        const double block = before - spec.mass_after(hi);
        acc += block * static_cast<double>(elias_length(lo));
        if (spec.finite_support() && hi >= spec.head_size()) break;
    }
    return acc.value();
}

}  // namespace

double r_f(const EnvelopeDistribution& dist, std::uint64_t n) {
    if (n == 0) throw DomainError("r_f needs n >= 1");
    const SourceSpec& spec = dist.source();
    const double dn = static_cast<double>(n);
    const double x = 1.0 / dn;
    CompensatedSum acc;
    std::uint64_t head_count = 0;
    for (double p : spec.head()) {
        if (p >= x) {
            acc += 0.5 * std::log2(dn * p);
            ++head_count;
        }
    }
    const std::uint64_t tail_count = spec.count_at_least(x) - head_count;
    // Atoms beyond the explicit head follow the non-increasing tail law.
    const std::uint64_t first = spec.head_size() + 1;
    for (std::uint64_t j = first; j < first + tail_count; ++j) {
        acc += 0.5 * std::log2(dn * spec.pmf(j));
    }
    return acc.value();
}

RedundancyBoundReport theorem1_upper(const EnvelopeDistribution& dist, std::uint64_t n) {
    if (n == 0) throw DomainError("theorem1_upper needs n >= 1");
    const double dn = static_cast<double>(n);
    RedundancyBoundReport report;
    report.n = n;
    report.r_f = r_f(dist, n);
    UpperTerms up;
    up.integral = report.r_f;
    up.count_term = kLog2E * static_cast<double>(counting_function(dist, 1.0 / dn));
    up.small_mass_term = kLog2E * dn * nu1_mass(dist, 1.0 / dn);
    up.head_term = static_cast<double>(dist.ell_f()) * std::log2(dn);
    report.upper = up;
    return report;
}

RedundancyBoundReport theorem1_lower(const EnvelopeDistribution& dist, std::uint64_t n) {
    if (n < 8) throw DomainError("theorem1_lower needs n >= 8");
    const double dn = static_cast<double>(n);
    RedundancyBoundReport report;
    report.n = n;
    report.r_f = r_f(dist, n);
    LowerCandidates low;
    low.m = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(dn - std::cbrt(dn * dn))));
    const double dm = static_cast<double>(low.m);
    low.integral =
        r_f(dist, low.m) - 5.0 * static_cast<double>(counting_function(dist, 1.0 / dm)) - 1.0;
    low.occupancy = expected_K(dist.source(), n);
    report.lower = low;
    return report;
}

RedundancyBoundReport theorem1_report(const EnvelopeDistribution& dist, std::uint64_t n) {
    RedundancyBoundReport report = theorem1_upper(dist, n);
    if (n >= 8) report.lower = theorem1_lower(dist, n).lower;
    return report;
}

InstantaneousRedundancy::InstantaneousRedundancy(SourceSpec spec, bool idealized_elias)
    : spec_(std::move(spec)), idealized_(idealized_elias) {
    neg_entropy_ = spec_.sum_all([](double, double p) { return p * std::log2(p); });
    p_log_j_ = spec_.sum_all([](double j, double p) { return p * log2_or_zero(j); });
    if (idealized_) {
        p_extra_ = spec_.sum_all([](double j, double p) { return p * ideal_extra(j); });
    } else {
        p_extra_ = realized_length_mass(spec_) - spec_.sum_all([](double j, double p) {
            return p * (1.0 + log2_or_zero(j));
        });
    }
}

Decomposition InstantaneousRedundancy::operator()(std::span<const Symbol> prefix) const {
    std::unordered_map<Symbol, std::uint64_t> counts;
    for (Symbol s : prefix) {
        if (s == 0 || !(spec_.pmf(s) > 0.0)) {
            throw InvalidSymbol("symbol " + std::to_string(s) + " outside the source support");
        }
        ++counts[s];
    }
    const double i = static_cast<double>(prefix.size());
    const double K = static_cast<double>(counts.size());

    // Seen symbols are summed in increasing order so the result does not
    // depend on hash iteration order.
    std::vector<std::pair<Symbol, std::uint64_t>> seen(counts.begin(), counts.end());
    std::sort(seen.begin(), seen.end());
    CompensatedSum B;
    CompensatedSum mass_seen;
    CompensatedSum log_j_seen;
    CompensatedSum extra_seen;
    for (const auto& [j, count] : seen) {
        const double p = spec_.pmf(j);
        const double dj = static_cast<double>(j);
        B += -p * std::log2(static_cast<double>(count) - 0.5);
        mass_seen += p;
        log_j_seen += p * log2_or_zero(dj);
        extra_seen += p * (idealized_ ? ideal_extra(dj) : realized_extra(j));
    }

    Decomposition d;
    d.A = neg_entropy_ + std::log2(i + (K + 1.0) / 2.0);
    d.B = B.value();
    const double unseen = std::max(0.0, 1.0 - mass_seen.value());
    d.C = unseen * (1.0 - std::log2(K + 0.5)) + (p_log_j_ - log_j_seen.value());
    d.D = p_extra_ - extra_seen.value();
    d.total = d.A + d.B + d.C + d.D;
    return d;
}

Decomposition instantaneous_decomposition(const SourceSpec& spec, std::span<const Symbol> prefix,
                                          bool idealized_elias) {
    return InstantaneousRedundancy(spec, idealized_elias)(prefix);
}

std::vector<EmpiricalRedundancy> empirical_redundancy(const SourceSpec& spec,
                                                      std::span<const std::uint64_t> n_grid,
                                                      std::size_t trials, std::uint64_t seed,
                                                      bool idealized_elias) {
    if (trials == 0) throw DomainError("empirical_redundancy needs trials >= 1");
    std::vector<EmpiricalRedundancy> out;
    out.reserve(n_grid.size());
    for (std::uint64_t n : n_grid) {
        std::vector<EmpiricalTrial> rows(trials);
        parallel_for(trials, [&](std::size_t t) {
            const Message sample = spec.sample(n, trial_seed(seed, t));
            EmpiricalTrial& row = rows[t];
            row.n = n;
            row.trial = t;
            row.code_bits = static_cast<double>(encode(sample).bit_length());
            const IdealCodelength ideal = ideal_codelength(sample);
            row.ideal_bits = idealized_elias ? ideal.total_idealized() : ideal.total();
            CompensatedSum nlp;
            for (Symbol s : sample) nlp += -std::log2(spec.pmf(s));
            row.neg_log_p = nlp.value();
        });
        std::vector<double> code(trials), ideal(trials), nlp(trials), red(trials);
        for (std::size_t t = 0; t < trials; ++t) {
            code[t] = rows[t].code_bits;
            ideal[t] = rows[t].ideal_bits;
            nlp[t] = rows[t].neg_log_p;
            red[t] = rows[t].redundancy_bits();
        }
        EmpiricalRedundancy agg;
        agg.n = n;
        agg.trials = trials;
        agg.seed = seed;
        agg.mean_code_bits = sample_stats(code).mean;
        agg.mean_ideal_bits = sample_stats(ideal).mean;
        agg.mean_neg_log_p = sample_stats(nlp).mean;
        const SampleStats r = sample_stats(red);
        agg.redundancy_bits = r.mean;
        agg.std_error = r.std_error;
        agg.rows = std::move(rows);
        out.push_back(std::move(agg));
    }
    return out;
}

DistFreeReport evaluate_distfree_bound(const SourceSpec& spec, std::uint64_t i, std::size_t trials,
                                       std::uint64_t seed, double sigmas) {
    if (i < 1) throw DomainError("distribution-free bound needs i >= 1");
    if (trials < 2) throw DomainError("distribution-free bound needs at least 2 trials");
    const InstantaneousRedundancy step(spec, true);
    std::vector<double> lhs(trials);
    parallel_for(trials, [&](std::size_t t) {
        lhs[t] = step(spec.sample(i, trial_seed(seed, t))).total;
    });
    const SampleStats stats = sample_stats(lhs);

    const double EK = expected_K(spec, i);
    const double tail = spec.sum_all([&](double j, double p) {
        return p * survive(p, i) * (std::log2(j / EK) + 2.0 * std::log2(log2_or_zero(j) + 1.0));
    });
    DistFreeReport report;
    report.i = i;
    report.trials = trials;
    report.lhs = stats.mean;
    report.lhs_std_error = stats.std_error;
    report.rhs = kDistFreeKappa * EK / static_cast<double>(i) + tail;
    report.sigmas = sigmas;
    return report;
}

double check_distfree_bound(const SourceSpec& spec, std::uint64_t i, std::size_t trials,
                            std::uint64_t seed) {
    const DistFreeReport report = evaluate_distfree_bound(spec, i, trials, seed);
    if (report.slack() < 0.0) {
        throw BoundViolation("distribution-free bound fails at i=" + std::to_string(i) + ": lhs " +
                             format_double(report.lhs) + " > rhs " + format_double(report.rhs));
    }
    return report.slack();
}

}  // namespace pcc
