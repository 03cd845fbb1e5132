#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "pcc/envelope.hpp"
#include "pcc/error.hpp"
#include "pcc/occupancy.hpp"

using namespace pcc;

namespace {

// Exact E K_n, E K_{n,1}, E M_{n,0} and E[1/K_n] for a finite pmf by
// enumerating every sequence of length n.
struct Exact {
    double K = 0, K1 = 0, M = 0, invK = 0;
};

Exact enumerate(const std::vector<double>& p, unsigned n) {
    Exact e;
    const std::size_t k = p.size();
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
        double prob = 1.0;
        std::vector<unsigned> counts(k, 0);
        for (auto x : idx) {
            prob *= p[x];
            ++counts[x];
        }
        double distinct = 0, single = 0, missing = 0;
        for (std::size_t j = 0; j < k; ++j) {
            distinct += counts[j] > 0;
            single += counts[j] == 1;
            if (counts[j] == 0) missing += p[j];
        }
        e.K += prob * distinct;
        e.K1 += prob * single;
        e.M += prob * missing;
        if (distinct > 0) e.invK += prob / distinct;
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] == k) idx[pos++] = 0;
        if (pos == n) break;
    }
    return e;
}

}  // namespace

TEST_CASE("profile") {
    const auto empty = profile(Message{});
    CHECK(empty.K == 0);
    CHECK(empty.K_r.empty());

    const auto small = profile(Message{1, 1, 2});
    CHECK(small.K == 2);
    CHECK(small.occupancy(1) == 1);
    CHECK(small.occupancy(2) == 1);

    const auto abra = profile(Message{1, 2, 3, 1, 4, 1, 5, 1, 2, 3, 1});
    CHECK(abra.n == 11);
    CHECK(abra.K == 5);
    CHECK(abra.occupancy(1) == 2);
    CHECK(abra.occupancy(2) == 2);
    CHECK(abra.occupancy(5) == 1);
    CHECK(abra.occupancy(3) == 0);

    const auto seen = profile(Message{1, 3}, SourceSpec::uniform(4));
    REQUIRE(seen.missing_mass);
    CHECK(*seen.missing_mass == 0.5);
}

TEST_CASE("profile identities on samples") {
    const EnvelopeDistribution d(parse_envelope("power:C=1,alpha=0.6"));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Message s = d.source().sample(500 + 37 * seed, seed);
        const auto prof = profile(s, d.source());
        std::uint64_t total = 0, distinct = 0;
        for (const auto& [r, kr] : prof.K_r) {
            total += r * kr;
            distinct += kr;
        }
        CHECK(total == s.size());
        CHECK(distinct == prof.K);
        CHECK(*prof.missing_mass >= 0.0);
        CHECK(*prof.missing_mass <= 1.0);
    }
}

TEST_CASE("expected occupancy examples") {
    const auto u2 = SourceSpec::uniform(2);
    CHECK(expected_K(u2, 2) == doctest::Approx(1.5));
    CHECK(expected_K1(u2, 2) == doctest::Approx(1.0));
    CHECK(expected_missing_mass(u2, 2) == doctest::Approx(0.25));
    CHECK(expected_K(u2, 0) == 0.0);
    CHECK(expected_missing_mass(SourceSpec::uniform(4), 1) == doctest::Approx(0.75));
    const auto pm = SourceSpec::point_mass();
    for (std::uint64_t n : {1u, 10u, 1000u}) {
        CHECK(expected_K(pm, n) == 1.0);
        CHECK(expected_missing_mass(pm, n) == 0.0);
    }
}

TEST_CASE("expected occupancy against enumeration") {
    const std::vector<std::vector<double>> pmfs{{0.5, 0.5}, {0.7, 0.2, 0.1}, {0.4, 0.3, 0.2, 0.1}};
    for (const auto& p : pmfs) {
        const auto spec = SourceSpec::finite(p);
        for (unsigned n = 1; n <= 6; ++n) {
            CAPTURE(n);
            const Exact e = enumerate(p, n);
            CHECK(expected_K(spec, n) == doctest::Approx(e.K).epsilon(1e-12));
            CHECK(expected_K1(spec, n) == doctest::Approx(e.K1).epsilon(1e-12));
            CHECK(expected_missing_mass(spec, n) == doctest::Approx(e.M).epsilon(1e-12));
        }
    }
}

TEST_CASE("expected K on infinite supports") {
    // geometric(s): sum_j 1 - (1 - s r^(j-1))^n summed directly to 10^6
    const double s = 0.05;
    const auto g = SourceSpec::geometric(s);
    for (std::uint64_t n : {10u, 1000u, 100000u}) {
        double acc = 0.0;
        for (int j = 1; j < 1000000; ++j) {
            const double p = s * std::pow(1 - s, j - 1);
            acc += -std::expm1(static_cast<double>(n) * std::log1p(-p));
        }
        CHECK(expected_K(g, n) == doctest::Approx(acc).epsilon(1e-10));
    }
    // Monte Carlo agreement, var(K_n) <= E K_{n,1}
    const EnvelopeDistribution d(parse_envelope("power:C=1,alpha=0.5"));
    const std::uint64_t n = 2000;
    const std::size_t T = 400;
    double mean = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const Message x = d.source().sample(n, t);
        mean += static_cast<double>(std::set<Symbol>(x.begin(), x.end()).size());
    }
    mean /= T;
    const double band = 4.0 * std::sqrt(expected_K1(d.source(), n) / T);
    CHECK(std::abs(mean - expected_K(d.source(), n)) <= band);
}

TEST_CASE("regular variation proxy") {
    const EnvelopeDistribution d(parse_envelope("power:C=1,alpha=0.5"));
    const double n = 1e6;
    const double ratio = expected_K(d.source(), 1000000) /
                         static_cast<double>(counting_function(d, 1.0 / n));
    CHECK(std::abs(ratio / std::tgamma(0.5) - 1.0) < 0.1);
}

TEST_CASE("occupancy lemma holds") {
    const EnvelopeDistribution geom(parse_envelope("geom:C=2,q=0.5"));
    const EnvelopeDistribution power(parse_envelope("power:C=1,alpha=0.5"));
    const std::vector<SourceSpec> sources{geom.source(), power.source(), make_class_member(power, 9),
                                          SourceSpec::uniform(8), SourceSpec::geometric(2.0 / 3.0),
                                          SourceSpec::point_mass()};
    MonteCarloOptions mc;
    mc.trials = 500;
    for (std::size_t s = 0; s < sources.size(); ++s) {
        for (std::uint64_t n : {1u, 2u, 10u, 100u, 1000u}) {
            CAPTURE(s);
            CAPTURE(n);
            const auto report = evaluate_occupancy_lemma(sources[s], n, mc);
            CHECK(report.rows.size() == 6);
            for (const auto& row : report.rows) {
                CAPTURE(row.lemma);
                CHECK(row.holds());
            }
            CHECK_NOTHROW(check_occupancy_lemma(sources[s], n, mc));
        }
    }
}

TEST_CASE("inverse distinct product") {
    // Geometric with success 2/3 at n = 2: P(K=1) = sum p^2 = 1/2, so
    // E K E[1/K] = (3/2)(3/4) = 9/8.
    const auto g = SourceSpec::geometric(2.0 / 3.0);
    const double ek = expected_K(g, 2);
    CHECK(ek == doctest::Approx(1.5).epsilon(1e-14));
    const auto inv = estimate_inverse_K(g, 2, 20000, 1);
    CHECK(std::abs(inv.mean - 0.75) <= 4 * inv.std_error);
    CHECK(std::abs(ek * inv.mean - 9.0 / 8.0) <= 4 * ek * inv.std_error);

    const auto enumerated = enumerate({0.5, 0.5}, 3);
    CHECK(enumerated.K * enumerated.invK >= 1.0);

    const auto pm = estimate_inverse_K(SourceSpec::point_mass(), 50, 100, 2);
    CHECK(pm.mean == 1.0);
    CHECK(pm.std_error == 0.0);
}

TEST_CASE("binomial inverse lemma") {
    const LemmaRow one = evaluate_binomial_inverse(1, 0.5);
    CHECK(one.lhs == doctest::Approx(2.0));
    CHECK(one.rhs == doctest::Approx(38.0));
    CHECK(check_binomial_inverse_lemma(100, 0.3) > 0.0);

    // brute force for small n
    for (std::uint64_t n : {1u, 3u, 7u}) {
        for (double p : {0.1, 0.5, 0.9}) {
            double num = 0.0;
            double pos = 0.0;
            for (std::uint64_t k = 1; k <= n; ++k) {
                double c = 1.0;
                for (std::uint64_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
                const double pk = c * std::pow(p, static_cast<double>(k)) * std::pow(1 - p, static_cast<double>(n - k));
                num += pk / (static_cast<double>(k) - 0.5);
                pos += pk;
            }
            CHECK(evaluate_binomial_inverse(n, p).lhs == doctest::Approx(num / pos).epsilon(1e-12));
        }
    }

    int violations = 0;
    for (std::uint64_t n = 1; n <= 200; ++n) {
        for (int k = 1; k <= 99; ++k) {
            if (!evaluate_binomial_inverse(n, k / 100.0).holds()) ++violations;
        }
    }
    CHECK(violations == 0);
    CHECK_THROWS_AS(evaluate_binomial_inverse(0, 0.5), DomainError);
    CHECK_THROWS_AS(evaluate_binomial_inverse(10, 1.0), DomainError);
}

TEST_CASE("poisson tail") {
    int violations = 0;
    for (double lambda : {0.1, 0.5, 1.0, 3.0, 10.0, 50.0, 200.0}) {
        for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
            const LemmaRow row = evaluate_poisson_tail(lambda, t);
            if (!row.holds()) ++violations;
        }
    }
    CHECK(violations == 0);
    // P(N >= 1) for lambda = 1 is 1 - e^-1
    CHECK(evaluate_poisson_tail(1.0, 0.0).lhs == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("violations are reported") {
    LemmaReport report;
    report.rows.push_back({"made_up", 3, "", 2.0, 1.0});
    CHECK_FALSE(report.all_hold());
    CHECK_THROWS_AS(report.require(), LemmaViolation);
    CHECK(report.rows[0].slack() == -1.0);
}
