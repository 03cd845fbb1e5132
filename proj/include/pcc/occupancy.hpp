#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pcc/numeric.hpp"
#include "pcc/source.hpp"
#include "pcc/symbol.hpp"

namespace pcc {

// Occupancy counts of a sample: the type N_n^j, the profile K_{n,r} and the
// number of distinct symbols K_n.
struct OccupancyProfile {
    std::uint64_t n = 0;
    std::unordered_map<Symbol, std::uint64_t> counts;
    std::uint64_t K = 0;
    std::map<std::uint64_t, std::uint64_t> K_r;
    // Sum of p_j over unseen j; only when the source is known.
    std::optional<double> missing_mass;

    std::uint64_t occupancy(std::uint64_t r) const {
        const auto it = K_r.find(r);
        return it == K_r.end() ? 0 : it->second;
    }
};

OccupancyProfile profile(std::span<const Symbol> sequence);
OccupancyProfile profile(std::span<const Symbol> sequence, const SourceSpec& spec);

// E K_n = sum_j (1 - (1-p_j)^n)
double expected_K(const SourceSpec& spec, std::uint64_t n);
// E K_{n,1} = sum_j n p_j (1-p_j)^(n-1)
double expected_K1(const SourceSpec& spec, std::uint64_t n);
// E M_{n,0} = sum_j p_j (1-p_j)^n
double expected_missing_mass(const SourceSpec& spec, std::uint64_t n);

struct InverseKEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Monte Carlo estimate of E[1/K_n] over `trials` samples; trial t uses
// trial_seed(seed, t). Each trial contributes 1/K + (K - E K_n)/(E K_n)^2,
// which has the same mean as 1/K and less variance. Throws DomainError for
// n = 0.
InverseKEstimate estimate_inverse_K(const SourceSpec& spec, std::uint64_t n, std::size_t trials,
                                    std::uint64_t seed);

// One checked inequality lhs <= rhs. Rows follow the lemma CSV schema
// `lemma,n,param,lhs,rhs,slack,status`.
struct LemmaRow {
    std::string lemma;
    std::uint64_t n = 0;
    std::string param;
    double lhs = 0.0;
    double rhs = 0.0;

    double slack() const { return rhs - lhs; }
    // Holds up to floating-point rounding of the two sides.
    bool holds() const;
};

struct LemmaReport {
    std::vector<LemmaRow> rows;

    bool all_hold() const;
    // Throws LemmaViolation naming the first failing row.
    void require() const;
};

struct MonteCarloOptions {
    std::size_t trials = 2000;
    std::uint64_t seed = kDefaultSeed;
    double sigmas = 3.0;
};

// Missing mass, singletons and distinct symbols:
//   (i)   E M_{n,0} <= E K_{n,1}/n <= E K_n/n
//   (ii)  (e-1)/e nu(1/n) <= E K_n <= nu(1/n) + n nu_1(0,1/n)
//   (iii) 1 <= E K_n E[1/K_n] <= 3, with a Monte Carlo margin for E[1/K_n]
LemmaReport evaluate_occupancy_lemma(const SourceSpec& spec, std::uint64_t n,
                                     const MonteCarloOptions& options = {});
LemmaReport check_occupancy_lemma(const SourceSpec& spec, std::uint64_t n,
                                  const MonteCarloOptions& options = {});

// E[1/(N - 1/2) | N > 0] <= (1/(np)) (1 + 9/(np)) for N ~ Binomial(n, p),
// the left side summed exactly over k = 1..n.
LemmaRow evaluate_binomial_inverse(std::uint64_t n, double p);
// Returns the slack; throws LemmaViolation when negative.
double check_binomial_inverse_lemma(std::uint64_t n, double p);

// P(N >= lambda + t) <= exp(-t^2 / (2 (lambda + t/3))) for N ~ Poisson(lambda),
// the left side by exact summation of the pmf.
LemmaRow evaluate_poisson_tail(double lambda, double t);
double check_poisson_tail(double lambda, double t);

}  // namespace pcc
