#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcc/envelope.hpp"
#include "pcc/numeric.hpp"
#include "pcc/source.hpp"
#include "pcc/symbol.hpp"

namespace pcc {

// R_f(n) = sum over j with f_j >= 1/n of (1/2) log2(n f_j), equal to
// log2(e) * integral_1^n nu(1/t) / (2t) dt.
double r_f(const EnvelopeDistribution& dist, std::uint64_t n);

struct UpperTerms {
    double integral = 0.0;
    // log2(e) nu(1/n)
    double count_term = 0.0;
    // log2(e) n nu_1[0,1/n]
    double small_mass_term = 0.0;
    // ell_f log2 n, without the unknown multiplicative constant.
    double head_term = 0.0;
};

struct LowerCandidates {
    // floor(n - n^(2/3)), at least 1
    std::uint64_t m = 1;
    // R_f(m) - 5 nu(1/m) - 1
    double integral = 0.0;
    // E K_n under the envelope distribution; the true bound subtracts an
    // unspecified constant.
    double occupancy = 0.0;

    double indicative() const { return integral > occupancy ? integral : occupancy; }
};

struct RedundancyBoundReport {
    std::uint64_t n = 0;
    double r_f = 0.0;
    std::optional<UpperTerms> upper;
    std::optional<LowerCandidates> lower;
};

// Throws DomainError for n < 1.
RedundancyBoundReport theorem1_upper(const EnvelopeDistribution& dist, std::uint64_t n);
// Throws DomainError for n < 8.
RedundancyBoundReport theorem1_lower(const EnvelopeDistribution& dist, std::uint64_t n);
// Upper terms always, lower candidates when n >= 8.
RedundancyBoundReport theorem1_report(const EnvelopeDistribution& dist, std::uint64_t n);

// Conditional expected instantaneous redundancy of the PC coding distribution
// after a prefix, split as
//   A = sum_j p_j log2 p_j + log2(i + (K+1)/2)
//   B = sum_{seen} p_j log2(1 / (N_j - 1/2))
//   C = sum_{unseen} p_j (1 + log2 j - log2(K + 1/2))
//   D = sum_{unseen} p_j (elias(j) - 1 - log2 j)
// where elias(j) is the idealized or the realized Elias length. All terms are
// in bits and total = A + B + C + D.
struct Decomposition {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double total = 0.0;
};

// Precomputes the prefix-independent sums of a source once, so that many
// prefixes can be evaluated cheaply. Throws UnboundedSum when a tail sum
// does not converge.
class InstantaneousRedundancy {
public:
    InstantaneousRedundancy(SourceSpec spec, bool idealized_elias);

    // Throws InvalidSymbol for 0 or for symbols outside the support.
    Decomposition operator()(std::span<const Symbol> prefix) const;

private:
    SourceSpec spec_;
    bool idealized_;
    double neg_entropy_ = 0.0;
    double p_log_j_ = 0.0;
    double p_extra_ = 0.0;
};

Decomposition instantaneous_decomposition(const SourceSpec& spec, std::span<const Symbol> prefix,
                                          bool idealized_elias = true);

struct EmpiricalTrial {
    std::uint64_t n = 0;
    std::uint64_t trial = 0;
    double code_bits = 0.0;
    double ideal_bits = 0.0;
    // -log2 P^n(x_1..x_n)
    double neg_log_p = 0.0;

    double redundancy_bits() const { return ideal_bits - neg_log_p; }
};

struct EmpiricalRedundancy {
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double mean_code_bits = 0.0;
    double mean_ideal_bits = 0.0;
    double mean_neg_log_p = 0.0;
    // mean of the per-trial differences ideal_bits - neg_log_p
    double redundancy_bits = 0.0;
    double std_error = 0.0;
    std::vector<EmpiricalTrial> rows;
};

// For each n, encodes `trials` samples (trial t seeded with trial_seed(seed, t))
// and aggregates in trial order. ideal_bits uses realized Elias lengths unless
// idealized_elias is set. Throws DomainError when trials == 0.
std::vector<EmpiricalRedundancy> empirical_redundancy(const SourceSpec& spec,
                                                      std::span<const std::uint64_t> n_grid,
                                                      std::size_t trials, std::uint64_t seed,
                                                      bool idealized_elias = false);

inline constexpr double kDistFreeKappa = 19.0;

struct DistFreeReport {
    std::uint64_t i = 0;
    std::size_t trials = 0;
    // Mean over trials of the exact conditional redundancy given the prefix.
    double lhs = 0.0;
    double lhs_std_error = 0.0;
    // kappa E K_i / i + sum_j p_j (1-p_j)^i (log2(j / E K_i) + 2 log2(log2 j + 1))
    double rhs = 0.0;
    double sigmas = 3.0;

    double slack() const { return rhs - (lhs + sigmas * lhs_std_error); }
};

// Throws DomainError for i < 1 or trials < 2.
DistFreeReport evaluate_distfree_bound(const SourceSpec& spec, std::uint64_t i, std::size_t trials,
                                       std::uint64_t seed = kDefaultSeed, double sigmas = 3.0);
// Returns the slack; throws BoundViolation when it is negative.
double check_distfree_bound(const SourceSpec& spec, std::uint64_t i, std::size_t trials,
                            std::uint64_t seed = kDefaultSeed);

}  // namespace pcc
