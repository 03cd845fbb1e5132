#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pcc/source.hpp"

namespace pcc {

// f(j) = C q^j
struct Geometric {
    double C;
    double q;
};

// f(j) = min(1, C j^(-1/alpha))
struct PowerLaw {
    double C;
    double alpha;
};

// f(j) = C exp(-Cp j^beta)
struct StretchedExp {
    double C;
    double Cp;
    double beta;
};

// f(j) = values[j-1], zero beyond the list
struct Explicit {
    std::vector<double> values;
};

using EnvelopeFamily = std::variant<Geometric, PowerLaw, StretchedExp, Explicit>;

// A non-increasing envelope f : N+ -> (0,1] with 1 < sum_j f(j) < infinity.
// Immutable once constructed.
class Envelope {
public:
    // Throws InvalidEnvelope when parameters, range, or total mass are off.
    static Envelope make(EnvelopeFamily family);

    double operator()(std::uint64_t j) const;
    double total_mass() const { return total_mass_; }
    const EnvelopeFamily& family() const { return family_; }
    // Analytic law that agrees with f(j) for every j beyond the explicit part.
    const TailLaw& law() const { return law_; }
    // Canonical spec string, e.g. "geom:C=2,q=0.5".
    std::string describe() const;

private:
    Envelope(EnvelopeFamily family, TailLaw law) : family_(std::move(family)), law_(law) {}

    EnvelopeFamily family_;
    TailLaw law_;
    double total_mass_ = 0.0;
};

// Parses "geom:C=2,q=0.5", "power:C=1,alpha=0.5", "sexp:C=1,Cp=1,beta=1" or
// "explicit:p1,p2,...".
Envelope parse_envelope(std::string_view spec);

// The envelope distribution: all mass below ell_f is pushed onto ell_f - 1.
//   ell_f = min{l >= 1 : sum_{j>=l} f(j) <= 1}
//   F(k)  = 1 - sum_{j>k} f(j) when k+1 >= ell_f, 0 otherwise
//   f_j   = F(j) - F(j-1)
class EnvelopeDistribution {
public:
    explicit EnvelopeDistribution(const Envelope& env);

    std::uint64_t ell_f() const { return ell_f_; }
    double cdf(std::uint64_t k) const;
    double pmf(std::uint64_t j) const { return source_.pmf(j); }
    const Envelope& envelope() const { return *envelope_; }
    // The envelope probabilities as a sampleable source.
    const SourceSpec& source() const { return source_; }

private:
    std::shared_ptr<const Envelope> envelope_;
    std::uint64_t ell_f_ = 1;
    SourceSpec source_;
};

// Random member of C(f): atoms ell_f .. ell_f+depth-1 of the envelope
// distribution are scaled down by independent factors in [1-strength, 1] and
// the removed mass is deposited on symbols below ell_f, where f(j) - f_j > 0.
// The result sums to 1 and satisfies p_j <= f(j) everywhere.
SourceSpec make_class_member(const EnvelopeDistribution& dist, std::uint64_t seed,
                             std::size_t depth = 64, double strength = 0.9);

// |{j : p_j >= x}|
std::uint64_t counting_function(const SourceSpec& spec, double x);
std::uint64_t counting_function(const EnvelopeDistribution& dist, double x);

// nu_1[0,x] = sum_j p_j 1{p_j <= x}
double nu1_mass(const SourceSpec& spec, double x);
double nu1_mass(const EnvelopeDistribution& dist, double x);

// nu_1(0,x) = sum_j p_j 1{p_j < x}
double nu1_mass_open(const SourceSpec& spec, double x);

}  // namespace pcc
