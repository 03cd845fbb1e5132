#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "pcc/numeric.hpp"
#include "pcc/symbol.hpp"

namespace pcc {

class Envelope;

// Closed-form law for the far tail of a distribution, evaluated on the reals
// so that tail sums can switch from direct summation to quadrature.
//   geometric      scale * rate^x
//   power          min(1, scale * x^-exponent)
//   stretched_exp  scale * exp(-rate * x^exponent)
struct TailLaw {
    enum class Kind { none, geometric, power, stretched_exp };

    Kind kind = Kind::none;
    double scale = 0.0;
    double rate = 0.0;
    double exponent = 0.0;

    double at(double x) const;

    // Decays faster than any power: direct summation terminates quickly.
    bool light() const { return kind == Kind::geometric || kind == Kind::stretched_exp; }
};

// Term function for tail sums: h(j, p_j). Only called with p_j > 0.
using TermFn = std::function<double(double j, double p)>;

// Sum of h(j, law(j)) over j > after. Sums the first 2^16 terms directly and,
// when the law has not died out, adds the remainder as a midpoint-corrected
// integral. Throws UnboundedSum when the remainder does not converge.
double law_tail_sum(const TailLaw& law, std::uint64_t after, const TermFn& h);

// Sum of law(j) over j > after.
double law_tail_mass(const TailLaw& law, std::uint64_t after);

// A memoryless source over the positive integers: zeros up to an offset, an
// explicit head p_{offset+1}..p_H and (optionally) an analytic tail
// p_j = law(j), j > H.
//
// Instances are cheap to copy; copies share the immutable pmf description and
// the lazily grown sampling table. The table only ever grows, and readers
// always see a consistent prefix of it.
class SourceSpec {
public:
    // Finite support p_1..p_k. The masses must be non-negative and sum to 1
    // within 1e-12.
    static SourceSpec finite(std::vector<double> pmf);
    static SourceSpec uniform(std::uint64_t k);
    static SourceSpec point_mass();
    // p_j = success * (1 - success)^(j-1).
    static SourceSpec geometric(double success);
    // Head plus analytic tail. The caller guarantees that head mass plus tail
    // mass equals 1 and that law is non-increasing beyond the head. head[0]
    // is p_{offset+1}; atoms up to offset are zero.
    static SourceSpec with_tail(std::vector<double> head, TailLaw tail,
                                std::shared_ptr<const Envelope> envelope = nullptr,
                                std::uint64_t offset = 0);

    double pmf(Symbol j) const;

    // Explicit atoms p_{head_offset()+1} .. p_{head_size()}.
    std::span<const double> head() const { return state_->head; }
    std::uint64_t head_offset() const { return state_->offset; }
    std::uint64_t head_size() const { return state_->offset + state_->head.size(); }
    const TailLaw& tail() const { return state_->tail; }
    bool finite_support() const { return state_->tail.kind == TailLaw::Kind::none; }
    const Envelope* envelope() const { return state_->envelope.get(); }

    // Sum of h(j, p_j) over atoms j > after with p_j > 0.
    double sum_after(std::uint64_t after, const TermFn& h) const;
    double sum_all(const TermFn& h) const { return sum_after(0, h); }
    // Sum of p_j over j > after.
    double mass_after(std::uint64_t after) const;

    // |{j : p_j >= x}|, x > 0.
    std::uint64_t count_at_least(double x) const;
    // Sum of p_j over atoms with p_j <= x (inclusive) or p_j < x.
    double mass_at_most(double x, bool inclusive = true) const;

    // n i.i.d. draws by inverse-CDF search; deterministic in seed.
    Message sample(std::size_t n, std::uint64_t seed) const;

private:
    struct Table;
    struct State {
        std::uint64_t offset = 0;
        std::vector<double> head;
        TailLaw tail;
        std::shared_ptr<const Envelope> envelope;
        std::shared_ptr<Table> table;
    };

    explicit SourceSpec(std::shared_ptr<const State> state) : state_(std::move(state)) {}
    static SourceSpec build(std::vector<double> head, TailLaw tail,
                            std::shared_ptr<const Envelope> envelope, std::uint64_t offset = 0);

    std::shared_ptr<const std::vector<double>> cdf_covering(double u) const;
    Symbol sample_power_tail(std::uint64_t after, Rng& rng) const;

    std::shared_ptr<const State> state_;
};

}  // namespace pcc
