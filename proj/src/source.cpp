#include "pcc/source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "pcc/error.hpp"

namespace pcc {

namespace {

constexpr std::uint64_t kDirectTerms = std::uint64_t{1} << 16;
// Beyond this a light tail contributes nothing representable.
constexpr double kNegligibleMass = 1e-30;
// Power tails keep this many tail atoms in the sampling table and sample the
// rest by rejection.
constexpr std::uint64_t kPowerTableAtoms = std::uint64_t{1} << 16;
constexpr std::uint64_t kSearchCap = kMaxSymbol;

// Largest j in [lo, kSearchCap] with pred(j) true, given pred(lo) is true and
// pred is monotone (true ... true false ... false).
template <class Pred>
std::uint64_t last_true(std::uint64_t lo, Pred pred) {
    std::uint64_t hi = lo;
    for (;;) {
        if (hi >= kSearchCap / 2) {
            hi = kSearchCap;
            if (pred(hi)) return hi;
            break;
        }
        hi = 2 * hi + 1;
        if (!pred(hi)) break;
        lo = hi;
    }
    // pred(lo) true, pred(hi) false
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double integrate_remainder(const TailLaw& law, double from, const TermFn& h) {
    auto g = [&](double x) -> double {
        if (!std::isfinite(x)) return 0.0;
        const double p = law.at(x);
        return p > 0.0 ? h(x, p) : 0.0;
    };
    // x = from * e^u turns algebraic decay into exponential decay in u.
    auto integrand = [&](double u) -> double {
        const double x = from * std::exp(u);
        if (!std::isfinite(x)) return 0.0;
        const double v = x * g(x);
        return std::isfinite(v) ? v : 0.0;
    };
    boost::math::quadrature::exp_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    double value = 0.0;
    try {
        value = integrator.integrate(integrand, 1e-12, &error, &l1);
    } catch (const std::exception& e) {
        throw UnboundedSum(std::string("tail integral failed: ") + e.what());
    }
    if (!std::isfinite(value) || error > 1e-9 * std::max(l1, 1e-300) + 1e-15) {
        throw UnboundedSum("tail integral did not converge");
    }
    const double slope = (g(from + 0.25) - g(from - 0.25)) / 0.5;
    return value + slope / 24.0;
}

}  // namespace

double TailLaw::at(double x) const {
    switch (kind) {
        case Kind::none:
            return 0.0;
        case Kind::geometric:
            return scale * std::pow(rate, x);
        case Kind::power:
            return std::min(1.0, scale * std::pow(x, -exponent));
        case Kind::stretched_exp:
            return scale * std::exp(-rate * std::pow(x, exponent));
    }
    return 0.0;
}

double law_tail_sum(const TailLaw& law, std::uint64_t after, const TermFn& h) {
    if (law.kind == TailLaw::Kind::none) return 0.0;
    CompensatedSum acc;
    const std::uint64_t end = after + kDirectTerms;
    for (std::uint64_t j = after + 1; j <= end; ++j) {
        const double p = law.at(static_cast<double>(j));
        if (p <= 0.0) return acc.value();
        acc += h(static_cast<double>(j), p);
        if (law.light() && p < kNegligibleMass) return acc.value();
    }
    acc += integrate_remainder(law, static_cast<double>(end) + 0.5, h);
    return acc.value();
}

double law_tail_mass(const TailLaw& law, std::uint64_t after) {
    if (law.kind == TailLaw::Kind::geometric) {
        return law.scale * std::pow(law.rate, static_cast<double>(after + 1)) / (1.0 - law.rate);
    }
    return law_tail_sum(law, after, [](double, double p) { return p; });
}

// Lazily grown cumulative table used by sample(); entry k covers atoms up to
// offset + k + 1. Published snapshots are immutable; growth swaps in a longer
// copy under the mutex.
struct SourceSpec::Table {
    std::mutex mu;
    std::shared_ptr<const std::vector<double>> cdf;
    bool saturated = false;
};

SourceSpec SourceSpec::build(std::vector<double> head, TailLaw tail,
                             std::shared_ptr<const Envelope> envelope, std::uint64_t offset) {
    for (double p : head) {
        if (!(p >= 0.0) || p > 1.0) throw InvalidSource("atom outside [0,1]");
    }
    if (offset > kMaxSymbol) throw InvalidSource("head offset above 2^62");
    auto state = std::make_shared<State>();
    state->offset = offset;
    state->head = std::move(head);
    state->tail = tail;
    state->envelope = std::move(envelope);
    state->table = std::make_shared<Table>();
    return SourceSpec(std::move(state));
}

SourceSpec SourceSpec::finite(std::vector<double> pmf) {
    CompensatedSum total;
    for (double p : pmf) total += p;
    if (pmf.empty() || std::abs(total.value() - 1.0) > 1e-12) {
        throw InvalidSource("finite pmf must sum to 1");
    }
    return build(std::move(pmf), TailLaw{}, nullptr);
}

SourceSpec SourceSpec::uniform(std::uint64_t k) {
    if (k == 0) throw InvalidSource("uniform source needs k >= 1");
    return finite(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

SourceSpec SourceSpec::point_mass() { return finite({1.0}); }

SourceSpec SourceSpec::geometric(double success) {
    if (!(success > 0.0 && success < 1.0)) {
        throw InvalidSource("geometric success probability must lie in (0,1)");
    }
    TailLaw law;
    law.kind = TailLaw::Kind::geometric;
    law.rate = 1.0 - success;
    law.scale = success / (1.0 - success);
    return build({}, law, nullptr);
}

SourceSpec SourceSpec::with_tail(std::vector<double> head, TailLaw tail,
                                 std::shared_ptr<const Envelope> envelope, std::uint64_t offset) {
    return build(std::move(head), tail, std::move(envelope), offset);
}

double SourceSpec::pmf(Symbol j) const {
    const std::uint64_t offset = state_->offset;
    if (j <= offset) return 0.0;
    const auto& head = state_->head;
    if (j - offset <= head.size()) return head[j - offset - 1];
    return state_->tail.at(static_cast<double>(j));
}

double SourceSpec::sum_after(std::uint64_t after, const TermFn& h) const {
    const auto& head = state_->head;
    const std::uint64_t offset = state_->offset;
    CompensatedSum acc;
    for (std::uint64_t j = std::max(after, offset) + 1; j <= head_size(); ++j) {
        const double p = head[j - offset - 1];
        if (p > 0.0) acc += h(static_cast<double>(j), p);
    }
    acc += law_tail_sum(state_->tail, std::max(after, head_size()), h);
    return acc.value();
}

double SourceSpec::mass_after(std::uint64_t after) const {
    const auto& head = state_->head;
    const std::uint64_t offset = state_->offset;
    CompensatedSum acc;
    for (std::uint64_t j = std::max(after, offset) + 1; j <= head_size(); ++j) {
        acc += head[j - offset - 1];
    }
    acc += law_tail_mass(state_->tail, std::max(after, head_size()));
    return acc.value();
}

std::uint64_t SourceSpec::count_at_least(double x) const {
    if (!(x > 0.0)) throw DomainError("counting function needs x > 0");
    const auto& head = state_->head;
    std::uint64_t count = 0;
    for (double p : head) count += p >= x ? 1 : 0;
    const auto& law = state_->tail;
    const std::uint64_t first = head_size() + 1;
    if (law.kind == TailLaw::Kind::none || law.at(static_cast<double>(first)) < x) return count;
    const std::uint64_t last =
        last_true(first, [&](std::uint64_t j) { return law.at(static_cast<double>(j)) >= x; });
    return count + (last - first + 1);
}

double SourceSpec::mass_at_most(double x, bool inclusive) const {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("nu1 needs x in [0,1]");
    auto small = [&](double p) { return inclusive ? p <= x : p < x; };
    const auto& head = state_->head;
    CompensatedSum acc;
    for (double p : head) {
        if (small(p)) acc += p;
    }
    const auto& law = state_->tail;
    if (law.kind == TailLaw::Kind::none) return acc.value();
    const std::uint64_t first = head_size() + 1;
    std::uint64_t begin = first;
    if (!small(law.at(static_cast<double>(first)))) {
        const std::uint64_t last_big = last_true(
            first, [&](std::uint64_t j) { return !small(law.at(static_cast<double>(j))); });
        begin = last_big + 1;
    }
    acc += law_tail_mass(law, begin - 1);
    return acc.value();
}

std::shared_ptr<const std::vector<double>> SourceSpec::cdf_covering(double u) const {
    auto& table = *state_->table;
    std::lock_guard<std::mutex> lock(table.mu);
    const auto& head = state_->head;
    const auto& law = state_->tail;
    const std::uint64_t cap = law.kind == TailLaw::Kind::none ? head.size()
                              : law.kind == TailLaw::Kind::power
                                  ? head.size() + kPowerTableAtoms
                                  : kMaxSymbol;
    auto current = table.cdf;
    if (current && (current->back() > u || table.saturated || current->size() >= cap)) {
        return current;
    }
    std::vector<double> next = current ? *current : std::vector<double>{};
    std::uint64_t target = std::max<std::uint64_t>({head.size(), 64, 2 * next.size()});
    for (;;) {
        target = std::min(target, cap);
        double cum = next.empty() ? 0.0 : next.back();
        while (next.size() < target) {
            cum += pmf(state_->offset + next.size() + 1);
            next.push_back(cum);
        }
        if (next.back() > u || next.size() >= cap) break;
        if (law.kind != TailLaw::Kind::power && law_tail_mass(law, state_->offset + next.size()) < 0x1.0p-60) {
            table.saturated = true;
            break;
        }
        target = 2 * next.size();
    }
    table.cdf = std::make_shared<const std::vector<double>>(std::move(next));
    return table.cdf;
}

Symbol SourceSpec::sample_power_tail(std::uint64_t after, Rng& rng) const {
    const double s = state_->tail.exponent;
    const double from = static_cast<double>(after) + 0.5;
    for (;;) {
        const double u = 1.0 - uniform01(rng);
        const double y = from * std::pow(u, -1.0 / (s - 1.0));
        if (!(y < static_cast<double>(kMaxSymbol))) continue;
        const double j = std::floor(y + 0.5);
        // j^-s over the mass of the continuous proposal on [j-1/2, j+1/2];
        // at most 1 because y^-s is convex.
        const double half = 0.5 / j;
        const double width = std::expm1((1.0 - s) * std::log1p(-half)) -
                             std::expm1((1.0 - s) * std::log1p(half));
        const double accept = (s - 1.0) / (j * width);
        if (uniform01(rng) < accept) return static_cast<Symbol>(j);
    }
}

Message SourceSpec::sample(std::size_t n, std::uint64_t seed) const {
    Message out(n);
    if (n == 0) return out;
    Rng rng(seed);
    const std::uint64_t offset = state_->offset;
    auto cdf = cdf_covering(0.0);
    const bool power_tail = state_->tail.kind == TailLaw::Kind::power;
    const std::uint64_t power_cap = state_->head.size() + kPowerTableAtoms;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform01(rng);
        if (u >= cdf->back()) {
            if (power_tail && cdf->size() >= power_cap) {
                out[i] = sample_power_tail(offset + cdf->size(), rng);
                continue;
            }
            cdf = cdf_covering(u);
            if (power_tail && u >= cdf->back() && cdf->size() >= power_cap) {
                out[i] = sample_power_tail(offset + cdf->size(), rng);
                continue;
            }
            if (u >= cdf->back()) {
                // Rounding gap at the top of a saturated table.
                std::size_t k = cdf->size() - 1;
                while (k > 0 && (*cdf)[k] == (*cdf)[k - 1]) --k;
                out[i] = offset + k + 1;
                continue;
            }
        }
        const auto it = std::upper_bound(cdf->begin(), cdf->end(), u);
        out[i] = offset + static_cast<Symbol>(it - cdf->begin()) + 1;
    }
    return out;
}

}  // namespace pcc
