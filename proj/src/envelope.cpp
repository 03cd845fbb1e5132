#include "pcc/envelope.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "pcc/error.hpp"
#include "pcc/numeric.hpp"

namespace pcc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Sum of f(j) over j >= from.
double envelope_tail_from(const Envelope& env, std::uint64_t from) {
    if (const auto* ex = std::get_if<Explicit>(&env.family())) {
        CompensatedSum acc;
        for (std::size_t j = from; j <= ex->values.size(); ++j) acc += ex->values[j - 1];
        return acc.value();
    }
    return law_tail_mass(env.law(), from - 1);
}

double parse_number(std::string_view text, std::string_view spec) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw InvalidEnvelope("cannot parse number '" + std::string(text) + "' in '" +
                              std::string(spec) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

Envelope Envelope::make(EnvelopeFamily family) {
    TailLaw law;
    std::visit(overloaded{
                   [&](const Geometric& g) {
                       if (!(g.C > 0.0) || !(g.q > 0.0 && g.q < 1.0)) {
                           throw InvalidEnvelope("geometric needs C > 0 and q in (0,1)");
                       }
                       if (g.C * g.q > 1.0) throw InvalidEnvelope("f(1) = C q exceeds 1");
                       law = {TailLaw::Kind::geometric, g.C, g.q, 0.0};
                   },
                   [&](const PowerLaw& p) {
                       if (!(p.C > 0.0) || !(p.alpha > 0.0 && p.alpha < 1.0)) {
                           throw InvalidEnvelope("power law needs C > 0 and alpha in (0,1)");
                       }
                       law = {TailLaw::Kind::power, p.C, 0.0, 1.0 / p.alpha};
                   },
                   [&](const StretchedExp& s) {
                       if (!(s.C > 0.0) || !(s.Cp > 0.0) || !(s.beta > 0.0)) {
                           throw InvalidEnvelope("stretched exponential needs C, Cp, beta > 0");
                       }
                       if (s.C * std::exp(-s.Cp) > 1.0) {
                           throw InvalidEnvelope("f(1) = C exp(-Cp) exceeds 1");
                       }
                       law = {TailLaw::Kind::stretched_exp, s.C, s.Cp, s.beta};
                   },
                   [&](const Explicit& e) {
                       if (e.values.empty()) throw InvalidEnvelope("explicit envelope is empty");
                       for (std::size_t i = 0; i < e.values.size(); ++i) {
                           const double v = e.values[i];
                           if (!(v > 0.0 && v <= 1.0)) {
                               throw InvalidEnvelope("explicit values must lie in (0,1]");
                           }
                           if (i > 0 && v > e.values[i - 1]) {
                               throw InvalidEnvelope("explicit values must be non-increasing");
                           }
                       }
                   },
               },
               family);
    Envelope env(std::move(family), law);
    try {
        env.total_mass_ = envelope_tail_from(env, 1);
    } catch (const UnboundedSum& e) {
        throw InvalidEnvelope(std::string("total mass not finite: ") + e.what());
    }
    if (!(env.total_mass_ > 1.0)) {
        throw InvalidEnvelope("total mass " + format_double(env.total_mass_) + " is not above 1");
    }
    return env;
}

double Envelope::operator()(std::uint64_t j) const {
    if (j == 0) return 0.0;
    if (const auto* ex = std::get_if<Explicit>(&family_)) {
        return j <= ex->values.size() ? ex->values[j - 1] : 0.0;
    }
    return law_.at(static_cast<double>(j));
}

std::string Envelope::describe() const {
    return std::visit(
        overloaded{
            [](const Geometric& g) {
                return "geom:C=" + format_double(g.C) + ",q=" + format_double(g.q);
            },
            [](const PowerLaw& p) {
                return "power:C=" + format_double(p.C) + ",alpha=" + format_double(p.alpha);
            },
            [](const StretchedExp& s) {
                return "sexp:C=" + format_double(s.C) + ",Cp=" + format_double(s.Cp) +
                       ",beta=" + format_double(s.beta);
            },
            [](const Explicit& e) {
                std::string out = "explicit:";
                for (std::size_t i = 0; i < e.values.size(); ++i) {
                    if (i) out += ',';
                    out += format_double(e.values[i]);
                }
                return out;
            },
        },
        family_);
}

Envelope parse_envelope(std::string_view spec) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidEnvelope("expected '<family>:<params>' in '" + std::string(spec) + "'");
    }
    const auto name = spec.substr(0, colon);
    const auto params = split(spec.substr(colon + 1), ',');
    if (name == "explicit") {
        Explicit e;
        for (auto p : params) e.values.push_back(parse_number(p, spec));
        return Envelope::make(std::move(e));
    }
    std::map<std::string, double, std::less<>> kv;
    for (auto p : params) {
        const auto eq = p.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidEnvelope("expected key=value in '" + std::string(spec) + "'");
        }
        kv[std::string(p.substr(0, eq))] = parse_number(p.substr(eq + 1), spec);
    }
    auto take = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw InvalidEnvelope(std::string("missing parameter ") + key + " in '" +
                                  std::string(spec) + "'");
        }
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    auto done = [&](Envelope env) {
        if (!kv.empty()) throw InvalidEnvelope("unknown parameter " + kv.begin()->first);
        return env;
    };
    if (name == "geom") {
        const double C = take("C");
        const double q = take("q");
        return done(Envelope::make(Geometric{C, q}));
    }
    if (name == "power") {
        const double C = take("C");
        const double alpha = take("alpha");
        return done(Envelope::make(PowerLaw{C, alpha}));
    }
    if (name == "sexp") {
        const double C = take("C");
        const double Cp = take("Cp");
        const double beta = take("beta");
        return done(Envelope::make(StretchedExp{C, Cp, beta}));
    }
    throw InvalidEnvelope("unknown envelope family '" + std::string(name) + "'");
}

namespace {

struct DistributionParts {
    std::uint64_t ell_f;
    std::uint64_t offset;
    std::vector<double> head;
    TailLaw tail;
};

DistributionParts build_distribution(const Envelope& env) {
    // The tail sum from l is non-increasing in l and exceeds 1 at l = 1.
    auto heavy = [&](std::uint64_t l) { return envelope_tail_from(env, l) > 1.0; };
    std::uint64_t lo = 1;
    std::uint64_t hi = 2;
    while (heavy(hi)) {
        if (hi >= kMaxSymbol / 2) throw InvalidEnvelope("cutoff index beyond 2^62");
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (heavy(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const std::uint64_t ell = hi;

    DistributionParts parts;
    parts.ell_f = ell;
    parts.offset = ell - 2;
    const auto* ex = std::get_if<Explicit>(&env.family());
    const std::uint64_t last = ex ? ex->values.size() : ell;
    parts.head.assign(last - parts.offset, 0.0);
    parts.head[0] = 1.0 - envelope_tail_from(env, ell);
    for (std::uint64_t j = ell; j <= last; ++j) parts.head[j - parts.offset - 1] = env(j);
    parts.tail = ex ? TailLaw{} : env.law();
    return parts;
}

}  // namespace

EnvelopeDistribution::EnvelopeDistribution(const Envelope& env)
    : envelope_(std::make_shared<const Envelope>(env)),
      source_([&] {
          auto parts = build_distribution(env);
          ell_f_ = parts.ell_f;
          return SourceSpec::with_tail(std::move(parts.head), parts.tail, envelope_, parts.offset);
      }()) {}

double EnvelopeDistribution::cdf(std::uint64_t k) const {
    if (k + 1 < ell_f_) return 0.0;
    return 1.0 - source_.mass_after(k);
}

SourceSpec make_class_member(const EnvelopeDistribution& dist, std::uint64_t seed,
                             std::size_t depth, double strength) {
    const Envelope& env = dist.envelope();
    const SourceSpec& base = dist.source();
    const std::uint64_t ell = dist.ell_f();
    // Atoms lo .. ell-1 receive mass, atoms ell .. ell+depth-1 give it up.
    const std::uint64_t lo = ell - 1 - std::min<std::uint64_t>(ell - 2, depth);
    std::uint64_t last = ell + depth - 1;
    if (base.finite_support()) last = std::min(last, base.head_size());
    last = std::max(last, base.head_size());
    const std::uint64_t offset = lo - 1;

    std::vector<double> head(last - offset);
    auto at = [&](std::uint64_t j) -> double& { return head[j - offset - 1]; };
    for (std::uint64_t j = lo; j <= last; ++j) at(j) = base.pmf(j);

    Rng rng(seed);
    std::vector<double> removal(head.size(), 0.0);
    CompensatedSum removed;
    const std::uint64_t give_end = std::min<std::uint64_t>(last, ell + depth - 1);
    for (std::uint64_t j = ell; j <= give_end; ++j) {
        removal[j - offset - 1] = at(j) * strength * uniform01(rng);
        removed += removal[j - offset - 1];
    }
    double slack_total = 0.0;
    for (std::uint64_t j = lo; j < ell; ++j) slack_total += env(j) - at(j);
    const double scale = removed.value() > slack_total ? slack_total / removed.value() : 1.0;

    CompensatedSum moved;
    for (std::uint64_t j = ell; j <= give_end; ++j) {
        const double cut = removal[j - offset - 1] * scale;
        at(j) -= cut;
        moved += cut;
    }
    double deposit = moved.value();
    for (std::uint64_t j = ell - 1; j >= lo && deposit > 0.0; --j) {
        const double room = env(j) - at(j);
        const double put = std::min(room, deposit);
        at(j) += put;
        deposit -= put;
    }
    // Any rounding residue goes back where it came from.
    if (deposit > 0.0) at(ell) += deposit;

    return SourceSpec::with_tail(std::move(head), base.tail(),
                                 std::make_shared<const Envelope>(env), offset);
}

std::uint64_t counting_function(const SourceSpec& spec, double x) { return spec.count_at_least(x); }

std::uint64_t counting_function(const EnvelopeDistribution& dist, double x) {
    return dist.source().count_at_least(x);
}

double nu1_mass(const SourceSpec& spec, double x) { return spec.mass_at_most(x, true); }

double nu1_mass(const EnvelopeDistribution& dist, double x) {
    return dist.source().mass_at_most(x, true);
}

double nu1_mass_open(const SourceSpec& spec, double x) { return spec.mass_at_most(x, false); }

}  // namespace pcc
