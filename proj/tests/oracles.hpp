#pragma once

// Reference computations used by the tests. Each one is deliberately naive
// and shares no code with the library beyond its public types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pcc/envelope.hpp"
#include "pcc/symbol.hpp"

namespace oracle {

inline constexpr double kLog2E = 1.4426950408889634;

// Elias delta codeword of v + 1 as a string of '0'/'1'.
inline std::string elias_bits(std::uint64_t v) {
    const std::uint64_t w = v + 1;
    std::string w_bin;
    for (std::uint64_t x = w; x > 0; x >>= 1) w_bin.insert(w_bin.begin(), static_cast<char>('0' + (x & 1)));
    const std::uint64_t len = w_bin.size();
    std::string len_bin;
    for (std::uint64_t x = len; x > 0; x >>= 1) len_bin.insert(len_bin.begin(), static_cast<char>('0' + (x & 1)));
    return std::string(len_bin.size() - 1, '0') + len_bin + w_bin.substr(1);
}

// Atoms of the envelope distribution built straight from the definition:
// the atom at ell - 1 and every j >= ell with f(j) >= floor.
struct EnvelopeAtoms {
    std::uint64_t ell = 0;
    std::map<std::uint64_t, double> atoms;
};

// tail_from(l) must return sum_{j >= l} f(j).
inline EnvelopeAtoms envelope_atoms(const std::function<double(std::uint64_t)>& f,
                                    const std::function<double(std::uint64_t)>& tail_from,
                                    double floor) {
    EnvelopeAtoms out;
    std::uint64_t ell = 1;
    while (tail_from(ell) > 1.0) ++ell;
    out.ell = ell;
    if (ell >= 2) out.atoms[ell - 1] = 1.0 - tail_from(ell);
    for (std::uint64_t j = ell;; ++j) {
        const double p = f(j);
        if (p < floor || p <= 0.0) break;
        out.atoms[j] = p;
    }
    return out;
}

// Piecewise-constant integrand: splits an interval until its endpoint values
// agree or it is shorter than `width`. Exact for step functions away from
// the jumps; each jump contributes at most its height times `width`.
inline double integrate_steps(const std::function<double(double)>& g, double a, double b, double ga,
                              double gb, double width) {
    if (ga == gb) {
        const double m = 0.5 * (a + b);
        if (g(m) == ga) return ga * (b - a);
    }
    if (b - a < width) return 0.5 * (ga + gb) * (b - a);
    const double m = 0.5 * (a + b);
    const double gm = g(m);
    return integrate_steps(g, a, m, ga, gm, width) + integrate_steps(g, m, b, gm, gb, width);
}

// log2(e) * integral_1^n nu(1/t) / (2t) dt with nu counted from a list of
// atoms, integrated in u = ln t.
inline double r_f_by_quadrature(std::vector<double> probs, std::uint64_t n) {
    std::sort(probs.begin(), probs.end(), std::greater<>());
    auto nu = [&](double x) {
        return static_cast<double>(
            std::partition_point(probs.begin(), probs.end(), [x](double e) { return e >= x; }) -
            probs.begin());
    };
    const double top = std::log(static_cast<double>(n));
    if (top == 0.0) return 0.0;
    auto g = [&](double u) { return nu(std::exp(-u)) / 2.0; };
    const double value = integrate_steps(g, 0.0, top, g(0.0), g(top), 1e-13 * top);
    return kLog2E * value;
}

// Direct conditional redundancy sum_x p_x log2(p_x / Q(x | prefix)) of the
// PC coding distribution over a finite list of atoms p_1..p_k.
inline double direct_step_redundancy(const std::vector<double>& p, const pcc::Message& prefix,
                                     bool idealized) {
    std::map<pcc::Symbol, std::uint64_t> counts;
    for (pcc::Symbol s : prefix) ++counts[s];
    const double i = static_cast<double>(prefix.size());
    const double K = static_cast<double>(counts.size());
    const double denom = 2.0 * i + K + 1.0;
    double total = 0.0;
    for (std::size_t idx = 0; idx < p.size(); ++idx) {
        const double px = p[idx];
        if (px <= 0.0) continue;
        const pcc::Symbol j = idx + 1;
        double log_q;
        const auto it = counts.find(j);
        if (it != counts.end()) {
            log_q = std::log2((2.0 * static_cast<double>(it->second) - 1.0) / denom);
        } else {
            double len;
            if (idealized) {
                const double lj = j <= 1 ? 0.0 : std::log2(static_cast<double>(j));
                len = 1.0 + lj + 2.0 * std::log2(1.0 + lj);
            } else {
                len = static_cast<double>(elias_bits(j).size());
            }
            log_q = std::log2((2.0 * K + 1.0) / denom) - len;
        }
        total += px * (std::log2(px) - log_q);
    }
    return total;
}

// Censoring by a linear scan of the dictionary.
inline std::vector<std::uint64_t> censor_naive(const pcc::Message& m) {
    std::vector<pcc::Symbol> dict;
    std::vector<std::uint64_t> out;
    for (pcc::Symbol s : m) {
        const auto it = std::find(dict.begin(), dict.end(), s);
        if (it == dict.end()) {
            dict.push_back(s);
            out.push_back(0);
        } else {
            out.push_back(static_cast<std::uint64_t>(it - dict.begin()) + 1);
        }
    }
    return out;
}

// -log2 of the KT probabilities along the censored message plus the terminal
// escape, from counts recomputed at every step.
inline double kt_mixture_bits(const pcc::Message& m) {
    const auto ranks = censor_naive(m);
    std::vector<std::uint64_t> tilde{0};
    double bits = 0.0;
    std::uint64_t i = 0;
    auto step = [&](std::uint64_t r) {
        const std::uint64_t K = tilde.size() - 1;
        bits -= std::log2(static_cast<double>(2 * tilde[r] + 1) / static_cast<double>(2 * i + K + 1));
    };
    for (std::uint64_t r : ranks) {
        step(r);
        if (r == 0) {
            ++tilde[0];
            tilde.push_back(0);
        } else {
            ++tilde[r];
        }
        ++i;
    }
    step(0);
    return bits;
}

}  // namespace oracle
