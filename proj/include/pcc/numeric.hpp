#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <charconv>
#include <cstdint>
#include <string>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

namespace pcc {

inline constexpr double kLog2E = std::numbers::log2e;

// Seed used by every experiment unless the caller overrides it.
inline constexpr std::uint64_t kDefaultSeed = 20170615;

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Mean and standard error over a fixed-order sample.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
    double variance = 0.0;
};

inline SampleStats sample_stats(const std::vector<double>& xs) {
    SampleStats s;
    if (xs.empty()) return s;
    CompensatedSum total;
    for (double x : xs) total += x;
    s.mean = total.value() / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        CompensatedSum sq;
        for (double x : xs) sq += (x - s.mean) * (x - s.mean);
        s.variance = sq.value() / static_cast<double>(xs.size() - 1);
        s.std_error = std::sqrt(s.variance / static_cast<double>(xs.size()));
    }
    return s;
}

// Shortest round-trip decimal form; locale-independent.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

using Rng = std::mt19937_64;

// Uniform double in [0,1) built from the top 53 bits, identical on every
// platform (std::uniform_real_distribution is implementation-defined).
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Seed for trial `index` of an experiment seeded with `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
    return seed ^ index;
}

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// Each index is handled exactly once; callers write results by index so the
// outcome does not depend on scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const std::size_t workers =
        std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace pcc
