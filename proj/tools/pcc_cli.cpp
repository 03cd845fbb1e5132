// pcc: command-line front end for the PC codec and the redundancy lab.
//
//   pcc encode  [-i in] [-o out] [--mode text|bytes]
//   pcc decode  [-i in] [-o out] [--mode text|bytes]
//   pcc simulate --env SPEC --n 256,4096 [--trials T] [--seed S] [--source envelope|member]
//   pcc bounds   --env SPEC --n 8,64
//   pcc lemmas   --env SPEC --n 1000 [--trials T] [--seed S]
//
// Exit status: 0 success, 2 usage, 3 data or corruption.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcc/envelope.hpp"
#include "pcc/error.hpp"
#include "pcc/occupancy.hpp"
#include "pcc/pc_codec.hpp"
#include "pcc/redundancy.hpp"
#include "pcc/report.hpp"

namespace {

using namespace pcc;

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    std::string input = "-";
    std::string output = "-";
    std::string mode = "text";
    std::string env;
    std::string source = "envelope";
    std::vector<std::uint64_t> n_grid;
    std::size_t trials = 0;
    std::uint64_t seed = kDefaultSeed;
    bool ideal_elias = false;
};

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::string& path, const std::string& data) {
    if (path == "-") {
        std::cout.write(data.data(), static_cast<std::streamsize>(data.size()));
        std::cout.flush();
        if (!std::cout) throw DataError("write to standard output failed");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("cannot write " + path);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

Message parse_text(const std::string& text) {
    Message out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (is_space(text[pos])) {
            ++pos;
            continue;
        }
        std::size_t end = pos;
        while (end < text.size() && !is_space(text[end])) ++end;
        Symbol value = 0;
        const auto res = std::from_chars(text.data() + pos, text.data() + end, value);
        if (res.ec != std::errc{} || res.ptr != text.data() + end || value == 0 || value > kMaxSymbol) {
            throw DataError("bad symbol '" + text.substr(pos, end - pos) +
                            "': expected a decimal integer in [1, 2^62]");
        }
        out.push_back(value);
        pos = end;
    }
    return out;
}

std::string format_text(const Message& message) {
    std::string out;
    for (std::size_t k = 0; k < message.size(); ++k) {
        if (k > 0) out += ' ';
        out += std::to_string(message[k]);
    }
    if (!message.empty()) out += '\n';
    return out;
}

Message parse_bytes(const std::string& data) {
    Message out;
    out.reserve(data.size());
    for (unsigned char b : data) out.push_back(static_cast<Symbol>(b) + 1);
    return out;
}

std::string format_bytes(const Message& message) {
    std::string out;
    out.reserve(message.size());
    for (Symbol s : message) {
        if (s < 1 || s > 256) throw DataError("symbol " + std::to_string(s) + " is not a byte symbol");
        out += static_cast<char>(s - 1);
    }
    return out;
}

int run_encode(const CliConfig& cfg) {
    const std::string raw = read_all(cfg.input);
    const Message message = cfg.mode == "bytes" ? parse_bytes(raw) : parse_text(raw);
    EncodeStats stats;
    const PcContainer container = encode(message, nullptr, &stats);
    const auto bytes = container.serialize();
    write_all(cfg.output, std::string(bytes.begin(), bytes.end()));
    const IdealCodelength ideal = ideal_codelength(message);
    std::cerr << "symbols=" << message.size() << " distinct=" << stats.distinct
              << " bits=" << stats.bits << " mixture_bits=" << format_double(ideal.mixture_bits)
              << " elias_bits=" << format_double(ideal.elias_bits)
              << " elias_ideal_bits=" << format_double(ideal.elias_ideal_bits) << '\n';
    return 0;
}

int run_decode(const CliConfig& cfg) {
    const std::string raw = read_all(cfg.input);
    const std::vector<std::uint8_t> bytes(raw.begin(), raw.end());
    const Message message = decode(PcContainer::parse(bytes));
    write_all(cfg.output, cfg.mode == "bytes" ? format_bytes(message) : format_text(message));
    return 0;
}

Envelope envelope_or_usage(const std::string& spec) {
    try {
        return parse_envelope(spec);
    } catch (const InvalidEnvelope& e) {
        throw UsageError(e.what());
    }
}

void require_grid(const CliConfig& cfg) {
    if (cfg.n_grid.empty()) throw UsageError("--n needs at least one value");
    for (std::uint64_t n : cfg.n_grid) {
        if (n == 0) throw UsageError("--n values must be positive");
    }
}

int run_simulate(const CliConfig& cfg) {
    require_grid(cfg);
    const Envelope env = envelope_or_usage(cfg.env);
    const EnvelopeDistribution dist(env);
    const std::size_t trials = cfg.trials == 0 ? 100 : cfg.trials;
    SourceSpec spec = dist.source();
    std::string source_name = "envelope";
    if (cfg.source == "member") {
        spec = make_class_member(dist, cfg.seed);
        source_name = "member:" + std::to_string(cfg.seed);
    }
    const auto results = empirical_redundancy(spec, cfg.n_grid, trials, cfg.seed, cfg.ideal_elias);
    std::cout << kEmpiricalHeader << '\n';
    for (const auto& result : results) write_empirical_rows(std::cout, env.describe(), source_name, result);
    for (const auto& result : results) {
        std::cerr << "n=" << result.n << " redundancy_bits=" << format_double(result.redundancy_bits)
                  << " std_error=" << format_double(result.std_error)
                  << " mean_code_bits=" << format_double(result.mean_code_bits) << '\n';
    }
    return 0;
}

int run_bounds(const CliConfig& cfg) {
    require_grid(cfg);
    const Envelope env = envelope_or_usage(cfg.env);
    const EnvelopeDistribution dist(env);
    std::cout << kBoundsHeader << '\n';
    for (std::uint64_t n : cfg.n_grid) write_bounds_row(std::cout, env.describe(), theorem1_report(dist, n));
    return 0;
}

int run_lemmas(const CliConfig& cfg) {
    require_grid(cfg);
    const Envelope env = envelope_or_usage(cfg.env);
    const EnvelopeDistribution dist(env);
    MonteCarloOptions options;
    if (cfg.trials != 0) options.trials = cfg.trials;
    options.seed = cfg.seed;
    bool ok = true;
    std::cout << kLemmaHeader << '\n';
    for (std::uint64_t n : cfg.n_grid) {
        const LemmaReport report = evaluate_occupancy_lemma(dist.source(), n, options);
        for (const LemmaRow& row : report.rows) {
            write_lemma_row(std::cout, row);
            ok = ok && row.holds();
        }
        for (double p : {0.001, 0.01, 0.1, 0.5, 0.9}) {
            const LemmaRow row = evaluate_binomial_inverse(n, p);
            write_lemma_row(std::cout, row);
            ok = ok && row.holds();
        }
    }
    if (!ok) std::cerr << "some inequalities failed\n";
    return ok ? 0 : kExitData;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pattern Censoring codec and envelope-class redundancy lab"};
    app.require_subcommand(1, 1);
    CliConfig cfg;

    auto add_io = [&](CLI::App* sub) {
        sub->add_option("-i,--input", cfg.input, "input file, - for standard input");
        sub->add_option("-o,--output", cfg.output, "output file, - for standard output");
        sub->add_option("--mode", cfg.mode, "symbol format")->check(CLI::IsMember({"text", "bytes"}));
    };
    auto add_lab = [&](CLI::App* sub, bool random) {
        sub->add_option("--env", cfg.env, "envelope, e.g. geom:C=2,q=0.5")->required();
        sub->add_option("--n", cfg.n_grid, "sample sizes")->required()->delimiter(',');
        sub->add_flag("--ideal-elias", cfg.ideal_elias, "idealized Elias lengths in reports");
        if (random) {
            sub->add_option("--trials", cfg.trials, "Monte Carlo trials");
            sub->add_option("--seed", cfg.seed, "base seed (default 20170615)");
        }
    };

    auto* enc = app.add_subcommand("encode", "compress a symbol stream");
    add_io(enc);
    auto* dec = app.add_subcommand("decode", "decompress a container");
    add_io(dec);
    auto* sim = app.add_subcommand("simulate", "empirical redundancy CSV");
    add_lab(sim, true);
    sim->add_option("--source", cfg.source, "envelope distribution or a random class member")
        ->check(CLI::IsMember({"envelope", "member"}));
    auto* bnd = app.add_subcommand("bounds", "redundancy bound terms CSV");
    add_lab(bnd, false);
    auto* lem = app.add_subcommand("lemmas", "occupancy inequality checks CSV");
    add_lab(lem, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*enc) return run_encode(cfg);
        if (*dec) return run_decode(cfg);
        if (*sim) return run_simulate(cfg);
        if (*bnd) return run_bounds(cfg);
        if (*lem) return run_lemmas(cfg);
    } catch (const UsageError& e) {
        std::cerr << "pcc: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "pcc: " << e.what() << '\n';
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "pcc: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
