#include "pcc/report.hpp"

namespace pcc {

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_bounds_row(std::ostream& out, std::string_view env, const RedundancyBoundReport& report) {
    out << csv_field(env) << ',' << report.n << ',' << format_double(report.r_f);
    if (report.upper) {
        const UpperTerms& up = *report.upper;
        out << ',' << format_double(up.integral) << ',' << format_double(up.count_term) << ','
            << format_double(up.small_mass_term) << ',' << format_double(up.head_term);
    } else {
        out << ",,,,";
    }
    if (report.lower) {
        out << ',' << format_double(report.lower->integral) << ','
            << format_double(report.lower->occupancy);
    } else {
        out << ",,";
    }
    out << '\n';
}

void write_empirical_rows(std::ostream& out, std::string_view env, std::string_view source,
                          const EmpiricalRedundancy& result) {
    const std::string e = csv_field(env);
    const std::string s = csv_field(source);
    for (const EmpiricalTrial& row : result.rows) {
        out << e << ',' << s << ',' << row.n << ',' << row.trial << ','
            << format_double(row.code_bits) << ',' << format_double(row.ideal_bits) << ','
            << format_double(row.neg_log_p) << ',' << format_double(row.redundancy_bits()) << '\n';
    }
}

void write_lemma_row(std::ostream& out, const LemmaRow& row) {
    out << csv_field(row.lemma) << ',' << row.n << ',' << csv_field(row.param) << ','
        << format_double(row.lhs) << ',' << format_double(row.rhs) << ','
        << format_double(row.slack()) << ',' << (row.holds() ? "OK" : "VIOLATION") << '\n';
}

}  // namespace pcc
