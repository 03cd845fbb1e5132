#pragma once

#include <ostream>
#include <string>
#include <string_view>

#include "pcc/occupancy.hpp"
#include "pcc/redundancy.hpp"

namespace pcc {

// CSV writers. Numbers use the shortest round-trip form; fields containing a
// comma or a quote are quoted.

std::string csv_field(std::string_view text);

inline constexpr std::string_view kBoundsHeader =
    "env,n,r_f,upper_integral,upper_count,upper_mass,head_term,lower_integral,lower_EfKn";
inline constexpr std::string_view kEmpiricalHeader =
    "env,source,n,trial,code_bits,ideal_bits,neg_log_p,redundancy_bits";
inline constexpr std::string_view kLemmaHeader = "lemma,n,param,lhs,rhs,slack,status";

// Lower-bound columns are left empty when the report has no lower part.
void write_bounds_row(std::ostream& out, std::string_view env, const RedundancyBoundReport& report);
void write_empirical_rows(std::ostream& out, std::string_view env, std::string_view source,
                          const EmpiricalRedundancy& result);
// status is OK or VIOLATION
void write_lemma_row(std::ostream& out, const LemmaRow& row);

}  // namespace pcc
