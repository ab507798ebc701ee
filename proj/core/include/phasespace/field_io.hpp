#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "phasespace/grid.hpp"
#include "phasespace/quadrature.hpp"

namespace phasespace {

// 17 significant digits, "%.17g"; non-finite values print as nan/inf.
std::string format_double(double v);

// Header "x,p,w", one row per node, x-major.
void write_field_csv(std::ostream& out, const WignerField& field);
std::string field_csv(const WignerField& field);

// {"nx","np","bounds":{...},"min","max","integral"} as a JSON string.
std::string field_summary_json(const WignerField& field, QuadratureRule rule = QuadratureRule::trapezoid);

struct DiffReport {
  double max_abs_diff = 0.0;
  double l2_diff = 0.0;
  double x_at_max = 0.0;
  double p_at_max = 0.0;
};

DiffReport compare_fields(const WignerField& a, const WignerField& b);
std::string diff_report_json(const DiffReport& report);

// Writes contents to path via a sibling temporary and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace phasespace
