#include "phasespace/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "phasespace/errors.hpp"

namespace phasespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(std::ostream& out, const WignerField& field) {
  out << "x,p,w\n";
  const auto& g = field.grid;
  std::string line;
  for (std::size_t i = 0; i < g.nx(); ++i) {
    const std::string x = format_double(g.x(i));
    for (std::size_t j = 0; j < g.np(); ++j) {
      line = x;
      line += ',';
      line += format_double(g.p(j));
      line += ',';
      line += format_double(field.at(i, j));
      line += '\n';
      out << line;
    }
  }
}

std::string field_csv(const WignerField& field) {
  std::ostringstream os;
  write_field_csv(os, field);
  return os.str();
}

std::string field_summary_json(const WignerField& field, QuadratureRule rule) {
  const auto& b = field.grid.bounds();
  nlohmann::ordered_json j;
  j["nx"] = field.grid.nx();
  j["np"] = field.grid.np();
  j["bounds"] = {{"x_min", b.x_min}, {"x_max", b.x_max}, {"p_min", b.p_min}, {"p_max", b.p_max}};
  j["min"] = field.min();
  j["max"] = field.max();
  j["integral"] = integrate_2d(field, rule);
  return j.dump(2) + "\n";
}

DiffReport compare_fields(const WignerField& a, const WignerField& b) {
  require(a.grid == b.grid, ErrorCode::argument, "compare_fields requires identical grids");
  DiffReport r;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.grid.nx(); ++i) {
    for (std::size_t j = 0; j < a.grid.np(); ++j) {
      const double d = std::abs(a.at(i, j) - b.at(i, j));
      require(std::isfinite(d), ErrorCode::invalid_field, "non-finite value in field comparison");
      sum_sq += d * d;
      if (d > r.max_abs_diff) {
        r.max_abs_diff = d;
        r.x_at_max = a.grid.x(i);
        r.p_at_max = a.grid.p(j);
      }
    }
  }
  r.l2_diff = std::sqrt(sum_sq * a.grid.dx() * a.grid.dp());
  return r;
}

std::string diff_report_json(const DiffReport& report) {
  nlohmann::ordered_json j;
  j["max_abs_diff"] = report.max_abs_diff;
  j["l2_diff"] = report.l2_diff;
  j["x_at_max"] = report.x_at_max;
  j["p_at_max"] = report.p_at_max;
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::config, "cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) fail(ErrorCode::config, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    fail(ErrorCode::config, "cannot rename " + tmp.string() + ": " + ec.message());
  }
}

}  // namespace phasespace
