#include "spinsim/csv.hpp"

#include <cstdio>
#include <fstream>

#include "spinsim/errors.hpp"

namespace spinsim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path.string());
  return out;
}

}  // namespace

void write_ensemble_csv(const std::filesystem::path& path, const EnsembleResult& result) {
  std::ofstream out = open_out(path);
  out << "time_us";
  for (const auto& name : result.observable_names) out << "," << name;
  for (const auto& name : result.observable_names) out << "," << name << "_stderr";
  out << "\r\n";
  for (std::size_t k = 0; k < result.time.size(); ++k) {
    out << fmt(result.time[k]);
    for (const auto& column : result.mean) out << "," << fmt(column[k]);
    for (const auto& column : result.std_error) out << "," << fmt(column[k]);
    out << "\r\n";
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum) {
  std::ofstream out = open_out(path);
  out << "omega1_rad_us,omega2_rad_us,p0,p0_stderr\r\n";
  for (const auto& row : spectrum.rows) {
    out << fmt(row.omega1) << "," << fmt(row.omega2) << "," << fmt(row.p0) << ","
        << fmt(row.std_error) << "\r\n";
  }
}

}  // namespace spinsim
