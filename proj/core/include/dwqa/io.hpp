#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dwqa/encoding.hpp"
#include "dwqa/mc_annealers.hpp"

namespace dwqa {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// run_id, read_id, energy, kinks, decoded_x, spins
std::string samples_csv(std::span<const RunBatch> runs, const ChainInstance& chain);

struct TebdCurveRow {
  double t_a = 0.0;
  double rho = 0.0;
  double p_const = 0.0;
  double e_res = 0.0;
  double p_gs = 0.0;
  double truncation_error = 0.0;
};

/// t_a, rho, p_const, e_res, p_gs, truncation_error
std::string tebd_curve_csv(std::span<const TebdCurveRow> rows);

/// Minimal reader for the comma-separated files written here (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  static CsvTable parse(const std::string& text);
  int column_index(const std::string& name) const;
  /// Column as numbers; empty or non-numeric cells become NaN.
  std::vector<double> numeric_column(const std::string& name) const;
};

}  // namespace dwqa
