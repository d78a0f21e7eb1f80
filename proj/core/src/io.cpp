#include "dwqa/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dwqa/observables.hpp"

namespace dwqa {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string samples_csv(std::span<const RunBatch> runs, const ChainInstance& chain) {
  std::string out = "run_id,read_id,energy,kinks,decoded_x,spins\n";
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& samples = runs[r].samples;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const auto& c = samples[k];
      out += std::to_string(r);
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += format_double(classical_energy(chain, c));
      out += ',';
      out += std::to_string(kink_count(c));
      out += ',';
      if (auto x = decode(chain, c)) out += format_double(*x);
      out += ',';
      out += c.to_string();
      out += '\n';
    }
  }
  return out;
}

std::string tebd_curve_csv(std::span<const TebdCurveRow> rows) {
  std::string out = "t_a,rho,p_const,e_res,p_gs,truncation_error\n";
  for (const auto& r : rows) {
    out += format_double(r.t_a);
    for (double v : {r.rho, r.p_const, r.e_res, r.p_gs, r.truncation_error}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CsvTable CsvTable::parse(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      cells.resize(t.header.size());
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw std::invalid_argument("CSV has no header");
  return t;
}

int CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("CSV has no column '" + name + "'");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const auto idx = static_cast<std::size_t>(column_index(name));
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    double v = std::numeric_limits<double>::quiet_NaN();
    try {
      std::size_t used = 0;
      if (!r[idx].empty()) {
        v = std::stod(r[idx], &used);
        if (used != r[idx].size()) v = std::numeric_limits<double>::quiet_NaN();
      }
    } catch (const std::exception&) {
      v = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace dwqa
