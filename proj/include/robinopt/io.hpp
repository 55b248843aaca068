#pragma once

// Shape and config files, optimisation run records, CSV tables and SVG plots.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "robinopt/geometry.hpp"
#include "robinopt/mfs.hpp"
#include "robinopt/optim.hpp"

namespace robinopt::io {

using nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ShapeFile {
  double V = 1.0;
  geometry::MultiDomain domain;
};

/// {"V": real, "components": [{"center": [x, y], "a0": .., "a": [..], "b": [..]}]}.
/// A missing "V" defaults to the total area of the components.
json shape_to_json(const ShapeFile& shape);
ShapeFile shape_from_json(const json& j);
ShapeFile read_shape(const std::filesystem::path& path);
void write_shape(const std::filesystem::path& path, const ShapeFile& shape);

/// Unknown keys are rejected; missing keys keep their defaults.
json to_json(const mfs::MfsConfig& cfg);
mfs::MfsConfig mfs_config_from_json(const json& j);
json to_json(const optim::OptimConfig& cfg);
optim::OptimConfig optim_config_from_json(const json& j);

json run_record(const optim::OptimConfig& ocfg, const mfs::MfsConfig& mcfg, double alpha, int n,
                const optim::MinimizeResult& result);

void write_json(const std::filesystem::path& path, const json& j);

/// Shortest text that reads back to the same double.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::filesystem::path& path) const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Line plot with axes, tick labels and a legend.
std::string svg_plot(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                     const std::string& ylabel);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace robinopt::io
