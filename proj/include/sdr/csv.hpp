#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sdr/data.hpp"

namespace sdr {

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // NaN marks a missing cell
};

/// Parses a delimited text file with a header row. Empty cells and the usual
/// NA spellings become NaN; anything else non-numeric is a ParseError with
/// its location.
CsvTable read_csv(const std::string& path, char delimiter = ',');

struct IngestReport {
  Dataset data;
  int dropped_rows = 0;
};

/// Splits a table into response and predictor columns and drops every row
/// with a missing value, like the usual na.omit ingestion. The response spec
/// is a comma-separated list of column names or 0-based indices.
IngestReport ingest(const CsvTable& table, const std::string& response_spec);

IngestReport ingest_file(const std::string& path,
                         const std::string& response_spec,
                         char delimiter = ',');

/// Writes a matrix (17 significant digits, exact double round trip).
void write_csv(const std::string& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header = {});

void write_dataset_csv(const std::string& path, const Dataset& data);

std::string format_double(double v);

}  // namespace sdr
