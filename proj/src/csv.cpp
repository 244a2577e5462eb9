#include "sdr/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sdr/errors.hpp"

namespace sdr {

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, delim)) out.push_back(cell);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool is_missing(const std::string& s) {
  return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "nan" ||
         s == "NULL";
}

}  // namespace

CsvTable read_csv(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw SdrError("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw EmptyAfterNaDrop();
  CsvTable table;
  for (auto& h : split_line(line, delimiter)) table.header.push_back(trim(h));
  const std::size_t ncol = table.header.size();
  if (ncol == 0) throw ParseError(1, 1, "empty header row");

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_line(line, delimiter);
    if (cells.size() != ncol)
      throw ParseError(lineno, cells.size(),
                       "expected " + std::to_string(ncol) + " cells, got " +
                           std::to_string(cells.size()));
    std::vector<double> row(ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
      const std::string cell = trim(cells[c]);
      if (is_missing(cell)) {
        row[c] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      try {
        std::size_t used = 0;
        row[c] = std::stod(cell, &used);
        if (used != cell.size())
          throw ParseError(lineno, c + 1, "trailing characters in '" + cell + "'");
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        throw ParseError(lineno, c + 1, "not a number: '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }

  table.values.resize(Eigen::Index(rows.size()), Eigen::Index(ncol));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < ncol; ++c)
      table.values(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
  return table;
}

namespace {

std::vector<int> resolve_columns(const CsvTable& table, const std::string& spec) {
  std::vector<int> cols;
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    int found = -1;
    for (std::size_t c = 0; c < table.header.size(); ++c)
      if (table.header[c] == tok) {
        found = int(c);
        break;
      }
    if (found < 0) {
      try {
        std::size_t used = 0;
        const int idx = std::stoi(tok, &used);
        if (used == tok.size() && idx >= 0 && idx < int(table.header.size()))
          found = idx;
      } catch (const std::exception&) {
      }
    }
    if (found < 0) throw SdrError("response column not found: " + tok);
    cols.push_back(found);
  }
  if (cols.empty()) throw SdrError("empty response specification");
  return cols;
}

}  // namespace

IngestReport ingest(const CsvTable& table, const std::string& response_spec) {
  const std::vector<int> y_cols = resolve_columns(table, response_spec);
  std::vector<int> x_cols;
  for (int c = 0; c < int(table.header.size()); ++c) {
    bool is_y = false;
    for (int yc : y_cols) is_y |= yc == c;
    if (!is_y) x_cols.push_back(c);
  }
  if (x_cols.empty()) throw SdrError("no predictor columns left");

  std::vector<int> keep;
  for (int r = 0; r < table.values.rows(); ++r)
    if (table.values.row(r).allFinite()) keep.push_back(r);

  IngestReport report;
  report.dropped_rows = int(table.values.rows()) - int(keep.size());
  if (keep.empty()) throw EmptyAfterNaDrop();

  report.data.X.resize(Eigen::Index(keep.size()), Eigen::Index(x_cols.size()));
  report.data.Y.resize(Eigen::Index(keep.size()), Eigen::Index(y_cols.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t c = 0; c < x_cols.size(); ++c)
      report.data.X(Eigen::Index(i), Eigen::Index(c)) =
          table.values(keep[i], x_cols[c]);
    for (std::size_t c = 0; c < y_cols.size(); ++c)
      report.data.Y(Eigen::Index(i), Eigen::Index(c)) =
          table.values(keep[i], y_cols[c]);
  }
  for (int c : x_cols) report.data.x_names.push_back(table.header[std::size_t(c)]);
  for (int c : y_cols) report.data.y_names.push_back(table.header[std::size_t(c)]);
  return report;
}

IngestReport ingest_file(const std::string& path, const std::string& response_spec,
                         char delimiter) {
  return ingest(read_csv(path, delimiter), response_spec);
}

std::string format_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const Eigen::MatrixXd& values,
               const std::vector<std::string>& header) {
  std::ofstream out(path);
  if (!out) throw SdrError("cannot write file: " + path);
  if (!header.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c)
      out << (c ? "," : "") << header[c];
    out << "\n";
  }
  for (int r = 0; r < values.rows(); ++r) {
    for (int c = 0; c < values.cols(); ++c)
      out << (c ? "," : "") << format_double(values(r, c));
    out << "\n";
  }
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::vector<std::string> header;
  for (int c = 0; c < data.q(); ++c)
    header.push_back(data.y_names.size() == std::size_t(data.q())
                         ? data.y_names[std::size_t(c)]
                         : "y" + std::to_string(c + 1));
  for (int c = 0; c < data.p(); ++c)
    header.push_back(data.x_names.size() == std::size_t(data.p())
                         ? data.x_names[std::size_t(c)]
                         : "x" + std::to_string(c + 1));
  Eigen::MatrixXd all(data.n(), data.q() + data.p());
  all << data.Y, data.X;
  write_csv(path, all, header);
}

}  // namespace sdr
