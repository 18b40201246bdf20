#include "fhc/io/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "fhc/core/error.hpp"

namespace fhc {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& cell, const std::string& path, size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || cell.empty())
    throw DataError("'" + path + "' line " + std::to_string(line_no) +
                    ": non-numeric cell '" + cell + "'");
  return v;
}

}  // namespace

void write_feature_csv(const std::string& path, const LabeledData& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write feature csv '" + path + "'");
  out << "id,label";
  for (int c = 0; c < data.features.cols; ++c) out << ",f" << c;
  out << "\n";
  char buf[40];
  for (int r = 0; r < data.features.rows; ++r) {
    out << data.ids[r] << "," << data.label_names[data.labels[r]];
    for (double v : data.features.row(r)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) throw DataError("failed while writing '" + path + "'");
}

LabeledData read_feature_csv(const std::string& path,
                             const std::optional<std::vector<std::string>>& expected_labels) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open feature csv '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw DataError("'" + path + "' is empty (missing header)");
  auto header = split_line(line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "label")
    throw DataError("'" + path + "' header must start with id,label,f0,...");
  const size_t dims = header.size() - 2;
  for (size_t i = 0; i < dims; ++i)
    if (header[i + 2] != "f" + std::to_string(i))
      throw DataError("'" + path + "' header feature column " + std::to_string(i) +
                      " is misnamed");

  std::vector<std::string> ids, labels;
  std::vector<double> values;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size())
      throw DataError("'" + path + "' line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " columns, found " +
                      std::to_string(cells.size()));
    ids.push_back(cells[0]);
    labels.push_back(cells[1]);
    for (size_t i = 0; i < dims; ++i)
      values.push_back(parse_double(cells[i + 2], path, line_no));
  }
  if (ids.empty()) throw DataError("'" + path + "' contains no data rows");

  LabeledData data;
  if (expected_labels) {
    data.label_names = *expected_labels;
  } else {
    std::set<std::string> names(labels.begin(), labels.end());
    data.label_names.assign(names.begin(), names.end());
  }
  data.ids = std::move(ids);
  data.labels.reserve(labels.size());
  for (size_t r = 0; r < labels.size(); ++r) {
    const auto it =
        std::lower_bound(data.label_names.begin(), data.label_names.end(), labels[r]);
    if (it == data.label_names.end() || *it != labels[r])
      throw DataError("'" + path + "' line " + std::to_string(r + 2) + ": unknown label '" +
                      labels[r] + "'");
    data.labels.push_back(static_cast<int>(it - data.label_names.begin()));
  }
  data.features = Matrix(static_cast<int>(data.ids.size()), static_cast<int>(dims));
  data.features.data = std::move(values);
  return data;
}

DatasetManifest read_manifest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "id,path,label,source")
    throw DataError("'" + path + "' must start with header id,path,label,source");
  std::vector<ManifestEntry> entries;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != 4)
      throw DataError("'" + path + "' line " + std::to_string(line_no) +
                      ": expected 4 columns");
    entries.push_back({cells[0], cells[1], cells[2], cells[3]});
  }
  if (entries.empty()) throw DataError("'" + path + "' contains no entries");
  return make_manifest(std::move(entries));
}

void write_manifest_csv(const std::string& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest '" + path + "'");
  out << "id,path,label,source\n";
  for (const auto& e : manifest.entries)
    out << e.id << "," << e.path << "," << e.label << "," << e.source << "\n";
  if (!out) throw DataError("failed while writing '" + path + "'");
}

}  // namespace fhc
