#include "shapeclust/curve_io.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace shapeclust {

namespace {

std::string padded_index(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%03d", i);
  return buf;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("parse failure in '" + path + "': " + e.what());
  }
  return doc;
}

Eigen::MatrixXd parse_point_rows(const json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty())
    throw std::runtime_error(what + ": points must be a non-empty array of rows");
  const std::size_t p = rows.front().size();
  if (p == 0) throw std::runtime_error(what + ": empty point row");
  Eigen::MatrixXd pts(rows.size(), p);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_array() || rows[r].size() != p) {
      std::ostringstream msg;
      msg << what << " row " << r << ": expected " << p << " coordinates";
      throw std::runtime_error(msg.str());
    }
    for (std::size_t c = 0; c < p; ++c) pts(r, c) = rows[r][c].get<double>();
  }
  return pts;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  return out;
}

Curve load_curve_csv(const std::string& path, const std::string& id, bool closed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    std::vector<double> row;
    for (const auto& cell : cells) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        std::ostringstream msg;
        msg << "curve file '" << path << "' row " << lineno << ": bad number '" << cell << "'";
        throw std::runtime_error(msg.str());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << "curve file '" << path << "' row " << lineno << ": expected "
          << rows.front().size() << " values, got " << row.size();
      throw std::runtime_error(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("curve file '" + path + "' is empty");
  Curve c;
  c.id = id;
  c.closed = closed;
  c.points.resize(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t k = 0; k < rows[r].size(); ++k) c.points(r, k) = rows[r][k];
  return c;
}

CurveSet load_curves_json(const std::string& path) {
  const json doc = read_json_file(path);
  if (!doc.contains("curves")) throw std::runtime_error("'" + path + "': missing 'curves'");
  CurveSet set;
  int i = 0;
  for (const auto& entry : doc["curves"]) {
    Curve c;
    c.id = entry.value("id", padded_index(i));
    c.closed = entry.value("closed", false);
    c.points = parse_point_rows(entry["points"], "curve '" + c.id + "'");
    if (c.closed) c = enforce_closure(c);
    set.curves.push_back(std::move(c));
    ++i;
  }
  if (doc.contains("labels") && !doc["labels"].is_null())
    set.labels = doc["labels"].get<std::vector<int>>();
  if (doc.contains("p")) {
    const int p = doc["p"].get<int>();
    for (const auto& c : set.curves)
      if (c.dim() != p)
        throw std::runtime_error("curve '" + c.id + "': inconsistent dimension (p=" +
                                 std::to_string(c.dim()) + ", header says p=" +
                                 std::to_string(p) + ")");
  }
  set.validate();
  return set;
}

CurveSet load_curves_dir(const std::string& dir) {
  const fs::path manifest = fs::path(dir) / "manifest.csv";
  if (!fs::exists(manifest))
    throw std::runtime_error("curve directory '" + dir + "' has no manifest.csv");
  std::ifstream in(manifest);
  CurveSet set;
  std::string line;
  bool any_label = false;
  int i = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.empty() || cells[0].empty())
      throw std::runtime_error("manifest.csv: blank file name at entry " + std::to_string(i));
    const fs::path file = fs::path(dir) / cells[0];
    const bool closed = cells.size() > 2 && cells[2] == "1";
    Curve c = load_curve_csv(file.string(), fs::path(cells[0]).stem().string(), closed);
    if (c.closed) c = enforce_closure(c);
    set.curves.push_back(std::move(c));
    if (cells.size() > 1 && !cells[1].empty()) {
      any_label = true;
      set.labels.resize(set.curves.size(), -1);
      set.labels.back() = std::stoi(cells[1]);
    } else if (any_label) {
      throw std::runtime_error("manifest.csv: label missing for '" + cells[0] + "'");
    }
    ++i;
  }
  set.validate();
  return set;
}

}  // namespace

CurveSet load_curves(const std::string& path) {
  if (fs::is_directory(path)) return load_curves_dir(path);
  return load_curves_json(path);
}

void save_curves_json(const CurveSet& set, const std::string& path) {
  set.validate();
  json doc;
  doc["p"] = set.dim();
  doc["curves"] = json::array();
  for (const auto& c : set.curves) {
    json entry;
    entry["id"] = c.id;
    entry["closed"] = c.closed;
    json rows = json::array();
    for (int r = 0; r < c.samples(); ++r) {
      json row = json::array();
      for (int k = 0; k < c.dim(); ++k) row.push_back(c.points(r, k));
      rows.push_back(std::move(row));
    }
    entry["points"] = std::move(rows);
    doc["curves"].push_back(std::move(entry));
  }
  if (set.has_labels()) doc["labels"] = set.labels;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(1) << "\n";
}

void save_curves_csv_dir(const CurveSet& set, const std::string& dir) {
  set.validate();
  fs::create_directories(dir);
  std::ofstream manifest(fs::path(dir) / "manifest.csv");
  char buf[64];
  for (int i = 0; i < set.size(); ++i) {
    const auto& c = set.curves[i];
    const std::string name = (c.id.empty() ? padded_index(i) : c.id) + ".csv";
    std::ofstream out(fs::path(dir) / name);
    for (int r = 0; r < c.samples(); ++r) {
      for (int k = 0; k < c.dim(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.17g", c.points(r, k));
        out << (k ? "," : "") << buf;
      }
      out << "\n";
    }
    manifest << name;
    if (set.has_labels()) manifest << "," << set.labels[i];
    if (c.closed) manifest << (set.has_labels() ? "" : ",") << ",1";
    manifest << "\n";
  }
}

PointSet load_points(const std::string& path) {
  const json doc = read_json_file(path);
  PointSet set;
  set.points = parse_point_rows(doc["points"], "point set");
  if (doc.contains("labels") && !doc["labels"].is_null())
    set.labels = doc["labels"].get<std::vector<int>>();
  set.validate();
  return set;
}

void save_points(const PointSet& set, const std::string& path) {
  set.validate();
  json doc;
  doc["p"] = set.dim();
  json rows = json::array();
  for (int r = 0; r < set.size(); ++r) {
    json row = json::array();
    for (int k = 0; k < set.dim(); ++k) row.push_back(set.points(r, k));
    rows.push_back(std::move(row));
  }
  doc["points"] = std::move(rows);
  if (set.has_labels()) doc["labels"] = set.labels;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << doc.dump(1) << "\n";
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels file '" + path + "'");
  std::vector<int> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    labels.push_back(std::stoi(line));
  }
  return labels;
}

void save_labels(const std::vector<int>& labels, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (int l : labels) out << l << "\n";
}

}  // namespace shapeclust
