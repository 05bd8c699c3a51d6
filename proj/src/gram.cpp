#include "shapeclust/gram.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace shapeclust {

void GramMatrix::validate() const {
  const auto n = entries.rows();
  if (n < 1 || entries.cols() != n) throw std::invalid_argument("gram: not square");
  if (!entries.allFinite()) throw std::invalid_argument("gram: non-finite entry");
  if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("gram: not symmetric");
  if (!ids.empty() && static_cast<Eigen::Index>(ids.size()) != n)
    throw std::invalid_argument("gram: ids length mismatch");
  if (mode == GramMode::elastic) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(entries(i, i) - 1.0) > 1e-6) {
        std::ostringstream msg;
        msg << "gram: elastic diagonal entry " << i << " is " << entries(i, i);
        throw std::invalid_argument(msg.str());
      }
    }
    if (entries.cwiseAbs().maxCoeff() > 1.0 + 1e-6)
      throw std::invalid_argument("gram: elastic entry outside [-1,1]");
  }
}

std::vector<Srvf> prepare_srvfs(const CurveSet& curves, const PrepOpts& prep) {
  curves.validate();
  std::vector<Srvf> out;
  out.reserve(curves.curves.size());
  for (const auto& c : curves.curves) {
    Curve work = resample(c, prep.resample_to);
    if (prep.smooth_bandwidth > 0.0)
      work = smooth(work, prep.smooth_bandwidth, prep.smooth_passes);
    Srvf q = srvf(work);
    out.push_back(prep.unit_length ? rescale_unit(q) : q);
  }
  return out;
}

namespace {

std::vector<std::string> resolve_ids(std::size_t n, const std::vector<std::string>& ids) {
  if (!ids.empty()) {
    if (ids.size() != n) throw std::invalid_argument("gram: ids length mismatch");
    return ids;
  }
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%03zu", i);
    out[i] = buf;
  }
  return out;
}

GramMatrix elastic_gram(const std::vector<Srvf>& srvfs, const AlignOpts& opts,
                        const std::vector<std::string>& ids, bool parallel) {
  if (srvfs.empty()) throw std::invalid_argument("gram: empty input");
  const int n = static_cast<int>(srvfs.size());
  GramMatrix gram;
  gram.mode = GramMode::elastic;
  gram.ids = resolve_ids(srvfs.size(), ids);
  gram.entries.resize(n, n);

  for (int i = 0; i < n; ++i) gram.entries(i, i) = l2_inner(srvfs[i], srvfs[i]);

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  std::string error;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    try {
      const double v = elastic_inner_product(srvfs[i], srvfs[j], opts);
      gram.entries(i, j) = v;
      gram.entries(j, i) = v;
    } catch (const std::exception& e) {
#pragma omp critical
      if (error.empty()) {
        std::ostringstream msg;
        msg << "gram: pair (" << i << "," << j << "): " << e.what();
        error = msg.str();
      }
    }
  }
  if (!error.empty()) throw std::runtime_error(error);
  return gram;
}

}  // namespace

GramMatrix gram_matrix(const std::vector<Srvf>& srvfs, const AlignOpts& opts,
                       const std::vector<std::string>& ids) {
  return elastic_gram(srvfs, opts, ids, true);
}

GramMatrix gram_matrix_serial(const std::vector<Srvf>& srvfs, const AlignOpts& opts,
                              const std::vector<std::string>& ids) {
  return elastic_gram(srvfs, opts, ids, false);
}

GramMatrix gram_matrix(const PointSet& points, bool center) {
  points.validate();
  Eigen::MatrixXd y = points.points;
  if (center) y.rowwise() -= y.colwise().mean();
  GramMatrix gram;
  gram.mode = GramMode::euclidean;
  gram.ids = resolve_ids(static_cast<std::size_t>(y.rows()), {});
  gram.entries = y * y.transpose();
  return gram;
}

void save_gram(const GramMatrix& gram, const std::string& csv_path, const AlignOpts* opts) {
  gram.validate();
  std::ofstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot write '" + csv_path + "'");
  char buf[32];
  const int n = gram.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", gram.entries(i, j));
      csv << buf << (j + 1 < n ? "," : "\n");
    }
  }

  nlohmann::json meta;
  meta["mode"] = gram.mode == GramMode::elastic ? "elastic" : "euclidean";
  meta["ids"] = gram.ids;
  if (opts) {
    meta["align_opts"] = {{"max_iters", opts->max_iters},
                          {"tol", opts->tol},
                          {"n_seeds", opts->n_seeds}};
  }
  std::ofstream side(csv_path + ".meta.json");
  if (!side) throw std::runtime_error("cannot write '" + csv_path + ".meta.json'");
  side << meta.dump(2) << "\n";
}

GramMatrix load_gram(const std::string& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw std::runtime_error("cannot read '" + csv_path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("'" + csv_path + "': ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty() || rows.size() != rows.front().size())
    throw std::runtime_error("'" + csv_path + "': not a square matrix");

  GramMatrix gram;
  const int n = static_cast<int>(rows.size());
  gram.entries.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram.entries(i, j) = rows[i][j];

  std::ifstream side(csv_path + ".meta.json");
  if (!side) throw std::runtime_error("missing sidecar '" + csv_path + ".meta.json'");
  nlohmann::json meta = nlohmann::json::parse(side);
  gram.mode = meta.at("mode") == "euclidean" ? GramMode::euclidean : GramMode::elastic;
  gram.ids = meta.at("ids").get<std::vector<std::string>>();
  gram.validate();
  return gram;
}

}  // namespace shapeclust
