#include "grasplite/synergy/synergy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "grasplite/errors.hpp"

namespace grasplite::synergy {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open dataset file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Matrix parse_pose_csv(const std::string& text, const std::string& origin) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  if (lines.size() < 2) {
    throw ParseError(origin + ": need a header row and at least one data row");
  }

  const std::size_t cols = split_csv_line(lines[0]).size();
  if (cols == 0) throw ParseError(origin + ": empty header row");

  Matrix m;
  m.cols = cols;
  m.rows = lines.size() - 1;
  m.data.reserve(m.rows * cols);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto fields = split_csv_line(lines[r]);
    if (fields.size() != cols) {
      throw RaggedRows(origin + ": row " + std::to_string(r) + " has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(cols));
    }
    for (const auto& f : fields) {
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(f, &used);
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        throw ParseError(origin + ": row " + std::to_string(r) + " has a non-numeric field '" +
                         f + "'");
      }
      if (!std::isfinite(v)) {
        throw ParseError(origin + ": row " + std::to_string(r) + " has a non-finite value");
      }
      m.data.push_back(v);
    }
  }
  return m;
}

Matrix load_pose_dataset(const std::string& path) {
  return parse_pose_csv(read_file(path), path);
}

SynergyBasis fit_pca(const Matrix& data) {
  if (data.rows < 2) throw TooFewSamples("pca needs at least two samples");
  const auto n = static_cast<Eigen::Index>(data.rows);
  const auto j = static_cast<Eigen::Index>(data.cols);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      data.data.data(), n, j);

  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - mean;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);

  SynergyBasis basis;
  basis.n_samples = data.rows;
  basis.mean.assign(mean.data(), mean.data() + j);
  const Eigen::Index rank = svd.singularValues().size();
  basis.singular_values.assign(svd.singularValues().data(),
                               svd.singularValues().data() + rank);
  basis.components.resize(rank);
  for (Eigen::Index c = 0; c < rank; ++c) {
    Eigen::VectorXd comp = svd.matrixV().col(c);
    // Deterministic sign: the entry of largest magnitude is positive.
    Eigen::Index argmax = 0;
    comp.cwiseAbs().maxCoeff(&argmax);
    if (comp[argmax] < 0.0) comp = -comp;
    basis.components[c].assign(comp.data(), comp.data() + j);
  }
  return basis;
}

double explained_variance(const SynergyBasis& basis, std::size_t n) {
  if (n < 1 || n > basis.rank()) {
    throw OutOfRange("component count outside [1, rank]");
  }
  double total = 0.0, head = 0.0;
  for (std::size_t i = 0; i < basis.rank(); ++i) {
    const double s2 = basis.singular_values[i] * basis.singular_values[i];
    total += s2;
    if (i < n) head += s2;
  }
  if (total == 0.0) return 1.0;  // constant dataset: nothing to explain
  return head / total;
}

Matrix export_covariance(const Matrix& data) {
  if (data.rows < 2) throw TooFewSamples("covariance needs at least two samples");
  const auto n = static_cast<Eigen::Index>(data.rows);
  const auto j = static_cast<Eigen::Index>(data.cols);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> x(
      data.data.data(), n, j);
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  cov.diagonal().setZero();

  Matrix out;
  out.rows = out.cols = data.cols;
  out.data.resize(data.cols * data.cols);
  for (std::size_t r = 0; r < out.rows; ++r) {
    for (std::size_t c = 0; c < out.cols; ++c) {
      out.at(r, c) = cov(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

std::vector<double> project_synergy(std::span<const double> weights,
                                    const SynergyBasis& basis, double lo, double hi) {
  if (weights.size() > basis.rank()) {
    throw DimensionMismatch("more synergy weights than basis components");
  }
  std::vector<double> q(basis.mean);
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(basis.n_samples));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double scale = 3.0 * basis.singular_values[i] * inv_sqrt_n;
    const double wi = weights[i] * scale;
    for (std::size_t d = 0; d < q.size(); ++d) q[d] += wi * basis.components[i][d];
  }
  for (double& v : q) v = std::clamp(v, lo, hi);
  return q;
}

Matrix make_synthetic_dataset(std::mt19937_64& rng, std::size_t n_samples,
                              std::size_t joints, std::size_t rank, double noise) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(-0.3, 0.3);

  // Random orthonormal directions via Gram-Schmidt on Gaussian draws.
  std::vector<std::vector<double>> dirs;
  while (dirs.size() < rank) {
    std::vector<double> d(joints);
    for (double& v : d) v = gauss(rng);
    for (const auto& prev : dirs) {
      double proj = 0.0;
      for (std::size_t i = 0; i < joints; ++i) proj += prev[i] * d[i];
      for (std::size_t i = 0; i < joints; ++i) d[i] -= proj * prev[i];
    }
    double norm = 0.0;
    for (double v : d) norm += v * v;
    norm = std::sqrt(norm);
    if (norm < 1e-8) continue;
    for (double& v : d) v /= norm;
    dirs.push_back(std::move(d));
  }

  std::vector<double> center(joints);
  for (double& v : center) v = uni(rng);

  Matrix m;
  m.rows = n_samples;
  m.cols = joints;
  m.data.resize(n_samples * joints);
  for (std::size_t r = 0; r < n_samples; ++r) {
    for (std::size_t c = 0; c < joints; ++c) m.at(r, c) = center[c] + noise * gauss(rng);
    for (std::size_t k = 0; k < rank; ++k) {
      const double latent = gauss(rng) * 0.4 / static_cast<double>(1 + k);
      for (std::size_t c = 0; c < joints; ++c) m.at(r, c) += latent * dirs[k][c];
    }
  }
  return m;
}

void save_basis(const SynergyBasis& basis, const std::string& path) {
  nlohmann::json j;
  j["joints"] = basis.joint_count();
  j["n_samples"] = basis.n_samples;
  j["mean"] = basis.mean;
  j["singular_values"] = basis.singular_values;
  j["components"] = basis.components;
  write_file(path, j.dump(2) + "\n");
}

SynergyBasis load_basis(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open basis file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("basis file " + path + ": " + e.what());
  }
  SynergyBasis basis;
  try {
    basis.mean = j.at("mean").get<std::vector<double>>();
    basis.singular_values = j.at("singular_values").get<std::vector<double>>();
    basis.components = j.at("components").get<std::vector<std::vector<double>>>();
    basis.n_samples = j.at("n_samples").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("basis file " + path + ": " + e.what());
  }
  const std::size_t joints = basis.joint_count();
  if (basis.components.size() != basis.singular_values.size()) {
    throw ParseError("basis file " + path + ": component/singular-value count mismatch");
  }
  for (const auto& c : basis.components) {
    if (c.size() != joints) {
      throw ParseError("basis file " + path + ": component width != joint count");
    }
  }
  return basis;
}

void write_covariance_csv(const Matrix& cov, const std::string& path) {
  std::string text;
  for (std::size_t c = 0; c < cov.cols; ++c) {
    text += (c ? ",joint_" : "joint_") + std::to_string(c);
  }
  text += "\n";
  for (std::size_t r = 0; r < cov.rows; ++r) {
    for (std::size_t c = 0; c < cov.cols; ++c) {
      if (c) text += ",";
      text += format_double(cov.at(r, c));
    }
    text += "\n";
  }
  write_file(path, text);
}

void write_explained_variance_csv(const SynergyBasis& basis, const std::string& path) {
  std::string text = "components,cumulative_variance_fraction\n";
  for (std::size_t n = 1; n <= basis.rank(); ++n) {
    text += std::to_string(n) + "," + format_double(explained_variance(basis, n)) + "\n";
  }
  write_file(path, text);
}

}  // namespace grasplite::synergy
