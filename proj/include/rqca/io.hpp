#ifndef RQCA_IO_HPP
#define RQCA_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rqca/evolve.hpp"
#include "rqca/model.hpp"
#include "rqca/types.hpp"

namespace rqca::io {

// ---- number formatting ----

// Fixed 17-significant-digit formatting so repeated runs emit identical bytes.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// ---- CSV ----

inline std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ',';
    line += cells[i];
  }
  line += '\n';
  return line;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string trajectory_csv(const evolve::EvolutionRecord& record) {
  if (record.times.empty() || record.magnetization.empty())
    throw std::invalid_argument("empty evolution record");
  const Index n = record.magnetization.front().size();
  std::string text = "t";
  for (Index j = 1; j <= n; ++j) text += ",Z_" + std::to_string(j);
  text += ",trace_residual\n";
  for (std::size_t k = 0; k < record.times.size(); ++k) {
    std::vector<std::string> cells;
    cells.reserve(static_cast<std::size_t>(n) + 2);
    cells.push_back(format_double(record.times[k]));
    for (Index j = 0; j < n; ++j) cells.push_back(format_double(record.magnetization[k](j)));
    cells.push_back(format_double(record.trace_residual[k]));
    text += csv_line(cells);
  }
  return text;
}

// ---- PGM ----

struct GrayImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

inline GrayImage magnetization_image(const evolve::EvolutionRecord& record) {
  if (record.times.empty() || record.magnetization.empty())
    throw std::invalid_argument("empty evolution record");
  GrayImage img;
  img.rows = static_cast<int>(record.magnetization.size());
  img.cols = static_cast<int>(record.magnetization.front().size());
  img.pixels.resize(static_cast<std::size_t>(img.rows) * img.cols);
  for (int r = 0; r < img.rows; ++r)
    for (int c = 0; c < img.cols; ++c) {
      double z = record.magnetization[static_cast<std::size_t>(r)](c);
      if (z < -1.0) z = -1.0;
      if (z > 1.0) z = 1.0;
      const int v = static_cast<int>(std::lround(255.0 * (z + 1.0) / 2.0));
      img.pixels[static_cast<std::size_t>(r) * img.cols + c] =
          static_cast<std::uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
    }
  return img;
}

inline void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.rows <= 0 || img.cols <= 0) throw std::invalid_argument("empty image");
  if (img.pixels.size() != static_cast<std::size_t>(img.rows) * img.cols)
    throw std::invalid_argument("pixel buffer size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n" << img.cols << ' ' << img.rows << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---- density-matrix checkpoints ----

// Layout: magic, header ints (dim, n_sites), convention tag string, then the
// matrix row-major as interleaved real/imag doubles.
inline constexpr char kCheckpointMagic[8] = {'R', 'Q', 'C', 'A', 'D', 'M', '0', '1'};
inline constexpr const char* kBasisConvention = "site1-msb-z1-plus";

inline void write_checkpoint(const std::string& path, const Matrix& rho, int n_sites) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(kCheckpointMagic, 8);
  const std::uint64_t dim = static_cast<std::uint64_t>(rho.rows());
  const std::uint64_t sites = static_cast<std::uint64_t>(n_sites);
  const std::string tag = kBasisConvention;
  const std::uint64_t tag_len = tag.size();
  out.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  out.write(reinterpret_cast<const char*>(&sites), sizeof sites);
  out.write(reinterpret_cast<const char*>(&tag_len), sizeof tag_len);
  out.write(tag.data(), static_cast<std::streamsize>(tag_len));
  std::vector<double> buf;
  buf.reserve(2 * rho.size());
  for (Index r = 0; r < rho.rows(); ++r)
    for (Index c = 0; c < rho.cols(); ++c) {
      buf.push_back(rho(r, c).real());
      buf.push_back(rho(r, c).imag());
    }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct Checkpoint {
  Matrix rho;
  int n_sites = 0;
  std::string convention;
};

inline Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || !std::equal(magic, magic + 8, kCheckpointMagic))
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint64_t dim = 0, sites = 0, tag_len = 0;
  in.read(reinterpret_cast<char*>(&dim), sizeof dim);
  in.read(reinterpret_cast<char*>(&sites), sizeof sites);
  in.read(reinterpret_cast<char*>(&tag_len), sizeof tag_len);
  if (!in || dim == 0 || dim > 65536 || tag_len > 256)
    throw std::runtime_error("corrupt checkpoint header: " + path);
  Checkpoint cp;
  cp.convention.resize(tag_len);
  in.read(cp.convention.data(), static_cast<std::streamsize>(tag_len));
  cp.n_sites = static_cast<int>(sites);
  cp.rho.resize(static_cast<Index>(dim), static_cast<Index>(dim));
  std::vector<double> buf(2 * dim * dim);
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  std::size_t k = 0;
  for (Index r = 0; r < cp.rho.rows(); ++r)
    for (Index c = 0; c < cp.rho.cols(); ++c) {
      cp.rho(r, c) = cd{buf[k], buf[k + 1]};
      k += 2;
    }
  return cp;
}

// ---- rule manifests ----

inline nlohmann::json rule_to_json(const model::RuleSet& rules, model::RuleUnits units) {
  nlohmann::json j;
  const double scale = units == model::RuleUnits::Pi ? 1.0 / model::pi : 1.0;
  j["theta"] = {rules.theta[0] * scale, rules.theta[1] * scale, rules.theta[2] * scale};
  j["phi"] = {rules.phi[0] * scale, rules.phi[1] * scale, rules.phi[2] * scale};
  j["units"] = units == model::RuleUnits::Pi ? "pi" : "raw";
  j["gamma"] = rules.gamma;
  return j;
}

inline model::RuleSet rule_from_json(const nlohmann::json& j) {
  if (!j.contains("theta") || !j.contains("phi")) throw std::invalid_argument("rule manifest needs theta and phi");
  const auto theta = j.at("theta").get<std::vector<double>>();
  const auto phi = j.at("phi").get<std::vector<double>>();
  if (theta.size() != 3 || phi.size() != 3)
    throw std::invalid_argument("rule manifest theta/phi must have 3 entries");
  const std::string units = j.value("units", std::string("raw"));
  if (units != "pi" && units != "raw") throw std::invalid_argument("units must be pi or raw");
  const double gamma = j.value("gamma", 0.0);
  return model::make_rule({theta[0], theta[1], theta[2], phi[0], phi[1], phi[2]},
                          units == "pi" ? model::RuleUnits::Pi : model::RuleUnits::Raw, gamma);
}

}  // namespace rqca::io

#endif
