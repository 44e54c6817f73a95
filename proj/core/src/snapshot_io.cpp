#include "pmlwave/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pmlwave/errors.hpp"

namespace pmlwave {

namespace {

std::string sidecar_path(const std::string& path) {
  const std::size_t slash = path.find_last_of("/\\");
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + ".json";
  return path.substr(0, dot) + ".json";
}

void encode_le(double v, unsigned char* out) {
  const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b)
    out[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
}

double decode_le(const unsigned char* in) {
  std::uint64_t bits = 0;
  for (int b = 0; b < 8; ++b)
    bits |= static_cast<std::uint64_t>(in[b]) << (8 * b);
  return std::bit_cast<double>(bits);
}

} // namespace

void write_snapshot(const std::string& path, const SnapshotFile& snap) {
  const GridSpec& g = snap.grid;
  const std::size_t count = snap.data.size();
  if (count != static_cast<std::size_t>(g.n[0]) * g.n[1] *
                   (g.dim == 3 ? g.n[2] : 1))
    throw ConfigError("snapshot field shape does not match its grid");

  std::vector<unsigned char> buf(count * 8);
  for (std::size_t i = 0; i < count; ++i)
    encode_le(snap.data.data[i], buf.data() + 8 * i);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
  out.close();

  nlohmann::json meta;
  meta["schema_version"] = 1;
  meta["field"] = snap.field;
  meta["time"] = snap.time;
  meta["step"] = snap.step;
  meta["dim"] = g.dim;
  meta["axis_order"] = "x1-fastest";
  for (int m = 0; m < g.dim; ++m) {
    meta["shape"].push_back(g.n[m]);
    meta["spacing"].push_back(g.dx[m]);
    meta["interior_half_width"].push_back(g.a[m]);
    meta["layer_width"].push_back(g.L[m]);
  }

  const std::string side = sidecar_path(path);
  std::ofstream outm(side, std::ios::trunc);
  if (!outm) throw std::runtime_error("cannot open for writing: " + side);
  outm << meta.dump(2) << "\n";
  if (!outm) throw std::runtime_error("write failed: " + side);
}

SnapshotFile read_snapshot(const std::string& path) {
  const std::string side = sidecar_path(path);
  std::ifstream inm(side);
  if (!inm) throw std::runtime_error("cannot open: " + side);
  nlohmann::json meta;
  try {
    inm >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("snapshot sidecar is not valid JSON: " + side + ": " +
                      e.what());
  }

  SnapshotFile snap;
  try {
    const int dim = meta.at("dim").get<int>();
    if (dim != 2 && dim != 3)
      throw ConfigError("snapshot sidecar: dim must be 2 or 3");
    snap.grid.dim = dim;
    for (int m = 0; m < dim; ++m) {
      snap.grid.n[m] = meta.at("shape").at(m).get<int>();
      snap.grid.dx[m] = meta.at("spacing").at(m).get<double>();
      snap.grid.a[m] = meta.at("interior_half_width").at(m).get<double>();
      snap.grid.L[m] = meta.at("layer_width").at(m).get<double>();
      snap.grid.n_layer[m] =
          static_cast<int>(std::lround(snap.grid.L[m] / snap.grid.dx[m]));
    }
    snap.time = meta.at("time").get<double>();
    snap.step = meta.at("step").get<long>();
    snap.field = meta.at("field").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("snapshot sidecar is missing required fields: " + side +
                      ": " + e.what());
  }

  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const std::streamsize bytes = in.tellg();
  in.seekg(0);

  const GridSpec& g = snap.grid;
  const std::size_t count =
      static_cast<std::size_t>(g.n[0]) * g.n[1] * (g.dim == 3 ? g.n[2] : 1);
  if (static_cast<std::size_t>(bytes) != count * 8) {
    std::ostringstream msg;
    msg << "snapshot payload is corrupt: " << path << " holds " << bytes
        << " bytes, sidecar shape requires " << count * 8;
    throw ConfigError(msg.str());
  }

  std::vector<unsigned char> buf(count * 8);
  in.read(reinterpret_cast<char*>(buf.data()), bytes);
  if (!in) throw std::runtime_error("read failed: " + path);

  snap.data = ScalarField(g.n[0], g.n[1], g.dim == 3 ? g.n[2] : 1);
  for (std::size_t i = 0; i < count; ++i)
    snap.data.data[i] = decode_le(buf.data() + 8 * i);
  return snap;
}

void export_image(const std::string& path, const GridSpec& grid,
                  const ScalarField& field) {
  const int n1 = grid.n[0];
  const int n2 = grid.n[1];
  const int k = grid.dim == 3 ? grid.nearest_node(2, 0.0) : 0;

  double m = 0.0;
  for (int j = 0; j < n2; ++j)
    for (int i = 0; i < n1; ++i) m = std::max(m, std::abs(field(i, j, k)));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n" << n1 << " " << n2 << "\n255\n";

  std::vector<unsigned char> row(n1);
  for (int j = n2 - 1; j >= 0; --j) { // top row = largest x2
    for (int i = 0; i < n1; ++i) {
      if (m == 0.0) {
        row[i] = 127;
      } else {
        const double s = (field(i, j, k) + m) / (2.0 * m) * 255.0;
        row[i] = static_cast<unsigned char>(
            std::clamp(std::lround(s), 0L, 255L));
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()), n1);
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << (c ? "," : "") << columns[c];
  out << "\n";
  char buf[32];
  for (const auto& r : rows) {
    if (r.size() != columns.size())
      throw ConfigError("csv row width does not match the header");
    for (std::size_t c = 0; c < r.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", r[c]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace pmlwave
