#pragma once

#include "pmlwave/field.hpp"
#include "pmlwave/grid.hpp"

#include <string>
#include <vector>

namespace pmlwave {

/// One field snapshot on disk: raw little-endian float64 payload
/// (x1 contiguous, x3 outermost) plus a JSON sidecar with the same basename
/// and extension ".json" carrying grid shape, extents, time and field name.
struct SnapshotFile {
  GridSpec grid;
  double time = 0.0;
  long step = 0;
  std::string field = "u";
  ScalarField data;
};

/// Writes `path` (payload) and the sidecar `path` with extension replaced
/// by ".json". The payload is written bit-exactly from the field buffer.
void write_snapshot(const std::string& path, const SnapshotFile& snap);

/// Reads payload + sidecar; verifies the payload length against the sidecar
/// shape and round-trips bit-exactly. Throws ConfigError on mismatch.
SnapshotFile read_snapshot(const std::string& path);

/// 8-bit binary PGM (P5) of a 2D field (or the x3 = 0 mid-slice in 3D).
/// Linear map [-max|u|, +max|u|] -> [0, 255]; an all-zero field maps to 127.
void export_image(const std::string& path, const GridSpec& grid,
                  const ScalarField& field);

/// Minimal CSV writer: header row then numeric rows, %.17g formatting.
void write_csv(const std::string& path,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

} // namespace pmlwave
