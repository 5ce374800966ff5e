#pragma once
// Serialization: run configuration (flat JSON), field snapshots (a
// small fixed binary layout), and numeric series (CSV).
//
// Snapshot layout, little-endian:
//   bytes 0-3    magic "MCNV"
//   byte  4      format version, currently 1
//   bytes 5-8    u32 nx
//   bytes 9-12   u32 ny
//   bytes 13-20  f64 domain length
//   bytes 21-28  f64 time
//   bytes 29-36  f64 epsilon
//   byte  37     model tag (0 full, 1 limit, 2 effective)
//   then five f64 arrays of nx*ny values each, row-major with the
//   y index fastest: u_x, u_y, B_x, B_y, theta.
//
// Doubles in CSV and JSON are printed with enough digits to
// round-trip exactly.

#include <cstddef>
#include <string>
#include <vector>

#include "mcnv/dynamics.hpp"

namespace mcnv {

struct RunConfig {
  ModelParams params;
  std::string output_dir = "out";
  int save_every = 1;
  std::vector<double> eps_list = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};
  double alpha = 0.1;
  int threads = 1;
};

// Parses a flat JSON object; every field is optional and falls back to
// the defaults above. Unknown fields, wrong types, malformed JSON and
// out-of-range values are all rejected with std::invalid_argument,
// parse errors carry the byte position reported by the parser.
RunConfig config_from_json_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Emits every field explicitly, so a saved config reloads to the same
// values bit for bit.
std::string config_to_json_text(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);

struct Snapshot {
  FlowState state;
  double epsilon = 0.0;
  Model model = Model::Full;
};

std::size_t snapshot_size_bytes(int nx, int ny);
void write_snapshot(const std::string& path, const FlowState& state, double epsilon,
                    Model model);
// Rejects bad magic, unknown versions, and truncated or oversized
// files, naming the byte offset where reading failed.
Snapshot read_snapshot(const std::string& path);

struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header line plus one %.17g-formatted row per entry, LF line ends.
void write_series_csv(const std::string& path, const Series& s);
Series read_series_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mcnv
