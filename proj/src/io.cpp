#include "mcnv/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mcnv/check.hpp"

namespace mcnv {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr char kMagic[4] = {'M', 'C', 'N', 'V'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 38;

double as_double(const json& j, const char* name) {
  require_arg(j.is_number(), std::string("config: field '") + name + "' must be a number");
  return j.get<double>();
}

int as_int(const json& j, const char* name) {
  require_arg(j.is_number_integer(),
              std::string("config: field '") + name + "' must be an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const char* name) {
  require_arg(j.is_string(), std::string("config: field '") + name + "' must be a string");
  return j.get<std::string>();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int q = 0; q < 4; ++q) out.push_back(char((v >> (8 * q)) & 0xff));
}

void put_f64(std::string& out, double v) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &v, sizeof bits);
  for (int q = 0; q < 8; ++q) out.push_back(char((bits >> (8 * q)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int q = 0; q < 4; ++q) v |= std::uint32_t(std::uint8_t(in[at + q])) << (8 * q);
  return v;
}

double get_f64(const std::string& in, std::size_t at) {
  std::uint64_t bits = 0;
  for (int q = 0; q < 8; ++q) bits |= std::uint64_t(std::uint8_t(in[at + q])) << (8 * q);
  double v = 0.0;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

void put_field(std::string& out, const ScalarField& f) {
  for (double q : f.v) put_f64(out, q);
}

void get_field(const std::string& in, std::size_t at, ScalarField& f) {
  for (std::size_t q = 0; q < f.v.size(); ++q) f.v[q] = get_f64(in, at + 8 * q);
}

}  // namespace

RunConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    require_arg(false, std::string("config: ") + e.what());
  }
  require_arg(j.is_object(), "config: top level must be a JSON object");

  RunConfig cfg;
  ModelParams& p = cfg.params;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    const json& v = item.value();
    if (key == "model") {
      p.model = model_from_string(as_string(v, "model"));
    } else if (key == "epsilon") {
      p.epsilon = as_double(v, "epsilon");
    } else if (key == "rayleigh") {
      p.rayleigh = as_double(v, "rayleigh");
    } else if (key == "chandrasekhar") {
      p.chandrasekhar = as_double(v, "chandrasekhar");
    } else if (key == "prandtl_m") {
      p.prandtl_m = as_double(v, "prandtl_m");
    } else if (key == "length") {
      p.length = as_double(v, "length");
    } else if (key == "nx") {
      p.nx = as_int(v, "nx");
    } else if (key == "ny") {
      p.ny = as_int(v, "ny");
    } else if (key == "dt") {
      p.dt = as_double(v, "dt");
    } else if (key == "t_final") {
      p.t_final = as_double(v, "t_final");
    } else if (key == "substep_cap") {
      p.substep_cap = as_double(v, "substep_cap");
    } else if (key == "ic_preset") {
      p.ic.preset = as_string(v, "ic_preset");
    } else if (key == "ic_amp_psi") {
      p.ic.amp_psi = as_double(v, "ic_amp_psi");
    } else if (key == "ic_amp_b") {
      p.ic.amp_b = as_double(v, "ic_amp_b");
    } else if (key == "ic_amp_theta") {
      p.ic.amp_theta = as_double(v, "ic_amp_theta");
    } else if (key == "ic_mode") {
      p.ic.mode = as_int(v, "ic_mode");
    } else if (key == "output_dir") {
      cfg.output_dir = as_string(v, "output_dir");
    } else if (key == "save_every") {
      cfg.save_every = as_int(v, "save_every");
    } else if (key == "eps_list") {
      require_arg(v.is_array() && !v.empty(), "config: field 'eps_list' must be a nonempty array");
      cfg.eps_list.clear();
      for (const json& e : v) cfg.eps_list.push_back(as_double(e, "eps_list"));
    } else if (key == "alpha") {
      cfg.alpha = as_double(v, "alpha");
    } else if (key == "threads") {
      cfg.threads = as_int(v, "threads");
    } else {
      require_arg(false, "config: unknown field '" + key + "'");
    }
  }

  validate(p);
  require_arg(cfg.save_every >= 1, "config: save_every must be at least 1");
  require_arg(cfg.threads >= 1, "config: threads must be at least 1");
  require_arg(cfg.alpha > 0.0 && cfg.alpha < 1.0, "config: alpha must lie in (0, 1)");
  require_arg(!cfg.output_dir.empty(), "config: output_dir must not be empty");
  for (double e : cfg.eps_list)
    require_arg(e > 0.0 && e <= 1.0, "config: eps_list entries must lie in (0, 1]");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  require_arg(in.good(), "config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  ordered_json j;
  j["model"] = to_string(p.model);
  j["epsilon"] = p.epsilon;
  j["rayleigh"] = p.rayleigh;
  j["chandrasekhar"] = p.chandrasekhar;
  j["prandtl_m"] = p.prandtl_m;
  j["length"] = p.length;
  j["nx"] = p.nx;
  j["ny"] = p.ny;
  j["dt"] = p.dt;
  j["t_final"] = p.t_final;
  j["substep_cap"] = p.substep_cap;
  j["ic_preset"] = p.ic.preset;
  j["ic_amp_psi"] = p.ic.amp_psi;
  j["ic_amp_b"] = p.ic.amp_b;
  j["ic_amp_theta"] = p.ic.amp_theta;
  j["ic_mode"] = p.ic.mode;
  j["output_dir"] = cfg.output_dir;
  j["save_every"] = cfg.save_every;
  j["eps_list"] = cfg.eps_list;
  j["alpha"] = cfg.alpha;
  j["threads"] = cfg.threads;
  return j.dump(2) + "\n";
}

void save_config(const RunConfig& cfg, const std::string& path) {
  write_text_file(path, config_to_json_text(cfg));
}

std::size_t snapshot_size_bytes(int nx, int ny) {
  return kHeaderBytes + 5u * 8u * std::size_t(nx) * std::size_t(ny);
}

void write_snapshot(const std::string& path, const FlowState& state, double epsilon,
                    Model model) {
  const Grid& g = state.u.grid();
  std::string out;
  out.reserve(snapshot_size_bytes(g.nx, g.ny));
  out.append(kMagic, 4);
  out.push_back(char(kVersion));
  put_u32(out, std::uint32_t(g.nx));
  put_u32(out, std::uint32_t(g.ny));
  put_f64(out, g.length);
  put_f64(out, state.t);
  put_f64(out, epsilon);
  out.push_back(char(std::uint8_t(model)));
  put_field(out, state.u.x);
  put_field(out, state.u.y);
  put_field(out, state.b.x);
  put_field(out, state.b.y);
  put_field(out, state.theta);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), "snapshot: cannot open '" + path + "' for writing");
  f.write(out.data(), std::streamsize(out.size()));
  require(f.good(), "snapshot: write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "snapshot: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  std::string in = buf.str();

  require(in.size() >= kHeaderBytes,
          "snapshot: truncated header, got " + std::to_string(in.size()) +
              " bytes, need " + std::to_string(kHeaderBytes));
  require(std::memcmp(in.data(), kMagic, 4) == 0, "snapshot: bad magic at byte 0");
  require(std::uint8_t(in[4]) == kVersion,
          "snapshot: unsupported version " + std::to_string(int(std::uint8_t(in[4]))) +
              " at byte 4");

  int nx = int(get_u32(in, 5));
  int ny = int(get_u32(in, 9));
  double length = get_f64(in, 13);
  Grid g;
  try {
    g = make_grid(nx, ny, length);
  } catch (const std::exception& e) {
    require(false, std::string("snapshot: invalid grid in header: ") + e.what());
  }

  std::size_t want = snapshot_size_bytes(nx, ny);
  require(in.size() == want, "snapshot: file is " + std::to_string(in.size()) +
                                 " bytes, expected " + std::to_string(want));

  Snapshot s;
  s.state.u = VectorField(g);
  s.state.b = VectorField(g);
  s.state.theta = ScalarField(g);
  s.state.t = get_f64(in, 21);
  s.epsilon = get_f64(in, 29);
  int tag = int(std::uint8_t(in[37]));
  require(tag >= 0 && tag <= 2,
          "snapshot: unknown model tag " + std::to_string(tag) + " at byte 37");
  s.model = Model(tag);

  std::size_t cells = 8u * std::size_t(nx) * std::size_t(ny);
  get_field(in, kHeaderBytes + 0 * cells, s.state.u.x);
  get_field(in, kHeaderBytes + 1 * cells, s.state.u.y);
  get_field(in, kHeaderBytes + 2 * cells, s.state.b.x);
  get_field(in, kHeaderBytes + 3 * cells, s.state.b.y);
  get_field(in, kHeaderBytes + 4 * cells, s.state.theta);
  return s;
}

void write_series_csv(const std::string& path, const Series& s) {
  require_arg(!s.columns.empty(), "csv: a series needs at least one column");
  std::string out;
  for (std::size_t c = 0; c < s.columns.size(); ++c) {
    if (c) out.push_back(',');
    out += s.columns[c];
  }
  out.push_back('\n');
  for (const auto& row : s.rows) {
    require_arg(row.size() == s.columns.size(), "csv: row width does not match the header");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      out += format_double(row[c]);
    }
    out.push_back('\n');
  }
  write_text_file(path, out);
}

Series read_series_csv(const std::string& path) {
  std::ifstream f(path);
  require(f.good(), "csv: cannot open '" + path + "'");
  Series s;
  std::string line;
  require(bool(std::getline(f, line)), "csv: '" + path + "' is empty");
  std::stringstream head(line);
  std::string cell;
  while (std::getline(head, cell, ',')) s.columns.push_back(cell);
  require(!s.columns.empty(), "csv: '" + path + "' has an empty header");

  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      require(end && *end == '\0' && end != cell.c_str(),
              "csv: bad number '" + cell + "' at line " + std::to_string(lineno));
      row.push_back(v);
    }
    require(row.size() == s.columns.size(),
            "csv: line " + std::to_string(lineno) + " has " + std::to_string(row.size()) +
                " cells, header has " + std::to_string(s.columns.size()));
    s.rows.push_back(std::move(row));
  }
  return s;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), "cannot open '" + path + "' for writing");
  f.write(content.data(), std::streamsize(content.size()));
  require(f.good(), "write to '" + path + "' failed");
}

}  // namespace mcnv
