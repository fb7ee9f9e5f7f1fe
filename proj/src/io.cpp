#include "pactopo/io.hpp"

#include "pactopo/errors.hpp"
#include "pactopo/presets.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pac {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != ',') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  return v;
}

template <class Int>
Int to_integer(std::string_view s) {
  s = trim(s);
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("expected an integer, got '" + std::string(s) + "'");
  return v;
}

Vec3 to_vec(std::string_view s, int dim) {
  const auto parts = split_ws(s);
  if (static_cast<int>(parts.size()) != dim)
    throw ConfigError("expected " + std::to_string(dim) + " components, got " + std::to_string(parts.size()));
  Vec3 v{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) v[a] = to_double(parts[static_cast<std::size_t>(a)]);
  return v;
}

std::string from_vec(const Vec3& v, int dim) {
  std::string s;
  for (int a = 0; a < dim; ++a) {
    if (a > 0) s += ' ';
    s += format_double(v[a]);
  }
  return s;
}

FacetTag to_tag(std::string_view s) {
  const auto t = parse_facet_tag(trim(s));
  if (!t) throw ConfigError("unknown face '" + std::string(s) + "'");
  return *t;
}

std::vector<FacetTag> to_tags(std::string_view s) {
  std::vector<FacetTag> out;
  for (auto p : split_ws(s)) out.push_back(to_tag(p));
  return out;
}

std::string from_tags(const std::vector<FacetTag>& tags) {
  std::string s;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i > 0) s += ' ';
    s += to_string(tags[i]);
  }
  return s;
}

TractionMap to_traction(std::string_view s, int dim) {
  TractionMap out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find(';', start);
    const auto item = trim(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (!item.empty()) {
      const auto colon = item.find(':');
      if (colon == std::string_view::npos) throw ConfigError("traction entries read '<face>: <vector>'");
      const FacetTag tag = to_tag(item.substr(0, colon));
      if (out.count(tag)) throw ConfigError("duplicate traction face '" + std::string(to_string(tag)) + "'");
      out[tag] = to_vec(item.substr(colon + 1), dim);
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string from_traction(const TractionMap& tm, int dim) {
  std::string s;
  for (const auto& [tag, g] : tm) {
    if (!s.empty()) s += "; ";
    s += std::string(to_string(tag)) + ": " + from_vec(g, dim);
  }
  return s;
}

struct KeySpec {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

IsotropicElasticity& elasticity(RunConfig& c, int which) {
  switch (which) {
  case 0: return c.material.stage1_plus;
  case 1: return c.material.stage1_minus;
  case 2: return c.material.stage2_plus;
  default: return c.material.stage2_minus;
  }
}

constexpr const char* kElasticityNames[4] = {"stage1_plus", "stage1_minus", "stage2_plus", "stage2_minus"};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = [] {
    std::vector<KeySpec> t;
    const auto dbl = [&t](const char* sec, const char* key, auto member) {
      t.push_back({sec, key, [member](const RunConfig& c) { return format_double(member(const_cast<RunConfig&>(c))); },
                   [member](RunConfig& c, std::string_view v) { member(c) = to_double(v); }});
    };
    const auto integer = [&t](const char* sec, const char* key, auto member) {
      t.push_back({sec, key, [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); },
                   [member](RunConfig& c, std::string_view v) { member(c) = to_integer<int>(v); }});
    };

    t.push_back({"mesh", "dim", [](const RunConfig& c) { return std::to_string(c.box.dim); },
                 [](RunConfig& c, std::string_view v) {
                   const int d = to_integer<int>(v);
                   if (d != 2 && d != 3) throw ConfigError("dim must be 2 or 3");
                   c.box.dim = d;
                 }});
    t.push_back({"mesh", "lower", [](const RunConfig& c) { return from_vec(c.box.lower, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.box.lower = to_vec(v, c.box.dim); }});
    t.push_back({"mesh", "upper", [](const RunConfig& c) { return from_vec(c.box.upper, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.box.upper = to_vec(v, c.box.dim); }});
    t.push_back({"mesh", "resolution",
                 [](const RunConfig& c) {
                   std::string s;
                   for (int a = 0; a < c.box.dim; ++a) s += (a ? " " : "") + std::to_string(c.box.resolution[a]);
                   return s;
                 },
                 [](RunConfig& c, std::string_view v) {
                   const auto parts = split_ws(v);
                   if (static_cast<int>(parts.size()) != c.box.dim) throw ConfigError("expected one count per axis");
                   for (int a = 0; a < 3; ++a)
                     c.box.resolution[a] = a < c.box.dim ? to_integer<int>(parts[static_cast<std::size_t>(a)]) : 1;
                 }});

    for (int which = 0; which < 4; ++which) {
      static const char* youngs_keys[4] = {"stage1_plus_youngs", "stage1_minus_youngs", "stage2_plus_youngs",
                                           "stage2_minus_youngs"};
      static const char* poisson_keys[4] = {"stage1_plus_poisson", "stage1_minus_poisson", "stage2_plus_poisson",
                                            "stage2_minus_poisson"};
      dbl("material", youngs_keys[which], [which](RunConfig& c) -> double& { return elasticity(c, which).youngs_modulus; });
      dbl("material", poisson_keys[which], [which](RunConfig& c) -> double& { return elasticity(c, which).poisson_ratio; });
    }
    dbl("material", "fixity_scale", [](RunConfig& c) -> double& { return c.material.fixity_scale; });

    t.push_back({"loads", "dirichlet_stage1", [](const RunConfig& c) { return from_tags(c.boundary.dirichlet_stage1); },
                 [](RunConfig& c, std::string_view v) { c.boundary.dirichlet_stage1 = to_tags(v); }});
    t.push_back({"loads", "dirichlet_stage2", [](const RunConfig& c) { return from_tags(c.boundary.dirichlet_stage2); },
                 [](RunConfig& c, std::string_view v) { c.boundary.dirichlet_stage2 = to_tags(v); }});
    t.push_back({"loads", "body_stage1", [](const RunConfig& c) { return from_vec(c.loads.body_stage1, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.loads.body_stage1 = to_vec(v, c.box.dim); }});
    t.push_back({"loads", "body_stage2", [](const RunConfig& c) { return from_vec(c.loads.body_stage2, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.loads.body_stage2 = to_vec(v, c.box.dim); }});
    t.push_back({"loads", "traction_stage1",
                 [](const RunConfig& c) { return from_traction(c.loads.traction_stage1, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.loads.traction_stage1 = to_traction(v, c.box.dim); }});
    t.push_back({"loads", "traction_stage2",
                 [](const RunConfig& c) { return from_traction(c.loads.traction_stage2, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.loads.traction_stage2 = to_traction(v, c.box.dim); }});

    t.push_back({"target", "profile", [](const RunConfig& c) { return std::string(to_string(c.target.profile)); },
                 [](RunConfig& c, std::string_view v) {
                   const auto p = parse_target_profile(trim(v));
                   if (!p) throw ConfigError("unknown target profile '" + std::string(trim(v)) + "'");
                   c.target.profile = *p;
                 }});
    dbl("target", "c", [](RunConfig& c) -> double& { return c.target.c; });
    dbl("target", "k", [](RunConfig& c) -> double& { return c.target.k; });
    t.push_back({"target", "axis", [](const RunConfig& c) { return from_vec(c.target.axis, c.box.dim); },
                 [](RunConfig& c, std::string_view v) { c.target.axis = to_vec(v, c.box.dim); }});
    t.push_back({"target", "weight",
                 [](const RunConfig& c) {
                   std::string s;
                   for (int i = 0; i < c.box.dim; ++i)
                     for (int j = 0; j < c.box.dim; ++j) s += (i + j ? " " : "") + format_double(c.target.weight(i, j));
                   return s;
                 },
                 [](RunConfig& c, std::string_view v) {
                   const auto parts = split_ws(v);
                   const int d = c.box.dim;
                   if (static_cast<int>(parts.size()) != d * d)
                     throw ConfigError("weight needs " + std::to_string(d * d) + " entries (row-major)");
                   c.target.weight = Mat3{};
                   for (int i = 0; i < d; ++i)
                     for (int j = 0; j < d; ++j) c.target.weight(i, j) = to_double(parts[static_cast<std::size_t>(i * d + j)]);
                 }});
    t.push_back({"target", "tags", [](const RunConfig& c) { return from_tags(c.boundary.target); },
                 [](RunConfig& c, std::string_view v) { c.boundary.target = to_tags(v); }});

    dbl("flow", "epsilon", [](RunConfig& c) -> double& { return c.flow.epsilon; });
    dbl("flow", "gamma", [](RunConfig& c) -> double& { return c.flow.gamma; });
    dbl("flow", "tau", [](RunConfig& c) -> double& { return c.flow.tau; });
    integer("flow", "steps", [](RunConfig& c) -> int& { return c.flow.max_steps; });
    dbl("flow", "stop_rtol", [](RunConfig& c) -> double& { return c.flow.stop_rtol; });
    integer("flow", "stop_patience", [](RunConfig& c) -> int& { return c.flow.stop_patience; });
    t.push_back({"flow", "seed", [](const RunConfig& c) { return std::to_string(c.initial.seed); },
                 [](RunConfig& c, std::string_view v) { c.initial.seed = to_integer<std::uint64_t>(v); }});
    dbl("flow", "init_amplitude", [](RunConfig& c) -> double& { return c.initial.amplitude; });
    dbl("flow", "cg_tol", [](RunConfig& c) -> double& { return c.solver.cg_tol; });
    integer("flow", "cg_max_iter", [](RunConfig& c) -> int& { return c.solver.cg_max_iter; });
    dbl("flow", "vi_tol", [](RunConfig& c) -> double& { return c.solver.vi_tol; });
    integer("flow", "vi_max_sweeps", [](RunConfig& c) -> int& { return c.solver.vi_max_sweeps; });

    integer("output", "snapshot_every", [](RunConfig& c) -> int& { return c.output.snapshot_every; });
    return t;
  }();
  return table;
}

bool known_section(std::string_view s) {
  return s == "mesh" || s == "material" || s == "loads" || s == "target" || s == "flow" || s == "output";
}

struct Entry {
  std::string value;
  int line;
};

} // namespace

RunConfig parse_config(std::string_view text, const std::optional<RunConfig>& base) {
  std::map<std::string, Entry> entries;  // "section.key" or top-level "key"
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigParseError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_section(section)) throw ConfigParseError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigParseError(where + "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigParseError(where + "empty key");
    std::string full;
    if (key.find('.') != std::string_view::npos) {
      full = std::string(key);
      if (!known_section(key.substr(0, key.find('.'))))
        throw ConfigParseError(where + "unknown key '" + full + "'");
    } else {
      full = section.empty() ? std::string(key) : section + "." + std::string(key);
    }
    if (entries.count(full)) throw ConfigParseError(where + "duplicate key '" + full + "'");
    entries[full] = {std::string(trim(line.substr(eq + 1))), line_no};
  }

  // Base configuration.
  RunConfig cfg;
  const auto take = [&](const std::string& k) -> std::optional<Entry> {
    const auto it = entries.find(k);
    if (it == entries.end()) return std::nullopt;
    Entry e = it->second;
    entries.erase(it);
    return e;
  };
  const auto preset_entry = take("preset");
  const auto scale_entry = take("scale");
  const auto name_entry = take("name");
  try {
    if (preset_entry) {
      const double scale = scale_entry ? to_double(scale_entry->value) : 1.0;
      cfg = preset(preset_entry->value, scale);
    } else if (scale_entry) {
      throw ConfigError("'scale' requires 'preset'");
    } else {
      cfg = base ? *base : preset(PresetId::T1R1);
    }
  } catch (const ConfigError& e) {
    const int line = preset_entry ? preset_entry->line : (scale_entry ? scale_entry->line : 0);
    throw ConfigParseError("line " + std::to_string(line) + ": " + e.what());
  }
  if (name_entry) cfg.name = name_entry->value;

  for (const KeySpec& spec : key_table()) {
    const std::string full = std::string(spec.section) + "." + spec.key;
    const auto e = take(full);
    if (!e) continue;
    try {
      spec.set(cfg, e->value);
    } catch (const ConfigError& ex) {
      throw ConfigParseError("line " + std::to_string(e->line) + " (" + full + "): " + ex.what());
    }
  }
  if (!entries.empty()) {
    const auto& [k, e] = *entries.begin();
    throw ConfigParseError("line " + std::to_string(e.line) + ": unknown key '" + k + "'");
  }

  // Derived Lamé parameters.
  for (int which = 0; which < 4; ++which) {
    IsotropicElasticity& m = elasticity(cfg, which);
    try {
      m = IsotropicElasticity::from_youngs(m.youngs_modulus, m.poisson_ratio);
    } catch (const std::invalid_argument& ex) {
      const std::string key = std::string("material.") + kElasticityNames[which];
      throw ConfigError(key + "_youngs / " + key + "_poisson: " + ex.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::string serialize_config(const RunConfig& config) {
  std::ostringstream os;
  os << "# pac-topopt run configuration\n";
  os << "name = " << config.name << "\n";
  const char* current = "";
  for (const KeySpec& spec : key_table()) {
    if (std::strcmp(current, spec.section) != 0) {
      current = spec.section;
      os << "\n[" << current << "]\n";
    }
    const std::string value = spec.get(config);
    os << spec.key << " =" << (value.empty() ? "" : " ") << value << "\n";
  }
  return os.str();
}

std::string trace_csv(const EnergyTrace& trace) {
  std::string out = "step,time,J,E_target,E_interface,vi_iters,cg_iters\n";
  char buf[256];
  for (const TraceRow& r : trace.rows()) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%d,%d\n", r.step, r.time, r.cost, r.target_energy,
                  r.interface_energy, r.vi_iterations, r.cg_iterations);
    out += buf;
  }
  return out;
}

void write_trace_csv(const EnergyTrace& trace, const std::filesystem::path& path) {
  write_file_atomic(path, trace_csv(trace));
}

std::string vtk_snapshot(const SimplexMesh& mesh, const PhaseField& phi, const DisplacementField& u_bar,
                         const DisplacementField& u_hat) {
  const std::size_t nv = mesh.num_vertices();
  const std::size_t nc = mesh.num_cells();
  const int npc = mesh.vertices_per_cell();
  std::string out;
  out.reserve(nv * 160 + nc * 32);
  char buf[256];
  out += "# vtk DataFile Version 3.0\npac-topopt snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(nv) + " double\n";
  for (const Vec3& x : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", x[0], x[1], x[2]);
    out += buf;
  }
  out += "CELLS " + std::to_string(nc) + " " + std::to_string(nc * static_cast<std::size_t>(npc + 1)) + "\n";
  for (std::size_t c = 0; c < nc; ++c) {
    out += std::to_string(npc);
    for (Index v : mesh.cell(static_cast<Index>(c))) out += " " + std::to_string(v);
    out += "\n";
  }
  out += "CELL_TYPES " + std::to_string(nc) + "\n";
  const std::string type = mesh.dim() == 2 ? "5\n" : "10\n";
  for (std::size_t c = 0; c < nc; ++c) out += type;
  out += "POINT_DATA " + std::to_string(nv) + "\nSCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (double v : phi.values) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    out += buf;
  }
  for (const auto& [name, field] : {std::pair<const char*, const DisplacementField*>{"u_bar", &u_bar}, {"u_hat", &u_hat}}) {
    out += std::string("VECTORS ") + name + " double\n";
    for (std::size_t v = 0; v < nv; ++v) {
      const Vec3 u = field->at(static_cast<Index>(v));
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", u[0], u[1], u[2]);
      out += buf;
    }
  }
  return out;
}

void write_vtk_snapshot(const SimplexMesh& mesh, const PhaseField& phi, const DisplacementField& u_bar,
                        const DisplacementField& u_hat, const std::filesystem::path& path) {
  write_file_atomic(path, vtk_snapshot(mesh, phi, u_bar, u_hat));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (f == nullptr) throw IoError("cannot open '" + tmp.string() + "' for writing: " + std::strerror(errno));
    const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
    const int err = written == content.size() ? 0 : errno;
    if (std::fclose(f) != 0 || err != 0) {
      std::remove(tmp.c_str());
      throw IoError("failed writing '" + tmp.string() + "': " + std::strerror(err != 0 ? err : errno));
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace pac
