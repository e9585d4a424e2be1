#include "lane_emden/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace lane_emden {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kFormat = "lane-emden-checkpoint/1";

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

Domain parse_domain(const json& j) {
  if (!j.is_object()) throw ConfigError("config key 'domain' must be an object");
  const std::string shape = get_or<std::string>(j, "shape", "");
  try {
    if (shape == "disk") return Domain::disk(get_or(j, "radius", 1.0));
    if (shape == "square") return Domain::rectangle(get_or(j, "side", 1.0), get_or(j, "side", 1.0));
    if (shape == "rectangle")
      return Domain::rectangle(get_or(j, "width", 1.0), get_or(j, "height", 1.0));
    if (shape == "annulus")
      return Domain::annulus(get_or(j, "r_inner", 0.5), get_or(j, "r_outer", 1.0));
  } catch (const BadDomain& e) {
    throw ConfigError(std::string("bad domain: ") + e.what());
  }
  throw ConfigError("unknown domain shape '" + shape + "'");
}

json domain_json(const Domain& d) {
  return std::visit(
      [](const auto& s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Disk>)
          return {{"shape", "disk"}, {"radius", s.radius}};
        else if constexpr (std::is_same_v<S, Rectangle>)
          return {{"shape", "rectangle"}, {"width", s.width}, {"height", s.height}};
        else
          return {{"shape", "annulus"}, {"r_inner", s.r_inner}, {"r_outer", s.r_outer}};
      },
      d.shape());
}

std::vector<double> parse_schedule(const json& j) {
  if (j.is_array()) {
    std::vector<double> s;
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError("schedule entries must be numbers");
      s.push_back(v.get<double>());
    }
    return s;
  }
  if (j.is_object()) {
    const double start = get_or(j, "start", 2.0);
    const double ratio = get_or(j, "ratio", 1.25);
    const double max = get_or(j, "max", 100.0);
    try {
      return geometric_schedule(start, ratio, max);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("config key 'schedule' must be a list or {start, ratio, max}");
}

std::string entry_file(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "u_%04zu.bin", i);
  return buf;
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  if (!j.contains("domain")) throw ConfigError("config key 'domain' is required");
  c.domain = parse_domain(j.at("domain"));

  const std::string disc = get_or<std::string>(j, "discretization", "lattice");
  if (disc == "lattice")
    c.discretization = Discretization::kLattice;
  else if (disc == "radial")
    c.discretization = Discretization::kRadial;
  else
    throw ConfigError("config key 'discretization' must be 'lattice' or 'radial'");

  c.h = get_or(j, "h", c.h);
  if (j.contains("radial")) {
    const json& r = j.at("radial");
    c.radial_t_min = get_or(r, "t_min", c.radial_t_min);
    c.radial_nodes = get_or(r, "nodes", c.radial_nodes);
  }
  if (!j.contains("schedule")) throw ConfigError("config key 'schedule' is required");
  c.schedule = parse_schedule(j.at("schedule"));
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    c.newton_tol = get_or(t, "newton_tol", c.newton_tol);
    c.linear_tol = get_or(t, "linear_tol", c.linear_tol);
    c.sym_tol = get_or(t, "sym_tol", c.sym_tol);
  }
  c.max_bisections = get_or(j, "max_bisections",
                            c.discretization == Discretization::kRadial ? 12 : 5);
  if (j.contains("diagnostics")) {
    const json& d = j.at("diagnostics");
    c.report = get_or(d, "report", c.report);
    c.limits = get_or(d, "limits", c.limits);
  }
  c.r_min = get_or(j, "r_min", c.r_min);
  c.output = get_or<std::string>(j, "output", c.output);
  if (j.contains("guess_points")) {
    for (const auto& pt : j.at("guess_points")) {
      if (!pt.is_array() || pt.size() != 2) throw ConfigError("guess points must be [x, y] pairs");
      c.guess_points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
    }
  }

  try {
    validate_schedule(c.schedule, 2.0);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (c.schedule.empty()) throw ConfigError("schedule is empty");
  if (!(c.newton_tol > 0.0) || !(c.linear_tol > 0.0) || !(c.sym_tol > 0.0))
    throw ConfigError("tolerances must be positive");
  if (c.max_bisections < 0) throw ConfigError("max_bisections must be non-negative");
  if (c.discretization == Discretization::kLattice) {
    if (!(c.h > 0.0) || !(c.h < c.domain.feature_size()))
      throw ConfigError("h = " + std::to_string(c.h) + " is not a valid spacing for the domain");
  } else {
    if (!c.domain.is_disk()) throw ConfigError("radial discretization needs a disk domain");
    if (c.radial_nodes < 4) throw ConfigError("radial.nodes must be at least 4");
    if (!(c.radial_t_min < std::log(0.5 * c.domain.diameter())))
      throw ConfigError("radial.t_min must lie below log(radius)");
  }
  for (const Point& x : c.guess_points)
    if (!c.domain.contains(x)) throw ConfigError("guess point outside the domain");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["domain"] = domain_json(c.domain);
  j["discretization"] = c.discretization == Discretization::kRadial ? "radial" : "lattice";
  j["h"] = c.h;
  j["radial"] = {{"t_min", c.radial_t_min}, {"nodes", c.radial_nodes}};
  j["schedule"] = c.schedule;
  j["tolerances"] = {
      {"newton_tol", c.newton_tol}, {"linear_tol", c.linear_tol}, {"sym_tol", c.sym_tol}};
  j["max_bisections"] = c.max_bisections;
  j["diagnostics"] = {{"report", c.report}, {"limits", c.limits}};
  j["r_min"] = c.r_min;
  j["output"] = c.output;
  json pts = json::array();
  for (const Point& x : c.guess_points) pts.push_back({x.x(), x.y()});
  j["guess_points"] = pts;
  return j;
}

void truncate_schedule(RunConfig& c, double max_p) {
  std::erase_if(c.schedule, [max_p](double p) { return p > max_p; });
  if (c.schedule.empty()) throw ConfigError("no schedule entry below --max-p");
}

// ---------------------------------------------------------------------------

CheckpointWriter::CheckpointWriter(fs::path dir, RunConfig config,
                                   std::vector<CheckpointEntry> existing)
    : dir_(std::move(dir)), config_(std::move(config)), entries_(std::move(existing)) {
  fs::create_directories(dir_);
  // a fresh run must not inherit snapshots beyond the kept prefix
  for (std::size_t i = entries_.size();; ++i) {
    const fs::path f = dir_ / entry_file(i);
    if (!fs::exists(f)) break;
    fs::remove(f);
  }
  write_manifest();
}

void CheckpointWriter::append(CheckpointEntry e) {
  const fs::path f = dir_ / entry_file(entries_.size());
  {
    std::ofstream out(f, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(e.values.data()),
              static_cast<std::streamsize>(e.values.size() * sizeof(double)));
    if (!out) throw Error("cannot write " + f.string());
  }
  entries_.push_back(std::move(e));
  write_manifest();
}

void CheckpointWriter::write_manifest() const {
  json entries = json::array();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    entries.push_back({{"p", e.p},
                       {"file", entry_file(i)},
                       {"size", e.values.size()},
                       {"residual", e.residual},
                       {"newton_iters", e.newton_iters},
                       {"underresolved", e.underresolved}});
  }
  const json m = {{"format", kFormat}, {"config", to_json(config_)}, {"entries", entries}};
  const fs::path tmp = dir_ / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << m.dump(2) << '\n';
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, dir_ / "manifest.json");
}

Checkpoint load_checkpoint(const fs::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw CorruptCheckpoint("no manifest.json in " + dir.string());
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw CorruptCheckpoint(std::string("manifest is not valid JSON: ") + e.what());
  }
  Checkpoint cp;
  try {
    if (m.at("format").get<std::string>() != kFormat)
      throw CorruptCheckpoint("unknown checkpoint format");
    cp.config = parse_config(m.at("config"));
    for (const auto& e : m.at("entries")) {
      CheckpointEntry ce;
      ce.p = e.at("p").get<double>();
      ce.residual = e.at("residual").get<double>();
      ce.newton_iters = e.at("newton_iters").get<int>();
      ce.underresolved = e.at("underresolved").get<bool>();
      const auto n = e.at("size").get<std::size_t>();
      const fs::path f = dir / e.at("file").get<std::string>();
      std::error_code ec;
      const auto bytes = fs::file_size(f, ec);
      if (ec || bytes != n * sizeof(double))
        throw CorruptCheckpoint("snapshot " + f.string() + " is missing or has the wrong size");
      ce.values.resize(static_cast<Eigen::Index>(n));
      std::ifstream bin(f, std::ios::binary);
      bin.read(reinterpret_cast<char*>(ce.values.data()), static_cast<std::streamsize>(bytes));
      if (!bin) throw CorruptCheckpoint("cannot read " + f.string());
      if (!ce.values.allFinite())
        throw CorruptCheckpoint("snapshot " + f.string() + " contains non-finite values");
      if (!cp.entries.empty() && !(ce.p > cp.entries.back().p))
        throw CorruptCheckpoint("checkpoint exponents are not increasing");
      cp.entries.push_back(std::move(ce));
    }
  } catch (const json::exception& e) {
    throw CorruptCheckpoint(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw CorruptCheckpoint(std::string("manifest config: ") + e.what());
  }
  return cp;
}

// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "p",         "sup_norm",     "p_dirichlet",  "p_mass_p1", "n_peaks",   "peak_x",
      "peak_y",    "peak_height",  "eps",          "beta_local", "bubble_dev", "pohozaev_res",
      "green_dev", "conc_res_norm", "p3",          "p4",        "min_bdry_dist", "underresolved"};
  return cols;
}

void write_report_csv(std::ostream& os, std::span<const AsymptoticsReport> reports) {
  const auto& cols = report_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : reports) {
    const Peak& pk = r.peaks.front();
    double conc = 0.0;
    for (const Point& v : r.concentration_residuals) conc = std::max(conc, v.norm());
    const double row[] = {r.p,
                          r.energy.sup,
                          r.energy.dirichlet,
                          r.energy.mass_p1,
                          static_cast<double>(r.peaks.size()),
                          pk.location.x(),
                          pk.location.y(),
                          pk.height,
                          pk.eps,
                          r.beta_local.front(),
                          r.bubble_deviation.front(),
                          r.pohozaev_residual.front(),
                          r.green_limit_deviation,
                          conc,
                          r.p3,
                          r.p4,
                          r.boundary_distance_min};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i == 4)
        os << ',' << r.peaks.size();
      else
        os << (i ? "," : "") << format_double(row[i]);
    }
    os << ',' << (r.underresolved ? 1 : 0) << '\n';
  }
}

json limits_to_json(const LimitEstimates& e) {
  auto fit = [](const LimitFit& f) {
    return json{{"limit", f.limit}, {"b", f.b}, {"c", f.c}, {"residual", f.residual},
                {"points", f.points}};
  };
  json m = json::array();
  for (const auto& f : e.m_hats) m.push_back(fit(f));
  json rows = json::array();
  for (const auto& r : e.rows)
    rows.push_back({{"quantity", r.quantity}, {"observed", r.observed},
                    {"prediction", r.prediction}, {"rel_gap", r.rel_gap}});
  return {{"beta_hat", fit(e.beta_hat)}, {"m_hats", m}, {"comparisons", rows}};
}

}  // namespace lane_emden
