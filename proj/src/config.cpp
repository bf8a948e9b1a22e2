#include "seg/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace seg {

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  bool used = false;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

class Table {
 public:
  explicit Table(std::filesystem::path origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(std::size_t line, const std::string& msg) const {
    throw ConfigError(origin_.string() + ":" + std::to_string(line) + ": " + msg);
  }

  void add(const std::string& key, std::string value, std::size_t line) {
    if (entries_.count(key)) fail(line, "duplicate key '" + key + "'");
    entries_[key] = Entry{std::move(value), line, false};
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry& raw(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(origin_.string() + ": missing key '" + key + "'");
    it->second.used = true;
    return it->second;
  }

  std::string str(const std::string& key, const std::string& fallback) {
    return has(key) ? raw(key).value : fallback;
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Entry& e = raw(key);
    return to_number(e.value, e.line, key);
  }

  double to_number(const std::string& text, std::size_t line, const std::string& key) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (!trim(text.substr(used)).empty() || !std::isfinite(v)) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      fail(line, "'" + key + "' expects a number, got '" + text + "'");
    }
  }

  long integer(const std::string& key, long fallback) {
    if (!has(key)) return fallback;
    const Entry& e = raw(key);
    const double v = to_number(e.value, e.line, key);
    if (v != std::floor(v)) fail(e.line, "'" + key + "' expects an integer");
    return static_cast<long>(v);
  }

  void reject_unused() const {
    for (const auto& [k, e] : entries_) {
      if (!e.used) fail(e.line, "unknown key '" + k + "'");
    }
  }

  const std::filesystem::path& origin() const { return origin_; }

 private:
  std::filesystem::path origin_;
  std::map<std::string, Entry> entries_;
};

std::vector<Arc> parse_arcs(Table& t, const std::string& key) {
  const Entry& e = t.raw(key);
  std::vector<Arc> arcs;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    if (item.front() != '(' || item.back() != ')') t.fail(e.line, "arc must look like (t_start, t_end, amplitude)");
    std::stringstream parts(item.substr(1, item.size() - 2));
    std::vector<double> nums;
    std::string num;
    while (std::getline(parts, num, ',')) nums.push_back(t.to_number(trim(num), e.line, key));
    if (nums.size() != 3) t.fail(e.line, "arc must have three entries (t_start, t_end, amplitude)");
    if (nums[2] < 0.0) t.fail(e.line, "negative amplitude in '" + key + "'");
    if (nums[0] < 0.0 || nums[0] >= 1.0 || nums[1] < 0.0 || nums[1] > 1.0) {
      t.fail(e.line, "arc parameters must satisfy 0 <= t_start < 1, 0 <= t_end <= 1");
    }
    arcs.push_back({nums[0], nums[1], nums[2]});
  }
  return arcs;
}

std::vector<double> parse_list(Table& t, const std::string& key) {
  const Entry& e = t.raw(key);
  std::vector<double> values;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(t.to_number(item, e.line, key));
  }
  return values;
}

std::vector<std::string> read_mask(const std::filesystem::path& path, Table& t, std::size_t line) {
  std::ifstream in(path);
  if (!in) t.fail(line, "cannot open mask file " + path.string());
  std::vector<std::string> rows;
  std::string row;
  while (std::getline(in, row)) {
    row = trim(row);
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& origin) {
  static const std::vector<std::string> sections = {"domain", "boundary", "solver", "verify", "output"};
  Table t(origin);
  std::stringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') t.fail(lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& s : sections) known = known || s == section;
      if (!known) t.fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) t.fail(lineno, "expected 'key = value'");
    if (section.empty()) t.fail(lineno, "key outside of a section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) t.fail(lineno, "empty key");
    t.add(section + "." + key, trim(line.substr(eq + 1)), lineno);
  }

  RunConfig cfg;
  cfg.source = origin;

  const std::string shape = t.str("domain.shape", "");
  const std::size_t shape_line = t.has("domain.shape") ? t.raw("domain.shape").line : 0;
  if (shape == "interval") {
    cfg.shape = IntervalShape{t.number("domain.x_min", 0.0), t.number("domain.x_max", 1.0)};
  } else if (shape == "rectangle") {
    cfg.shape = RectangleShape{t.number("domain.x_min", 0.0), t.number("domain.x_max", 1.0),
                               t.number("domain.y_min", 0.0), t.number("domain.y_max", 1.0)};
  } else if (shape == "disk") {
    cfg.shape = DiskShape{t.number("domain.cx", 0.0), t.number("domain.cy", 0.0),
                          t.number("domain.radius", 1.0)};
  } else if (shape == "mask") {
    const Entry& file = t.raw("domain.mask_file");
    const std::filesystem::path base = origin.has_parent_path() ? origin.parent_path() : ".";
    MaskShape mask;
    mask.rows = read_mask(base / file.value, t, file.line);
    mask.h = t.number("domain.h", 1.0);
    mask.x_min = t.number("domain.x_min", 0.0);
    mask.y_min = t.number("domain.y_min", 0.0);
    cfg.shape = mask;
  } else {
    t.fail(shape_line, "domain.shape must be interval, rectangle, disk or mask");
  }
  cfg.resolution = static_cast<int>(t.integer("domain.n", 0));
  if (shape != "mask" && cfg.resolution < 3) {
    t.fail(t.has("domain.n") ? t.raw("domain.n").line : shape_line, "domain.n must be at least 3");
  }

  const long species = t.integer("boundary.species", 0);
  if (species < 1) throw ConfigError(origin.string() + ": boundary.species must be at least 1");
  cfg.species = static_cast<std::size_t>(species);
  const std::string profile = t.str("boundary.profile", "raised_cosine");
  if (profile == "raised_cosine") cfg.profile = Profile::raised_cosine;
  else if (profile == "constant") cfg.profile = Profile::constant;
  else t.fail(t.raw("boundary.profile").line, "boundary.profile must be raised_cosine or constant");
  cfg.arcs.resize(cfg.species);
  for (std::size_t i = 0; i < cfg.species; ++i) {
    const std::string key = "boundary.arcs." + std::to_string(i + 1);
    if (t.has(key)) cfg.arcs[i] = parse_arcs(t, key);
  }

  cfg.solver.tol = t.number("solver.tol", cfg.solver.tol);
  cfg.solver.max_iter = t.integer("solver.max_iter", cfg.solver.max_iter);
  cfg.solver.omega = t.number("solver.omega", cfg.solver.omega);
  cfg.solver.check_interval = static_cast<int>(t.integer("solver.check_interval", cfg.solver.check_interval));
  if (t.has("solver.ladder")) cfg.ladder = parse_list(t, "solver.ladder");
  cfg.limit.tol = t.number("solver.limit_tol", cfg.limit.tol);
  cfg.limit.max_iter = t.integer("solver.limit_max_iter", cfg.limit.max_iter);
  cfg.limit.omega = t.number("solver.limit_omega", cfg.limit.omega);

  Tolerances& rel = cfg.relative_tolerances;
  rel.nonnegative = t.number("verify.nonnegative", rel.nonnegative);
  rel.subharmonic = t.number("verify.subharmonic", rel.subharmonic);
  rel.hat_superharmonic = t.number("verify.hat_superharmonic", rel.hat_superharmonic);
  rel.boundary = t.number("verify.boundary", rel.boundary);
  rel.overlap = t.number("verify.overlap", rel.overlap);
  rel.support = t.number("verify.support", rel.support);
  cfg.lemma_slack = t.number("verify.lemma_slack", cfg.lemma_slack);

  cfg.out_dir = t.str("output.dir", cfg.out_dir.string());
  t.reject_unused();

  if (!(cfg.solver.tol > 0.0) || !(cfg.limit.tol > 0.0)) {
    throw ConfigError(origin.string() + ": solver tolerances must be positive");
  }
  if (cfg.solver.max_iter < 1 || cfg.limit.max_iter < 1) {
    throw ConfigError(origin.string() + ": iteration limits must be positive");
  }
  for (double v : {rel.nonnegative, rel.subharmonic, rel.hat_superharmonic, rel.boundary, rel.overlap,
                   rel.support, cfg.lemma_slack}) {
    if (v < 0.0) throw ConfigError(origin.string() + ": verifier tolerances must be nonnegative");
  }
  for (std::size_t k = 0; k < cfg.ladder.size(); ++k) {
    if (!(cfg.ladder[k] > 0.0) || (k > 0 && !(cfg.ladder[k] < cfg.ladder[k - 1]))) {
      throw ConfigError(origin.string() + ": solver.ladder must be positive and strictly decreasing");
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str(), path);
  apply_env_overrides(cfg);
  return cfg;
}

void apply_env_overrides(RunConfig& cfg) {
  auto read = [](const char* name, double& target) {
    if (const char* v = std::getenv(name)) {
      char* end = nullptr;
      const double x = std::strtod(v, &end);
      if (end == v || *end != '\0' || !(x > 0.0)) {
        throw ConfigError(std::string("environment override ") + name + " is not a positive number");
      }
      target = x;
    }
  };
  double max_iter = static_cast<double>(cfg.solver.max_iter);
  double limit_max_iter = static_cast<double>(cfg.limit.max_iter);
  read("SEGLV_TOL", cfg.solver.tol);
  read("SEGLV_MAX_ITER", max_iter);
  read("SEGLV_LIMIT_TOL", cfg.limit.tol);
  read("SEGLV_LIMIT_MAX_ITER", limit_max_iter);
  read("SEGLV_SUBHARMONIC_TOL", cfg.relative_tolerances.subharmonic);
  read("SEGLV_HAT_TOL", cfg.relative_tolerances.hat_superharmonic);
  read("SEGLV_OVERLAP_TOL", cfg.relative_tolerances.overlap);
  read("SEGLV_SUPPORT", cfg.relative_tolerances.support);
  cfg.solver.max_iter = static_cast<long>(max_iter);
  cfg.limit.max_iter = static_cast<long>(limit_max_iter);
}

Grid make_grid(const RunConfig& cfg) {
  try {
    return build_grid(cfg.shape, cfg.resolution);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.source.string() + ": [domain] " + e.what());
  }
}

BoundarySpec make_boundary(const RunConfig& cfg, const Grid& g) {
  try {
    return build_boundary(g, cfg.arcs, cfg.profile);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.source.string() + ": [boundary] " + e.what());
  }
}

Tolerances absolute_tolerances(const RunConfig& cfg, const BoundarySpec& bc) {
  const double s = bc.scale();
  Tolerances t = cfg.relative_tolerances;
  t.nonnegative *= s;
  t.subharmonic *= s;
  t.hat_superharmonic *= s;
  t.boundary *= s;
  t.overlap *= s;
  t.support *= s;
  return t;
}

}  // namespace seg
