#include "seg/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace seg {

namespace {

std::string species_key(std::size_t i) { return "u" + std::to_string(i + 1); }

Json node_location(const Grid& g, std::size_t node) {
  Json loc = Json::array({g.x(node)});
  if (g.dim() == 2) loc.push_back(g.y(node));
  return loc;
}

double parse_number(const std::string& text, const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (text.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": malformed number '" +
                             text + "'");
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_csv(const std::filesystem::path& path, const Grid& g, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << (g.dim() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t node : g.active_nodes()) {
    out << format_double(g.x(node)) << ',';
    if (g.dim() == 2) out << format_double(g.y(node)) << ',';
    out << format_double(f[node]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

Field read_field_csv(const std::filesystem::path& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string expected = g.dim() == 1 ? "x,value" : "x,y,value";
  if (line != expected) {
    throw std::runtime_error(path.string() + ":1: expected header '" + expected + "'");
  }
  Field f(g.size());
  const auto nodes = g.active_nodes();
  std::size_t k = 0;
  std::size_t lineno = 1;
  const std::size_t cols = g.dim() == 1 ? 2 : 3;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != cols) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(cols) + " columns");
    }
    if (k >= nodes.size()) throw std::runtime_error(path.string() + ": more rows than grid nodes");
    const std::size_t node = nodes[k++];
    const double x = parse_number(parts[0], path, lineno);
    const double y = g.dim() == 2 ? parse_number(parts[1], path, lineno) : 0.0;
    const double tol = 1e-9 * g.h();
    if (std::abs(x - g.x(node)) > tol || (g.dim() == 2 && std::abs(y - g.y(node)) > tol)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                               ": node coordinates do not match the grid");
    }
    f[node] = parse_number(parts[cols - 1], path, lineno);
  }
  if (k != nodes.size()) throw std::runtime_error(path.string() + ": fewer rows than grid nodes");
  return f;
}

void write_tuple(const std::filesystem::path& dir, const Grid& g, const DensityTuple& u) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < u.m(); ++i) write_field_csv(dir / (species_key(i) + ".csv"), g, u[i]);
}

DensityTuple read_tuple(const std::filesystem::path& dir, const Grid& g, std::size_t m) {
  DensityTuple u;
  for (std::size_t i = 0; i < m; ++i) u.species.push_back(read_field_csv(dir / (species_key(i) + ".csv"), g));
  return u;
}

void write_ladder_csv(const std::filesystem::path& path, const std::vector<LadderRow>& rows, bool append) {
  const bool header = !append || !std::filesystem::exists(path);
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (header) out << "epsilon,iterations,residual,overlap,wall_time\n";
  for (const auto& r : rows) {
    out << format_double(r.report.epsilon) << ',' << r.report.iterations << ','
        << format_double(r.report.residual) << ',' << format_double(r.overlap) << ','
        << format_double(r.report.wall_time) << '\n';
  }
}

std::vector<LadderRow> read_ladder_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<LadderRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != 5) throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 5 columns");
    LadderRow r;
    r.report.epsilon = parse_number(parts[0], path, lineno);
    r.report.iterations = static_cast<long>(parse_number(parts[1], path, lineno));
    r.report.residual = parse_number(parts[2], path, lineno);
    r.overlap = parse_number(parts[3], path, lineno);
    r.report.wall_time = parse_number(parts[4], path, lineno);
    rows.push_back(r);
  }
  return rows;
}

std::filesystem::path rung_dir(const std::filesystem::path& out, std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "eps_%03zu", k);
  return out / buf;
}

Json certificate_json(const Grid& g, const Certificate& c, const Tolerances& tol) {
  (void)g;
  Json j;
  for (std::size_t i = 0; i < c.species.size(); ++i) {
    const auto& d = c.species[i];
    const std::string s = species_key(i);
    j["defect.nonnegative." + s] = d.nonnegative;
    j["defect.subharmonic." + s] = d.subharmonic;
    j["defect.hat_superharmonic." + s] = d.hat_superharmonic;
    j["defect.boundary." + s] = d.boundary;
    j["defect.harmonic_on_support." + s] = d.harmonic_on_support;
  }
  j["defect.overlap"] = c.overlap;
  j["defect.reflection"] = c.reflection;
  j["reflection.interface_edges"] = c.interface_edges;
  j["energy"] = c.energy;
  j["tolerance.nonnegative"] = tol.nonnegative;
  j["tolerance.subharmonic"] = tol.subharmonic;
  j["tolerance.hat_superharmonic"] = tol.hat_superharmonic;
  j["tolerance.boundary"] = tol.boundary;
  j["tolerance.overlap"] = tol.overlap;
  j["tolerance.support"] = tol.support;
  j["class_F"] = c.class_f;
  j["class_S"] = c.class_s;
  return j;
}

Json pq_json(const Grid& g, const PQReport& pq) {
  Json j;
  j["pq.P"] = pq.p;
  j["pq.Q"] = pq.q;
  j["pq.P_species"] = pq.p_species + 1;
  j["pq.Q_species"] = pq.q_species + 1;
  j["pq.P_node"] = node_location(g, pq.p_node);
  j["pq.Q_node"] = node_location(g, pq.q_node);
  for (std::size_t i = 0; i < pq.max_u_minus_v.size(); ++i) {
    j["pq.max_hat_u_minus_hat_v." + species_key(i)] = pq.max_u_minus_v[i];
    j["pq.max_hat_v_minus_hat_u." + species_key(i)] = pq.max_v_minus_u[i];
  }
  return j;
}

Json lemma31_json(const Lemma31Report& r) {
  Json j;
  j["lemma31.precondition_ok"] = r.precondition_ok;
  if (!r.note.empty()) j["lemma31.note"] = r.note;
  for (std::size_t i = 0; i < r.forward.size(); ++i) {
    const std::string s = species_key(i);
    j["lemma31.forward.global." + s] = r.forward[i].global_max;
    j["lemma31.forward.restricted." + s] = r.forward[i].restricted_max;
    j["lemma31.forward.equal." + s] = r.forward[i].equal;
    j["lemma31.swapped.global." + s] = r.swapped[i].global_max;
    j["lemma31.swapped.restricted." + s] = r.swapped[i].restricted_max;
    j["lemma31.swapped.equal." + s] = r.swapped[i].equal;
  }
  if (r.precondition_ok) j["lemma31.holds"] = r.holds();
  return j;
}

namespace {

void fit_into(Json& j, const std::string& prefix, const RateFit& f) {
  j[prefix + ".slope"] = f.slope;
  j[prefix + ".intercept"] = f.intercept;
  j[prefix + ".r_squared"] = f.r_squared;
  j[prefix + ".samples"] = f.samples.size();
  j[prefix + ".dropped_epsilon"] = f.dropped ? Json(f.dropped->epsilon) : Json(nullptr);
  Json excluded = Json::array();
  for (const auto& s : f.excluded) excluded.push_back(s.epsilon);
  j[prefix + ".excluded_zero_epsilon"] = excluded;
}

}  // namespace

Json rate_json(const RateStudy& study) {
  Json j;
  for (std::size_t i = 0; i < study.species.size(); ++i) fit_into(j, species_key(i), study.species[i]);
  fit_into(j, "worst", study.worst);
  return j;
}

Json compare_json(const Grid& g, const Comparison& c) {
  Json j;
  for (std::size_t i = 0; i < c.max_norm.size(); ++i) {
    j["distance.max." + species_key(i)] = c.max_norm[i];
    j["distance.h1." + species_key(i)] = c.h1[i];
  }
  j["distance.headline"] = c.headline;
  j.update(pq_json(g, c.pq));
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string certificate_summary(const Certificate& c) {
  std::ostringstream s;
  s << "species  nonneg        subharm       hat_superharm boundary      harmonic_supp\n";
  for (std::size_t i = 0; i < c.species.size(); ++i) {
    const auto& d = c.species[i];
    char buf[160];
    std::snprintf(buf, sizeof buf, "u%-7zu %-13.4e %-13.4e %-13.4e %-13.4e %-13.4e\n", i + 1,
                  d.nonnegative, d.subharmonic, d.hat_superharmonic, d.boundary, d.harmonic_on_support);
    s << buf;
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "overlap %.4e  reflection %.4e (%zu interface edges)  energy %.10g\nclass F: %s  class S: %s\n",
                c.overlap, c.reflection, c.interface_edges, c.energy, c.class_f ? "pass" : "fail",
                c.class_s ? "pass" : "fail");
  s << buf;
  return s.str();
}

}  // namespace seg
