#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "seg/analysis.hpp"
#include "seg/eps_solver.hpp"
#include "seg/grid.hpp"
#include "seg/verifier.hpp"

namespace seg {

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Writes active nodes in row-major order under an `x,y,value` (`x,value` in 1D) header.
void write_field_csv(const std::filesystem::path& path, const Grid& g, const Field& f);
Field read_field_csv(const std::filesystem::path& path, const Grid& g);

/// Species i goes to <dir>/u<i+1>.csv.
void write_tuple(const std::filesystem::path& dir, const Grid& g, const DensityTuple& u);
DensityTuple read_tuple(const std::filesystem::path& dir, const Grid& g, std::size_t m);

/// Row of `ladder.csv`: epsilon,iterations,residual,overlap,wall_time.
struct LadderRow {
  SolveReport report;
  double overlap = 0.0;
};
void write_ladder_csv(const std::filesystem::path& path, const std::vector<LadderRow>& rows, bool append);
std::vector<LadderRow> read_ladder_csv(const std::filesystem::path& path);

/// Directory holding the fields of ladder row k.
std::filesystem::path rung_dir(const std::filesystem::path& out, std::size_t k);

using Json = nlohmann::ordered_json;

Json certificate_json(const Grid& g, const Certificate& c, const Tolerances& tol);
Json pq_json(const Grid& g, const PQReport& pq);
Json lemma31_json(const Lemma31Report& r);
Json rate_json(const RateStudy& study);
Json compare_json(const Grid& g, const Comparison& c);
void write_json(const std::filesystem::path& path, const Json& j);

std::string certificate_summary(const Certificate& c);

}  // namespace seg
