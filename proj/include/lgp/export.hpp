#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lgp/fmd_dual.hpp"
#include "lgp/swz_solver.hpp"
#include "lgp/tv_oracle.hpp"

namespace lgp {

/// Run of consecutive grid levels sharing the same level segments.
struct DistinctLine {
  double t_lo = 0.0;
  double t_hi = 0.0;
  const LevelLine* line = nullptr;
};

/// Grid levels with a proper cut, consecutive identical cuts merged.
std::vector<DistinctLine> distinct_lines(const LevelFamily& family);

/// {"lines": [{t, t_hi, kind, segments: [[[x, y], [x, y]], ...]}],
///  "fat": [{value, area, label, outline}]}
nlohmann::json levels_json(const LevelFamily& family);

/// {"mass", "segments": [{p, q, dir, weight}]}
nlohmann::json flux_json(const ChordFlux& q);

/// Row-major node table with a header comment carrying nx, ny and spacing.
/// `oracle` may be null.
void write_field_csv(const std::string& path, const ScalarField& geometric, const ScalarField* oracle);

struct SvgStats {
  int lines = 0;
  int regions = 0;
};

/// Domain outline, level lines coloured by t (at most `max_lines` distinct
/// cuts plus the critical levels) and hatched fat regions, in user units.
SvgStats emit_svg(const LevelFamily& family, const ConvexBoundary& domain, const std::string& path,
                  int max_lines = 48);
std::string svg_text(const LevelFamily& family, const ConvexBoundary& domain, SvgStats* stats = nullptr,
                     int max_lines = 48);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace lgp
