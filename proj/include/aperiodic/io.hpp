#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "aperiodic/autocorr.hpp"
#include "aperiodic/cps.hpp"
#include "aperiodic/diffraction.hpp"
#include "aperiodic/factors.hpp"
#include "aperiodic/generators.hpp"
#include "aperiodic/pointset.hpp"
#include "aperiodic/quasiperiodic.hpp"

namespace aperiodic::io {

using Json = nlohmann::json;

/// %.17g.
std::string format_double(double v);

/// Sorted keys, no whitespace, floats with 17 significant digits.
std::string canonical_dump(const Json& j);

/// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const Json& j);

Json to_json(const Point& p);
Point point_from_json(const Json& j);

Json to_json(const PointSample& s);
Json to_json(const WeightedComb& c);
PointSample sample_from_json(const Json& j);
WeightedComb comb_from_json(const Json& j);

Json to_json(const SubstitutionSystem& s);
/// {alphabet, rules, lengths: "perron" | {letter: length}, seed: "u|v"}.
SubstitutionSystem substitution_from_json(const Json& j);

Json to_json(const Window& w);
Window window_from_json(const Json& j);
Json to_json(const ModelSetSpec& m);
ModelSetSpec model_set_from_json(const Json& j);

Json to_json(const QuasiperiodicFunction& u);
QuasiperiodicFunction qp_from_json(const Json& j);

ClusterPattern pattern_from_json(const Json& j);
BlockMap block_map_from_json(const Json& j);

Json to_json(const BraggList& b);
BraggList bragg_from_json(const Json& j);

// CSV writers; every number uses format_double.
void write_csv(std::ostream& os, const PointSample& s);
void write_csv(std::ostream& os, const WeightedComb& c);
void write_csv(std::ostream& os, const AutocorrEstimate& e);
void write_csv(std::ostream& os, const ConvergenceLadder& l);
void write_csv(std::ostream& os, const BraggList& b);
void write_csv(std::ostream& os, const QPSpectrum& s);

/// Reads x1..xd[,re,im] rows; the radius is the largest |x|.
PointSample read_sample_csv(std::istream& is);
/// Reads k1..kd,intensity,amp_re,amp_im,R rows.
BraggList read_bragg_csv(std::istream& is);

/// Discs centred at k (first two coordinates; 1-d lists are drawn on a
/// line) with area proportional to intensity; threshold and scale in the
/// legend.
std::string bragg_svg(const BraggList& b, const std::string& title = {});

}  // namespace aperiodic::io
