#include "aperiodic/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "aperiodic/error.hpp"

namespace aperiodic::io {
namespace {

template <class F>
auto parse(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, std::string("malformed ") + what + ": " + e.what());
  }
}

void dump(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::null:
      out += "null";
      break;
    case Json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case Json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      break;
    case Json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      break;
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    case Json::value_t::string:
      out += Json(j.get<std::string>()).dump();
      break;
    case Json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        dump(e, out);
      }
      out += ']';
      break;
    }
    case Json::value_t::object: {
      // nlohmann objects are std::map backed, so iteration is key-sorted
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        dump(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      out += "null";
  }
}

Json complex_json(cplx v) { return Json::array({v.real(), v.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::kConfig, "complex values are [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    fail(ErrorKind::kConfig, std::string(what) + " must be an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
      fail(ErrorKind::kShape, std::string(what) + " has ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(ErrorKind::kShape, "not a number: '" + s + "'");
  return v;
}

void write_coords(std::ostream& os, const Point& p) {
  for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << format_double(p[i]);
}

void write_header(std::ostream& os, const char* prefix, std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) os << (i ? "," : "") << prefix << (i + 1);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump(j, out);
  return out;
}

std::string config_hash(const Json& j) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_dump(j)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

Json to_json(const Point& p) {
  Json a = Json::array();
  for (double c : p.coords()) a.push_back(c);
  return a;
}

Point point_from_json(const Json& j) {
  return parse("point", [&] {
    if (j.is_number()) return Point{j.get<double>()};
    if (!j.is_array() || j.empty() || j.size() > kMaxDim) fail(ErrorKind::kConfig, "points are arrays of 1..4 numbers");
    Point p(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) p[i] = j[i].get<double>();
    return p;
  });
}

Json to_json(const PointSample& s) {
  Json pts = Json::array();
  for (const Point& p : s.points()) pts.push_back(to_json(p));
  return {{"dim", s.dim()}, {"radius", s.radius()}, {"provenance", s.provenance()}, {"points", pts}};
}

Json to_json(const WeightedComb& c) {
  Json atoms = Json::array();
  for (const auto& a : c.atoms()) atoms.push_back({{"x", to_json(a.x)}, {"w", complex_json(a.w)}});
  return {{"dim", c.dim()}, {"radius", c.radius()}, {"provenance", c.provenance()}, {"atoms", atoms}};
}

PointSample sample_from_json(const Json& j) {
  return parse("point sample", [&] {
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<Point> pts;
    for (const auto& p : j.at("points")) pts.push_back(point_from_json(p));
    for (const Point& p : pts) {
      if (p.dim() != dim) fail(ErrorKind::kShape, "point dimension differs from 'dim'");
    }
    return PointSample(dim, j.at("radius").get<double>(), std::move(pts), j.value("provenance", std::string()));
  });
}

WeightedComb comb_from_json(const Json& j) {
  return parse("weighted comb", [&] {
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<WeightedAtom> atoms;
    for (const auto& a : j.at("atoms")) {
      Point x = point_from_json(a.at("x"));
      if (x.dim() != dim) fail(ErrorKind::kShape, "atom dimension differs from 'dim'");
      atoms.push_back({x, complex_from_json(a.at("w"))});
    }
    return WeightedComb(dim, j.at("radius").get<double>(), std::move(atoms), j.value("provenance", std::string()));
  });
}

Json to_json(const SubstitutionSystem& s) {
  const bool single = std::all_of(s.alphabet().begin(), s.alphabet().end(),
                                  [](const std::string& l) { return l.size() == 1; });
  Json rules = Json::object(), lengths = Json::object();
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& w = s.rules()[i];
    if (single) {
      rules[s.alphabet()[i]] = s.spell(w);
    } else {
      Json arr = Json::array();
      for (int l : w) arr.push_back(s.alphabet()[static_cast<std::size_t>(l)]);
      rules[s.alphabet()[i]] = arr;
    }
    lengths[s.alphabet()[i]] = s.lengths()[i];
  }
  const auto [u, v] = s.seed();
  return {{"name", s.name()},
          {"alphabet", s.alphabet()},
          {"rules", rules},
          {"lengths", lengths},
          {"seed", s.alphabet()[static_cast<std::size_t>(u)] + "|" + s.alphabet()[static_cast<std::size_t>(v)]}};
}

SubstitutionSystem substitution_from_json(const Json& j) {
  return parse("substitution", [&] {
    if (j.is_string()) return SubstitutionSystem::preset(j.get<std::string>());
    const auto alphabet = j.at("alphabet").get<std::vector<std::string>>();
    std::vector<SubstitutionSystem::Word> words;
    auto index = [&](const std::string& l) {
      auto it = std::find(alphabet.begin(), alphabet.end(), l);
      if (it == alphabet.end()) fail(ErrorKind::kUnknownLetter, "unknown letter '" + l + "'");
      return static_cast<int>(it - alphabet.begin());
    };
    const Json& rules = j.at("rules");
    for (auto it = rules.begin(); it != rules.end(); ++it) index(it.key());
    for (const auto& letter : alphabet) {
      if (!rules.contains(letter)) fail(ErrorKind::kInvalidArgument, "no rule for letter '" + letter + "'");
      const Json& r = rules.at(letter);
      SubstitutionSystem::Word w;
      if (r.is_string()) {
        for (char c : r.get<std::string>()) w.push_back(index(std::string(1, c)));
      } else {
        for (const auto& l : r) w.push_back(index(l.get<std::string>()));
      }
      words.push_back(std::move(w));
    }
    std::vector<double> lengths;
    if (j.contains("lengths") && !(j["lengths"].is_string() && j["lengths"] == "perron")) {
      for (const auto& letter : alphabet) lengths.push_back(j["lengths"].at(letter).get<double>());
    }
    const auto seed = j.at("seed").get<std::string>();
    const auto bar = seed.find('|');
    if (bar == std::string::npos) fail(ErrorKind::kIllegalSeed, "seed must have the form u|v");
    return SubstitutionSystem(alphabet, std::move(words), std::move(lengths),
                              {index(seed.substr(0, bar)), index(seed.substr(bar + 1))},
                              j.value("name", std::string()));
  });
}

Json to_json(const Window& w) {
  switch (w.kind) {
    case Window::Kind::kInterval:
      return {{"kind", "interval"}, {"lo", w.vertices[0][0]}, {"hi", w.vertices[1][0]}, {"closed", w.closed}};
    case Window::Kind::kOctagon:
    case Window::Kind::kPolygon: {
      Json v = Json::array();
      for (const Point& p : w.vertices) v.push_back(to_json(p));
      return {{"kind", w.kind == Window::Kind::kOctagon ? "octagon" : "polygon"}, {"vertices", v}, {"closed", w.closed}};
    }
  }
  return {};
}

Window window_from_json(const Json& j) {
  return parse("window", [&] {
    const auto kind = j.at("kind").get<std::string>();
    const bool closed = j.value("closed", false);
    if (kind == "interval") return Window::interval(j.at("lo").get<double>(), j.at("hi").get<double>(), closed);
    if (kind == "octagon" && j.contains("circumradius")) {
      return Window::octagon(j.at("circumradius").get<double>(), j.value("phase", 0.0), closed);
    }
    if (kind == "polygon" || kind == "octagon") {
      std::vector<Point> v;
      for (const auto& p : j.at("vertices")) v.push_back(point_from_json(p));
      Window w = Window::polygon(std::move(v), closed);
      if (kind == "octagon") w.kind = Window::Kind::kOctagon;
      return w;
    }
    fail(ErrorKind::kConfig, "unknown window kind '" + kind + "'");
  });
}

Json to_json(const ModelSetSpec& m) {
  return {{"d_phys", m.scheme.d_phys},
          {"d_int", m.scheme.d_int},
          {"basis", matrix_json(m.scheme.basis)},
          {"proj_phys", matrix_json(m.scheme.proj_phys)},
          {"proj_int", matrix_json(m.scheme.proj_int)},
          {"window", to_json(m.window)},
          {"shift", to_json(m.shift)}};
}

ModelSetSpec model_set_from_json(const Json& j) {
  return parse("cut-and-project scheme", [&] {
    if (j.is_string()) return model_set_preset(j.get<std::string>());
    ModelSetSpec m;
    m.scheme.d_phys = j.at("d_phys").get<std::size_t>();
    m.scheme.d_int = j.at("d_int").get<std::size_t>();
    m.scheme.basis = matrix_from_json(j.at("basis"), "basis");
    m.scheme.proj_phys = matrix_from_json(j.at("proj_phys"), "proj_phys");
    m.scheme.proj_int = matrix_from_json(j.at("proj_int"), "proj_int");
    m.window = window_from_json(j.at("window"));
    m.shift = j.contains("shift") ? point_from_json(j["shift"]) : Point(m.scheme.d_int);
    m.validate();
    return m;
  });
}

Json to_json(const QuasiperiodicFunction& u) {
  Json terms = Json::array();
  for (const QPTerm& t : u.terms()) terms.push_back({{"k", to_json(t.k)}, {"a", complex_json(t.a)}});
  return {{"dim", u.dim()}, {"terms", terms}};
}

QuasiperiodicFunction qp_from_json(const Json& j) {
  return parse("quasiperiodic function", [&] {
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<QPTerm> terms;
    for (const auto& t : j.at("terms")) terms.push_back({point_from_json(t.at("k")), complex_from_json(t.at("a"))});
    return QuasiperiodicFunction(dim, std::move(terms));
  });
}

ClusterPattern pattern_from_json(const Json& j) {
  return parse("cluster pattern", [&] {
    const Json& k = j.at("K");
    std::vector<Point> pts;
    for (const auto& p : j.at("P")) pts.push_back(point_from_json(p));
    const auto kind = k.at("kind").get<std::string>();
    if (kind == "interval") return ClusterPattern::interval(k.at("lo").get<double>(), k.at("hi").get<double>(), pts);
    if (kind == "ball") return ClusterPattern::ball(k.at("dim").get<std::size_t>(), k.at("radius").get<double>(), pts);
    if (kind == "box") return ClusterPattern::box(k.at("dim").get<std::size_t>(), k.at("radius").get<double>(), pts);
    fail(ErrorKind::kConfig, "unknown cluster window kind '" + kind + "'");
  });
}

BlockMap block_map_from_json(const Json& j) {
  return parse("block map", [&] {
    return BlockMap::from_strings(j.at("w").get<std::size_t>(), j.at("rule").get<std::map<std::string, std::string>>());
  });
}

Json to_json(const BraggList& b) {
  Json peaks = Json::array();
  for (const auto& p : b.peaks) {
    peaks.push_back({{"k", to_json(p.k)}, {"intensity", p.intensity}, {"amp", complex_json(p.amplitude)}});
  }
  return {{"dim", b.dim}, {"threshold", b.threshold}, {"radius", b.radius}, {"peaks", peaks}};
}

BraggList bragg_from_json(const Json& j) {
  return parse("Bragg list", [&] {
    BraggList b;
    b.dim = j.at("dim").get<std::size_t>();
    b.threshold = j.value("threshold", 0.0);
    b.radius = j.value("radius", 0.0);
    for (const auto& p : j.at("peaks")) {
      BraggPeak peak{point_from_json(p.at("k")), p.at("intensity").get<double>(),
                     p.contains("amp") ? complex_from_json(p["amp"]) : cplx{}};
      if (peak.k.dim() != b.dim) fail(ErrorKind::kShape, "peak dimension differs from 'dim'");
      b.peaks.push_back(peak);
    }
    return b;
  });
}

void write_csv(std::ostream& os, const PointSample& s) {
  write_header(os, "x", s.dim());
  os << ",re,im\n";
  for (const Point& p : s.points()) {
    write_coords(os, p);
    os << ",1,0\n";
  }
}

void write_csv(std::ostream& os, const WeightedComb& c) {
  write_header(os, "x", c.dim());
  os << ",re,im\n";
  for (const auto& a : c.atoms()) {
    write_coords(os, a.x);
    os << ',' << format_double(a.w.real()) << ',' << format_double(a.w.imag()) << '\n';
  }
}

void write_csv(std::ostream& os, const AutocorrEstimate& e) {
  write_header(os, "z", e.comb.dim());
  os << ",eta_re,eta_im\n";
  for (const auto& a : e.comb.atoms()) {
    write_coords(os, a.x);
    os << ',' << format_double(a.w.real()) << ',' << format_double(a.w.imag()) << '\n';
  }
}

void write_csv(std::ostream& os, const ConvergenceLadder& l) {
  if (l.estimates.empty()) return;
  const WeightedComb& last = l.estimates.back().comb;
  write_header(os, "z", last.dim());
  for (double r : l.radii) os << ",eta_R=" << format_double(r);
  os << '\n';
  const double tol = last.tolerance() * 1e3;
  for (const auto& a : last.atoms()) {
    write_coords(os, a.x);
    for (const auto& e : l.estimates) os << ',' << format_double(e.comb.weight_at(a.x, tol).real());
    os << '\n';
  }
}

void write_csv(std::ostream& os, const BraggList& b) {
  write_header(os, "k", b.dim);
  os << ",intensity,amp_re,amp_im,R\n";
  for (const auto& p : b.peaks) {
    write_coords(os, p.k);
    os << ',' << format_double(p.intensity) << ',' << format_double(p.amplitude.real()) << ','
       << format_double(p.amplitude.imag()) << ',' << format_double(b.radius) << '\n';
  }
}

void write_csv(std::ostream& os, const QPSpectrum& s) {
  write_header(os, "k", s.dim);
  os << ",mass\n";
  for (const auto& a : s.atoms) {
    write_coords(os, a.k);
    os << ',' << format_double(a.intensity) << '\n';
  }
}

PointSample read_sample_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::kShape, "empty CSV");
  const auto header = split_csv(line);
  std::size_t dim = 0;
  while (dim < header.size() && header[dim] == "x" + std::to_string(dim + 1)) ++dim;
  if (dim == 0 || dim > kMaxDim) fail(ErrorKind::kShape, "CSV header must start with x1..xd");
  std::vector<Point> pts;
  double radius = 0.0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) fail(ErrorKind::kShape, "CSV row has " + std::to_string(cells.size()) + " cells");
    Point p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = parse_number(cells[i]);
    radius = std::max(radius, p.norm());
    pts.push_back(p);
  }
  if (radius == 0.0) radius = 1.0;
  return PointSample(dim, radius, std::move(pts), "csv");
}

BraggList read_bragg_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::kShape, "empty CSV");
  const auto header = split_csv(line);
  std::size_t dim = 0;
  while (dim < header.size() && header[dim] == "k" + std::to_string(dim + 1)) ++dim;
  if (dim == 0 || header.size() != dim + 4 || header[dim] != "intensity") {
    fail(ErrorKind::kShape, "Bragg CSV header must be k1..kd,intensity,amp_re,amp_im,R");
  }
  BraggList b;
  b.dim = dim;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) fail(ErrorKind::kShape, "Bragg CSV row has wrong width");
    Point k(dim);
    for (std::size_t i = 0; i < dim; ++i) k[i] = parse_number(cells[i]);
    b.peaks.push_back({k, parse_number(cells[dim]), {parse_number(cells[dim + 1]), parse_number(cells[dim + 2])}});
    b.radius = parse_number(cells[dim + 3]);
  }
  return b;
}

std::string bragg_svg(const BraggList& b, const std::string& title) {
  const double size = 640.0, margin = 40.0;
  const bool flat = b.dim == 1;
  const double height = flat ? 240.0 : size;
  double extent = 0.0, imax = 0.0;
  for (const auto& p : b.peaks) {
    extent = std::max(extent, std::abs(p.k[0]));
    if (!flat) extent = std::max(extent, std::abs(p.k[1]));
    imax = std::max(imax, p.intensity);
  }
  if (extent == 0.0) extent = 1.0;
  extent *= 1.05;
  const double pix = (size - 2.0 * margin) / (2.0 * extent);
  // largest disc gets radius 18 px; area per unit intensity is fixed
  const double area_per_intensity = imax > 0.0 ? kPi * 18.0 * 18.0 / imax : 0.0;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(size) << "\" height=\""
     << format_double(height + 60.0) << "\" viewBox=\"0 0 " << format_double(size) << ' '
     << format_double(height + 60.0) << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double cx = size / 2.0, cy = height / 2.0;
  os << "<line x1=\"" << format_double(margin) << "\" y1=\"" << format_double(cy) << "\" x2=\""
     << format_double(size - margin) << "\" y2=\"" << format_double(cy) << "\" stroke=\"#bbb\"/>\n";
  if (!flat) {
    os << "<line x1=\"" << format_double(cx) << "\" y1=\"" << format_double(margin) << "\" x2=\"" << format_double(cx)
       << "\" y2=\"" << format_double(height - margin) << "\" stroke=\"#bbb\"/>\n";
  }
  for (const auto& p : b.peaks) {
    const double x = cx + p.k[0] * pix;
    const double y = flat ? cy : cy - p.k[1] * pix;
    const double r = std::sqrt(area_per_intensity * p.intensity / kPi);
    os << "<circle cx=\"" << format_double(x) << "\" cy=\"" << format_double(y) << "\" r=\"" << format_double(r)
       << "\" fill=\"black\"/>\n";
  }
  os << "<text x=\"10\" y=\"" << format_double(height + 20.0) << "\" font-family=\"monospace\" font-size=\"12\">"
     << (title.empty() ? std::string("Bragg peaks") : title) << ": " << b.peaks.size() << " peaks, R = "
     << format_double(b.radius) << "</text>\n";
  os << "<text x=\"10\" y=\"" << format_double(height + 40.0) << "\" font-family=\"monospace\" font-size=\"12\">"
     << "threshold = " << format_double(b.threshold) << ", disc area = " << format_double(area_per_intensity)
     << " px^2 per unit intensity, " << format_double(pix) << " px per unit k</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace aperiodic::io
