#include "aperiodic/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "aperiodic/autocorr.hpp"
#include "aperiodic/cps.hpp"
#include "aperiodic/diffraction.hpp"
#include "aperiodic/error.hpp"
#include "aperiodic/factors.hpp"
#include "aperiodic/generators.hpp"
#include "aperiodic/io.hpp"
#include "aperiodic/parallel.hpp"
#include "aperiodic/quasiperiodic.hpp"

namespace aperiodic::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

// Flag values as given on the command line; unset flags leave the config
// file value in place.
struct Flags {
  std::string preset;
  std::string config;
  std::optional<double> radius;
  std::vector<double> radii;
  std::optional<double> zmax, kmax, kint, threshold, pitch, tolerance, beta;
  std::string out = ".";
  std::vector<std::string> formats;
  std::size_t threads = 0;
  std::size_t cap = kDefaultPointCap;
  std::string mark;
  std::string weights;
  std::string candidates;
  bool closed_form = false;
  std::string pattern;
  std::string block_map;
  bool gain = false;
  std::optional<int> dyadic_depth;
  std::string lhs, rhs;
  std::string qp;
};

class Run {
 public:
  Run(std::string command, Json config, fs::path out, std::ostream& log)
      : command_(std::move(command)), config_(std::move(config)), out_(std::move(out)), log_(log) {}

  const Json& config() const { return config_; }

  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto result = f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    stages_.push_back({{"name", name}, {"seconds", s}});
    return result;
  }

  void write(const std::string& name, const std::string& content) {
    fs::create_directories(out_);
    std::ofstream f(out_ / name, std::ios::binary);
    if (!f) fail(ErrorKind::kConfig, "cannot write " + (out_ / name).string());
    f << content;
    outputs_.push_back(name);
    log_ << "wrote " << (out_ / name).string() << '\n';
  }

  void finish() {
    Json manifest = {{"command", command_},
                     {"config", config_},
                     {"config_hash", io::config_hash(config_)},
                     {"version", kVersion},
                     {"stages", stages_},
                     {"outputs", outputs_}};
    fs::create_directories(out_);
    std::ofstream f(out_ / "manifest.json", std::ios::binary);
    f << io::canonical_dump(manifest) << '\n';
  }

 private:
  std::string command_;
  Json config_;
  fs::path out_;
  std::ostream& log_;
  Json stages_ = Json::array();
  std::vector<std::string> outputs_;
};

Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::kConfig, "cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, path + ": " + e.what());
  }
}

// Merges config file and flags into the canonical run configuration.
Json effective_config(const Flags& fl) {
  Json cfg = fl.config.empty() ? Json::object() : load_json(fl.config);
  if (!cfg.is_object()) fail(ErrorKind::kConfig, "config file must hold a JSON object");
  if (!fl.preset.empty()) {
    if (cfg.contains("generator")) fail(ErrorKind::kConfig, "give either --preset or a config generator, not both");
    cfg["generator"] = fl.preset;
  }
  auto set = [&](const char* key, const auto& v) {
    if (v) cfg[key] = *v;
  };
  set("radius", fl.radius);
  set("zmax", fl.zmax);
  set("kmax", fl.kmax);
  set("kint", fl.kint);
  set("threshold", fl.threshold);
  set("pitch", fl.pitch);
  set("tolerance", fl.tolerance);
  set("beta", fl.beta);
  set("dyadic_depth", fl.dyadic_depth);
  if (!fl.radii.empty()) cfg["radii"] = fl.radii;
  if (!fl.formats.empty()) cfg["formats"] = fl.formats;
  if (!fl.mark.empty()) cfg["mark"] = fl.mark;
  if (!fl.weights.empty()) cfg["weights"] = fl.weights;
  if (!fl.candidates.empty()) cfg["candidates"] = fl.candidates;
  if (fl.closed_form) cfg["closed_form"] = true;
  if (!fl.pattern.empty()) cfg["pattern"] = load_json(fl.pattern);
  if (!fl.block_map.empty()) {
    cfg["block_map"] = fl.block_map == "tm-difference" ? Json("tm-difference") : load_json(fl.block_map);
  }
  if (fl.gain) cfg["gain"] = true;
  if (!fl.lhs.empty()) cfg["lhs"] = fl.lhs;
  if (!fl.rhs.empty()) cfg["rhs"] = fl.rhs;
  if (!fl.qp.empty()) cfg["qp"] = fl.qp == "one" || fl.qp == "cos" ? Json(fl.qp) : load_json(fl.qp);
  if (fl.cap != kDefaultPointCap) cfg["cap"] = fl.cap;
  if (cfg.contains("radii")) {
    const auto r = cfg["radii"].get<std::vector<double>>();
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      if (!(r[i] < r[i + 1])) fail(ErrorKind::kConfig, "radii must be strictly increasing");
    }
  }
  return cfg;
}

double get(const Json& cfg, const char* key, double fallback) {
  return cfg.contains(key) ? cfg[key].get<double>() : fallback;
}

std::vector<std::string> formats(const Json& cfg, std::vector<std::string> fallback) {
  auto f = cfg.contains("formats") ? cfg["formats"].get<std::vector<std::string>>() : fallback;
  for (const auto& x : f) {
    if (x != "csv" && x != "json" && x != "svg") fail(ErrorKind::kConfig, "unknown format '" + x + "'");
  }
  return f;
}

bool wants(const std::vector<std::string>& f, const char* x) { return std::find(f.begin(), f.end(), x) != f.end(); }

// ---------------------------------------------------------------------------
// Generators

struct Generated {
  PointSample sample;
  std::optional<WeightedComb> comb;
  std::optional<ChainSample> chain;
  std::optional<SubstitutionSystem> system;
  std::optional<CrystallographicSpec> crystal;
  std::optional<ModelSetSpec> model_set;
};

CrystallographicSpec crystal_from_json(const Json& j) {
  CrystallographicSpec c;
  try {
    const Json& b = j.at("basis");
    if (b.is_number()) {
      c.lattice.basis = Eigen::MatrixXd::Constant(1, 1, b.get<double>());
    } else {
      const auto rows = b.get<std::vector<std::vector<double>>>();
      c.lattice.basis.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size()) fail(ErrorKind::kShape, "lattice basis must be square");
        for (std::size_t col = 0; col < rows.size(); ++col) {
          c.lattice.basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = rows[r][col];
        }
      }
    }
    if (j.contains("motif")) {
      for (const auto& p : j["motif"]) c.motif.push_back(io::point_from_json(p));
    } else {
      c.motif.push_back(Point(c.lattice.dim()));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kConfig, std::string("malformed lattice: ") + e.what());
  }
  c.validate();
  return c;
}

std::map<std::string, cplx> parse_weights(const std::string& s) {
  // "a=1,b=-1"
  std::map<std::string, cplx> w;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::kConfig, "weights are letter=value pairs");
    try {
      w[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::kConfig, "bad weight '" + item + "'");
    }
  }
  return w;
}

Generated generate(const Json& cfg, double radius) {
  if (!cfg.contains("generator")) fail(ErrorKind::kConfig, "no generator: give --preset or a config generator");
  const auto cap = cfg.contains("cap") ? cfg["cap"].get<std::size_t>() : kDefaultPointCap;
  const Json& g = cfg["generator"];
  Generated out;

  auto from_system = [&](SubstitutionSystem sys) {
    out.chain = chain_covering(sys, radius, cap);
    out.system = std::move(sys);
    out.sample = out.chain->sample;
    if (cfg.contains("mark")) out.sample = letter_positions(*out.chain, cfg["mark"].get<std::string>());
    if (cfg.contains("weights")) out.comb = weighted_chain(*out.chain, parse_weights(cfg["weights"].get<std::string>()));
  };

  if (g.is_string()) {
    const auto name = g.get<std::string>();
    if (name == "integers" || name == "crystal") {
      CrystallographicSpec c;
      c.lattice.basis = Eigen::MatrixXd::Ones(1, 1);
      c.motif = {Point{0.0}};
      if (name == "crystal") c.motif.push_back(Point{1.0 / 3.0});
      out.sample = crystallographic_sample(c, radius, cap);
      out.crystal = c;
    } else if (name == "fibonacci" || name == "thue-morse" || name == "period-doubling") {
      from_system(SubstitutionSystem::preset(name));
    } else if (name == "fibonacci-cps" || name == "ammann-beenker") {
      out.model_set = model_set_preset(name);
      out.sample = model_set_sample(*out.model_set, radius, cap);
    } else {
      fail(ErrorKind::kConfig, "unknown preset '" + name + "'");
    }
    return out;
  }
  if (g.contains("substitution")) {
    from_system(io::substitution_from_json(g["substitution"]));
  } else if (g.contains("model_set")) {
    out.model_set = io::model_set_from_json(g["model_set"]);
    out.sample = model_set_sample(*out.model_set, radius, cap);
  } else if (g.contains("lattice")) {
    out.crystal = crystal_from_json(g["lattice"]);
    out.sample = crystallographic_sample(*out.crystal, radius, cap);
  } else {
    fail(ErrorKind::kConfig, "generator must be a preset name or hold substitution / model_set / lattice");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

int cmd_generate(Run& run) {
  const Json& cfg = run.config();
  const double radius = get(cfg, "radius", 100.0);
  const auto g = run.stage("generate", [&] { return generate(cfg, radius); });
  const auto f = formats(cfg, {"csv"});
  if (wants(f, "csv")) {
    std::ostringstream os;
    if (g.comb) {
      io::write_csv(os, *g.comb);
    } else {
      io::write_csv(os, g.sample);
    }
    run.write("sample.csv", os.str());
  }
  if (wants(f, "json")) {
    run.write("sample.json", io::canonical_dump(g.comb ? io::to_json(*g.comb) : io::to_json(g.sample)) + "\n");
  }
  return kExitOk;
}

int cmd_autocorr(Run& run) {
  const Json& cfg = run.config();
  const auto f = formats(cfg, {"csv"});
  if (cfg.contains("radii")) {
    const auto radii = cfg["radii"].get<std::vector<double>>();
    const double zmax = get(cfg, "zmax", std::min(10.0, radii.front()));
    const auto ladder = run.stage("ladder", [&] {
      return eberlein_ladder([&](double r) { return generate(cfg, r).sample; }, radii, zmax,
                             get(cfg, "tolerance", 1e-2));
    });
    if (wants(f, "csv")) {
      std::ostringstream os;
      io::write_csv(os, ladder);
      run.write("ladder.csv", os.str());
    }
    Json dev = {{"radii", ladder.radii}, {"deviations", ladder.deviations}, {"tolerance", ladder.tolerance},
                {"converged", ladder.converged()}};
    run.write("ladder.json", io::canonical_dump(dev) + "\n");
    return kExitOk;
  }
  const double radius = get(cfg, "radius", 100.0);
  const double zmax = get(cfg, "zmax", std::min(10.0, radius));
  const auto g = run.stage("generate", [&] { return generate(cfg, radius); });
  const auto est = run.stage("autocorrelation", [&] {
    return g.comb ? weighted_autocorrelation(*g.comb, zmax) : autocorrelation(g.sample, zmax);
  });
  if (wants(f, "csv")) {
    std::ostringstream os;
    io::write_csv(os, est);
    run.write("autocorr.csv", os.str());
  }
  if (wants(f, "json")) run.write("autocorr.json", io::canonical_dump(io::to_json(est.comb)) + "\n");
  return kExitOk;
}

std::vector<Point> integer_candidates(double kmax) {
  std::vector<Point> c;
  for (long m = -static_cast<long>(std::floor(kmax)); m <= static_cast<long>(std::floor(kmax)); ++m) {
    c.push_back(Point{static_cast<double>(m)});
  }
  return c;
}

std::vector<Point> dyadic_candidates(double kmax, int depth) {
  std::vector<Point> c;
  const long den = 1L << depth;
  const long top = static_cast<long>(std::floor(kmax * static_cast<double>(den)));
  for (long m = -top; m <= top; ++m) c.push_back(Point{static_cast<double>(m) / static_cast<double>(den)});
  return c;
}

void emit_bragg(Run& run, const BraggList& list, const std::vector<std::string>& f, const std::string& stem) {
  if (wants(f, "csv")) {
    std::ostringstream os;
    io::write_csv(os, list);
    run.write(stem + ".csv", os.str());
  }
  if (wants(f, "json")) run.write(stem + ".json", io::canonical_dump(io::to_json(list)) + "\n");
  if (wants(f, "svg")) run.write(stem + ".svg", io::bragg_svg(list, stem));
}

int cmd_diffract(Run& run) {
  const Json& cfg = run.config();
  const double radius = get(cfg, "radius", 100.0);
  const double kmax = get(cfg, "kmax", 4.0);
  const auto f = formats(cfg, {"csv", "svg"});
  const auto g = run.stage("generate", [&] { return generate(cfg, radius); });
  const ExponentialSum sum = g.comb ? ExponentialSum(*g.comb) : ExponentialSum(g.sample);

  ScanOptions opt;
  if (cfg.contains("threshold")) opt.threshold = cfg["threshold"].get<double>();
  std::string mode = cfg.value("candidates", std::string("auto"));
  if (mode == "auto") mode = g.model_set ? "dual" : g.crystal ? "lattice" : "grid";

  BraggList list;
  if (mode == "grid") {
    if (sum.dim() != 1) fail(ErrorKind::kConfig, "grid candidates are available for 1-d samples only");
    GridSpec grid{Point{0.0}, Point{kmax}, get(cfg, "pitch", 1.0 / (4.0 * sum.radius()))};
    list = run.stage("grid scan", [&] { return bragg_scan_grid(sum, grid, opt); });
  } else {
    std::vector<Point> cands;
    if (mode == "lattice") {
      if (!g.crystal) fail(ErrorKind::kConfig, "lattice candidates need a lattice generator");
      for (const auto& a : closed_form_lattice(*g.crystal, kmax).atoms) cands.push_back(a.k);
    } else if (mode == "dual") {
      if (!g.model_set) fail(ErrorKind::kConfig, "dual candidates need a model-set generator");
      for (const auto& c : dual_candidates(g.model_set->scheme, kmax, get(cfg, "kint", 2.0))) cands.push_back(c.k);
    } else if (mode == "integers") {
      cands = integer_candidates(kmax);
    } else if (mode == "dyadic") {
      cands = dyadic_candidates(kmax, cfg.value("dyadic_depth", 4));
    } else {
      fail(ErrorKind::kConfig, "unknown candidate mode '" + mode + "'");
    }
    if (cands.empty()) fail(ErrorKind::kConfig, "candidate set is empty");
    list = run.stage("scan", [&] { return bragg_scan(sum, cands, opt); });
  }
  emit_bragg(run, list, f, "bragg");

  if (cfg.value("closed_form", false)) {
    if (!g.crystal) fail(ErrorKind::kConfig, "closed forms exist for lattice generators only");
    const auto cf = closed_form_lattice(*g.crystal, kmax);
    BraggList cl;
    cl.dim = cf.dim;
    cl.peaks = cf.atoms;
    emit_bragg(run, cl, {"csv"}, "closed_form");
  }
  return kExitOk;
}

int cmd_factor(Run& run) {
  const Json& cfg = run.config();
  const double radius = get(cfg, "radius", 100.0);
  const auto f = formats(cfg, {"csv"});
  Json plain = cfg;
  plain.erase("mark");
  plain.erase("weights");
  const auto g = run.stage("generate", [&] { return generate(plain, radius); });

  PointSample source = g.sample, factor;
  if (cfg.contains("block_map")) {
    if (!g.chain) fail(ErrorKind::kConfig, "block maps need a substitution generator");
    const BlockMap map = cfg["block_map"].is_string() ? BlockMap::thue_morse_difference()
                                                      : io::block_map_from_json(cfg["block_map"]);
    const ChainSample image = run.stage("sliding block", [&] { return sliding_block(*g.chain, map); });
    factor = image.sample;
    if (cfg.contains("mark")) {
      const auto mark = cfg["mark"].get<std::string>();
      source = letter_positions(*g.chain, mark);
      factor = letter_positions(image, mark);
    }
  } else if (cfg.contains("pattern")) {
    const ClusterPattern pattern = io::pattern_from_json(cfg["pattern"]);
    factor = run.stage("locator set", [&] { return derived_factor_sample(g.sample, pattern); });
  } else {
    fail(ErrorKind::kConfig, "factor needs --block-map or --pattern");
  }
  if (wants(f, "csv")) {
    std::ostringstream os;
    io::write_csv(os, factor);
    run.write("factor.csv", os.str());
  }
  if (wants(f, "json")) run.write("factor.json", io::canonical_dump(io::to_json(factor)) + "\n");

  if (cfg.value("gain", false)) {
    const auto cands = dyadic_candidates(get(cfg, "kmax", 4.0), cfg.value("dyadic_depth", 4));
    const auto rep = run.stage("gain", [&] {
      return factor_diffraction_gain(source, factor, cands, get(cfg, "threshold", 1e-3));
    });
    Json gain = Json::array();
    for (const auto& p : rep.gain) gain.push_back({{"k", io::to_json(p.k)}, {"intensity", p.intensity}});
    run.write("gain.json", io::canonical_dump({{"source", io::to_json(rep.source)},
                                               {"factor", io::to_json(rep.factor)},
                                               {"gain", gain}}) +
                               "\n");
  }
  return kExitOk;
}

int cmd_qp(Run& run) {
  const Json& cfg = run.config();
  if (!cfg.contains("qp")) fail(ErrorKind::kConfig, "qp needs --qp one|cos|PATH");
  const auto u = [&] {
    const Json& q = cfg["qp"];
    if (q.is_string() && q == "one") return QuasiperiodicFunction(1, {{Point{0.0}, 1.0}});
    if (q.is_string() && q == "cos") {
      const double beta = get(cfg, "beta", 1.0);
      return QuasiperiodicFunction(1, {{Point{beta}, 0.5}, {Point{-beta}, 0.5}});
    }
    return io::qp_from_json(q);
  }();
  const auto f = formats(cfg, {"csv"});
  const QPSpectrum spec = run.stage("diffraction", [&] { return qp_diffraction(u); });
  if (wants(f, "csv")) {
    std::ostringstream os;
    io::write_csv(os, spec);
    run.write("spectrum.csv", os.str());
  }
  run.write("autocorrelation.json", io::canonical_dump(io::to_json(qp_autocorrelation(u))) + "\n");
  if (cfg.contains("radius")) {
    const auto rep = parseval_check(u, cfg["radius"].get<double>());
    run.write("parseval.json", io::canonical_dump({{"mass", rep.mass},
                                                   {"mean", rep.mean},
                                                   {"deviation", rep.deviation},
                                                   {"leakage_bound", rep.leakage_bound}}) +
                                   "\n");
  }
  return kExitOk;
}

BraggList read_list(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::kConfig, "cannot read " + path);
  if (fs::path(path).extension() == ".json") {
    try {
      return io::bragg_from_json(Json::parse(f));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kShape, path + ": " + e.what());
    }
  }
  return io::read_bragg_csv(f);
}

int cmd_compare(Run& run, std::ostream& out) {
  const Json& cfg = run.config();
  if (!cfg.contains("lhs") || !cfg.contains("rhs")) fail(ErrorKind::kConfig, "compare needs --lhs and --rhs");
  const double tol = get(cfg, "tolerance", 1e-2);
  const BraggList a = read_list(cfg["lhs"].get<std::string>());
  const BraggList b = read_list(cfg["rhs"].get<std::string>());
  if (a.dim != b.dim || a.peaks.size() != b.peaks.size()) {
    fail(ErrorKind::kShape, "compare: inputs have different k-grids");
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < a.dim; ++i) os << 'k' << (i + 1) << ',';
  os << "lhs,rhs,deviation\n";
  double max_dev = 0.0, sum = 0.0;
  for (const auto& p : a.peaks) {
    const auto q = b.find(p.k, 1e-9 * (1.0 + p.k.norm()));
    if (!q) fail(ErrorKind::kShape, "compare: k = " + p.k.str() + " missing from rhs");
    const double d = std::abs(p.intensity - q->intensity);
    max_dev = std::max(max_dev, d);
    sum += d;
    for (double c : p.k.coords()) os << io::format_double(c) << ',';
    os << io::format_double(p.intensity) << ',' << io::format_double(q->intensity) << ',' << io::format_double(d) << '\n';
  }
  const double mean = a.peaks.empty() ? 0.0 : sum / static_cast<double>(a.peaks.size());
  const bool pass = max_dev <= tol;
  run.write("compare.csv", os.str());
  run.write("compare.json", io::canonical_dump({{"rows", a.peaks.size()},
                                                {"max", max_dev},
                                                {"mean", mean},
                                                {"tolerance", tol},
                                                {"pass", pass}}) +
                                "\n");
  out << (pass ? "PASS" : "FAIL") << " max deviation " << io::format_double(max_dev) << " (tolerance "
      << io::format_double(tol) << ")\n";
  return pass ? kExitOk : kExitAcceptance;
}

void add_common(CLI::App* app, Flags& fl) {
  app->add_option("--preset", fl.preset, "Generator preset");
  app->add_option("--config", fl.config, "Run configuration JSON");
  app->add_option("--radius", fl.radius, "Sample radius R");
  app->add_option("--radii", fl.radii, "Increasing radius ladder");
  app->add_option("--zmax", fl.zmax, "Difference-vector cutoff");
  app->add_option("--kmax", fl.kmax, "Wave-vector cutoff");
  app->add_option("--kint", fl.kint, "Internal-space bound for dual candidates");
  app->add_option("--threshold", fl.threshold, "Bragg intensity threshold");
  app->add_option("--pitch", fl.pitch, "Grid pitch for grid scans");
  app->add_option("--out", fl.out, "Output directory");
  app->add_option("--format", fl.formats, "csv | json | svg (repeatable)");
  app->add_option("--threads", fl.threads, "Worker threads");
  app->add_option("--cap", fl.cap, "Point-count cap");
  app->add_option("--mark", fl.mark, "Substitution chains: keep positions of this letter");
  app->add_option("--weights", fl.weights, "Substitution chains: letter weights, e.g. a=1,b=-1");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aperiodic point sets: generation, autocorrelation and diffraction"};
  app.require_subcommand(1);
  Flags fl;
  auto* gen = app.add_subcommand("generate", "Generate a point sample");
  auto* ac = app.add_subcommand("autocorr", "Autocorrelation estimate or Eberlein ladder");
  auto* df = app.add_subcommand("diffract", "Bragg scan with CSV and SVG output");
  auto* fa = app.add_subcommand("factor", "Derived factors and sliding-block images");
  auto* qp = app.add_subcommand("qp", "Quasiperiodic function spectrum and Parseval check");
  auto* cmp = app.add_subcommand("compare", "Compare two Bragg lists");
  for (auto* s : {gen, ac, df, fa, qp, cmp}) add_common(s, fl);
  df->add_option("--candidates", fl.candidates, "auto | lattice | dual | grid | integers | dyadic");
  df->add_flag("--closed-form", fl.closed_form, "Also write the lattice closed form");
  df->add_option("--dyadic-depth", fl.dyadic_depth, "Dyadic candidates m / 2^J");
  fa->add_option("--pattern", fl.pattern, "Cluster pattern JSON");
  fa->add_option("--block-map", fl.block_map, "tm-difference or block map JSON");
  fa->add_flag("--gain", fl.gain, "Report Bragg peaks gained by the factor");
  fa->add_option("--dyadic-depth", fl.dyadic_depth, "Dyadic candidates m / 2^J");
  qp->add_option("--qp", fl.qp, "one | cos | QP JSON path");
  qp->add_option("--beta", fl.beta, "Frequency for --qp cos");
  cmp->add_option("--lhs", fl.lhs, "First Bragg list (CSV or JSON)");
  cmp->add_option("--rhs", fl.rhs, "Second Bragg list (CSV or JSON)");
  cmp->add_option("--tolerance", fl.tolerance, "Largest accepted deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (fl.threads > 0) set_worker_threads(fl.threads);
    const Json cfg = effective_config(fl);
    CLI::App* sub = app.get_subcommands().front();
    Run run(sub->get_name(), cfg, fl.out, err);
    int code = kExitOk;
    if (sub == gen) code = cmd_generate(run);
    if (sub == ac) code = cmd_autocorr(run);
    if (sub == df) code = cmd_diffract(run);
    if (sub == fa) code = cmd_factor(run);
    if (sub == qp) code = cmd_qp(run);
    if (sub == cmp) code = cmd_compare(run, out);
    run.finish();
    return code;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kShape:
      case ErrorKind::kDimensionMismatch:
        return kExitShape;
      default:
        return kExitConfig;
    }
  } catch (const nlohmann::json::exception& e) {
    err << "error (config): " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error (config): " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace aperiodic::cli
