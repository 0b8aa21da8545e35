#pragma once

// The `mcurves` command line. run() is the whole program minus main(), so
// the tests can drive it in-process with captured streams.
//
// Exit codes: 0 ok, 1 bad arguments or degenerate input data, 2 domain
// (arc length or turning out of reach), 3 degenerate LCG, 4 no solution.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcurves/analysis.hpp"
#include "mcurves/hermite.hpp"
#include "mcurves/io.hpp"
#include "mcurves/pseudospiral.hpp"
#include "mcurves/quaternion.hpp"
#include "mcurves/render.hpp"

namespace mcurves::cli {

enum Exit : int { kOk = 0, kArgs = 1, kDomain = 2, kDegenerate = 3, kNoSolution = 4 };

inline int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::DomainExceeded:
    case ErrorCode::TurningUnreachable:
    case ErrorCode::MaxDepthExceeded:
    case ErrorCode::NonFiniteIntegrand: return kDomain;
    case ErrorCode::DegenerateLcg:
    case ErrorCode::AntipodalSingularity: return kDegenerate;
    case ErrorCode::NoSolution:
    case ErrorCode::EmptyRegion: return kNoSolution;
    case ErrorCode::InvalidArgument:
    case ErrorCode::UnknownName:
    case ErrorCode::DegenerateInput:
    case ErrorCode::EmptyInput: return kArgs;
  }
  return kArgs;
}

struct Config {
  double tol = 1e-12;
  std::size_t samples = 200;
  std::string output_dir = ".";
  LambdaGrid grid;
};

/// `key = value` lines; '#' starts a comment.
inline Config parse_config(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  auto to_double = [&](const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw Error(ErrorCode::InvalidArgument, "config: " + key + " must be a number");
    return d;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "tol") {
      c.tol = to_double(key, value);
    } else if (key == "samples") {
      const double n = to_double(key, value);
      if (!(n >= 2.0) || n != std::floor(n)) throw Error(ErrorCode::InvalidArgument, "config: samples must be an integer >= 2");
      c.samples = static_cast<std::size_t>(n);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "lambda_min") {
      c.grid.min = to_double(key, value);
    } else if (key == "lambda_max") {
      c.grid.max = to_double(key, value);
    } else if (key == "lambda_count") {
      const double n = to_double(key, value);
      if (!(n >= 1.0) || n != std::floor(n)) throw Error(ErrorCode::InvalidArgument, "config: lambda_count must be a positive integer");
      c.grid.count = static_cast<std::size_t>(n);
    } else {
      throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!(c.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "config: tol must be positive");
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// Writes next to the target and renames, so a failed run never leaves a
/// partial file behind.
inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".partial");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + tmp.string() + "'");
    f << content;
    f.close();
    if (!f) {
      std::filesystem::remove(tmp);
      throw Error(ErrorCode::InvalidArgument, "failed writing '" + tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

/// "x,y[,z...]" with exactly n finite numbers.
inline std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string cell = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0' || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument, what + ": '" + cell + "' is not a number");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (n != 0 && out.size() != n) {
    throw Error(ErrorCode::InvalidArgument, what + " needs " + std::to_string(n) + " comma-separated numbers");
  }
  return out;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Arguments naming a member of the family: --named or --alpha, plus
/// --lambda, --s-end and --n.
struct FamilyArgs {
  std::optional<std::string> named;
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::optional<double> s_end;
  std::size_t n = 0;

  void add(CLI::App* app, bool lambda_required, std::size_t default_n) {
    n = default_n;
    auto* nm = app->add_option("--named", named, "named curve: euler, nielsen, log_spiral, involute, quasi_circle");
    auto* al = app->add_option("--alpha", alpha, "shape parameter");
    nm->excludes(al);
    auto* l = app->add_option("--lambda", lambda, "lambda > 0");
    if (lambda_required) l->required();
    app->add_option("--s-end", s_end, "arc length of the sampled piece");
    app->add_option("--n", n, "number of samples")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  }

  bool given() const { return named || alpha || lambda; }

  NaturalEquation equation() const {
    if (!lambda) throw Error(ErrorCode::InvalidArgument, "--lambda is required");
    if (named) return named_curve(*named, *lambda);
    if (!alpha) throw Error(ErrorCode::InvalidArgument, "give --named or --alpha");
    return NaturalEquation(*alpha, *lambda);
  }

  /// Default piece: 90% of the domain for alpha < 0, otherwise s = 3 / lambda.
  double end(const NaturalEquation& eq) const {
    if (s_end) return *s_end;
    return eq.alpha() < 0.0 ? 0.9 * eq.s_max_domain() : 3.0 / eq.lambda();
  }

  SampledCurve sample(double tol) const {
    const auto eq = equation();
    return sample_curve(eq, end(eq), n, {}, tol);
  }
};

inline SampledCurve curve_from_csv(const std::string& path) {
  SampledCurve c;
  c.samples = parse_curve_csv(read_file(path));
  return c;
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  std::filesystem::path resolve(const std::string& name) const {
    const std::filesystem::path p(name);
    if (p.is_absolute() || output_dir_.empty()) return p;
    return std::filesystem::path(output_dir_) / p;
  }

  void emit(const std::string& name, const std::string& content) {
    const auto path = resolve(name);
    write_file(path, content);
    err_ << "wrote " << path.string() << "\n";
  }

  void setup(CLI::App& app);

  std::ostream& out_;
  std::ostream& err_;
  Config cfg_;
  std::string output_dir_;
  std::function<int()> action_;
};

inline void Runner::setup(CLI::App& app) {
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");

  // ---- curve ----
  {
    auto* cmd = app.add_subcommand("curve", "sample a curve of the family and write CSV (and optionally SVG)");
    auto fam = std::make_shared<FamilyArgs>();
    fam->add(cmd, true, cfg_.samples);
    auto out = std::make_shared<std::string>("curve.csv");
    auto svg = std::make_shared<std::string>();
    cmd->add_option("--out", *out, "CSV file")->capture_default_str();
    cmd->add_option("--svg", *svg, "also render the curve to this SVG file");
    cmd->callback([this, fam, out, svg] {
      action_ = [this, fam, out, svg] {
        const auto c = fam->sample(cfg_.tol);
        double kmin = c.samples.front().kappa, kmax = kmin;
        for (const auto& p : c.samples) {
          kmin = std::min(kmin, p.kappa);
          kmax = std::max(kmax, p.kappa);
        }
        const std::string csv = export_csv(c);
        std::string doc;
        if (!svg->empty()) {
          PlotSpec spec;
          spec.curves.push_back(c);
          doc = plot_svg(spec);
        }
        out_ << "s_end " << fmt(c.samples.back().s) << "\n"
             << "kappa_min " << fmt(kmin) << "\n"
             << "kappa_max " << fmt(kmax) << "\n"
             << "theta_total " << fmt(c.samples.back().theta - c.samples.front().theta) << "\n";
        emit(*out, csv);
        if (!svg->empty()) emit(*svg, doc);
        return int{kOk};
      };
    });
  }

  // ---- lcg ----
  {
    auto* cmd = app.add_subcommand("lcg", "logarithmic curvature graph of a family member or a CSV curve");
    auto fam = std::make_shared<FamilyArgs>();
    fam->add(cmd, false, cfg_.samples);
    auto csv = std::make_shared<std::string>();
    auto sampled = std::make_shared<bool>(false);
    auto print_json = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>("lcg.json");
    auto svg = std::make_shared<std::string>();
    cmd->add_option("--csv", *csv, "curve CSV (s,x,y,theta,kappa) instead of family arguments");
    cmd->add_flag("--sampled", *sampled, "use finite differences on samples even for a family member");
    cmd->add_flag("--json", *print_json, "print the report as JSON");
    cmd->add_option("--out", *out, "JSON report file")->capture_default_str();
    cmd->add_option("--svg", *svg, "render the LCG points and fitted line to SVG");
    cmd->callback([this, fam, csv, sampled, print_json, out, svg] {
      action_ = [this, fam, csv, sampled, print_json, out, svg] {
        LcgReport r;
        if (!csv->empty()) {
          if (fam->given()) throw Error(ErrorCode::InvalidArgument, "give either --csv or family arguments");
          r = lcg_from_samples(curve_from_csv(*csv));
        } else if (*sampled) {
          r = lcg_from_samples(fam->sample(cfg_.tol));
        } else {
          const auto eq = fam->equation();
          r = lcg_analytic(eq, 0.0, fam->end(eq), fam->n);
        }
        const std::string text = dump(json(r));
        std::string doc;
        if (!svg->empty()) {
          SampledCurve pts, line;
          for (std::size_t i = 0; i < r.points.size(); ++i) {
            const auto& p = r.points[i];
            pts.samples.push_back({static_cast<double>(i), p.u, p.v, 0.0, 0.0});
          }
          const double u0 = r.points.front().u, u1 = r.points.back().u;
          line.samples.push_back({0.0, u0, r.intercept + r.slope * u0, 0.0, 0.0});
          line.samples.push_back({1.0, u1, r.intercept + r.slope * u1, 0.0, 0.0});
          PlotSpec spec;
          spec.curves = {pts, line};
          spec.axes = true;
          doc = plot_svg(spec);
        }
        if (*print_json) {
          out_ << text;
        } else {
          out_ << "slope " << fmt(r.slope) << "\nintercept " << fmt(r.intercept) << "\nrms_residual "
               << fmt(r.rms_residual) << "\n";
        }
        emit(*out, text);
        if (!svg->empty()) emit(*svg, doc);
        return int{kOk};
      };
    });
  }

  // ---- fit ----
  {
    auto* cmd = app.add_subcommand("fit", "G1 Hermite fit of one segment to endpoints and tangent angles");
    struct Args {
      std::string p0 = "0,0", p1 = "1,0";
      double angle0 = 0.0, angle1 = 0.0, alpha = 0.0;
      std::string problem, out = "fit.json", svg;
      std::optional<double> tol;
      bool print_json = false;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--p0", a->p0, "start point x,y")->capture_default_str();
    cmd->add_option("--p1", a->p1, "end point x,y")->capture_default_str();
    cmd->add_option("--angle0", a->angle0, "start tangent direction (radians)");
    cmd->add_option("--angle1", a->angle1, "end tangent direction (radians)");
    cmd->add_option("--alpha", a->alpha, "shape parameter")->capture_default_str();
    cmd->add_option("--problem", a->problem, "read the problem from JSON instead");
    cmd->add_option("--tol", a->tol, "chord-angle tolerance in radians (default 1e-10)");
    cmd->add_flag("--json", a->print_json, "print the result as JSON");
    cmd->add_option("--out", a->out, "JSON result file")->capture_default_str();
    cmd->add_option("--svg", a->svg, "render the fitted segment to SVG");
    cmd->callback([this, a] {
      action_ = [this, a] {
        HermiteProblem p;
        if (!a->problem.empty()) {
          p = json::parse(read_file(a->problem)).get<HermiteProblem>();
        } else {
          const auto s = parse_list(a->p0, 2, "--p0");
          const auto e = parse_list(a->p1, 2, "--p1");
          p.p_start = {s[0], s[1]};
          p.p_end = {e[0], e[1]};
          p.t_start = {std::cos(a->angle0), std::sin(a->angle0)};
          p.t_end = {std::cos(a->angle1), std::sin(a->angle1)};
          p.alpha = a->alpha;
        }
        const auto seg = fit_g1(p, a->tol.value_or(1e-10), cfg_.grid);
        json j{{"problem", p}, {"segment", seg}};
        if (const auto apex = control_apex(p)) j["control_apex"] = *apex;
        const std::string text = dump(j);
        std::string doc;
        if (!a->svg.empty()) {
          PlotSpec spec;
          spec.curves.push_back(sample_segment(seg, cfg_.samples));
          if (const auto apex = control_apex(p)) {
            SampledCurve tri;
            tri.samples = {{0.0, p.p_start.x, p.p_start.y, 0.0, 0.0},
                           {1.0, apex->x, apex->y, 0.0, 0.0},
                           {2.0, p.p_end.x, p.p_end.y, 0.0, 0.0}};
            spec.curves.push_back(tri);
          }
          doc = plot_svg(spec);
        }
        if (a->print_json) {
          out_ << text;
        } else {
          out_ << "lambda " << fmt(seg.world_lambda()) << "\nlength " << fmt(seg.world_length()) << "\nresidual "
               << fmt(seg.residual) << "\n";
        }
        emit(a->out, text);
        if (!a->svg.empty()) emit(a->svg, doc);
        return int{kOk};
      };
    });
  }

  // ---- region ----
  {
    auto* cmd = app.add_subcommand("region", "drawable chord-angle region over a lambda grid");
    struct Args {
      double alpha = 0.0, delta_theta = 0.0;
      std::optional<double> lmin, lmax;
      std::optional<std::size_t> count;
      std::string out = "region.csv";
      bool print_json = false;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--alpha", a->alpha, "shape parameter")->required();
    cmd->add_option("--delta-theta", a->delta_theta, "turning angle in (0, pi)")->required();
    cmd->add_option("--lambda-min", a->lmin, "smallest lambda of the grid");
    cmd->add_option("--lambda-max", a->lmax, "largest lambda of the grid");
    cmd->add_option("--lambda-count", a->count, "grid size");
    cmd->add_flag("--json", a->print_json, "print the region as JSON");
    cmd->add_option("--out", a->out, "CSV file (lambda,psi,reversed)")->capture_default_str();
    cmd->callback([this, a] {
      action_ = [this, a] {
        LambdaGrid g = cfg_.grid;
        if (a->lmin) g.min = *a->lmin;
        if (a->lmax) g.max = *a->lmax;
        if (a->count) g.count = *a->count;
        const auto r = drawable_region(a->alpha, a->delta_theta, g);
        const std::string csv = export_region_csv(r);
        if (a->print_json) {
          out_ << dump(json(r));
        } else {
          out_ << "psi_min " << fmt(r.psi_min) << "\npsi_max " << fmt(r.psi_max) << "\n";
        }
        emit(a->out, csv);
        return int{kOk};
      };
    });
  }

  // ---- qi ----
  {
    auto* cmd = app.add_subcommand("qi", "sample a quaternion integral curve to CSV");
    struct Args {
      std::string spec, preset, controls = "1,0,0,0", p0 = "0,0,0", v0 = "1,0,0", out = "qi.csv";
      double s_total = 1.0;
      std::size_t n = 0;
    };
    auto a = std::make_shared<Args>();
    a->n = cfg_.samples;
    cmd->add_option("--spec", a->spec, "QiCurveSpec JSON file");
    cmd->add_option("--preset", a->preset, "built-in spec: circle")->check(CLI::IsMember({"circle"}));
    cmd->add_option("--controls", a->controls, "control quaternions w,x,y,z;w,x,y,z;...")->capture_default_str();
    cmd->add_option("--p0", a->p0, "start point x,y,z")->capture_default_str();
    cmd->add_option("--v0", a->v0, "unit start direction x,y,z")->capture_default_str();
    cmd->add_option("--s-total", a->s_total, "arc length")->capture_default_str();
    cmd->add_option("--n", a->n, "number of samples")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
    cmd->add_option("--out", a->out, "CSV file")->capture_default_str();
    cmd->callback([this, a] {
      action_ = [this, a] {
        QiCurveSpec spec;
        if (!a->spec.empty()) {
          spec = json::parse(read_file(a->spec)).get<QiCurveSpec>();
        } else if (a->preset == "circle") {
          spec = circle_spec();
        } else {
          const auto p0 = parse_list(a->p0, 3, "--p0");
          const auto v0 = parse_list(a->v0, 3, "--v0");
          spec.p0 = {p0[0], p0[1], p0[2]};
          spec.v0 = {v0[0], v0[1], v0[2]};
          spec.s_total = a->s_total;
          std::size_t start = 0;
          while (start <= a->controls.size()) {
            const auto semi = a->controls.find(';', start);
            const auto q = parse_list(a->controls.substr(start, semi == std::string::npos ? semi : semi - start), 4,
                                      "--controls");
            spec.qcurve.controls.push_back({q[0], q[1], q[2], q[3]});
            if (semi == std::string::npos) break;
            start = semi + 1;
          }
        }
        const auto samples = sample_qi(spec, a->n, cfg_.tol);
        const auto& end = samples.back().point;
        out_ << "end " << fmt(end.x) << " " << fmt(end.y) << " " << fmt(end.z) << "\n";
        emit(a->out, export_csv(samples));
        return int{kOk};
      };
    });
  }

  // ---- ornament ----
  {
    auto* cmd = app.add_subcommand("ornament", "primitives placed along a family curve");
    auto fam = std::make_shared<FamilyArgs>();
    fam->add(cmd, true, cfg_.samples);
    struct Args {
      std::string primitive = "circle", size_rule = "constant", rhythm = "1", palette = "#000000",
                  out = "ornament.svg";
      std::size_t count = 12;
      double size_base = 0.05;
      Canvas canvas;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--primitive", a->primitive, "circle, square or triangle")->capture_default_str();
    cmd->add_option("--count", a->count, "number of stations")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--size-rule", a->size_rule, "constant or radius")
        ->check(CLI::IsMember({"constant", "radius"}))
        ->capture_default_str();
    cmd->add_option("--size-base", a->size_base, "base primitive size in world units")->capture_default_str();
    cmd->add_option("--rhythm", a->rhythm, "relative sizes cycled per station, e.g. 1,0.5")->capture_default_str();
    cmd->add_option("--palette", a->palette, "colors cycled per station, e.g. #ff0000,#0000ff")->capture_default_str();
    cmd->add_option("--width", a->canvas.width, "canvas width")->capture_default_str();
    cmd->add_option("--height", a->canvas.height, "canvas height")->capture_default_str();
    cmd->add_option("--margin", a->canvas.margin, "canvas margin")->capture_default_str();
    cmd->add_option("--out", a->out, "SVG file")->capture_default_str();
    cmd->callback([this, fam, a] {
      action_ = [this, fam, a] {
        OrnamentSpec spec;
        spec.path = fam->sample(cfg_.tol);
        spec.primitive = parse_primitive(a->primitive);
        spec.count = a->count;
        spec.size_rule = a->size_rule == "radius" ? SizeRule::ProportionalToRadius : SizeRule::Constant;
        spec.size_base = a->size_base;
        spec.rhythm = parse_list(a->rhythm, 0, "--rhythm");
        spec.palette.clear();
        std::size_t start = 0;
        while (start <= a->palette.size()) {
          const auto comma = a->palette.find(',', start);
          spec.palette.push_back(a->palette.substr(start, comma == std::string::npos ? comma : comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        spec.canvas = a->canvas;
        const auto doc = ornament_svg(spec);
        out_ << "stations " << spec.count << "\n";
        emit(a->out, doc);
        return int{kOk};
      };
    });
  }

  // ---- check ----
  {
    auto* cmd = app.add_subcommand("check", "curvature monotonicity report (JSON on stdout)");
    auto fam = std::make_shared<FamilyArgs>();
    fam->add(cmd, false, cfg_.samples);
    auto csv = std::make_shared<std::string>();
    auto tol = std::make_shared<std::optional<double>>();
    auto out = std::make_shared<std::string>("check.json");
    cmd->add_option("--csv", *csv, "curve CSV (s,x,y,theta,kappa) instead of family arguments");
    cmd->add_option("--tol", *tol, "comparison tolerance (default 1e-12 * max|kappa|)");
    cmd->add_option("--out", *out, "JSON report file")->capture_default_str();
    cmd->callback([this, fam, csv, tol, out] {
      action_ = [this, fam, csv, tol, out] {
        SampledCurve c;
        if (!csv->empty()) {
          if (fam->given()) throw Error(ErrorCode::InvalidArgument, "give either --csv or family arguments");
          c = curve_from_csv(*csv);
        } else {
          c = fam->sample(cfg_.tol);
        }
        json j = check_monotone(c, *tol);
        j["stress_marker"] = stress_marker(c);
        const std::string text = dump(j);
        out_ << text;
        emit(*out, text);
        return int{kOk};
      };
    });
  }

  // ---- plot ----
  {
    auto* cmd = app.add_subcommand("plot", "render curves as SVG, one band per stroke width");
    struct Args {
      std::vector<std::string> curves, csvs;
      std::string widths = "1", out = "plot.svg";
      bool axes = false, stress = false;
      Canvas canvas;
    };
    auto a = std::make_shared<Args>();
    cmd->add_option("--curve", a->curves, "family member as name-or-alpha:lambda:s_end (repeatable)");
    cmd->add_option("--csv", a->csvs, "curve CSV file (repeatable)");
    cmd->add_option("--widths", a->widths, "stroke widths, e.g. 0.5,1,2,4,8")->capture_default_str();
    cmd->add_flag("--axes", a->axes, "draw axes through the world origin");
    cmd->add_flag("--stress", a->stress, "mark curvature maximum and steepest curvature change");
    cmd->add_option("--width", a->canvas.width, "canvas width")->capture_default_str();
    cmd->add_option("--height", a->canvas.height, "canvas height")->capture_default_str();
    cmd->add_option("--margin", a->canvas.margin, "canvas margin")->capture_default_str();
    cmd->add_option("--out", a->out, "SVG file")->capture_default_str();
    cmd->callback([this, a] {
      action_ = [this, a] {
        PlotSpec spec;
        spec.canvas = a->canvas;
        spec.axes = a->axes;
        spec.stroke_widths = parse_list(a->widths, 0, "--widths");
        for (const auto& c : a->curves) {
          const auto first = c.find(':');
          const auto second = first == std::string::npos ? first : c.find(':', first + 1);
          if (second == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "--curve expects name-or-alpha:lambda:s_end, got '" + c + "'");
          }
          const std::string head = c.substr(0, first);
          std::string tail = c.substr(first + 1);
          std::replace(tail.begin(), tail.end(), ':', ',');
          const auto rest = parse_list(tail, 2, "--curve");
          char* end = nullptr;
          const double alpha = std::strtod(head.c_str(), &end);
          const auto eq = (!head.empty() && *end == '\0') ? NaturalEquation(alpha, rest[0]) : named_curve(head, rest[0]);
          spec.curves.push_back(sample_curve(eq, rest[1], cfg_.samples, {}, cfg_.tol));
        }
        for (const auto& f : a->csvs) spec.curves.push_back(curve_from_csv(f));
        if (a->stress) {
          for (const auto& c : spec.curves) spec.annotations.push_back(stress_marker(c));
        }
        const auto doc = plot_svg(spec);
        out_ << "paths " << spec.curves.size() * spec.stroke_widths.size() << "\n";
        emit(a->out, doc);
        return int{kOk};
      };
    });
  }
}

inline int Runner::run(const std::vector<std::string>& args) {
  // The config file supplies defaults for options, so it is read before the
  // parser is built.
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
  }
  try {
    if (!config_path.empty()) cfg_ = parse_config(read_file(config_path));
  } catch (const Error& e) {
    err_ << "error: " << e.what() << "\n";
    return kArgs;
  }

  CLI::App app{"Monotone-curvature curves: generate, analyze, fit and render", "mcurves"};
  std::string config_flag, output_dir_flag;
  app.add_option("--config", config_flag, "key = value defaults (tol, samples, output_dir, lambda_min, lambda_max, lambda_count)");
  app.add_option("--output-dir", output_dir_flag, "directory for relative output paths (env MCURVES_OUTPUT_DIR)");
  setup(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 consumes from the back
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out_, err_);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out_, err_);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out_, err_);
    for (const auto* sub : app.get_subcommands()) err_ << sub->help();
    if (app.get_subcommands().empty()) err_ << app.help();
    return kArgs;
  } catch (const Error& e) {
    err_ << "error: " << e.what() << "\n";
    return kArgs;
  }

  if (!output_dir_flag.empty()) {
    output_dir_ = output_dir_flag;
  } else if (const char* env = std::getenv("MCURVES_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    output_dir_ = env;
  } else {
    output_dir_ = cfg_.output_dir;
  }

  try {
    return action_();
  } catch (const Error& e) {
    err_ << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const json::exception& e) {
    err_ << "error: bad JSON: " << e.what() << "\n";
    return kArgs;
  } catch (const std::filesystem::filesystem_error& e) {
    err_ << "error: " << e.what() << "\n";
    return kArgs;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Runner r(out, err);
  return r.run(args);
}

}  // namespace mcurves::cli
