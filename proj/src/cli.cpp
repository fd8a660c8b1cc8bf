#include "maskit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "maskit/chains.hpp"
#include "maskit/discreteness.hpp"
#include "maskit/families.hpp"
#include "maskit/farey.hpp"
#include "maskit/locus.hpp"
#include "maskit/render.hpp"

namespace maskit {

using json = nlohmann::ordered_json;

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  static const std::string real = R"([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
  std::smatch m;
  if (std::regex_match(s, m, std::regex("(" + real + "),(" + real + ")")))
    return {std::stod(m[1]), std::stod(m[2])};
  if (std::regex_match(s, m, std::regex("(" + real + ")")) ) return {std::stod(m[1]), 0.0};
  static const std::string coef = R"((?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)";
  auto imag_part = [](const std::string& sign, const std::string& digits) {
    double v = digits.empty() ? 1.0 : std::stod(digits);
    return sign == "-" ? -v : v;
  };
  if (std::regex_match(s, m, std::regex("([+-]?)(" + coef + ")i"))) return {0.0, imag_part(m[1], m[2])};
  if (std::regex_match(s, m, std::regex("(" + real + ")([+-])(" + coef + ")i")))
    return {std::stod(m[1]), imag_part(m[2], m[3])};
  throw std::invalid_argument("bad complex number: " + text);
}

std::string format_complex(cplx z, int digits) {
  // Drop rounding noise such as 1.2e-16 next to an order-one part.
  const double tiny = 1e-14 * std::max(1.0, std::abs(z));
  if (std::abs(z.real()) < tiny) z.real(0.0);
  if (std::abs(z.imag()) < tiny) z.imag(0.0);
  char re[40], im[40];
  std::snprintf(re, sizeof re, "%.*g", digits, z.real() == 0.0 ? 0.0 : z.real());
  std::snprintf(im, sizeof im, "%.*g", digits, std::abs(z.imag()));
  return std::string(re) + (z.imag() < 0 ? "-" : "+") + im + "i";
}

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    int v = std::stoi(item, &pos);
    if (pos != item.size()) throw UsageError("bad integer list: " + s);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty integer list");
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json mjson(const Mobius& m) {
  return json::array({cjson(m.a), cjson(m.b), cjson(m.c), cjson(m.d)});
}

json djson(const GeneralizedDisk& d) {
  json j;
  switch (d.type) {
    case GeneralizedDisk::Type::Disk: j["type"] = "disk"; break;
    case GeneralizedDisk::Type::Exterior: j["type"] = "exterior"; break;
    case GeneralizedDisk::Type::HalfPlane: j["type"] = "half-plane"; break;
  }
  if (d.is_circle()) {
    j["center"] = cjson(d.center);
    j["radius"] = d.radius;
  } else {
    j["point"] = cjson(d.point);
    j["normal"] = cjson(d.normal);
  }
  return j;
}

void write_text(const std::string& path, const std::string& data) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << data;
}

// Options shared by every subcommand. Values stay strings until the command
// runs so that flags, the JSON config and defaults merge in one place.
class Settings {
 public:
  void add(CLI::App* app, const std::string& name, const std::string& def, const std::string& help) {
    values_[name] = def;
    options_[name] = app->add_option("--" + name, values_[name], help + (def.empty() ? "" : " [" + def + "]"));
    order_.push_back(name);
  }

  void merge_config() {
    auto it = values_.find("config");
    if (it == values_.end() || it->second.empty()) return;
    std::ifstream f(it->second);
    if (!f) throw UsageError("cannot read config " + it->second);
    json cfg;
    try {
      cfg = json::parse(f);
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad config: ") + e.what());
    }
    for (auto& [key, val] : cfg.items()) {
      if (!values_.count(key)) throw UsageError("unknown config key: " + key);
      if (options_[key]->count() > 0) continue;  // flags win
      values_[key] = val.is_string() ? val.get<std::string>() : val.dump();
    }
  }

  const std::string& str(const std::string& k) const { return values_.at(k); }
  bool has(const std::string& k) const { return !values_.at(k).empty(); }
  double real(const std::string& k) const {
    try {
      return std::stod(str(k));
    } catch (const std::exception&) {
      throw UsageError("--" + k + " expects a number: " + str(k));
    }
  }
  int integer(const std::string& k) const {
    try {
      return std::stoi(str(k));
    } catch (const std::exception&) {
      throw UsageError("--" + k + " expects an integer: " + str(k));
    }
  }
  Fraction fraction() const {
    try {
      return Fraction::parse(str("frac"));
    } catch (const std::exception& e) {
      throw UsageError(std::string("--frac: ") + e.what());
    }
  }
  std::vector<int> ints(const std::string& k) const { return parse_int_list(str(k)); }
  Family family() const {
    if (str("family") == "maskit") return Family::Maskit;
    if (str("family") == "koebe") return Family::Koebe;
    throw UsageError("--family must be maskit or koebe");
  }

  json effective(const std::string& command) const {
    json j;
    j["command"] = command;
    for (const auto& k : order_)
      if (k != "config") j[k] = values_.at(k);
    return j;
  }

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
  std::vector<std::string> order_;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  const Settings& s;
  json config;
};

double positive(const Settings& s, const std::string& k) {
  double v = s.real(k);
  if (!(v > 0)) throw UsageError("--" + k + " must be positive");
  return v;
}

// ---------------------------------------------------------------------------

int cmd_ray(Context& c) {
  const Fraction f = c.s.fraction();
  const double step = positive(c.s, "step");
  RayTrace rt;
  if (c.s.family() == Family::Koebe) {
    rt = koebe_ray(c.s.ints("n").front(), f, step);
  } else {
    RayOptions opt;
    opt.step = step;
    if (c.s.has("n")) opt.orders = c.s.ints("n");
    opt.t_end = c.s.has("t-end") ? c.s.real("t-end") : (opt.orders.empty() ? 2.0 : 0.0);
    rt = trace_ray(TraceFunction::maskit(f), opt);
  }
  std::string csv = "# " + c.config.dump() + "\n" + ray_csv(rt);
  if (c.s.has("out")) write_text(c.s.str("out"), csv);
  else c.out << csv;
  std::ostream& info = c.s.has("out") ? c.out : c.err;
  info << "samples " << rt.samples.size() << "\n";
  for (const SpecialPoint& sp : rt.specials) {
    info << sp.label() << " " << format_complex(sp.param, 12);
    if (rt.family == Family::Koebe) info << " tau^2 " << format_complex(sp.param * sp.param, 12);
    info << "\n";
  }
  if (!rt.complete) c.err << "incomplete ray: " << rt.note << "\n";
  if (rt.family == Family::Koebe && !rt.sector_ok)
    c.err << "sector check failed, excess " << num(rt.max_sector_excess) << "\n";
  return rt.complete && rt.sector_ok ? 0 : 1;
}

int cmd_cusp(Context& c) {
  const Fraction f = c.s.fraction();
  TraceFunction tf = c.s.family() == Family::Koebe ? TraceFunction::koebe(c.s.ints("n").front(), f)
                                                   : TraceFunction::maskit(f);
  SpecialPoint sp = find_cusp(tf);
  c.out << format_complex(sp.param, 12);
  if (tf.family() == Family::Koebe) c.out << " tau^2 " << format_complex(sp.param * sp.param, 12);
  c.out << "\n";
  return 0;
}

int cmd_elliptic(Context& c) {
  const Fraction f = c.s.fraction();
  if (!c.s.has("n")) throw UsageError("elliptic needs --n");
  if (c.s.family() == Family::Koebe) {
    // orders on the p/q ray of M_n for one fixed n
    const std::vector<int> ns = c.s.ints("n");
    if (ns.size() < 2) throw UsageError("koebe family: --n takes the family n then the orders, e.g. 4,3,5");
    TraceFunction tf = TraceFunction::koebe(ns.front(), f);
    for (std::size_t k = 1; k < ns.size(); ++k) {
      SpecialPoint sp = elliptic_point(tf, ns[k]);
      c.out << "n=" << ns[k] << ": tau " << format_complex(sp.param) << " tau^2 " << format_complex(sp.param * sp.param)
            << "\n";
    }
    return 0;
  }
  TraceFunction tf = TraceFunction::maskit(f);
  for (int n : c.s.ints("n")) {
    if (n < 2) throw UsageError("--n orders must be >= 2");
    SpecialPoint sp = elliptic_point(tf, n);
    c.out << "n=" << n << ": " << format_complex(sp.param) << "\n";
  }
  return 0;
}

int cmd_chain(Context& c) {
  const Fraction f = c.s.fraction();
  const int n = c.s.has("n") ? c.s.ints("n").front() : 0;
  Chain ch = n == 0 ? build_cusp_chain(f, c.s.integer("window")) : build_elliptic_chain(f, n);
  ChainReport rep = verify_combinatorial(ch);
  const double tol = positive(c.s, "tol");

  json j;
  j["config"] = c.config;
  j["fraction"] = f.str();
  j["upper"] = ch.upper.str();
  j["n"] = n;
  j["mu"] = cjson(ch.mu);
  j["fix_K"] = ch.fix_K.inf ? json("inf") : cjson(ch.fix_K.z);
  j["disks"] = json::array();
  for (const ChainDisk& d : ch.disks)
    j["disks"].push_back({{"index", d.index}, {"word", d.word}, {"carrier", mjson(d.carrier)}, {"disk", djson(d.disk)}});
  j["conditions"] = json::array();
  for (const ConditionResult& r : rep.conditions)
    j["conditions"].push_back({{"name", r.name}, {"pass", r.pass}, {"residual", r.residual}, {"detail", r.detail}});
  bool ok = rep.all_pass();

  SvgScene scene;
  for (const ChainDisk& d : ch.disks) scene.disks.push_back(d.disk);
  if (ch.closed() && ok) {
    PleatingCurves pc = pleating_curves(ch, ch.Z);
    j["pleating"] = {{"disjoint", pc.disjoint},     {"margin", pc.margin},         {"overlap_depth", pc.overlap_depth},
                     {"simple_A", pc.simple_A},     {"simple_B", pc.simple_B},     {"side_ok", pc.side_ok},
                     {"dagger_residual", pc.dagger_residual}};
    ok = ok && pc.disjoint && pc.dagger_residual <= tol;
    std::vector<cplx> a, b;
    for (const Point& p : pc.W_A) a.push_back(p.inf ? cplx(HUGE_VAL, HUGE_VAL) : p.z);
    for (const Point& p : pc.W_B) b.push_back(p.inf ? cplx(HUGE_VAL, HUGE_VAL) : p.z);
    scene.curves.push_back(a);
    scene.curves.push_back(b);
  }
  j["pass"] = ok;
  if (c.s.has("viewport")) {
    scene.viewport = Viewport::parse(c.s.str("viewport"));
    scene.has_viewport = true;
  }
  if (c.s.has("svg")) {
    std::string doc = svg_document(scene);
    doc.insert(doc.find("<svg"), "<!-- " + c.config.dump() + " -->\n");
    write_text(c.s.str("svg"), doc);
  }
  std::string text = j.dump(2) + "\n";
  if (c.s.has("out")) write_text(c.s.str("out"), text);
  else c.out << text;
  for (const ConditionResult& r : rep.conditions)
    if (!r.pass) c.err << "failed: " << r.name << " residual " << num(r.residual) << " " << r.detail << "\n";
  return ok ? 0 : 1;
}

int cmd_scan(Context& c) {
  const Fraction f = c.s.fraction();
  const int n = c.s.ints("n").front();
  const int grid = c.s.integer("grid");
  if (grid < 1) throw UsageError("--grid must be >= 1");
  ScanRegion region;
  region.center = c.s.has("center") ? parse_complex(c.s.str("center")) : elliptic_point(TraceFunction::maskit(f), n).param;
  region.radius_re = region.radius_im = positive(c.s, "radius");
  ScanResult res = nondiscreteness_scan(region, f, n, grid);

  std::ostringstream csv;
  csv << "# " << c.config.dump() << "\n" << "i,j,re,im,J,verdict\n";
  for (const ScanCell& cell : res.cells)
    csv << cell.i << "," << cell.j << "," << num(cell.mu.real()) << "," << num(cell.mu.imag()) << ","
        << num(cell.report.J) << "," << to_string(cell.report.verdict) << "\n";
  if (c.s.has("out")) write_text(c.s.str("out"), csv.str());
  else c.out << csv.str();
  if (c.s.has("image")) {
    // heat map: violating red, elementary-suspect blue, inconclusive grey by J
    std::string ppm = "P6\n# " + c.config.dump() + "\n" + std::to_string(grid) + " " + std::to_string(grid) + "\n255\n";
    for (int j = grid - 1; j >= 0; --j)
      for (int i = 0; i < grid; ++i) {
        const JorgensenReport& r = res.at(i, j).report;
        unsigned char px[3];
        switch (r.verdict) {
          case JorgensenVerdict::Violating: px[0] = 200, px[1] = 30, px[2] = 30; break;
          case JorgensenVerdict::ElementarySuspect: px[0] = 30, px[1] = 60, px[2] = 200; break;
          default: {
            auto g = static_cast<unsigned char>(255.0 * std::min(1.0, std::log1p(r.J) / std::log1p(10.0)));
            px[0] = px[1] = px[2] = g;
          }
        }
        ppm.append(reinterpret_cast<const char*>(px), 3);
      }
    write_text(c.s.str("image"), ppm);
  }
  std::ostream& info = c.s.has("out") ? c.out : c.err;
  info << "violating " << res.count(JorgensenVerdict::Violating) << " inconclusive "
       << res.count(JorgensenVerdict::Inconclusive) << " elementary-suspect "
       << res.count(JorgensenVerdict::ElementarySuspect) << "\n";
  return 0;
}

int cmd_conjugacy(Context& c) {
  const double tol = positive(c.s, "tol");
  bool ok = true;
  for (int n : c.s.ints("n")) {
    if (n < 3) throw UsageError("conjugacy needs n >= 3");
    ConjugacyReport r = check_conjugacy(n);
    c.out << "n=" << n << " residual " << num(r.max()) << " (A " << num(r.res_A) << ", B " << num(r.res_B) << ", C "
          << num(r.res_C) << ")\n";
    ok = ok && r.max() <= tol;
  }
  return ok ? 0 : 1;
}

int cmd_limitset(Context& c) {
  std::vector<Mobius> gens;
  if (c.s.family() == Family::Koebe) {
    if (!c.s.has("tau")) throw UsageError("koebe limit set needs --tau");
    KoebeGroup g = koebe_group(c.s.ints("n").front(), parse_complex(c.s.str("tau")));
    gens = {g.A, g.B, g.C};
  } else {
    cplx mu;
    if (c.s.has("mu")) mu = parse_complex(c.s.str("mu"));
    else if (c.s.has("frac") && c.s.has("n")) mu = elliptic_point(TraceFunction::maskit(c.s.fraction()), c.s.ints("n").front()).param;
    else throw UsageError("maskit limit set needs --mu or --frac with --n");
    gens = {maskit_S(), maskit_T(mu)};
  }
  LimitSetOptions opt;
  opt.max_depth = c.s.integer("depth");
  opt.min_cell = positive(c.s, "cell");
  opt.node_budget = std::stoll(c.s.str("budget"));
  if (c.s.has("viewport")) {
    opt.viewport = Viewport::parse(c.s.str("viewport"));
    opt.has_viewport = true;
  }
  PointCloud pc = limit_set(gens, opt);
  std::size_t lit = 0;
  if (c.s.has("out")) lit = render_raster(pc, c.s.integer("width"), c.s.integer("height"), c.s.str("out"));
  c.out << "points " << pc.points.size() << " nodes " << pc.nodes << " lit " << lit << " viewport " << pc.viewport.str()
        << (pc.truncated ? " truncated" : "") << "\n";
  return 0;
}

int cmd_signature(Context& c) {
  const Fraction f = c.s.fraction();
  cplx mu;
  if (c.s.has("mu")) mu = parse_complex(c.s.str("mu"));
  else if (c.s.has("n")) mu = elliptic_point(TraceFunction::maskit(f), c.s.ints("n").front()).param;
  else throw UsageError("signature needs --mu or --n");
  try {
    SignatureReport r = triangle_signature(mu, f);
    c.out << to_string(r.verdict) << " " << r.str() << " tr W " << format_complex(r.tr_W, 12) << "\n";
    return r.verdict == SignatureVerdict::NonDiscrete ? 1 : 0;
  } catch (const OffLocusError& e) {
    c.err << "off locus: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maskit slice and Koebe family toolkit"};
  app.require_subcommand(1);
  struct Sub {
    CLI::App* app;
    Settings settings;
    int (*fn)(Context&);
  };
  std::vector<std::unique_ptr<Sub>> subs;
  auto sub = [&](const std::string& name, const std::string& help, int (*fn)(Context&)) {
    auto s = std::make_unique<Sub>();
    s->app = app.add_subcommand(name, help);
    s->fn = fn;
    s->settings.add(s->app, "config", "", "JSON file of option values; flags take precedence");
    subs.push_back(std::move(s));
    return &subs.back()->settings;
  };
  Settings* s = sub("ray", "trace a pleating ray and write CSV", cmd_ray);
  auto* a = subs.back()->app;
  s->add(a, "family", "maskit", "maskit or koebe");
  s->add(a, "frac", "1/2", "slope p/q");
  s->add(a, "n", "", "koebe: the family n; maskit: elliptic orders to mark, e.g. 2,3,4");
  s->add(a, "step", "0.05", "relative continuation step");
  s->add(a, "t-end", "", "maskit: |trace| to stop at (default 2, or 0 with --n)");
  s->add(a, "out", "", "CSV path (default stdout)");

  s = sub("cusp", "locate the cusp of a rational ray", cmd_cusp);
  a = subs.back()->app;
  s->add(a, "family", "maskit", "maskit or koebe");
  s->add(a, "frac", "1/2", "slope p/q");
  s->add(a, "n", "4", "koebe family n");

  s = sub("elliptic", "parameters where W_{p/q} is elliptic of order n", cmd_elliptic);
  a = subs.back()->app;
  s->add(a, "family", "maskit", "maskit or koebe");
  s->add(a, "frac", "1/2", "slope p/q");
  s->add(a, "n", "", "orders, e.g. 2,3,4 (koebe: family n first)");

  s = sub("chain", "build and verify a circle chain", cmd_chain);
  a = subs.back()->app;
  s->add(a, "frac", "1/2", "slope p/q");
  s->add(a, "n", "0", "elliptic order; 0 builds the cusp chain");
  s->add(a, "window", "3", "cusp chain window");
  s->add(a, "tol", "1e-9", "tolerance for the (dagger) residual");
  s->add(a, "out", "", "JSON report path (default stdout)");
  s->add(a, "svg", "", "SVG drawing path");
  s->add(a, "viewport", "", "x0,y0,x1,y1 for the SVG");

  s = sub("scan", "Jorgensen grid around mu_{p/q}(n)", cmd_scan);
  a = subs.back()->app;
  s->add(a, "frac", "1/2", "slope p/q");
  s->add(a, "n", "4", "elliptic order and power of W_{p/q}");
  s->add(a, "grid", "41", "nodes per side");
  s->add(a, "radius", "0.1", "half width of the region");
  s->add(a, "center", "", "region center (default mu_{p/q}(n))");
  s->add(a, "out", "", "CSV path (default stdout)");
  s->add(a, "image", "", "PPM heat map path");

  s = sub("conjugacy", "check the conjugacy into the Koebe family", cmd_conjugacy);
  a = subs.back()->app;
  s->add(a, "n", "3,4,5,6,7,8", "orders");
  s->add(a, "tol", "1e-9", "residual bound");

  s = sub("limitset", "render a limit set", cmd_limitset);
  a = subs.back()->app;
  s->add(a, "family", "maskit", "maskit or koebe");
  s->add(a, "mu", "", "maskit parameter");
  s->add(a, "frac", "", "slope p/q, with --n, for mu_{p/q}(n)");
  s->add(a, "n", "4", "elliptic order, or the koebe family n");
  s->add(a, "tau", "", "koebe parameter");
  s->add(a, "depth", "14", "maximum word length");
  s->add(a, "cell", "1e-3", "prune below this image diameter");
  s->add(a, "budget", "4000000", "node cap");
  s->add(a, "viewport", "", "x0,y0,x1,y1");
  s->add(a, "width", "1000", "raster width");
  s->add(a, "height", "1000", "raster height");
  s->add(a, "out", "", "PPM path");

  s = sub("signature", "triangle group signature at mu", cmd_signature);
  a = subs.back()->app;
  s->add(a, "frac", "1/2", "slope p/q");
  s->add(a, "mu", "", "parameter");
  s->add(a, "n", "", "use mu_{p/q}(n) instead of --mu");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    // Top-level help lists every subcommand with its flags.
    out << (app.get_subcommands().empty() ? app.help("", CLI::AppFormatMode::All) : app.help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }
  for (auto& sp : subs) {
    if (!sp->app->parsed()) continue;
    try {
      sp->settings.merge_config();
      Context ctx{out, err, sp->settings, sp->settings.effective(sp->app->get_name())};
      return sp->fn(ctx);
    } catch (const UsageError& e) {
      err << "usage: " << e.what() << "\n";
      return 2;
    } catch (const std::invalid_argument& e) {
      err << "usage: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace maskit
