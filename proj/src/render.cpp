#include "maskit/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "maskit/families.hpp"

namespace maskit {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);
  return buf;
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << data;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

Viewport Viewport::parse(const std::string& s) {
  Viewport v;
  char c1, c2, c3;
  std::istringstream is(s);
  if (!(is >> v.x0 >> c1 >> v.y0 >> c2 >> v.x1 >> c3 >> v.y1) || c1 != ',' || c2 != ',' || c3 != ',')
    throw std::invalid_argument("viewport must be x0,y0,x1,y1: " + s);
  if (!(v.x1 > v.x0 && v.y1 > v.y0)) throw std::invalid_argument("viewport is empty: " + s);
  return v;
}

std::string Viewport::str() const { return num(x0) + "," + num(y0) + "," + num(x1) + "," + num(y1); }

Viewport default_viewport(const std::vector<Mobius>& gens) {
  double x0 = HUGE_VAL, y0 = HUGE_VAL, x1 = -HUGE_VAL, y1 = -HUGE_VAL;
  for (const Mobius& g : gens)
    for (const Point& p : fixed_points(g)) {
      if (p.inf) continue;
      x0 = std::min(x0, p.z.real());
      x1 = std::max(x1, p.z.real());
      y0 = std::min(y0, p.z.imag());
      y1 = std::max(y1, p.z.imag());
    }
  if (x0 > x1) return {};
  double w = std::max(x1 - x0, 1.0), h = std::max(y1 - y0, 1.0);
  double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  return {cx - 0.6 * w, cy - 0.6 * h, cx + 0.6 * w, cy + 0.6 * h};
}

// ---------------------------------------------------------------------------
// Limit sets

Mobius evaluate_word(const std::vector<Mobius>& gens, const std::string& word) {
  Mobius m = Mobius::identity();
  for (char ch : word) {
    bool inv = std::isupper(static_cast<unsigned char>(ch));
    std::size_t k = static_cast<std::size_t>(std::tolower(static_cast<unsigned char>(ch)) - 'a');
    if (k >= gens.size()) throw std::invalid_argument(std::string("unknown generator letter ") + ch);
    m = m * (inv ? gens[k].inverse() : gens[k]);
  }
  return m;
}

namespace {

struct Enumerator {
  const LimitSetOptions& opt;
  std::vector<Mobius> letters;  // 2k = g_k, 2k+1 = g_k^-1
  std::vector<int> max_run;     // per letter; -1 = unbounded
  std::vector<cplx> frame;
  PointCloud out;
  std::string word;

  Enumerator(const std::vector<Mobius>& gens, const LimitSetOptions& o) : opt(o) {
    for (const Mobius& g : gens) {
      letters.push_back(g);
      letters.push_back(g.inverse());
      Classification c = classify(g);
      if (c.kind == Kind::Elliptic && c.order > 0) {
        max_run.push_back(static_cast<int>(c.order / 2));
        max_run.push_back(static_cast<int>((c.order + 1) / 2 - 1));
      } else {
        max_run.push_back(-1);
        max_run.push_back(-1);
      }
    }
    out.viewport = opt.has_viewport ? opt.viewport : default_viewport(gens);
    cplx c = out.viewport.center();
    double r = 0.5 * std::hypot(out.viewport.width(), out.viewport.height());
    for (int k = 0; k < 3; ++k) frame.push_back(c + std::polar(r, 2.0 * M_PI * k / 3.0));
  }

  static char letter(int l) { return static_cast<char>(l % 2 == 0 ? 'a' + l / 2 : 'A' + l / 2); }

  void emit(const Mobius& m, int depth) {
    cplx tr = m.trace();
    double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
    if (std::abs(tr.imag()) <= 1e-12 * scale && std::abs(tr.real()) < 2.0 - 1e-9) return;  // elliptic
    if (is_identity(m)) return;
    Point p = fixed_points(m).front();
    if (p.inf || !std::isfinite(p.z.real()) || !std::isfinite(p.z.imag())) return;
    out.points.push_back({p.z, depth, word});
  }

  double frame_diameter(const Mobius& m) const {
    cplx img[3];
    for (int k = 0; k < 3; ++k) {
      Point p = m.apply(Point(frame[static_cast<std::size_t>(k)]));
      if (p.inf) return HUGE_VAL;
      img[k] = p.z;
    }
    return std::max({std::abs(img[0] - img[1]), std::abs(img[1] - img[2]), std::abs(img[0] - img[2])});
  }

  void visit(const Mobius& m, int last, int run, int depth) {
    if (out.nodes >= opt.node_budget) {
      out.truncated = true;
      return;
    }
    ++out.nodes;
    if (depth > 0) {
      emit(m, depth);
      if (depth >= opt.max_depth || frame_diameter(m) < opt.min_cell) return;
    }
    for (int l = 0; l < static_cast<int>(letters.size()); ++l) {
      if (last >= 0 && l == (last ^ 1)) continue;
      int r = l == last ? run + 1 : 1;
      int cap = max_run[static_cast<std::size_t>(l)];
      if (cap >= 0 && r > cap) continue;
      word.push_back(letter(l));
      visit(m * letters[static_cast<std::size_t>(l)], l, r, depth + 1);
      word.pop_back();
      if (out.truncated) return;
    }
  }
};

}  // namespace

PointCloud limit_set(const std::vector<Mobius>& gens, const LimitSetOptions& opt) {
  if (gens.empty()) throw std::invalid_argument("limit_set: no generators");
  if (gens.size() > 26) throw std::invalid_argument("limit_set: at most 26 generators");
  if (opt.max_depth < 1 || !(opt.min_cell > 0)) throw std::invalid_argument("limit_set: bad depth or cell");
  Enumerator e(gens, opt);
  e.visit(Mobius::identity(), -1, 0, 0);
  auto& pts = e.out.points;
  std::sort(pts.begin(), pts.end(), [](const CloudPoint& a, const CloudPoint& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.word < b.word;
  });
  // Collapse repeats (the same fixed point from powers and conjugates), keeping the first.
  std::vector<CloudPoint> kept;
  for (const CloudPoint& p : pts) {
    bool dup = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      if (p.z.real() - it->z.real() > 1e-12 * std::max(1.0, std::abs(p.z))) break;
      if (std::abs(p.z - it->z) <= 1e-12 * std::max(1.0, std::abs(p.z))) {
        dup = true;
        break;
      }
    }
    if (!dup) kept.push_back(p);
  }
  pts = std::move(kept);
  return std::move(e.out);
}

// ---------------------------------------------------------------------------
// Raster

std::size_t render_raster(const PointCloud& pc, int width, int height, const std::string& path) {
  if (width < 1 || height < 1) throw std::invalid_argument("render_raster: bad size");
  std::vector<unsigned char> px(static_cast<std::size_t>(width) * height * 3, 255);
  const Viewport& v = pc.viewport;
  std::size_t lit = 0;
  for (const CloudPoint& p : pc.points) {
    if (!v.contains(p.z)) continue;
    int i = std::min(width - 1, static_cast<int>((p.z.real() - v.x0) / v.width() * width));
    int j = std::min(height - 1, static_cast<int>((v.y1 - p.z.imag()) / v.height() * height));
    unsigned char* c = &px[(static_cast<std::size_t>(j) * width + i) * 3];
    if (c[0] != 0) ++lit;
    c[0] = c[1] = c[2] = 0;
  }
  std::string data = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  data.append(reinterpret_cast<const char*>(px.data()), px.size());
  write_file(path, data);
  return lit;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::vector<cplx> clip_half_plane(const std::vector<cplx>& poly, const GeneralizedDisk& h) {
  std::vector<cplx> out;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    cplx a = poly[k], b = poly[(k + 1) % poly.size()];
    double da = h.signed_distance(a), db = h.signed_distance(b);
    if (da >= 0) out.push_back(a);
    if ((da >= 0) != (db >= 0)) out.push_back(a + (b - a) * (da / (da - db)));
  }
  return out;
}

Viewport fit(const SvgScene& s) {
  double x0 = HUGE_VAL, y0 = HUGE_VAL, x1 = -HUGE_VAL, y1 = -HUGE_VAL;
  auto add = [&](cplx z, double r) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e6) return;
    x0 = std::min(x0, z.real() - r);
    x1 = std::max(x1, z.real() + r);
    y0 = std::min(y0, z.imag() - r);
    y1 = std::max(y1, z.imag() + r);
  };
  for (const auto& d : s.disks) {
    if (d.is_circle()) add(d.center, d.radius);
    else add(d.point, 0.0);
  }
  for (const auto& c : s.circles) add(c.center, c.radius);
  for (const auto& cv : s.curves)
    for (cplx z : cv) add(z, 0.0);
  for (const auto& r : s.rays)
    for (cplx z : r) add(z, 0.0);
  if (x0 > x1) return {};
  double w = std::max(x1 - x0, 1e-6), h = std::max(y1 - y0, 1e-6);
  return {x0 - 0.1 * w, y0 - 0.1 * h, x1 + 0.1 * w, y1 + 0.1 * h};
}

std::string points_attr(const std::vector<cplx>& pts) {
  std::string s;
  for (cplx z : pts) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
    if (!s.empty()) s += ' ';
    s += num(z.real()) + "," + num(z.imag());
  }
  return s;
}

std::string path_d(const std::vector<cplx>& pts, bool close) {
  std::string s;
  bool pen = false;
  for (cplx z : pts) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e6) {
      pen = false;  // break the path at infinity
      continue;
    }
    s += (pen ? " L " : (s.empty() ? "M " : " M ")) + num(z.real()) + " " + num(z.imag());
    pen = true;
  }
  if (close && !s.empty()) s += " Z";
  return s;
}

}  // namespace

std::string svg_document(const SvgScene& scene) {
  Viewport v = scene.has_viewport ? scene.viewport : fit(scene);
  double stroke = 0.002 * std::max(v.width(), v.height());
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(v.x0) << " " << num(-v.y1) << " "
     << num(v.width()) << " " << num(v.height()) << "\">\n"
     << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\">\n";
  const std::vector<cplx> box{{v.x0, v.y0}, {v.x1, v.y0}, {v.x1, v.y1}, {v.x0, v.y1}};
  for (const auto& d : scene.disks) {
    switch (d.type) {
      case GeneralizedDisk::Type::Disk:
        os << "<circle cx=\"" << num(d.center.real()) << "\" cy=\"" << num(d.center.imag()) << "\" r=\""
           << num(d.radius) << "\" fill=\"#cfe0f5\"/>\n";
        break;
      case GeneralizedDisk::Type::Exterior: {
        double r = d.radius;
        cplx c = d.center;
        os << "<path fill=\"#cfe0f5\" fill-rule=\"evenodd\" d=\"" << path_d(box, true) << " M " << num(c.real() + r)
           << " " << num(c.imag()) << " A " << num(r) << " " << num(r) << " 0 1 0 " << num(c.real() - r) << " "
           << num(c.imag()) << " A " << num(r) << " " << num(r) << " 0 1 0 " << num(c.real() + r) << " "
           << num(c.imag()) << " Z\"/>\n";
        break;
      }
      case GeneralizedDisk::Type::HalfPlane:
        os << "<path fill=\"#cfe0f5\" d=\"" << path_d(clip_half_plane(box, d), true) << "\"/>\n";
        break;
    }
  }
  for (const auto& c : scene.circles)
    os << "<circle cx=\"" << num(c.center.real()) << "\" cy=\"" << num(c.center.imag()) << "\" r=\""
       << num(c.radius) << "\"/>\n";
  for (const auto& cv : scene.curves) os << "<path stroke=\"#b0302a\" d=\"" << path_d(cv, true) << "\"/>\n";
  for (const auto& r : scene.rays) os << "<polyline stroke=\"#1d6b2f\" points=\"" << points_attr(r) << "\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

void render_svg(const SvgScene& scene, const std::string& path) { write_file(path, svg_document(scene)); }

// ---------------------------------------------------------------------------
// CSV

std::string ray_csv(const RayTrace& rt) {
  const bool koebe = rt.family == Family::Koebe;
  std::ostringstream os;
  os << "t,re,im,flag" << (koebe ? ",tau2_re,tau2_im,itrc_re,itrc_im" : "") << "\n";
  auto row = [&](double t, cplx p, const std::string& flag) {
    os << num(t) << "," << num(p.real()) << "," << num(p.imag()) << "," << flag;
    if (koebe) {
      cplx tau2 = p * p;
      cplx itrc = cplx(0, 1) * koebe_C(rt.n, p).trace();
      os << "," << num(tau2.real()) << "," << num(tau2.imag()) << "," << num(itrc.real()) << "," << num(itrc.imag());
    }
    os << "\n";
  };
  for (const RaySample& s : rt.samples) row(s.t, s.param, to_string(s.flag));
  for (const SpecialPoint& s : rt.specials) row(s.target, s.param, s.label());
  return os.str();
}

void export_ray_csv(const RayTrace& rt, const std::string& path) { write_file(path, ray_csv(rt)); }

}  // namespace maskit
