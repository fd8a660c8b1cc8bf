#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "maskit/discreteness.hpp"
#include "maskit/locus.hpp"
#include "maskit/moebius.hpp"

namespace maskit {

struct Viewport {
  double x0 = -1, y0 = -1, x1 = 1, y1 = 1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  cplx center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
  bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
  // "x0,y0,x1,y1"
  static Viewport parse(const std::string& s);
  std::string str() const;
};

// Bounding box of the finite generator fixed points, padded by 20% (at least 1 unit wide).
Viewport default_viewport(const std::vector<Mobius>& gens);

struct CloudPoint {
  cplx z{};
  int depth = 0;
  std::string word;  // generator i is letter 'a' + i, its inverse the upper case letter
};

struct PointCloud {
  std::vector<CloudPoint> points;  // finite points only, sorted by (Re, Im)
  Viewport viewport;
  long long nodes = 0;
  bool truncated = false;  // the node budget was hit
};

struct LimitSetOptions {
  int max_depth = 12;
  double min_cell = 1e-3;
  long long node_budget = 4'000'000;
  Viewport viewport;
  bool has_viewport = false;  // otherwise default_viewport(gens)
};

// Depth-first enumeration of reduced words. Elliptic generators of order k
// only appear in runs g^j with -k/2 < j <= k/2.
PointCloud limit_set(const std::vector<Mobius>& gens, const LimitSetOptions& opt);
inline PointCloud limit_set(const std::vector<Mobius>& gens, int max_depth, double min_cell) {
  LimitSetOptions opt;
  opt.max_depth = max_depth;
  opt.min_cell = min_cell;
  return limit_set(gens, opt);
}

Mobius evaluate_word(const std::vector<Mobius>& gens, const std::string& word);

// Binary PPM (P6), white background, points in black. Returns the number of lit pixels.
std::size_t render_raster(const PointCloud& pc, int width, int height, const std::string& path);

struct SvgScene {
  std::vector<GeneralizedDisk> disks;
  std::vector<Circle> circles;
  std::vector<std::vector<cplx>> curves;  // closed paths
  std::vector<std::vector<cplx>> rays;    // open polylines
  Viewport viewport;
  bool has_viewport = false;  // otherwise fit to the finite content
  std::size_t element_count() const { return disks.size() + circles.size() + curves.size() + rays.size(); }
};

std::string svg_document(const SvgScene& scene);
void render_svg(const SvgScene& scene, const std::string& path);

// CSV with header t,re,im,flag (Koebe rays add tau2_re,tau2_im,itrc_re,itrc_im);
// special points follow the samples, flagged cusp or elliptic(n).
std::string ray_csv(const RayTrace& rt);
void export_ray_csv(const RayTrace& rt, const std::string& path);

}  // namespace maskit
