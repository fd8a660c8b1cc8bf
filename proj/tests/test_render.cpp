#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "maskit/chains.hpp"
#include "maskit/discreteness.hpp"
#include "maskit/families.hpp"
#include "maskit/locus.hpp"
#include "maskit/render.hpp"
#include "oracle.hpp"

using namespace maskit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / ("maskit_" + name)).string(); }

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("viewport parsing") {
  Viewport v = Viewport::parse("-2,-0.5,2,2.5");
  CHECK(v.x0 == -2);
  CHECK(v.y1 == 2.5);
  CHECK(Viewport::parse(v.str()).x1 == 2);
  CHECK_THROWS(Viewport::parse("1,2,3"));
  CHECK_THROWS(Viewport::parse("1,1,0,2"));
}

TEST_CASE("fixed-point soundness and depth bound (property)") {
  std::vector<Mobius> gens = {maskit_S(), maskit_T(cplx(0, 3))};
  LimitSetOptions opt;
  opt.max_depth = 12;
  opt.min_cell = 1e-3;
  opt.viewport = Viewport::parse("-3,-1,3,4");
  opt.has_viewport = true;
  PointCloud pc = limit_set(gens, opt);
  REQUIRE(pc.points.size() > 1000);
  CHECK_FALSE(pc.truncated);
  oracle::Rng rng(808);
  for (int k = 0; k < 1000; ++k) {
    const CloudPoint& p = pc.points[rng.integer(0, static_cast<int>(pc.points.size()) - 1)];
    CHECK(static_cast<int>(p.word.size()) == p.depth);
    CHECK(p.depth <= opt.max_depth);
    Point w = evaluate_word(gens, p.word).apply(Point(p.z));
    REQUIRE_FALSE(w.inf);
    CHECK(std::abs(w.z - p.z) <= 10 * opt.min_cell);
  }
  // the limit set of G[3i] avoids the invariant upper half-plane above Im z = 3 + 1 and is
  // symmetric under z -> z + 2
  for (const CloudPoint& p : pc.points) CHECK(p.z.imag() < 4.0);
}

TEST_CASE("pruning: a smaller cell refines the coarse leaves (property)") {
  std::vector<Mobius> gens = {maskit_S(), maskit_T(cplx(0.2, 2.4))};
  LimitSetOptions coarse;
  coarse.max_depth = 10;
  coarse.min_cell = 2e-2;
  coarse.viewport = Viewport::parse("-2,-1,2,3");
  coarse.has_viewport = true;
  LimitSetOptions fine = coarse;
  fine.min_cell = 5e-3;
  PointCloud a = limit_set(gens, coarse), b = limit_set(gens, fine);
  CHECK(b.points.size() >= a.points.size());
  // every coarse point reappears in the fine cloud (possibly under another word after deduplication)
  int missing = 0;
  for (const CloudPoint& p : a.points) {
    double best = HUGE_VAL;
    for (const CloudPoint& w : b.points) best = std::min(best, std::abs(w.z - p.z));
    missing += best > 1e-9 * std::max(1.0, std::abs(p.z));
  }
  CHECK(missing == 0);
}

TEST_CASE("a single parabolic generator gives one point") {
  Mobius k = maskit_group(0.0).K;  // parabolic at 1
  PointCloud pc = limit_set({k}, 10, 1e-3);
  REQUIRE(pc.points.size() == 1);
  CHECK(std::abs(pc.points[0].z - 1.0) < 1e-12);
  CHECK(limit_set({maskit_S()}, 10, 1e-3).points.empty());  // fixed point at infinity
}

TEST_CASE("elliptic runs are cut at half the order") {
  // G_4[2.1 + 0.3i]: A and B have order 4, so no word contains aaa or AAA
  KoebeGroup g = koebe_group(4, cplx(2.1, 0.3));
  LimitSetOptions opt;
  opt.max_depth = 9;
  opt.min_cell = 1e-3;
  opt.viewport = Viewport::parse("-6,-6,6,6");
  opt.has_viewport = true;
  PointCloud pc = limit_set({g.A, g.B, g.C}, opt);
  REQUIRE(pc.points.size() > 100);
  for (const CloudPoint& p : pc.points) {
    CHECK(p.word.find("aaa") == std::string::npos);
    CHECK(p.word.find("AA") == std::string::npos);
    CHECK(p.word.find("bbb") == std::string::npos);
  }
  // structure: the words in A, B alone land on the circle of the Fuchsian subgroup
  Point fa = fixed_points(g.A)[0], fk = fixed_points(g.K)[0];
  GeneralizedDisk circle = disk_through(fk, g.A.apply(fk), g.B.apply(fk), fa);
  int on = 0, f_words = 0;
  for (const CloudPoint& p : pc.points) {
    if (p.word.find_first_of("cC") != std::string::npos) continue;
    ++f_words;
    on += std::abs(circle.signed_distance(p.z)) < 1e-6;
  }
  CHECK(f_words > 0);
  CHECK(on == f_words);
}

TEST_CASE("budget truncation") {
  LimitSetOptions opt;
  opt.max_depth = 30;
  opt.min_cell = 1e-9;
  opt.node_budget = 5000;
  PointCloud pc = limit_set({maskit_S(), maskit_T(cplx(0.3, 1.2))}, opt);
  CHECK(pc.truncated);
  CHECK(pc.nodes <= 5000 + 8);
}

TEST_CASE("raster output") {
  PointCloud empty;
  empty.viewport = Viewport::parse("0,0,1,1");
  std::string p1 = tmp("empty.ppm");
  CHECK(render_raster(empty, 8, 6, p1) == 0);
  std::string data = slurp(p1);
  REQUIRE(data.rfind("P6\n8 6\n255\n", 0) == 0);
  CHECK(data.size() == 11 + 8 * 6 * 3);
  CHECK(data.find('\0') == std::string::npos);

  PointCloud one = empty;
  one.points.push_back({cplx(0.5, 0.5), 0, ""});
  std::string p2 = tmp("one.ppm");
  CHECK(render_raster(one, 9, 9, p2) == 1);
  data = slurp(p2);
  std::size_t px = 11 + (4 * 9 + 4) * 3;
  CHECK(data[px] == 0);
  CHECK(static_cast<unsigned char>(data[px - 3]) == 255);

  std::vector<Mobius> gens = {maskit_S(), maskit_T(cplx(1, 1.55377))};
  PointCloud pc = limit_set(gens, 10, 2e-3);
  std::string a = tmp("a.ppm"), b = tmp("b.ppm");
  render_raster(pc, 200, 150, a);
  render_raster(limit_set(gens, 10, 2e-3), 200, 150, b);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("SVG documents") {
  SvgScene empty;
  std::string doc = svg_document(empty);
  CHECK(doc.find("<svg") != std::string::npos);
  CHECK(doc.find("</svg>") != std::string::npos);
  CHECK(empty.element_count() == 0);

  SvgScene chain;
  Chain c = build_cusp_chain(Fraction(1, 2), 3);
  for (const ChainDisk& d : c.disks) chain.disks.push_back(d.disk);
  CHECK(chain.element_count() == 4);
  doc = svg_document(chain);
  CHECK(count(doc, "<circle") + count(doc, "<path") == 4);
  CHECK(doc == svg_document(chain));

  // Ford polygon of the (4, 4, inf) group at mu_0(4)
  std::vector<Mobius> gens = {maskit_S(), maskit_T(cplx(0, std::sqrt(2.0)))};
  SvgScene ford;
  ford.circles = ford_circles(gens);
  CHECK(ford.circles.size() == 2);
  doc = svg_document(ford);
  CHECK(count(doc, "<circle") == 2);
  std::string path = tmp("ford.svg");
  render_svg(ford, path);
  CHECK(slurp(path) == doc);
}

TEST_CASE("ray CSV") {
  RayTrace empty;
  CHECK(ray_csv(empty) == "t,re,im,flag\n");

  RayOptions opt;
  opt.orders = {3};
  RayTrace r01 = trace_ray(TraceFunction::maskit(Fraction(0, 1)), opt);
  std::istringstream in(ray_csv(r01));
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,re,im,flag");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string t, re;
    std::getline(ls, t, ',');
    std::getline(ls, re, ',');
    CHECK(std::abs(std::stod(re)) < 1e-10);
    ++rows;
  }
  CHECK(rows == static_cast<int>(r01.samples.size() + r01.specials.size()));

  RayTrace r12 = trace_ray(TraceFunction::maskit(Fraction(1, 2)), {});
  std::string csv = ray_csv(r12);
  std::size_t at = csv.find(",cusp");
  REQUIRE(at != std::string::npos);
  std::size_t start = csv.rfind('\n', at) + 1;
  std::stringstream ls(csv.substr(start, at - start));
  std::string t, re, im;
  std::getline(ls, t, ',');
  std::getline(ls, re, ',');
  std::getline(ls, im, ',');
  CHECK(std::abs(std::stod(re) - 1.0) < 1e-8);
  CHECK(std::abs(std::stod(im) - 1.7320508) < 1e-7);
  CHECK(std::abs(std::stod(im) - std::sqrt(3.0)) < 1e-8);

  RayTrace k = koebe_ray(4, Fraction(0, 1));
  std::string kcsv = ray_csv(k);
  CHECK(kcsv.rfind("t,re,im,flag,tau2_re,tau2_im,itrc_re,itrc_im\n", 0) == 0);
  std::string path = tmp("ray.csv");
  export_ray_csv(k, path);
  CHECK(slurp(path) == kcsv);
}
