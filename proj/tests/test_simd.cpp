#include <doctest.h>

#include "maskit/families.hpp"
#include "maskit/farey.hpp"
#include "maskit/simd.hpp"
#include "oracle.hpp"

using namespace maskit;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace

TEST_CASE("backend selection") {
  MESSAGE("backend: " << simd::to_string(simd::best_backend()));
  if (!simd::avx2_supported()) CHECK(simd::best_backend() == simd::Backend::Scalar);
}

TEST_CASE("batched Mobius apply: scalar vs avx2 vs Mobius::apply (property)") {
  oracle::Rng rng(2024);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    Mobius m(rng.box(-2, 2, -2, 2), rng.box(-2, 2, -2, 2), rng.box(-2, 2, -2, 2), rng.box(-2, 2, -2, 2));
    std::vector<double> re(n), im(n), sr(n), si(n), vr(n), vi(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx z = rng.box(-3, 3, -3, 3);
      re[i] = z.real();
      im[i] = z.imag();
    }
    if (n > 2) {  // a pole
      cplx pole = -m.d / m.c;
      re[1] = pole.real();
      im[1] = pole.imag();
    }
    simd::mobius_apply(m, re.data(), im.data(), sr.data(), si.data(), n, simd::Backend::Scalar);
    simd::mobius_apply(m, re.data(), im.data(), vr.data(), vi.data(), n, simd::Backend::Avx2);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::isinf(sr[i])) {
        CHECK(std::isinf(vr[i]));
        continue;
      }
      CHECK(rel(sr[i], vr[i]) < 1e-13);
      CHECK(rel(si[i], vi[i]) < 1e-13);
      Point w = m.apply(Point(cplx(re[i], im[i])));
      CHECK(rel(w.z.real(), sr[i]) < 1e-12);
      CHECK(rel(w.z.imag(), si[i]) < 1e-12);
    }
  }
}

TEST_CASE("Maskit word grid: scalar vs avx2 vs evaluate (property)") {
  oracle::Rng rng(7);
  for (const Fraction& f : {Fraction(1, 2), Fraction(2, 5), Fraction(3, 7), Fraction(0, 1)})
    for (int repeat : {1, 4}) {
      const std::size_t n = 37;
      std::vector<double> mr(n), mi(n);
      for (std::size_t i = 0; i < n; ++i) {
        cplx mu = rng.box(-1, 3, 0.2, 2.5);
        mr[i] = mu.real();
        mi[i] = mu.imag();
      }
      simd::MatrixBatch s, v;
      simd::maskit_word_grid(word(f).letters, repeat, mr.data(), mi.data(), n, s, simd::Backend::Scalar);
      simd::maskit_word_grid(word(f).letters, repeat, mr.data(), mi.data(), n, v, simd::Backend::Avx2);
      REQUIRE(s.size() == n);
      REQUIRE(v.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        Mobius ref = power(evaluate(word(f), maskit_S(), maskit_T(cplx(mr[i], mi[i]))), repeat);
        Mobius a = s.at(i), b = v.at(i);
        double scale = std::max({1.0, std::abs(ref.a), std::abs(ref.b), std::abs(ref.c), std::abs(ref.d)});
        CHECK(a.max_abs_diff(b) <= 1e-13 * scale);
        CHECK(psl_distance(a, ref) <= 1e-11 * scale);
      }
    }
}
