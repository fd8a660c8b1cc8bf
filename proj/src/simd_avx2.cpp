// Compiled with -mavx2 only; dispatch in simd.cpp checks the CPU first.
#include <immintrin.h>

#include <cmath>

#include "maskit/simd.hpp"

namespace maskit::simd::detail {

namespace {

struct V {
  __m256d r, i;
};

inline V cmul(V a, V b) {
  return {_mm256_sub_pd(_mm256_mul_pd(a.r, b.r), _mm256_mul_pd(a.i, b.i)),
          _mm256_add_pd(_mm256_mul_pd(a.r, b.i), _mm256_mul_pd(a.i, b.r))};
}

inline V cadd(V a, V b) { return {_mm256_add_pd(a.r, b.r), _mm256_add_pd(a.i, b.i)}; }

inline V bcast(double r, double i) { return {_mm256_set1_pd(r), _mm256_set1_pd(i)}; }

struct M4 {
  V a, b, c, d;
};

// M <- M * L, same grouping as the scalar lane product.
inline void mul(M4& M, const M4& L) {
  M4 o;
  o.a = cadd(cmul(M.a, L.a), cmul(M.b, L.c));
  o.b = cadd(cmul(M.a, L.b), cmul(M.b, L.d));
  o.c = cadd(cmul(M.c, L.a), cmul(M.d, L.c));
  o.d = cadd(cmul(M.c, L.b), cmul(M.d, L.d));
  M = o;
}

}  // namespace

void mobius_apply_avx2(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                       std::size_t n) {
  const V a = bcast(m.a.real(), m.a.imag()), b = bcast(m.b.real(), m.b.imag());
  const V c = bcast(m.c.real(), m.c.imag()), d = bcast(m.d.real(), m.d.imag());
  const __m256d pole = _mm256_set1_pd(1e-28), inf = _mm256_set1_pd(HUGE_VAL);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    V z{_mm256_loadu_pd(re + k), _mm256_loadu_pd(im + k)};
    V num = cadd(cmul(a, z), b);
    V den = cadd(cmul(c, z), d);
    __m256d q = _mm256_add_pd(_mm256_mul_pd(den.r, den.r), _mm256_mul_pd(den.i, den.i));
    __m256d xr = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(num.r, den.r), _mm256_mul_pd(num.i, den.i)), q);
    __m256d xi = _mm256_div_pd(_mm256_sub_pd(_mm256_mul_pd(num.i, den.r), _mm256_mul_pd(num.r, den.i)), q);
    __m256d small = _mm256_cmp_pd(q, pole, _CMP_LT_OQ);
    _mm256_storeu_pd(out_re + k, _mm256_blendv_pd(xr, inf, small));
    _mm256_storeu_pd(out_im + k, _mm256_blendv_pd(xi, inf, small));
  }
  if (k < n) mobius_apply_scalar(m, re + k, im + k, out_re + k, out_im + k, n - k);
}

void maskit_word_grid_avx2(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                           std::size_t n, MatrixBatch& out) {
  out.resize(n);
  const M4 S{bcast(1, 0), bcast(2, 0), bcast(0, 0), bcast(1, 0)};
  const M4 Si{bcast(1, 0), bcast(-2, 0), bcast(0, 0), bcast(1, 0)};
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d mr = _mm256_loadu_pd(mu_re + k), mi = _mm256_loadu_pd(mu_im + k);
    __m256d neg_mr = _mm256_sub_pd(zero, mr);
    const M4 T{{mi, neg_mr}, bcast(0, -1), bcast(0, -1), bcast(0, 0)};
    const M4 Ti{bcast(0, 0), bcast(0, 1), bcast(0, 1), {mi, neg_mr}};
    M4 M{bcast(1, 0), bcast(0, 0), bcast(0, 0), bcast(1, 0)};
    for (int r = 0; r < repeat; ++r) {
      for (char ch : letters) {
        switch (ch) {
          case 'X': mul(M, S); break;
          case 'x': mul(M, Si); break;
          case 'Y': mul(M, T); break;
          default: mul(M, Ti); break;
        }
      }
    }
    _mm256_storeu_pd(out.a_re.data() + k, M.a.r);
    _mm256_storeu_pd(out.a_im.data() + k, M.a.i);
    _mm256_storeu_pd(out.b_re.data() + k, M.b.r);
    _mm256_storeu_pd(out.b_im.data() + k, M.b.i);
    _mm256_storeu_pd(out.c_re.data() + k, M.c.r);
    _mm256_storeu_pd(out.c_im.data() + k, M.c.i);
    _mm256_storeu_pd(out.d_re.data() + k, M.d.r);
    _mm256_storeu_pd(out.d_im.data() + k, M.d.i);
  }
  if (k < n) {
    MatrixBatch tail;
    maskit_word_grid_scalar(letters, repeat, mu_re + k, mu_im + k, n - k, tail);
    for (std::size_t j = 0; j < tail.size(); ++j) {
      out.a_re[k + j] = tail.a_re[j]; out.a_im[k + j] = tail.a_im[j];
      out.b_re[k + j] = tail.b_re[j]; out.b_im[k + j] = tail.b_im[j];
      out.c_re[k + j] = tail.c_re[j]; out.c_im[k + j] = tail.c_im[j];
      out.d_re[k + j] = tail.d_re[j]; out.d_im[k + j] = tail.d_im[j];
    }
  }
}

}  // namespace maskit::simd::detail
