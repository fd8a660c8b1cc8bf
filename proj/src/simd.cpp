#include <cmath>
#include <stdexcept>

#include "maskit/simd.hpp"

namespace maskit::simd {

bool avx2_supported() {
#if defined(MASKIT_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend best_backend() {
  static const Backend b = avx2_supported() ? Backend::Avx2 : Backend::Scalar;
  return b;
}

std::string to_string(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

void MatrixBatch::resize(std::size_t n) {
  for (auto* v : {&a_re, &a_im, &b_re, &b_im, &c_re, &c_im, &d_re, &d_im}) v->assign(n, 0.0);
}

Mobius MatrixBatch::at(std::size_t i) const {
  return Mobius::raw(cplx(a_re[i], a_im[i]), cplx(b_re[i], b_im[i]), cplx(c_re[i], c_im[i]), cplx(d_re[i], d_im[i]));
}

void mobius_apply(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                  std::size_t n, Backend b) {
#if defined(MASKIT_HAVE_AVX2)
  if (b == Backend::Avx2 && avx2_supported()) return detail::mobius_apply_avx2(m, re, im, out_re, out_im, n);
#endif
  (void)b;
  detail::mobius_apply_scalar(m, re, im, out_re, out_im, n);
}

void maskit_word_grid(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                      std::size_t n, MatrixBatch& out, Backend b) {
  if (repeat < 0) throw std::invalid_argument("maskit_word_grid: negative repeat");
  for (char ch : letters)
    if (ch != 'x' && ch != 'X' && ch != 'Y' && ch != 'y') throw std::invalid_argument("maskit_word_grid: bad letter");
#if defined(MASKIT_HAVE_AVX2)
  if (b == Backend::Avx2 && avx2_supported()) return detail::maskit_word_grid_avx2(letters, repeat, mu_re, mu_im, n, out);
#endif
  (void)b;
  detail::maskit_word_grid_scalar(letters, repeat, mu_re, mu_im, n, out);
}

namespace detail {

// The arithmetic below is spelled out (no std::complex division) so that the
// vector kernel can follow the same operation order.
void mobius_apply_scalar(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                         std::size_t n) {
  const double ar = m.a.real(), ai = m.a.imag(), br = m.b.real(), bi = m.b.imag();
  const double cr = m.c.real(), ci = m.c.imag(), dr = m.d.real(), di = m.d.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double x = re[k], y = im[k];
    const double nr = (ar * x - ai * y) + br, ni = (ar * y + ai * x) + bi;
    const double er = (cr * x - ci * y) + dr, ei = (cr * y + ci * x) + di;
    const double den = er * er + ei * ei;
    if (den < 1e-28) {
      out_re[k] = out_im[k] = HUGE_VAL;
      continue;
    }
    out_re[k] = (nr * er + ni * ei) / den;
    out_im[k] = (ni * er - nr * ei) / den;
  }
}

namespace {

struct Lane {
  double ar, ai, br, bi, cr, ci, dr, di;
};

// M <- M * L
inline void mul(Lane& M, const Lane& L) {
  Lane o;
  o.ar = (M.ar * L.ar - M.ai * L.ai) + (M.br * L.cr - M.bi * L.ci);
  o.ai = (M.ar * L.ai + M.ai * L.ar) + (M.br * L.ci + M.bi * L.cr);
  o.br = (M.ar * L.br - M.ai * L.bi) + (M.br * L.dr - M.bi * L.di);
  o.bi = (M.ar * L.bi + M.ai * L.br) + (M.br * L.di + M.bi * L.dr);
  o.cr = (M.cr * L.ar - M.ci * L.ai) + (M.dr * L.cr - M.di * L.ci);
  o.ci = (M.cr * L.ai + M.ci * L.ar) + (M.dr * L.ci + M.di * L.cr);
  o.dr = (M.cr * L.br - M.ci * L.bi) + (M.dr * L.dr - M.di * L.di);
  o.di = (M.cr * L.bi + M.ci * L.br) + (M.dr * L.di + M.di * L.dr);
  M = o;
}

}  // namespace

void maskit_word_grid_scalar(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                             std::size_t n, MatrixBatch& out) {
  out.resize(n);
  const Lane S{1, 0, 2, 0, 0, 0, 1, 0}, Si{1, 0, -2, 0, 0, 0, 1, 0};
  for (std::size_t k = 0; k < n; ++k) {
    // T = [[-i mu, -i], [-i, 0]], T^-1 = [[0, i], [i, -i mu]]
    const double mr = mu_re[k], mi = mu_im[k];
    const Lane T{mi, -mr, 0, -1, 0, -1, 0, 0}, Ti{0, 0, 0, 1, 0, 1, mi, -mr};
    Lane M{1, 0, 0, 0, 0, 0, 1, 0};
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
    out.a_re[k] = M.ar; out.a_im[k] = M.ai; out.b_re[k] = M.br; out.b_im[k] = M.bi;
    out.c_re[k] = M.cr; out.c_im[k] = M.ci; out.d_re[k] = M.dr; out.d_im[k] = M.di;
  }
}

}  // namespace detail

}  // namespace maskit::simd
