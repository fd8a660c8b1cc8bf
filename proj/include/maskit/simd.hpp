#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "maskit/moebius.hpp"

namespace maskit::simd {

enum class Backend { Scalar, Avx2 };

bool avx2_supported();
// Avx2 when the CPU supports it and the kernels were compiled in.
Backend best_backend();
std::string to_string(Backend b);

// out = m(z) for finite z given as separate real/imaginary arrays. A pole
// (|cz + d| < 1e-14) yields +inf in both outputs.
void mobius_apply(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                  std::size_t n, Backend b);
inline void mobius_apply(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                         std::size_t n) {
  mobius_apply(m, re, im, out_re, out_im, n, best_backend());
}

// One 2x2 complex matrix per lane, structure of arrays.
struct MatrixBatch {
  std::vector<double> a_re, a_im, b_re, b_im, c_re, c_im, d_re, d_im;
  void resize(std::size_t n);
  std::size_t size() const { return a_re.size(); }
  Mobius at(std::size_t i) const;
};

// W[S, T[mu_k]]^repeat for every mu_k, letters over {x, X, Y, y}.
void maskit_word_grid(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                      std::size_t n, MatrixBatch& out, Backend b);
inline void maskit_word_grid(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                             std::size_t n, MatrixBatch& out) {
  maskit_word_grid(letters, repeat, mu_re, mu_im, n, out, best_backend());
}

namespace detail {
void mobius_apply_scalar(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                         std::size_t n);
void maskit_word_grid_scalar(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                             std::size_t n, MatrixBatch& out);
#if defined(MASKIT_HAVE_AVX2)
void mobius_apply_avx2(const Mobius& m, const double* re, const double* im, double* out_re, double* out_im,
                       std::size_t n);
void maskit_word_grid_avx2(const std::string& letters, int repeat, const double* mu_re, const double* mu_im,
                           std::size_t n, MatrixBatch& out);
#endif
}  // namespace detail

}  // namespace maskit::simd
