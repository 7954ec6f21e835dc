// AVX2 kernel variants. Compiled with -mavx2 in its own TU; only reached
// after a runtime cpu check. Every lane performs the same IEEE operations as
// the scalar reference, so results are bit-identical (masked-out lanes may
// divide by zero, which is well-defined and discarded).

#if defined(__x86_64__) || defined(_M_X64)

#include "kernels_detail.hpp"

#include <immintrin.h>

namespace deia::kernels::detail {

void topic_weights_avx2(std::span<const std::int32_t> n_dk,
                        std::span<const std::int32_t> n_kw,
                        std::span<const std::int32_t> n_k,
                        double alpha, double beta, double v_beta,
                        std::span<double> weights) {
  const std::size_t k_count = weights.size();
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  const __m256d vvb = _mm256_set1_pd(v_beta);
  std::size_t k = 0;
  for (; k + 4 <= k_count; k += 4) {
    const __m256d dk = _mm256_cvtepi32_pd(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(&n_dk[k])));
    const __m256d kw = _mm256_cvtepi32_pd(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(&n_kw[k])));
    const __m256d nk = _mm256_cvtepi32_pd(
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(&n_k[k])));
    const __m256d num =
        _mm256_mul_pd(_mm256_add_pd(dk, va), _mm256_add_pd(kw, vb));
    _mm256_storeu_pd(&weights[k], _mm256_div_pd(num, _mm256_add_pd(nk, vvb)));
  }
  for (; k < k_count; ++k) {
    weights[k] = (static_cast<double>(n_dk[k]) + alpha) *
                 (static_cast<double>(n_kw[k]) + beta) /
                 (static_cast<double>(n_k[k]) + v_beta);
  }
}

RingHit point_in_ring_avx2(double px, double py, std::span<const double> xs,
                           std::span<const double> ys) {
  RingHit hit;
  if (xs.size() < 2) return hit;
  const std::size_t edges = xs.size() - 1;

  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  unsigned crossings = 0;
  int on_mask = 0;

  std::size_t i = 0;
  for (; i + 4 <= edges; i += 4) {
    const __m256d x1 = _mm256_loadu_pd(&xs[i]);
    const __m256d y1 = _mm256_loadu_pd(&ys[i]);
    const __m256d x2 = _mm256_loadu_pd(&xs[i + 1]);
    const __m256d y2 = _mm256_loadu_pd(&ys[i + 1]);

    const __m256d dx = _mm256_sub_pd(x2, x1);
    const __m256d dy = _mm256_sub_pd(y2, y1);
    const __m256d ry = _mm256_sub_pd(vpy, y1);

    // straddle := (y1 > py) != (y2 > py)
    const __m256d gt1 = _mm256_cmp_pd(y1, vpy, _CMP_GT_OQ);
    const __m256d gt2 = _mm256_cmp_pd(y2, vpy, _CMP_GT_OQ);
    const __m256d straddle = _mm256_xor_pd(gt1, gt2);

    // px < dx * ry / dy + x1   (dy==0 lanes are masked off by straddle)
    const __m256d xcross =
        _mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(dx, ry), dy), x1);
    const __m256d left = _mm256_cmp_pd(vpx, xcross, _CMP_LT_OQ);
    const int cross_mask =
        _mm256_movemask_pd(_mm256_and_pd(straddle, left));
    crossings += static_cast<unsigned>(__builtin_popcount(cross_mask));

    // on-edge: cross product exactly zero and point within the edge box
    const __m256d rx = _mm256_sub_pd(vpx, x1);
    const __m256d cp =
        _mm256_sub_pd(_mm256_mul_pd(dx, ry), _mm256_mul_pd(rx, dy));
    const __m256d zero = _mm256_setzero_pd();
    __m256d on = _mm256_cmp_pd(cp, zero, _CMP_EQ_OQ);
    const __m256d xlo = _mm256_min_pd(x1, x2);
    const __m256d xhi = _mm256_max_pd(x1, x2);
    const __m256d ylo = _mm256_min_pd(y1, y2);
    const __m256d yhi = _mm256_max_pd(y1, y2);
    on = _mm256_and_pd(on, _mm256_cmp_pd(xlo, vpx, _CMP_LE_OQ));
    on = _mm256_and_pd(on, _mm256_cmp_pd(vpx, xhi, _CMP_LE_OQ));
    on = _mm256_and_pd(on, _mm256_cmp_pd(ylo, vpy, _CMP_LE_OQ));
    on = _mm256_and_pd(on, _mm256_cmp_pd(vpy, yhi, _CMP_LE_OQ));
    on_mask |= _mm256_movemask_pd(on);
  }

  for (; i < edges; ++i) {
    if (edge_contains(px, py, xs[i], ys[i], xs[i + 1], ys[i + 1])) on_mask = 1;
    if (edge_crosses(px, py, xs[i], ys[i], xs[i + 1], ys[i + 1])) ++crossings;
  }

  hit.crossings_odd = (crossings & 1u) != 0;
  hit.on_edge = on_mask != 0;
  return hit;
}

}  // namespace deia::kernels::detail

#endif
