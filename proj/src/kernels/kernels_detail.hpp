#pragma once

#include "deia/kernels/kernels.hpp"

// Internal: per-backend entry points shared between translation units.

namespace deia::kernels::detail {

void topic_weights_scalar(std::span<const std::int32_t> n_dk,
                          std::span<const std::int32_t> n_kw,
                          std::span<const std::int32_t> n_k,
                          double alpha, double beta, double v_beta,
                          std::span<double> weights);

RingHit point_in_ring_scalar(double px, double py,
                             std::span<const double> xs,
                             std::span<const double> ys);

// Scalar single-edge predicates, also used for SIMD tail edges.
bool edge_crosses(double px, double py, double x1, double y1, double x2,
                  double y2);
bool edge_contains(double px, double py, double x1, double y1, double x2,
                   double y2);

#if defined(__x86_64__) || defined(_M_X64)
void topic_weights_avx2(std::span<const std::int32_t> n_dk,
                        std::span<const std::int32_t> n_kw,
                        std::span<const std::int32_t> n_k,
                        double alpha, double beta, double v_beta,
                        std::span<double> weights);

RingHit point_in_ring_avx2(double px, double py,
                           std::span<const double> xs,
                           std::span<const double> ys);
#endif

}  // namespace deia::kernels::detail
