#include "kernels_detail.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace deia::kernels {

namespace detail {

void topic_weights_scalar(std::span<const std::int32_t> n_dk,
                          std::span<const std::int32_t> n_kw,
                          std::span<const std::int32_t> n_k,
                          double alpha, double beta, double v_beta,
                          std::span<double> weights) {
  const std::size_t k_count = weights.size();
  for (std::size_t k = 0; k < k_count; ++k) {
    weights[k] = (static_cast<double>(n_dk[k]) + alpha) *
                 (static_cast<double>(n_kw[k]) + beta) /
                 (static_cast<double>(n_k[k]) + v_beta);
  }
}

bool edge_crosses(double px, double py, double x1, double y1, double x2,
                  double y2) {
  if ((y1 > py) == (y2 > py)) return false;
  return px < (x2 - x1) * (py - y1) / (y2 - y1) + x1;
}

bool edge_contains(double px, double py, double x1, double y1, double x2,
                   double y2) {
  const double cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1);
  if (cross != 0.0) return false;
  const double xlo = x1 < x2 ? x1 : x2;
  const double xhi = x1 < x2 ? x2 : x1;
  const double ylo = y1 < y2 ? y1 : y2;
  const double yhi = y1 < y2 ? y2 : y1;
  return xlo <= px && px <= xhi && ylo <= py && py <= yhi;
}

RingHit point_in_ring_scalar(double px, double py,
                             std::span<const double> xs,
                             std::span<const double> ys) {
  RingHit hit;
  if (xs.size() < 2) return hit;
  const std::size_t edges = xs.size() - 1;
  bool odd = false;
  for (std::size_t i = 0; i < edges; ++i) {
    const double x1 = xs[i], y1 = ys[i], x2 = xs[i + 1], y2 = ys[i + 1];
    if (edge_contains(px, py, x1, y1, x2, y2)) {
      hit.on_edge = true;
    }
    if (edge_crosses(px, py, x1, y1, x2, y2)) odd = !odd;
  }
  hit.crossings_odd = odd;
  return hit;
}

}  // namespace detail

namespace {

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Backend> g_backend{Backend::Auto};
std::atomic<bool> g_env_read{false};

Backend resolve(Backend b) {
  if (b != Backend::Auto) return b;
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

Backend current() {
  if (!g_env_read.load(std::memory_order_acquire)) init_from_env();
  return resolve(g_backend.load(std::memory_order_relaxed));
}

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::Auto:
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return avx2_supported();
  }
  return false;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Auto:
      return "auto";
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "?";
}

void set_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::runtime_error("kernel backend unavailable: " +
                             std::string(backend_name(b)));
  }
  g_env_read.store(true, std::memory_order_release);
  g_backend.store(b, std::memory_order_relaxed);
}

Backend active_backend() { return current(); }

void init_from_env() {
  Backend b = Backend::Auto;
  if (const char* env = std::getenv("DEIA_KERNELS")) {
    const std::string_view v(env);
    if (v == "scalar") {
      b = Backend::Scalar;
    } else if (v == "avx2" && avx2_supported()) {
      b = Backend::Avx2;
    }
  }
  g_backend.store(b, std::memory_order_relaxed);
  g_env_read.store(true, std::memory_order_release);
}

void topic_weights(std::span<const std::int32_t> n_dk,
                   std::span<const std::int32_t> n_kw,
                   std::span<const std::int32_t> n_k,
                   double alpha, double beta, double v_beta,
                   std::span<double> weights) {
#if defined(__x86_64__) || defined(_M_X64)
  if (current() == Backend::Avx2) {
    detail::topic_weights_avx2(n_dk, n_kw, n_k, alpha, beta, v_beta, weights);
    return;
  }
#endif
  detail::topic_weights_scalar(n_dk, n_kw, n_k, alpha, beta, v_beta, weights);
}

RingHit point_in_ring(double px, double py, std::span<const double> xs,
                      std::span<const double> ys) {
#if defined(__x86_64__) || defined(_M_X64)
  if (current() == Backend::Avx2) {
    return detail::point_in_ring_avx2(px, py, xs, ys);
  }
#endif
  return detail::point_in_ring_scalar(px, py, xs, ys);
}

}  // namespace deia::kernels
