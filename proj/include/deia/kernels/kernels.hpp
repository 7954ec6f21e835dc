#pragma once

#include <cstdint>
#include <span>
#include <string_view>

// Numeric inner-loop kernels with a scalar reference implementation and a
// runtime-selected AVX2 variant. Both paths use only per-lane IEEE add/sub/
// mul/div/compare (no FMA), so every backend produces bit-identical output;
// the test suite asserts that equivalence.

namespace deia::kernels {

enum class Backend { Auto, Scalar, Avx2 };

// Resolved backend currently in use (never Auto).
Backend active_backend();

// Force a backend. Throws std::runtime_error if it is unavailable on this
// machine. Backend::Auto re-enables detection (AVX2 when the CPU has it).
void set_backend(Backend b);

bool backend_available(Backend b);
std::string_view backend_name(Backend b);

// Reads DEIA_KERNELS=scalar|avx2|auto once at startup; called lazily by the
// dispatcher, exposed for tests.
void init_from_env();

// Collapsed-Gibbs topic weights for one token:
//   weights[k] = (n_dk[k] + alpha) * (n_kw[k] + beta) / (n_k[k] + v_beta)
// All spans must have equal length.
void topic_weights(std::span<const std::int32_t> n_dk,
                   std::span<const std::int32_t> n_kw,
                   std::span<const std::int32_t> n_k,
                   double alpha, double beta, double v_beta,
                   std::span<double> weights);

struct RingHit {
  bool crossings_odd = false;  // even-odd ray-cast parity
  bool on_edge = false;        // point lies exactly on a ring segment
};

// Tests (px,py) against one closed ring given as parallel coordinate arrays;
// xs.back()==xs.front() and ys.back()==ys.front(). Edges i run from point i
// to point i+1.
RingHit point_in_ring(double px, double py,
                      std::span<const double> xs,
                      std::span<const double> ys);

}  // namespace deia::kernels
