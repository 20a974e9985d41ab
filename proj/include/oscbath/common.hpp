#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// LAPACKE transitively includes C99 <complex.h>, whose `I` macro would
// otherwise swallow the identifier below.
#ifdef I
#undef I
#endif

namespace oscbath {

using Complex = std::complex<double>;
inline constexpr double PI = 3.14159265358979323846;
inline constexpr Complex I{0.0, 1.0};

// ── Error taxonomy ────────────────────────────────────────────────────────────
struct StripViolation : std::runtime_error { using std::runtime_error::runtime_error; };
struct QuadratureDivergence : std::runtime_error { using std::runtime_error::runtime_error; };
struct GridMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct PoleOutOfRange : std::runtime_error { using std::runtime_error::runtime_error; };
struct ContourPole : std::runtime_error { using std::runtime_error::runtime_error; };
struct ContourViolation : std::runtime_error { using std::runtime_error::runtime_error; };
struct CutViolation : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoConvergence : std::runtime_error { using std::runtime_error::runtime_error; };
struct ResonanceOnContour : std::runtime_error { using std::runtime_error::runtime_error; };
struct DivergentThermalNorm : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoiseFloor : std::runtime_error { using std::runtime_error::runtime_error; };
struct ReflectionViolation : std::runtime_error { using std::runtime_error::runtime_error; };
struct PlateauNotReached : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError : std::runtime_error { using std::runtime_error::runtime_error; };

// ── Parallel kernels ──────────────────────────────────────────────────────────
// Every O(N²) kernel in the library routes its outer loop through parallel_for.
// run_serial() forces the reference serial path (used by tests and the
// benchmark); otherwise OpenMP splits the range.
inline bool& serial_mode() {
    static bool flag = false;
    return flag;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    if (serial_mode()) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        fn(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) fn(i);
#endif
}

// Deterministic pairwise-tree sum: bit-stable regardless of thread count,
// because terms are materialized first and reduced in a fixed order.
template <typename T>
T pairwise_sum(std::vector<T> terms) {
    if (terms.empty()) return T{};
    std::size_t n = terms.size();
    while (n > 1) {
        std::size_t m = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) terms[m++] = terms[i] + terms[i + 1];
        if (n % 2 == 1) terms[m++] = terms[n - 1];
        n = m;
    }
    return terms[0];
}

} // namespace oscbath
