// Brute-force reference computations that share no code with the library:
// long double arithmetic, the textbook (unstabilised) mode formula, and
// low-order rules at very high resolution.
#ifndef INEXT_TESTS_ORACLES_HPP
#define INEXT_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using real = long double;

inline real characteristic(real z) { return std::cos(z) + 1.0L / std::cosh(z); }

/// n-th root (1-based) of cos z cosh z + 1 by plain bisection.
inline real mode_number(int n) {
  const real pi = 3.14159265358979323846264338327950288L;
  real lo = (n - 0.5L) * pi - 0.5L, hi = (n - 0.5L) * pi + 0.5L;
  real flo = characteristic(lo);
  for (int it = 0; it < 200; ++it) {
    const real mid = 0.5L * (lo + hi);
    const real fm = characteristic(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

inline real shape_coefficient(real z) { return (std::cos(z) + std::cosh(z)) / (std::sin(z) + std::sinh(z)); }

/// d-th derivative of (cos - cosh)(kx) - C (sin - sinh)(kx), k = z / L.
inline real raw_mode(real z, real L, real x, int d) {
  const real k = z / L, y = k * x, C = shape_coefficient(z);
  const real c = std::cos(y), s = std::sin(y), ch = std::cosh(y), sh = std::sinh(y);
  const real trig_c[4] = {c, -s, -c, s};
  const real trig_s[4] = {s, c, -s, -c};
  const real hyp_c = (d % 2 == 0) ? ch : sh;
  const real hyp_s = (d % 2 == 0) ? sh : ch;
  return std::pow(k, d) * ((trig_c[d % 4] - hyp_c) - C * (trig_s[d % 4] - hyp_s));
}

inline real trapezoid(const std::function<real(real)>& f, real a, real b, long n) {
  const real h = (b - a) / n;
  real acc = 0.5L * (f(a) + f(b));
  for (long i = 1; i < n; ++i) acc += f(a + i * h);
  return acc * h;
}

inline real simpson(const std::function<real(real)>& f, real a, real b, long n) {
  if (n % 2) ++n;
  const real h = (b - a) / n;
  real acc = f(a) + f(b);
  for (long i = 1; i < n; ++i) acc += (i % 2 ? 4.0L : 2.0L) * f(a + i * h);
  return acc * h / 3.0L;
}

/// Normalised mode n (1-based) on [0, L]: value and derivatives.
struct Mode {
  real z, L, c;
  Mode(int n, real length) : z(mode_number(n)), L(length) {
    const real norm2 = simpson([&](real x) { return std::pow(raw_mode(z, L, x, 0), 2); }, 0, L, 100000);
    c = 1.0L / std::sqrt(norm2);
  }
  real operator()(real x, int d = 0) const { return c * raw_mode(z, L, x, d); }
};

/// int s_i'' s_j'' s_k' s_l' dx, 1e6-interval trapezoid.
inline real stiffness_entry(const std::vector<Mode>& m, int i, int j, int k, int l) {
  return trapezoid([&](real x) { return m[i](x, 2) * m[j](x, 2) * m[k](x, 1) * m[l](x, 1); }, 0, m[0].L,
                   1000000);
}

/// int g_ij g_kl dx with g_ij(x) = int_0^x s_i' s_j', nested trapezoid:
/// the inner integral is accumulated on the same outer grid.
inline real inertia_entry(const std::vector<Mode>& m, int i, int j, int k, int l, long n = 100000) {
  const real L = m[0].L, h = L / n;
  real gij = 0, gkl = 0, acc = 0;
  real pij = m[i](0, 1) * m[j](0, 1), pkl = m[k](0, 1) * m[l](0, 1);
  for (long s = 1; s <= n; ++s) {
    const real x = s * h;
    const real qij = m[i](x, 1) * m[j](x, 1), qkl = m[k](x, 1) * m[l](x, 1);
    const real nij = gij + 0.5L * h * (pij + qij), nkl = gkl + 0.5L * h * (pkl + qkl);
    acc += 0.5L * h * (gij * gkl + nij * nkl);
    gij = nij;
    gkl = nkl;
    pij = qij;
    pkl = qkl;
  }
  return acc;
}

}  // namespace oracle

#endif  // INEXT_TESTS_ORACLES_HPP
