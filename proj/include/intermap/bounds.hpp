#ifndef INTERMAP_BOUNDS_HPP
#define INTERMAP_BOUNDS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "intermap/abel.hpp"
#include "intermap/induced.hpp"
#include "intermap/map_model.hpp"

namespace intermap {

/// Explicit constants for diagnostic error estimates. All quantities live in
/// z = x^alpha coordinates. Not certified: suprema are sampled.
struct BoundConstants {
  double hhat1 = 0.0;
  double R = 0.0;
  double G = 0.0;
  double Gprime = 0.0;
  double aleph = 0.5;
  double R1 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double Z = 0.0;

  double r_n(std::size_t n) const;
  /// Orbit-sum constant: sum_k |T^k z|^bbar k^delta <= gimel |z|^{bbar-delta-1}.
  double gimel(double beta_bar, double delta) const;
  double d3(std::size_t n) const { return gimel(static_cast<double>(n) + 2.0, 0.0) * d2; }
};

struct Suprema {
  double G;
  double Gprime;
};

/// Sampled sup |g| on |z| = R and sup |d(z g)/dz| on the boundary of
/// {Re 1/z >= 1/R1}, each times a 1.25 safety factor. g is defined by
/// 1/T(z) = 1/z + hhat1 + g(z) z.
Suprema estimate_suprema(const PMMap& map, double R, double R1, std::size_t samples = 720);
double estimate_G(const PMMap& map, double R, std::size_t samples = 720);

/// Default radius: half the root-test radius of the T series.
double default_series_radius(const PMMap& map);

BoundConstants lemma_constants(const PMMap& map, double R = 0.0, std::size_t samples = 720,
                               double aleph = 0.5);

/// d3 d2^{n+2} r_n^{-(n+2)} |z|^{n+1}; requires |z| <= min(R1, r_n).
double abel_series_error(const BoundConstants& bc, std::size_t n, cplx z);

/// Remainder bound for the Euler-Maclaurin formula. `abs_dA_z` is |A'(z)|,
/// `abs_z_nstar` is |x_{n*}|^alpha.
double em_error(const BoundConstants& bc, const Decay& decay, double alpha, double abs_dA_z,
                double n_star, double abs_z_nstar, double rho, int K);

/// n points of the region Re(1/z) >= 1/s (z = x^alpha coordinates), drawn
/// with mt19937_64 from `seed`: 1/z = 1/s + u + iv, u in [0, 4/s], |v| <= 2/s.
std::vector<cplx> sample_region(double s, std::size_t n, std::uint64_t seed);

/// |z^2 dA/dz| in z = x^alpha coordinates; lies in [1/(2 hhat1), 2/hhat1]
/// on Re(1/z) >= 1/Z.
double abel_derivative_scaled(const AbelFunction& af, cplx z);
/// |A^{-1}(A(z0)+m)^{-1} - 1/z0| in z coordinates; at most 2 hhat1 |m| when
/// Re(1/z0) >= 1/Z + 2 hhat1 |m|.
double abel_shift_defect(const AbelFunction& af, cplx z0, cplx m);

} // namespace intermap

#endif
