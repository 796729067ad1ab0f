#pragma once

/// @file analytics.hpp
/// Exact distribution of the received SNR gamma = sum_n gamma_0 S_n |h_n|^2
/// under independent Rayleigh fading. The MGF prod_n (1 - gamma_0 S_n s)^-1 is
/// expanded in partial fractions over grouped (possibly repeated) poles, and
/// the PDF/CDF follow term by term as mixtures of Erlang densities.

#include <cstddef>
#include <span>
#include <vector>

#include "crancache/model.hpp"

namespace crancache {

/// Distances closer than this fraction of R are treated as equal.
inline constexpr double kDefaultGroupingTolerance = 1e-9;

struct PoleGroup {
  double rate;              ///< lambda_i = 1 / (gamma_0 K d_i^-alpha)
  std::size_t multiplicity; ///< J_i
};

/// Extended precision for the expansion. Residues of nearby poles are large
/// and alternate in sign, so sums over them cancel heavily.
using Real = long double;

/// Grouped poles with their partial-fraction residues. residues[i][j-1] is
/// A_ij, the coefficient of (1 - s/lambda_i)^-j.
struct PoleSpectrum {
  std::vector<PoleGroup> groups;
  std::vector<std::vector<Real>> residues;

  std::size_t total_order() const noexcept;
  double residue_sum() const noexcept;
  /// MGF evaluated from the expansion, sum_ij A_ij (1 - s/lambda_i)^-j.
  double mgf(double s) const;
};

/// Radio quantities that stay fixed across every location of one cell.
struct LinkBudget {
  LinkBudget(const RadioConfig& radio, std::size_t rrh_count, double radius);

  double per_rrh_snr;  ///< gamma_0, linear
  double k;            ///< path-loss constant K
  double alpha;
  double threshold;    ///< gamma_th, linear
  double radius;

  /// Mean received SNR gamma_0 K d^-alpha of one link.
  double mean_snr(double d) const;
};

/// S = K d^-alpha. Rejects d <= 0.
double large_scale_fading(double d, const RadioConfig& radio, double radius);

/// Groups distances within `tol * R` of each other and converts each group to
/// a pole lambda = 1 / (gamma_0 K d^-alpha). Groups are sorted by ascending rate.
std::vector<PoleGroup> group_poles(std::span<const double> distances, const LinkBudget& link,
                                   double tol = kDefaultGroupingTolerance);

/// Partial-fraction residues for distinct grouped poles. Throws NumericalError
/// when two rates are closer than `rate_tol` (relative), since those should
/// have been merged by group_poles.
PoleSpectrum partial_fraction(std::vector<PoleGroup> groups, double rate_tol = 1e-9);

/// MGF in product form, prod_i (1 - s/lambda_i)^-J_i.
double mgf_product(std::span<const PoleGroup> groups, double s);

double snr_pdf(const PoleSpectrum& spectrum, double gamma);
double snr_cdf(const PoleSpectrum& spectrum, double gamma);

/// Closed forms for pairwise distinct mean SNRs gamma_0 S_n.
double snr_pdf_distinct(std::span<const double> mean_snrs, double gamma);
double snr_cdf_distinct(std::span<const double> mean_snrs, double gamma);

/// Builds the spectrum of the SNR seen at `user` from the RRHs in `members`.
PoleSpectrum spectrum_at(const RrhLayout& layout, std::span<const std::size_t> members,
                         Point user, const LinkBudget& link,
                         double tol = kDefaultGroupingTolerance);

/// P_out = F_gamma(gamma_th) for a service set at a user location.
double outage_at(const RrhLayout& layout, std::span<const std::size_t> members, Point user,
                 const LinkBudget& link, double tol = kDefaultGroupingTolerance);

/// Outage of file l at `location` under `placement`.
double outage_probability(const PlacementMatrix& placement, std::size_t l, Polar location,
                          const RrhLayout& layout, const RadioConfig& radio,
                          double tol = kDefaultGroupingTolerance);

}  // namespace crancache
