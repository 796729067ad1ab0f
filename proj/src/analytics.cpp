#include "crancache/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "crancache/error.hpp"

namespace crancache {

namespace {

// Regularized lower incomplete gamma P(j, x) for integer j >= 1, i.e. the
// Erlang(j) CDF at rate-scaled argument x.
Real erlang_cdf(std::size_t j, Real x) {
  if (x <= 0) return 0;
  if (j == 1) return -std::expm1(-x);
  if (x < static_cast<Real>(j)) {
    // e^-x sum_{k>=j} x^k / k!, no cancellation below the mode
    Real term = std::exp(-x);
    for (std::size_t k = 1; k <= j; ++k) term *= x / static_cast<Real>(k);
    Real sum = term;
    for (std::size_t k = j + 1; k < j + 1000; ++k) {
      term *= x / static_cast<Real>(k);
      sum += term;
      if (term < sum * 1e-20L) break;
    }
    return sum;
  }
  Real term = std::exp(-x);
  Real tail = term;
  for (std::size_t k = 1; k < j; ++k) {
    term *= x / static_cast<Real>(k);
    tail += term;
  }
  return 1 - tail;
}

Real erlang_pdf(std::size_t j, Real rate, Real gamma) {
  // rate^j gamma^(j-1) e^(-rate gamma) / (j-1)!
  Real v = rate * std::exp(-rate * gamma);
  const Real x = rate * gamma;
  for (std::size_t k = 1; k < j; ++k) v *= x / static_cast<Real>(k);
  return v;
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0)) throw ValidationError("SNR argument must be non-negative");
}

}  // namespace

std::size_t PoleSpectrum::total_order() const noexcept {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.multiplicity;
  return n;
}

double PoleSpectrum::residue_sum() const noexcept {
  Real s = 0;
  for (const auto& r : residues)
    for (Real a : r) s += a;
  return static_cast<double>(s);
}

double PoleSpectrum::mgf(double s) const {
  Real total = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const Real base = 1 / (1 - static_cast<Real>(s) / groups[i].rate);
    Real p = 1;
    for (Real a : residues[i]) {
      p *= base;
      total += a * p;
    }
  }
  return static_cast<double>(total);
}

double mgf_product(std::span<const PoleGroup> groups, double s) {
  double v = 1.0;
  for (const auto& g : groups) v *= std::pow(1.0 - s / g.rate, -static_cast<double>(g.multiplicity));
  return v;
}

LinkBudget::LinkBudget(const RadioConfig& radio, std::size_t rrh_count, double radius_)
    : per_rrh_snr(radio.per_rrh_snr(rrh_count)),
      k(radio.path_loss_constant(radius_)),
      alpha(radio.alpha),
      threshold(radio.threshold()),
      radius(radius_) {}

double LinkBudget::mean_snr(double d) const { return per_rrh_snr * k * std::pow(d, -alpha); }

double large_scale_fading(double d, const RadioConfig& radio, double radius) {
  if (!(d > 0.0)) throw ValidationError("distance must be positive (user colocated with an RRH)");
  return radio.path_loss_constant(radius) * std::pow(d, -radio.alpha);
}

std::vector<PoleGroup> group_poles(std::span<const double> distances, const LinkBudget& link,
                                   double tol) {
  if (distances.empty()) throw ValidationError("group_poles: empty service set");
  std::vector<double> d(distances.begin(), distances.end());
  for (double x : d)
    if (!(x > 0.0)) throw ValidationError("distance must be positive (user colocated with an RRH)");
  std::sort(d.begin(), d.end());

  std::vector<PoleGroup> groups;
  const double gap = tol * link.radius;
  double anchor = d.front();
  std::size_t count = 0;
  for (double x : d) {
    if (count > 0 && x - anchor > gap) {
      groups.push_back({1.0 / link.mean_snr(anchor), count});
      anchor = x;
      count = 0;
    }
    ++count;
  }
  groups.push_back({1.0 / link.mean_snr(anchor), count});
  // increasing distance is increasing rate
  return groups;
}

PoleSpectrum partial_fraction(std::vector<PoleGroup> groups, double rate_tol) {
  if (groups.empty()) throw ValidationError("partial_fraction: no poles");
  for (const auto& g : groups)
    if (!(g.rate > 0.0) || !std::isfinite(g.rate) || g.multiplicity == 0)
      throw ValidationError("partial_fraction: poles must be positive with multiplicity >= 1");
  for (std::size_t i = 0; i < groups.size(); ++i)
    for (std::size_t k = i + 1; k < groups.size(); ++k) {
      const double scale = std::max(groups[i].rate, groups[k].rate);
      if (std::abs(groups[i].rate - groups[k].rate) <= rate_tol * scale)
        throw NumericalError("partial_fraction: poles " + std::to_string(groups[i].rate) + " and " +
                             std::to_string(groups[k].rate) +
                             " are closer than the grouping tolerance");
    }

  PoleSpectrum out;
  out.residues.resize(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const Real li = groups[i].rate;
    const std::size_t ji = groups[i].multiplicity;

    // Deflated MGF g(s) = prod_{k != i} (1 - s/lambda_k)^-J_k. With
    // e_n = (-lambda_i)^n g^(n)(lambda_i) / n! and the scaled power sums
    // u_m = sum_k J_k (lambda_i / (lambda_i - lambda_k))^m of log g, the
    // Taylor coefficients obey (n+1) e_{n+1} = sum_{m=1}^{n+1} u_m e_{n+1-m}.
    std::vector<Real> u(ji, 0);
    Real e0 = 1;
    for (std::size_t k = 0; k < groups.size(); ++k) {
      if (k == i) continue;
      const Real lk = groups[k].rate;
      const Real jk = static_cast<Real>(groups[k].multiplicity);
      e0 *= std::pow(lk / (lk - li), jk);
      const Real ratio = li / (li - lk);
      Real p = 1;
      for (std::size_t m = 1; m < ji; ++m) {
        p *= ratio;
        u[m] += jk * p;
      }
    }
    std::vector<Real> e(ji, 0);
    e[0] = e0;
    for (std::size_t n = 0; n + 1 < ji; ++n) {
      Real acc = 0;
      for (std::size_t m = 1; m <= n + 1; ++m) acc += u[m] * e[n + 1 - m];
      e[n + 1] = acc / static_cast<Real>(n + 1);
    }
    // A_ij = e_{J_i - j}
    auto& r = out.residues[i];
    r.resize(ji);
    for (std::size_t j = 1; j <= ji; ++j) r[j - 1] = e[ji - j];
  }
  out.groups = std::move(groups);
  return out;
}

double snr_pdf(const PoleSpectrum& spectrum, double gamma) {
  check_gamma(gamma);
  Real f = 0;
  for (std::size_t i = 0; i < spectrum.groups.size(); ++i) {
    const Real rate = spectrum.groups[i].rate;
    const auto& r = spectrum.residues[i];
    for (std::size_t j = 1; j <= r.size(); ++j) f += r[j - 1] * erlang_pdf(j, rate, gamma);
  }
  return static_cast<double>(f);
}

double snr_cdf(const PoleSpectrum& spectrum, double gamma) {
  check_gamma(gamma);
  Real f = 0;
  for (std::size_t i = 0; i < spectrum.groups.size(); ++i) {
    const Real x = static_cast<Real>(spectrum.groups[i].rate) * gamma;
    const auto& r = spectrum.residues[i];
    for (std::size_t j = 1; j <= r.size(); ++j) f += r[j - 1] * erlang_cdf(j, x);
  }
  return std::clamp(static_cast<double>(f), 0.0, 1.0);
}

namespace {
double distinct_weight(std::span<const double> m, std::size_t n) {
  double c = 1.0;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (k != n) c *= m[n] / (m[n] - m[k]);
  return c;
}
}  // namespace

double snr_pdf_distinct(std::span<const double> mean_snrs, double gamma) {
  check_gamma(gamma);
  double f = 0.0;
  for (std::size_t n = 0; n < mean_snrs.size(); ++n)
    f += distinct_weight(mean_snrs, n) / mean_snrs[n] * std::exp(-gamma / mean_snrs[n]);
  return f;
}

double snr_cdf_distinct(std::span<const double> mean_snrs, double gamma) {
  check_gamma(gamma);
  double f = 0.0;
  for (std::size_t n = 0; n < mean_snrs.size(); ++n)
    f += distinct_weight(mean_snrs, n) * -std::expm1(-gamma / mean_snrs[n]);
  return std::clamp(f, 0.0, 1.0);
}

PoleSpectrum spectrum_at(const RrhLayout& layout, std::span<const std::size_t> members, Point user,
                         const LinkBudget& link, double tol) {
  std::vector<double> d;
  d.reserve(members.size());
  for (auto n : members) d.push_back(distance(user, layout.points().at(n)));
  return partial_fraction(group_poles(d, link, tol));
}

double outage_at(const RrhLayout& layout, std::span<const std::size_t> members, Point user,
                 const LinkBudget& link, double tol) {
  return snr_cdf(spectrum_at(layout, members, user, link, tol), link.threshold);
}

double outage_probability(const PlacementMatrix& placement, std::size_t l, Polar location,
                          const RrhLayout& layout, const RadioConfig& radio, double tol) {
  if (location.rho < 0.0 || location.rho > layout.radius() * (1.0 + 1e-12))
    throw ValidationError("user location must lie inside the cell");
  const LinkBudget link(radio, layout.size(), layout.radius());
  const auto s = service_set(placement, l);
  return outage_at(layout, s.members, to_cartesian(location), link, tol);
}

}  // namespace crancache
