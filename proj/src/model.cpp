#include "crancache/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "crancache/error.hpp"

namespace crancache {

std::vector<double> zipf_popularity(std::size_t count, double beta) {
  if (count == 0) throw ValidationError("library.L: must be at least 1");
  if (!std::isfinite(beta) || beta < 0.0)
    throw ValidationError("library.beta: must be finite and non-negative");

  std::vector<double> p(count);
  for (std::size_t l = 0; l < count; ++l) p[l] = std::pow(static_cast<double>(l + 1), -beta);
  // smallest terms first
  double total = 0.0;
  for (std::size_t l = count; l-- > 0;) total += p[l];
  for (auto& v : p) v /= total;
  return p;
}

FileLibrary::FileLibrary(std::size_t count, double beta_)
    : beta(beta_), popularity(zipf_popularity(count, beta_)) {}

double FileLibrary::mass(std::size_t first, std::size_t last) const {
  double s = 0.0;
  for (std::size_t l = first; l < std::min(last, popularity.size()); ++l) s += popularity[l];
  return s;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

RrhLayout::RrhLayout(std::vector<Polar> positions, std::vector<std::size_t> cache_sizes,
                     double radius)
    : positions_(std::move(positions)), cache_sizes_(std::move(cache_sizes)), radius_(radius) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_))
    throw ValidationError("layout.R: must be positive");
  if (positions_.empty()) throw ValidationError("layout.rrh: at least one RRH is required");
  if (positions_.size() > 64) throw ValidationError("layout.rrh: at most 64 RRHs are supported");
  if (cache_sizes_.size() != positions_.size())
    throw ValidationError("layout.cache_sizes: expected one entry per RRH");
  for (std::size_t n = 0; n < positions_.size(); ++n) {
    const auto& p = positions_[n];
    if (!std::isfinite(p.rho) || !std::isfinite(p.theta) || p.rho < 0.0 ||
        p.rho > radius_ * (1.0 + 1e-12))
      throw ValidationError("layout.rrh[" + std::to_string(n) + "].rho: must lie in [0, R]");
    points_.push_back(to_cartesian(p));
  }
  total_cache_ = std::accumulate(cache_sizes_.begin(), cache_sizes_.end(), std::size_t{0});
}

bool RrhLayout::equal_cache_sizes() const noexcept {
  return std::adjacent_find(cache_sizes_.begin(), cache_sizes_.end(), std::not_equal_to<>()) ==
         cache_sizes_.end();
}

RrhLayout RrhLayout::rotated(double angle) const {
  auto pos = positions_;
  for (auto& p : pos) p.theta += angle;
  return RrhLayout(std::move(pos), cache_sizes_, radius_);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void RadioConfig::validate() const {
  if (!std::isfinite(total_snr_db)) throw ValidationError("radio.total_snr_db: must be finite");
  if (!std::isfinite(alpha) || alpha <= 0.0) throw ValidationError("radio.alpha: must be positive");
  if (!std::isfinite(gamma_th_db)) throw ValidationError("radio.gamma_th_db: must be finite");
  if (!std::isfinite(attenuation_at_R_db))
    throw ValidationError("radio.attenuation_at_R_db: must be finite");
}

double RadioConfig::per_rrh_snr(std::size_t rrh_count) const {
  return db_to_linear(total_snr_db) / static_cast<double>(rrh_count);
}

double RadioConfig::path_loss_constant(double radius) const {
  return db_to_linear(-attenuation_at_R_db) * std::pow(radius, alpha);
}

double RadioConfig::threshold() const { return db_to_linear(gamma_th_db); }

// ---------------------------------------------------------------------------

PlacementMatrix::PlacementMatrix(std::size_t files, std::size_t rrhs)
    : files_(files), rrhs_(rrhs), data_(files * rrhs, 0) {}

PlacementMatrix PlacementMatrix::from_columns(
    std::size_t files, const std::vector<std::vector<std::size_t>>& columns) {
  PlacementMatrix a(files, columns.size());
  for (std::size_t n = 0; n < columns.size(); ++n) {
    for (auto l : columns[n]) {
      if (l >= files) throw ValidationError("placement: file index out of range");
      a.set(l, n, true);
    }
  }
  return a;
}

std::size_t PlacementMatrix::column_sum(std::size_t n) const {
  auto c = column(n);
  return static_cast<std::size_t>(std::count(c.begin(), c.end(), std::uint8_t{1}));
}

std::vector<std::size_t> PlacementMatrix::cached_files(std::size_t n) const {
  std::vector<std::size_t> out;
  auto c = column(n);
  for (std::size_t l = 0; l < files_; ++l)
    if (c[l]) out.push_back(l);
  return out;
}

std::uint64_t PlacementMatrix::row_mask(std::size_t l) const {
  std::uint64_t m = 0;
  for (std::size_t n = 0; n < rrhs_; ++n)
    if (at(l, n)) m |= std::uint64_t{1} << n;
  return m;
}

std::size_t PlacementMatrix::support_end() const {
  std::size_t end = 0;
  for (std::size_t n = 0; n < rrhs_; ++n) {
    auto c = column(n);
    for (std::size_t l = files_; l-- > end;) {
      if (c[l]) {
        end = l + 1;
        break;
      }
    }
  }
  return end;
}

void PlacementMatrix::check_feasible(std::span<const std::size_t> cache_sizes,
                                     std::size_t row_bound) const {
  if (cache_sizes.size() != rrhs_)
    throw ValidationError("placement: column count does not match the RRH count");
  for (std::size_t n = 0; n < rrhs_; ++n) {
    if (column_sum(n) != cache_sizes[n])
      throw ValidationError("placement: column " + std::to_string(n + 1) + " sums to " +
                            std::to_string(column_sum(n)) + ", cache size constraint requires " +
                            std::to_string(cache_sizes[n]));
  }
  for (auto v : data_)
    if (v > 1) throw ValidationError("placement: entries must be binary");
  if (row_bound != 0 && support_end() > row_bound)
    throw ValidationError("placement: caches file " + std::to_string(support_end()) +
                          " beyond L' = " + std::to_string(row_bound));
}

bool PlacementMatrix::is_feasible(std::span<const std::size_t> cache_sizes,
                                  std::size_t row_bound) const {
  try {
    check_feasible(cache_sizes, row_bound);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

std::uint64_t PlacementMatrix::hash() const noexcept {
  // FNV-1a over the packed bits
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(files_);
  mix(rrhs_);
  std::uint64_t word = 0;
  int bits = 0;
  for (auto v : data_) {
    word |= static_cast<std::uint64_t>(v & 1) << bits;
    if (++bits == 64) {
      mix(word);
      word = 0;
      bits = 0;
    }
  }
  if (bits) mix(word);
  return h;
}

std::strong_ordering PlacementMatrix::operator<=>(const PlacementMatrix& other) const {
  if (auto c = files_ <=> other.files_; c != 0) return c;
  if (auto c = rrhs_ <=> other.rrhs_; c != 0) return c;
  for (std::size_t l = 0; l < files_; ++l)
    for (std::size_t n = 0; n < rrhs_; ++n)
      if (auto c = at(l, n) <=> other.at(l, n); c != 0) return c;
  return std::strong_ordering::equal;
}

std::string PlacementMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t n = 0; n < rrhs_; ++n) {
    if (n) os << '|';
    bool first = true;
    for (auto l : cached_files(n)) {
      if (!first) os << ',';
      os << l + 1;
      first = false;
    }
  }
  return os.str();
}

std::string PlacementMatrix::to_table_string() const {
  std::vector<std::vector<std::size_t>> cols;
  for (std::size_t n = 0; n < rrhs_; ++n) cols.push_back(cached_files(n));
  const std::size_t depth = cols.empty() ? 0 : cols.front().size();
  for (const auto& c : cols)
    if (c.size() != depth) return to_string();
  std::ostringstream os;
  os << '[';
  for (std::size_t m = 0; m < depth; ++m) {
    if (m) os << ',';
    os << '[';
    for (std::size_t n = 0; n < rrhs_; ++n) {
      if (n) os << ',';
      os << cols[n][m] + 1;
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------

ServiceSet service_set(const PlacementMatrix& placement, std::size_t l) {
  if (l >= placement.files())
    throw ValidationError("file index " + std::to_string(l + 1) + " outside 1.." +
                          std::to_string(placement.files()));
  ServiceSet s;
  s.file_index = l;
  for (std::size_t n = 0; n < placement.rrhs(); ++n)
    if (placement.at(l, n)) s.members.push_back(n);
  if (s.members.empty()) {
    s.uses_fronthaul = true;
    s.members.resize(placement.rrhs());
    std::iota(s.members.begin(), s.members.end(), std::size_t{0});
  }
  for (auto n : s.members) s.mask |= std::uint64_t{1} << n;
  return s;
}

int fronthaul_usage(const PlacementMatrix& placement, std::size_t l) {
  if (l >= placement.files())
    throw ValidationError("file index " + std::to_string(l + 1) + " outside 1.." +
                          std::to_string(placement.files()));
  return placement.row_mask(l) == 0 ? 1 : 0;
}

namespace {
void check_capacity(const RrhLayout& layout, std::size_t files) {
  for (std::size_t n = 0; n < layout.size(); ++n)
    if (layout.cache_size(n) > files)
      throw ValidationError("layout.cache_sizes[" + std::to_string(n) +
                            "]: exceeds the library size");
}
}  // namespace

PlacementMatrix mpc_placement(const RrhLayout& layout, std::size_t files) {
  check_capacity(layout, files);
  PlacementMatrix a(files, layout.size());
  for (std::size_t n = 0; n < layout.size(); ++n)
    for (std::size_t l = 0; l < layout.cache_size(n); ++l) a.set(l, n, true);
  return a;
}

PlacementMatrix lb_lcd_placement(const RrhLayout& layout, std::size_t files) {
  if (layout.total_cache() > files)
    throw ValidationError("layout.cache_sizes: total cache exceeds the library size");
  std::vector<std::size_t> order(layout.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return layout.positions()[a].rho < layout.positions()[b].rho;
  });
  PlacementMatrix a(files, layout.size());
  std::size_t next = 0;
  for (auto n : order)
    for (std::size_t m = 0; m < layout.cache_size(n); ++m) a.set(next++, n, true);
  return a;
}

PlacementMatrix random_placement(const RrhLayout& layout, std::size_t files, Rng& rng) {
  check_capacity(layout, files);
  PlacementMatrix a(files, layout.size());
  std::vector<std::size_t> idx(files);
  for (std::size_t n = 0; n < layout.size(); ++n) {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // partial Fisher-Yates
    for (std::size_t i = 0; i < layout.cache_size(n); ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, files - 1);
      std::swap(idx[i], idx[pick(rng)]);
      a.set(idx[i], n, true);
    }
  }
  return a;
}

PlacementMatrix probabilistic_placement(const FileLibrary& library, const RrhLayout& layout,
                                        Rng& rng) {
  const std::size_t files = library.size();
  check_capacity(layout, files);
  PlacementMatrix a(files, layout.size());
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::pair<double, std::size_t>> keys(files);
  for (std::size_t n = 0; n < layout.size(); ++n) {
    // Efraimidis-Spirakis: the M smallest E_l / w_l are a weighted sample
    // without replacement.
    for (std::size_t l = 0; l < files; ++l) keys[l] = {expo(rng) / library.popularity[l], l};
    const auto m = layout.cache_size(n);
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(m), keys.end());
    for (std::size_t i = 0; i < m; ++i) a.set(keys[i].second, n, true);
  }
  return a;
}

void Scenario::validate() const {
  radio.validate();
  if (layout.total_cache() > library.size())
    throw ValidationError("layout.cache_sizes: total cache L' = " +
                          std::to_string(layout.total_cache()) + " exceeds library.L = " +
                          std::to_string(library.size()));
  if (grid_u < 2 || grid_u % 2 != 0) throw ValidationError("quadrature.U: must be even and >= 2");
  if (grid_v < 2 || grid_v % 2 != 0) throw ValidationError("quadrature.V: must be even and >= 2");
}

}  // namespace crancache
