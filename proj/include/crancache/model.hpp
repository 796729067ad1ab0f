#pragma once

/// @file model.hpp
/// Domain types for a cache-enabled Cloud-RAN cell: file library and its Zipf
/// popularity, RRH layout, radio constants, binary placement matrices and the
/// service sets they induce, plus the canonical placement constructors.
///
/// File and RRH indices are 0-based throughout the library; the CLI prints
/// them 1-based.

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace crancache {

using Rng = std::mt19937_64;

/// Zipf request probabilities P_l = l^-beta / sum_n n^-beta for l = 1..count.
std::vector<double> zipf_popularity(std::size_t count, double beta);

struct FileLibrary {
  FileLibrary(std::size_t count, double beta);

  std::size_t size() const noexcept { return popularity.size(); }
  /// Sum of P_l over the 0-based half-open row range [first, last).
  double mass(std::size_t first, std::size_t last) const;

  double beta;
  std::vector<double> popularity;
};

struct Polar {
  double rho = 0.0;
  double theta = 0.0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point to_cartesian(Polar p) {
  return {p.rho * std::cos(p.theta), p.rho * std::sin(p.theta)};
}

double distance(Point a, Point b);

class RrhLayout {
 public:
  RrhLayout(std::vector<Polar> positions, std::vector<std::size_t> cache_sizes, double radius);

  std::size_t size() const noexcept { return positions_.size(); }
  double radius() const noexcept { return radius_; }
  const std::vector<Polar>& positions() const noexcept { return positions_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const std::vector<std::size_t>& cache_sizes() const noexcept { return cache_sizes_; }
  std::size_t cache_size(std::size_t n) const { return cache_sizes_.at(n); }

  /// L' = sum of M_n, the number of distinct files the RRHs can hold.
  std::size_t total_cache() const noexcept { return total_cache_; }
  bool equal_cache_sizes() const noexcept;

  /// Same layout with every RRH rotated by `angle` about the cell center.
  RrhLayout rotated(double angle) const;

 private:
  std::vector<Polar> positions_;
  std::vector<Point> points_;
  std::vector<std::size_t> cache_sizes_;
  double radius_;
  std::size_t total_cache_ = 0;
};

/// Radio constants. Stored in dB as configured; the accessors return the
/// linear quantities used by the analytics.
struct RadioConfig {
  double total_snr_db = 23.0;
  double alpha = 3.0;
  double gamma_th_db = 3.0;
  double attenuation_at_R_db = 20.0;

  void validate() const;
  /// gamma_0 = (P / sigma^2) / N.
  double per_rrh_snr(std::size_t rrh_count) const;
  /// K chosen so that K * R^-alpha equals the configured attenuation.
  double path_loss_constant(double radius) const;
  double threshold() const;
};

double db_to_linear(double db);
double linear_to_db(double linear);

/// L x N binary placement matrix; entry (l, n) is 1 when RRH n caches file l.
class PlacementMatrix {
 public:
  PlacementMatrix() = default;
  PlacementMatrix(std::size_t files, std::size_t rrhs);

  /// Builds a matrix from per-RRH lists of cached (0-based) file indices.
  static PlacementMatrix from_columns(std::size_t files,
                                      const std::vector<std::vector<std::size_t>>& columns);

  std::size_t files() const noexcept { return files_; }
  std::size_t rrhs() const noexcept { return rrhs_; }

  bool at(std::size_t l, std::size_t n) const { return data_[n * files_ + l] != 0; }
  void set(std::size_t l, std::size_t n, bool value) { data_[n * files_ + l] = value ? 1 : 0; }

  std::span<std::uint8_t> column(std::size_t n) { return {data_.data() + n * files_, files_}; }
  std::span<const std::uint8_t> column(std::size_t n) const {
    return {data_.data() + n * files_, files_};
  }

  std::size_t column_sum(std::size_t n) const;
  /// Cached files of RRH n in ascending order.
  std::vector<std::size_t> cached_files(std::size_t n) const;
  /// Bitmask of the RRHs caching file l (bit n set when a_{l,n} = 1).
  std::uint64_t row_mask(std::size_t l) const;
  /// One past the highest cached row, 0 for an empty matrix.
  std::size_t support_end() const;

  /// Throws ValidationError naming the violated constraint: column sums equal
  /// M_n, and, when `row_bound` is nonzero, no cached row at or beyond it.
  void check_feasible(std::span<const std::size_t> cache_sizes, std::size_t row_bound = 0) const;
  bool is_feasible(std::span<const std::size_t> cache_sizes, std::size_t row_bound = 0) const;

  std::uint64_t hash() const noexcept;

  bool operator==(const PlacementMatrix&) const = default;
  /// Lexicographic order over row-major entries (row 0 first).
  std::strong_ordering operator<=>(const PlacementMatrix& other) const;

  /// Compact 1-based text form: cached files per RRH, "1,2|3,4|5,6".
  std::string to_string() const;
  /// Table-style M x N form where entry (m, n) is the m-th cached file of RRH n,
  /// 1-based: "[[1,3,5],[2,4,6]]". Requires equal column sums.
  std::string to_table_string() const;

 private:
  std::size_t files_ = 0;
  std::size_t rrhs_ = 0;
  std::vector<std::uint8_t> data_;  // column-major
};

struct ServiceSet {
  std::size_t file_index = 0;
  std::vector<std::size_t> members;
  bool uses_fronthaul = false;
  std::uint64_t mask = 0;
};

ServiceSet service_set(const PlacementMatrix& placement, std::size_t l);
/// T_l: 1 when no RRH caches file l.
int fronthaul_usage(const PlacementMatrix& placement, std::size_t l);

/// Every RRH caches files 0..M_n-1.
PlacementMatrix mpc_placement(const RrhLayout& layout, std::size_t files);
/// RRHs ordered by distance to the cell center (ties by index) are filled
/// with files 0..L'-1 in ascending order.
PlacementMatrix lb_lcd_placement(const RrhLayout& layout, std::size_t files);
/// Each column holds M_n files drawn uniformly without replacement from all L.
PlacementMatrix random_placement(const RrhLayout& layout, std::size_t files, Rng& rng);
/// Each column holds M_n distinct files drawn without replacement with
/// weights proportional to popularity (exponential-key sampling).
PlacementMatrix probabilistic_placement(const FileLibrary& library, const RrhLayout& layout,
                                        Rng& rng);

/// Cell description shared by every evaluation path.
struct Scenario {
  FileLibrary library;
  RrhLayout layout;
  RadioConfig radio;
  std::size_t grid_u = 6;
  std::size_t grid_v = 6;

  void validate() const;
};

}  // namespace crancache
