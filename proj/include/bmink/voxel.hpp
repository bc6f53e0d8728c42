// Copyright 2026 The bmink Authors
// SPDX-License-Identifier: Apache-2.0

// Occupancy sets on the lattice h*Z^n (n = 2..4) with morphological
// dilation, open erosion, boundary extraction and connectivity.
//
// Cell i covers [i*h, (i+1)*h) on each axis and its center is (i + 1/2)*h.
// Minkowski sums add cell indices. Storage is row-major: a row is the run of
// cells along axis 0, packed into 64-bit words; rows are indexed by the
// remaining axes with axis 1 fastest.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bmink/shape_spec.hpp"

namespace bmink::voxel {

inline constexpr int kMaxDim = 4;
inline constexpr std::int64_t kMaxExtent = 4096;

using Index = std::array<std::int64_t, kMaxDim>;

/// Neighborhood used by `interior`: the 2n face neighbors or all 3^n - 1.
enum class Adjacency { Face, Full };

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// Word j of (src << shift), treating bits outside src as zero. Negative
// shifts move bits toward index 0.
inline std::uint64_t shifted_word(const std::uint64_t* src, std::int64_t src_words, std::int64_t j,
                                  std::int64_t shift) {
  std::int64_t start = 64 * j - shift;
  std::int64_t q = floor_div(start, 64);
  int r = static_cast<int>(start - 64 * q);
  auto at = [&](std::int64_t k) -> std::uint64_t { return (k >= 0 && k < src_words) ? src[k] : 0; };
  std::uint64_t w = at(q) >> r;
  if (r != 0) w |= at(q + 1) << (64 - r);
  return w;
}

inline std::int64_t words_for(std::int64_t bits) { return (bits + 63) / 64; }

inline void mask_tail(std::uint64_t* row, std::int64_t words, std::int64_t bits) {
  if (words == 0) return;
  int used = static_cast<int>(bits - 64 * (words - 1));
  if (used < 64) row[words - 1] &= (std::uint64_t{1} << used) - 1;
  for (std::int64_t k = words_for(bits); k < words; ++k) row[k] = 0;
}

// Row run-length encoding: (start, length) of each maximal run of ones.
inline std::vector<std::pair<std::int64_t, std::int64_t>> runs_of(const std::uint64_t* row, std::int64_t words) {
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;
  std::int64_t start = -1;
  for (std::int64_t j = 0; j < words; ++j) {
    std::uint64_t w = row[j];
    if (w == 0 && start < 0) continue;
    if (w == ~std::uint64_t{0} && start >= 0) continue;
    for (int b = 0; b < 64; ++b) {
      bool on = (w >> b) & 1U;
      if (on && start < 0) start = 64 * j + b;
      if (!on && start >= 0) {
        runs.emplace_back(start, 64 * j + b - start);
        start = -1;
      }
    }
  }
  if (start >= 0) runs.emplace_back(start, 64 * words - start);
  return runs;
}

// OR (dilate == true) or AND (dilate == false) of src shifted by 0..len-1.
// Output has src_bits + len - 1 bits.
inline std::vector<std::uint64_t> smear(const std::uint64_t* src, std::int64_t src_bits, std::int64_t len,
                                        bool dilate) {
  const std::int64_t out_bits = src_bits + len - 1;
  const std::int64_t out_words = words_for(out_bits);
  const std::int64_t src_words = words_for(src_bits);
  std::vector<std::uint64_t> cur(static_cast<std::size_t>(out_words), 0);
  std::copy(src, src + src_words, cur.begin());
  std::vector<std::uint64_t> tmp(cur.size());
  std::int64_t have = 1;
  auto combine = [&](std::int64_t shift) {
    for (std::int64_t j = 0; j < out_words; ++j) {
      std::uint64_t s = shifted_word(cur.data(), out_words, j, shift);
      tmp[static_cast<std::size_t>(j)] = dilate ? (cur[static_cast<std::size_t>(j)] | s)
                                                : (cur[static_cast<std::size_t>(j)] & s);
    }
    cur.swap(tmp);
  };
  while (2 * have <= len) {
    combine(have);
    have *= 2;
  }
  if (have < len) combine(len - have);
  mask_tail(cur.data(), out_words, out_bits);
  return cur;
}

}  // namespace detail

/// Bounded occupancy set on h*Z^n. Values are canonical: the extent box is
/// the tight bounding box of the occupied cells plus a one-cell empty margin
/// (the empty set has zero extent), so equality of sets is equality of values.
class GridSet {
 public:
  GridSet() = default;

  /// The empty set.
  GridSet(int dim, double h) : dim_(dim), h_(h) { validate_params(dim, h); }

  /// Builds a set from explicit cell indices (only the first `dim` entries
  /// of each index are used).
  static GridSet from_cells(int dim, double h, const std::vector<Index>& cells) {
    validate_params(dim, h);
    if (cells.empty()) return GridSet(dim, h);
    Index lo{}, hi{};
    for (int a = 0; a < dim; ++a) {
      lo[a] = hi[a] = cells.front()[a];
      for (const auto& c : cells) {
        lo[a] = std::min(lo[a], c[a]);
        hi[a] = std::max(hi[a], c[a]);
      }
    }
    GridSet g = raw_box(dim, h, lo, hi);
    for (const auto& c : cells) g.set(c);
    return g.normalized();
  }

  /// Cells whose centers satisfy `inside`, searched over the index box
  /// [lo, hi]. The predicate receives world coordinates.
  template <typename Pred>
  static GridSet from_predicate(int dim, double h, const Index& lo, const Index& hi, Pred&& inside) {
    validate_params(dim, h);
    for (int a = 0; a < dim; ++a) {
      if (hi[a] < lo[a]) return GridSet(dim, h);
    }
    GridSet g = raw_box(dim, h, lo, hi);
    double p[kMaxDim] = {0, 0, 0, 0};
    for (std::int64_t r = 0; r < g.rows_; ++r) {
      Index c = g.row_coords(r);
      for (int a = 1; a < dim; ++a) p[a] = (static_cast<double>(c[a]) + 0.5) * h;
      std::uint64_t* row = g.row(r);
      for (std::int64_t i = 1; i + 1 < g.extent_[0]; ++i) {
        p[0] = (static_cast<double>(g.origin_[0] + i) + 0.5) * h;
        if (inside(static_cast<const double*>(p))) row[i >> 6] |= std::uint64_t{1} << (i & 63);
      }
    }
    return g.normalized();
  }

  int dim() const { return dim_; }
  double h() const { return h_; }
  const Index& origin() const { return origin_; }
  const Index& extent() const { return extent_; }
  bool empty() const { return rows_ == 0; }

  std::uint64_t count() const {
    std::uint64_t n = 0;
    for (auto w : bits_) n += static_cast<std::uint64_t>(std::popcount(w));
    return n;
  }

  bool contains(const Index& cell) const {
    if (empty()) return false;
    for (int a = 0; a < dim_; ++a) {
      if (cell[a] < origin_[a] || cell[a] >= origin_[a] + extent_[a]) return false;
    }
    std::int64_t i = cell[0] - origin_[0];
    return (row(row_index(cell))[i >> 6] >> (i & 63)) & 1U;
  }

  std::vector<Index> cells() const {
    std::vector<Index> out;
    for (std::int64_t r = 0; r < rows_; ++r) {
      Index c = row_coords(r);
      const std::uint64_t* w = row(r);
      for (std::int64_t i = 0; i < extent_[0]; ++i) {
        if ((w[i >> 6] >> (i & 63)) & 1U) {
          c[0] = origin_[0] + i;
          out.push_back(c);
        }
      }
    }
    return out;
  }

  /// Inclusive bounds of the occupied cells (meaningless when empty).
  Index occupied_lo() const {
    Index lo = origin_;
    for (int a = 0; a < dim_; ++a) lo[a] += 1;
    return lo;
  }
  Index occupied_hi() const {
    Index hi = origin_;
    for (int a = 0; a < dim_; ++a) hi[a] += extent_[a] - 2;
    return hi;
  }

  friend bool operator==(const GridSet& a, const GridSet& b) {
    return a.dim_ == b.dim_ && a.h_ == b.h_ && a.origin_ == b.origin_ && a.extent_ == b.extent_ &&
           a.bits_ == b.bits_;
  }

  // Low-level row access, used by the morphology kernels.
  std::int64_t rows() const { return rows_; }
  std::int64_t words_per_row() const { return words_per_row_; }
  const std::uint64_t* row(std::int64_t r) const { return bits_.data() + r * words_per_row_; }
  std::uint64_t* row(std::int64_t r) { return bits_.data() + r * words_per_row_; }
  bool row_empty(std::int64_t r) const {
    const std::uint64_t* w = row(r);
    return std::all_of(w, w + words_per_row_, [](std::uint64_t x) { return x == 0; });
  }

  /// World coordinates of row r (axis 0 entry left at origin).
  Index row_coords(std::int64_t r) const {
    Index c = origin_;
    for (int a = 1; a < dim_; ++a) {
      c[a] = origin_[a] + r % extent_[a];
      r /= extent_[a];
    }
    return c;
  }

  /// Row holding the given world cell; -1 if outside the box.
  std::int64_t row_index(const Index& c) const {
    std::int64_t r = 0;
    for (int a = dim_ - 1; a >= 1; --a) {
      std::int64_t k = c[a] - origin_[a];
      if (k < 0 || k >= extent_[a]) return -1;
      r = r * extent_[a] + k;
    }
    return r;
  }

  /// Uninitialized (all-zero) box covering the index range [lo, hi] with a
  /// one-cell margin; not canonical until `normalized()`.
  static GridSet raw_box(int dim, double h, const Index& lo, const Index& hi) {
    GridSet g(dim, h);
    g.rows_ = 1;
    for (int a = 0; a < dim; ++a) {
      g.origin_[a] = lo[a] - 1;
      g.extent_[a] = hi[a] - lo[a] + 3;
      if (g.extent_[a] > kMaxExtent) throw std::length_error("grid extent exceeds the per-axis cap");
      if (a > 0) g.rows_ *= g.extent_[a];
    }
    g.words_per_row_ = detail::words_for(g.extent_[0]);
    g.bits_.assign(static_cast<std::size_t>(g.rows_ * g.words_per_row_), 0);
    return g;
  }

  void set(const Index& c) {
    std::int64_t i = c[0] - origin_[0];
    std::int64_t r = row_index(c);
    if (r < 0 || i < 0 || i >= extent_[0]) throw std::out_of_range("cell outside grid box");
    row(r)[i >> 6] |= std::uint64_t{1} << (i & 63);
  }

  /// Trims to the canonical box.
  GridSet normalized() const {
    if (rows_ == 0) return GridSet(dim_, h_);
    Index lo{}, hi{};
    bool any = false;
    for (std::int64_t r = 0; r < rows_; ++r) {
      const std::uint64_t* w = row(r);
      std::int64_t first = -1, last = -1;
      for (std::int64_t j = 0; j < words_per_row_; ++j) {
        if (w[j] == 0) continue;
        if (first < 0) first = 64 * j + std::countr_zero(w[j]);
        last = 64 * j + 63 - std::countl_zero(w[j]);
      }
      if (first < 0) continue;
      Index c = row_coords(r);
      c[0] = origin_[0] + first;
      Index d = c;
      d[0] = origin_[0] + last;
      if (!any) {
        lo = c;
        hi = d;
        any = true;
      } else {
        for (int a = 0; a < dim_; ++a) {
          lo[a] = std::min(lo[a], c[a]);
          hi[a] = std::max(hi[a], d[a]);
        }
      }
    }
    if (!any) return GridSet(dim_, h_);
    GridSet out = raw_box(dim_, h_, lo, hi);
    if (out.origin_ == origin_ && out.extent_ == extent_) return *this;
    const std::int64_t shift = origin_[0] - out.origin_[0];
    for (std::int64_t r = 0; r < rows_; ++r) {
      if (row_empty(r)) continue;
      std::uint64_t* dst = out.row(out.row_index(row_coords(r)));
      for (std::int64_t j = 0; j < out.words_per_row_; ++j) dst[j] |= detail::shifted_word(row(r), words_per_row_, j, shift);
    }
    return out;
  }

 private:
  static void validate_params(int dim, double h) {
    if (dim < 2 || dim > kMaxDim) throw std::invalid_argument("grid dimension must be 2, 3 or 4");
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("resolution must be positive");
  }

  int dim_ = 2;
  double h_ = 1.0;
  Index origin_{};
  Index extent_{};
  std::int64_t rows_ = 0;
  std::int64_t words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

inline void require_compatible(const GridSet& a, const GridSet& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("grid dimensions differ");
  if (a.h() != b.h()) throw std::invalid_argument("grid resolutions differ");
}

struct RowInfo {
  std::int64_t index;
  Index coords;
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;
};

inline std::vector<RowInfo> nonempty_rows(const GridSet& g, bool with_runs) {
  std::vector<RowInfo> out;
  for (std::int64_t r = 0; r < g.rows(); ++r) {
    if (g.row_empty(r)) continue;
    RowInfo info{r, g.row_coords(r), {}};
    if (with_runs) info.runs = runs_of(g.row(r), g.words_per_row());
    out.push_back(std::move(info));
  }
  return out;
}

// Elementwise combination of two sets over the union of their boxes.
template <typename Op>
GridSet combine(const GridSet& a, const GridSet& b, Op op) {
  require_compatible(a, b);
  if (a.empty() && b.empty()) return a;
  const GridSet& ref = a.empty() ? b : a;
  Index lo = ref.occupied_lo(), hi = ref.occupied_hi();
  for (const GridSet* g : {&a, &b}) {
    if (g->empty()) continue;
    Index glo = g->occupied_lo(), ghi = g->occupied_hi();
    for (int k = 0; k < a.dim(); ++k) {
      lo[k] = std::min(lo[k], glo[k]);
      hi[k] = std::max(hi[k], ghi[k]);
    }
  }
  GridSet out = GridSet::raw_box(a.dim(), a.h(), lo, hi);
  const std::int64_t w = out.words_per_row();
  std::vector<std::uint64_t> ra(static_cast<std::size_t>(w)), rb(static_cast<std::size_t>(w));
  auto load = [&](const GridSet& g, const Index& c, std::vector<std::uint64_t>& dst) {
    std::fill(dst.begin(), dst.end(), 0);
    if (g.empty()) return;
    std::int64_t r = g.row_index(c);
    if (r < 0) return;
    const std::int64_t shift = g.origin()[0] - out.origin()[0];
    for (std::int64_t j = 0; j < w; ++j) dst[static_cast<std::size_t>(j)] = shifted_word(g.row(r), g.words_per_row(), j, shift);
  };
  for (std::int64_t r = 0; r < out.rows(); ++r) {
    Index c = out.row_coords(r);
    load(a, c, ra);
    load(b, c, rb);
    std::uint64_t* dst = out.row(r);
    for (std::int64_t j = 0; j < w; ++j) dst[j] = op(ra[static_cast<std::size_t>(j)], rb[static_cast<std::size_t>(j)]);
    mask_tail(dst, w, out.extent()[0]);
  }
  return out.normalized();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Set algebra

inline GridSet set_union(const GridSet& a, const GridSet& b) {
  return detail::combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x | y; });
}
inline GridSet set_intersection(const GridSet& a, const GridSet& b) {
  return detail::combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & y; });
}
inline GridSet set_difference(const GridSet& a, const GridSet& b) {
  return detail::combine(a, b, [](std::uint64_t x, std::uint64_t y) { return x & ~y; });
}
inline bool is_subset(const GridSet& a, const GridSet& b) { return set_difference(a, b).empty(); }
inline bool are_disjoint(const GridSet& a, const GridSet& b) { return set_intersection(a, b).empty(); }

inline GridSet translate(const GridSet& a, const Index& by) {
  std::vector<Index> cells = a.cells();
  for (auto& c : cells) {
    for (int k = 0; k < a.dim(); ++k) c[k] += by[k];
  }
  return GridSet::from_cells(a.dim(), a.h(), cells);
}

/// Index negation i -> -i on every axis.
inline GridSet reflect(const GridSet& a) {
  std::vector<Index> cells = a.cells();
  for (auto& c : cells) {
    for (int k = 0; k < a.dim(); ++k) c[k] = -c[k];
  }
  return GridSet::from_cells(a.dim(), a.h(), cells);
}

inline double volume(const GridSet& a) {
  return static_cast<double>(a.count()) * std::pow(a.h(), a.dim());
}

// ---------------------------------------------------------------------------
// Rasterization

/// Cells whose centers lie in the closed set described by `spec`.
inline GridSet rasterize(const ShapeSpec& spec, double h) {
  CompiledShape shape = compile(spec);
  if (shape.dim < 2 || shape.dim > kMaxDim) throw std::invalid_argument("grid dimension must be 2, 3 or 4");
  Index lo{}, hi{};
  for (int a = 0; a < shape.dim; ++a) {
    lo[a] = static_cast<std::int64_t>(std::ceil(shape.lo[static_cast<std::size_t>(a)] / h - 0.5));
    hi[a] = static_cast<std::int64_t>(std::floor(shape.hi[static_cast<std::size_t>(a)] / h - 0.5));
    if (hi[a] - lo[a] + 3 > kMaxExtent) throw std::length_error("grid extent exceeds the per-axis cap");
  }
  return GridSet::from_predicate(shape.dim, h, lo, hi, shape.contains);
}

// ---------------------------------------------------------------------------
// Morphology

/// Discrete Minkowski sum {a + b}.
inline GridSet dilate(const GridSet& a, const GridSet& b) {
  detail::require_compatible(a, b);
  if (a.empty() || b.empty()) return GridSet(a.dim(), a.h());
  const int n = a.dim();
  Index lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    lo[k] = a.occupied_lo()[k] + b.occupied_lo()[k];
    hi[k] = a.occupied_hi()[k] + b.occupied_hi()[k];
    if (hi[k] - lo[k] + 3 > kMaxExtent) throw std::length_error("grid extent exceeds the per-axis cap");
  }
  GridSet out = GridSet::raw_box(n, a.h(), lo, hi);
  const auto a_rows = detail::nonempty_rows(a, false);
  const auto b_rows = detail::nonempty_rows(b, true);
  const std::int64_t w = out.words_per_row();
  const std::int64_t a_bits = a.extent()[0];

  for (const auto& ra : a_rows) {
    std::map<std::int64_t, std::vector<std::uint64_t>> smeared;
    for (const auto& rb : b_rows) {
      Index c{};
      for (int k = 1; k < n; ++k) c[k] = ra.coords[k] + rb.coords[k];
      std::uint64_t* dst = out.row(out.row_index(c));
      for (const auto& [start, len] : rb.runs) {
        auto it = smeared.find(len);
        if (it == smeared.end()) it = smeared.emplace(len, detail::smear(a.row(ra.index), a_bits, len, true)).first;
        const std::int64_t src_words = static_cast<std::int64_t>(it->second.size());
        // out bit k  <->  world a.origin + b.origin + start + (bit in smeared row)
        const std::int64_t shift = a.origin()[0] + b.origin()[0] + start - out.origin()[0];
        for (std::int64_t j = 0; j < w; ++j) dst[j] |= detail::shifted_word(it->second.data(), src_words, j, shift);
      }
    }
  }
  for (std::int64_t r = 0; r < out.rows(); ++r) detail::mask_tail(out.row(r), w, out.extent()[0]);
  return out.normalized();
}

/// Cells of A whose neighbors (per `adj`) all lie in A.
inline GridSet interior(const GridSet& a, Adjacency adj = Adjacency::Full) {
  if (a.empty()) return a;
  const int n = a.dim();
  GridSet out = GridSet::raw_box(n, a.h(), a.occupied_lo(), a.occupied_hi());
  const std::int64_t w = a.words_per_row();
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(w));

  // Offsets over axes 1..n-1: face adjacency uses the unit vectors only.
  std::vector<Index> offsets;
  if (adj == Adjacency::Face) {
    offsets.push_back(Index{});
    for (int k = 1; k < n; ++k) {
      Index p{}, m{};
      p[k] = 1;
      m[k] = -1;
      offsets.push_back(p);
      offsets.push_back(m);
    }
  } else {
    int total = 1;
    for (int k = 1; k < n; ++k) total *= 3;
    for (int code = 0; code < total; ++code) {
      Index o{};
      int c = code;
      for (int k = 1; k < n; ++k) {
        o[k] = c % 3 - 1;
        c /= 3;
      }
      offsets.push_back(o);
    }
  }

  for (std::int64_t r = 0; r < a.rows(); ++r) {
    if (a.row_empty(r)) continue;
    const Index c = a.row_coords(r);
    const std::uint64_t* self = a.row(r);
    for (std::int64_t j = 0; j < w; ++j) {
      acc[static_cast<std::size_t>(j)] =
          self[j] & detail::shifted_word(self, w, j, 1) & detail::shifted_word(self, w, j, -1);
    }
    for (const auto& o : offsets) {
      bool is_self = true;
      Index nc = c;
      for (int k = 1; k < n; ++k) {
        nc[k] += o[k];
        is_self = is_self && o[k] == 0;
      }
      if (is_self) continue;
      const std::uint64_t* nb = a.row(a.row_index(nc));
      for (std::int64_t j = 0; j < w; ++j) {
        std::uint64_t m = nb[j];
        if (adj == Adjacency::Full) m &= detail::shifted_word(nb, w, j, 1) & detail::shifted_word(nb, w, j, -1);
        acc[static_cast<std::size_t>(j)] &= m;
      }
    }
    // Same box layout as `a`, so rows map by coordinates and bits align.
    std::uint64_t* dst = out.row(out.row_index(c));
    const std::int64_t shift = a.origin()[0] - out.origin()[0];
    for (std::int64_t j = 0; j < out.words_per_row(); ++j) dst[j] = detail::shifted_word(acc.data(), w, j, shift);
  }
  return out.normalized();
}

/// A minus interior(A): the one-cell-thick inner boundary.
inline GridSet boundary(const GridSet& a, Adjacency adj = Adjacency::Full) {
  return set_difference(a, interior(a, adj));
}

/// Open erosion {x : x - b in interior(A) for every cell b of B}.
inline GridSet erode_open(const GridSet& a, const GridSet& b, Adjacency adj = Adjacency::Full) {
  detail::require_compatible(a, b);
  if (b.empty()) throw std::invalid_argument("erosion by the empty set is unbounded");
  GridSet in = interior(a, adj);
  if (in.empty()) return GridSet(a.dim(), a.h());
  const int n = a.dim();
  Index lo{}, hi{};
  for (int k = 0; k < n; ++k) {
    lo[k] = in.occupied_lo()[k] + b.occupied_hi()[k];
    hi[k] = in.occupied_hi()[k] + b.occupied_lo()[k];
    if (hi[k] < lo[k]) return GridSet(a.dim(), a.h());
  }
  GridSet out = GridSet::raw_box(n, a.h(), lo, hi);
  const std::int64_t w = out.words_per_row();
  for (std::int64_t r = 0; r < out.rows(); ++r) {
    std::uint64_t* dst = out.row(r);
    std::fill(dst, dst + w, ~std::uint64_t{0});
  }
  // Only the strict interior of the raw box may be occupied.
  std::vector<std::uint64_t> inner(static_cast<std::size_t>(w), 0);
  for (std::int64_t i = 1; i + 1 < out.extent()[0]; ++i) inner[static_cast<std::size_t>(i >> 6)] |= std::uint64_t{1} << (i & 63);

  std::vector<std::int64_t> satisfied(static_cast<std::size_t>(out.rows()), 0);
  const auto in_rows = detail::nonempty_rows(in, false);
  const auto b_rows = detail::nonempty_rows(b, true);
  const std::int64_t in_bits = in.extent()[0];

  for (const auto& ri : in_rows) {
    std::map<std::int64_t, std::vector<std::uint64_t>> smeared;
    for (const auto& rb : b_rows) {
      Index c{};
      for (int k = 1; k < n; ++k) c[k] = ri.coords[k] + rb.coords[k];
      std::int64_t ro = out.row_index(c);
      if (ro < 0) continue;
      std::uint64_t* dst = out.row(ro);
      for (const auto& [start, len] : rb.runs) {
        auto it = smeared.find(len);
        if (it == smeared.end()) it = smeared.emplace(len, detail::smear(in.row(ri.index), in_bits, len, false)).first;
        const std::int64_t src_words = static_cast<std::int64_t>(it->second.size());
        const std::int64_t shift = in.origin()[0] + b.origin()[0] + start - out.origin()[0];
        for (std::int64_t j = 0; j < w; ++j) dst[j] &= detail::shifted_word(it->second.data(), src_words, j, shift);
      }
      ++satisfied[static_cast<std::size_t>(ro)];
    }
  }
  const auto needed = static_cast<std::int64_t>(b_rows.size());
  for (std::int64_t r = 0; r < out.rows(); ++r) {
    std::uint64_t* dst = out.row(r);
    Index c = out.row_coords(r);
    bool margin_row = false;
    for (int k = 1; k < n; ++k) margin_row = margin_row || c[k] == out.origin()[k] || c[k] == out.origin()[k] + out.extent()[k] - 1;
    if (margin_row || satisfied[static_cast<std::size_t>(r)] < needed) {
      std::fill(dst, dst + w, 0);
    } else {
      for (std::int64_t j = 0; j < w; ++j) dst[j] &= inner[static_cast<std::size_t>(j)];
    }
  }
  return out.normalized();
}

// ---------------------------------------------------------------------------
// Connectivity

/// Number of connected components under `adj` adjacency.
inline int component_count(const GridSet& a, Adjacency adj = Adjacency::Full) {
  if (a.empty()) return 0;
  const int n = a.dim();
  std::int64_t total = 1;
  Index stride{};
  for (int k = 0; k < n; ++k) {
    stride[k] = total;
    total *= a.extent()[k];
  }
  std::vector<std::uint8_t> state(static_cast<std::size_t>(total), 0);  // 1 = occupied, 2 = seen
  for (const auto& c : a.cells()) {
    std::int64_t idx = 0;
    for (int k = 0; k < n; ++k) idx += (c[k] - a.origin()[k]) * stride[k];
    state[static_cast<std::size_t>(idx)] = 1;
  }
  std::vector<std::int64_t> deltas;
  int combos = 1;
  for (int k = 0; k < n; ++k) combos *= 3;
  for (int code = 0; code < combos; ++code) {
    int c = code, nonzero = 0;
    std::int64_t d = 0;
    for (int k = 0; k < n; ++k) {
      int o = c % 3 - 1;
      c /= 3;
      nonzero += o != 0;
      d += o * stride[k];
    }
    if (nonzero == 0) continue;
    if (adj == Adjacency::Face && nonzero != 1) continue;
    deltas.push_back(d);
  }
  int components = 0;
  std::vector<std::int64_t> stack;
  for (std::int64_t s = 0; s < total; ++s) {
    if (state[static_cast<std::size_t>(s)] != 1) continue;
    ++components;
    state[static_cast<std::size_t>(s)] = 2;
    stack.push_back(s);
    while (!stack.empty()) {
      std::int64_t cur = stack.back();
      stack.pop_back();
      for (std::int64_t d : deltas) {
        // The one-cell margin keeps every neighbor of an occupied cell in range.
        auto& st = state[static_cast<std::size_t>(cur + d)];
        if (st == 1) {
          st = 2;
          stack.push_back(cur + d);
        }
      }
    }
  }
  return components;
}

/// Whether boundary(A) is one component under full (3^n - 1) adjacency.
inline bool is_boundary_connected(const GridSet& a, Adjacency interior_adj = Adjacency::Full) {
  return component_count(boundary(a, interior_adj), Adjacency::Full) == 1;
}

// ---------------------------------------------------------------------------
// Decomposition of K + T

struct DecompositionReport {
  bool swapped = false;  // K and T were exchanged so that |K| >= |T|
  bool sum_equals_k_plus_dt = false;          // K+T = K+dT
  bool sum_equals_union = false;              // K+T = (dK+dT) u (K(-)T)
  bool union_disjoint = false;                // (dK+dT) n (K(-)T) = {}
  bool boundary_sum_equals_dk_plus_t = false;  // dK+dT = dK+T
  std::uint64_t sum_cells = 0;
  std::uint64_t boundary_sum_cells = 0;
  std::uint64_t erosion_cells = 0;

  bool all() const {
    return sum_equals_k_plus_dt && sum_equals_union && union_disjoint && boundary_sum_equals_dk_plus_t;
  }
};

/// Cell-exact verdicts for the decomposition identities of K + T.
inline DecompositionReport decomposition_check(GridSet k, GridSet t, Adjacency adj = Adjacency::Full) {
  detail::require_compatible(k, t);
  DecompositionReport rep;
  if (k.count() < t.count()) {
    std::swap(k, t);
    rep.swapped = true;
  }
  const GridSet dk = boundary(k, adj);
  const GridSet dt = boundary(t, adj);
  const GridSet sum = dilate(k, t);
  const GridSet bsum = dilate(dk, dt);
  const GridSet hole = erode_open(k, t, adj);
  rep.sum_equals_k_plus_dt = sum == dilate(k, dt);
  rep.sum_equals_union = sum == set_union(bsum, hole);
  rep.union_disjoint = are_disjoint(bsum, hole);
  rep.boundary_sum_equals_dk_plus_t = bsum == dilate(dk, t);
  rep.sum_cells = sum.count();
  rep.boundary_sum_cells = bsum.count();
  rep.erosion_cells = hole.count();
  return rep;
}

/// If boundary(T) lies in interior(K) then T lies in interior(K); returns
/// whether the implication holds (vacuously true when the premise fails).
struct LemmaBcOutcome {
  bool premise = false;
  bool conclusion = false;
  bool holds() const { return !premise || conclusion; }
};

inline LemmaBcOutcome lemma_bc(const GridSet& k, const GridSet& t, Adjacency adj = Adjacency::Full) {
  detail::require_compatible(k, t);
  const GridSet ik = interior(k, adj);
  LemmaBcOutcome out;
  out.premise = is_subset(boundary(t, adj), ik);
  out.conclusion = is_subset(t, ik);
  return out;
}

inline bool check_lemma_bc(const GridSet& k, const GridSet& t, Adjacency adj = Adjacency::Full) {
  return lemma_bc(k, t, adj).holds();
}

}  // namespace bmink::voxel
