#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dagmm/errors.hpp"

namespace dagmm {

using Adjacency = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
using RealMatrix = Eigen::MatrixXd;
using LabelMatrix = Eigen::MatrixXi;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Diagonal entries of Z. Groups are 0-based internally.
inline constexpr int kNoGroup = -1;

/// A topological order held as positions -> node indices, both 0-based.
/// node_at(p) is the o_p of the model; position_of(r) is its inverse.
class Ordering {
 public:
  Ordering() = default;
  /// Throws ConfigError unless `nodes` is a permutation of 0..n-1.
  explicit Ordering(std::vector<int> nodes);
  static Ordering identity(std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  int node_at(std::size_t position) const { return nodes_[position]; }
  int position_of(std::size_t node) const { return positions_[node]; }
  std::span<const int> nodes() const noexcept { return nodes_; }
  std::span<const int> positions() const noexcept { return positions_; }
  Ordering inverse() const;

  /// Exchanges the nodes held at two positions.
  void swap_positions(std::size_t p, std::size_t q);

  bool operator==(const Ordering&) const = default;

 private:
  std::vector<int> nodes_;
  std::vector<int> positions_;
};

/// out(p, q) = m(o_p, o_q).
template <typename Derived>
typename Derived::PlainObject reorder(const Eigen::MatrixBase<Derived>& m, const Ordering& o) {
  if (m.rows() != m.cols() || static_cast<std::size_t>(m.rows()) != o.size())
    throw DimensionMismatch("reorder: matrix is " + std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", ordering has " +
                            std::to_string(o.size()) + " entries");
  const auto n = static_cast<Eigen::Index>(o.size());
  typename Derived::PlainObject out(n, n);
  for (Eigen::Index q = 0; q < n; ++q)
    for (Eigen::Index p = 0; p < n; ++p) out(p, q) = m(o.node_at(p), o.node_at(q));
  return out;
}

/// out(p, :) = m(o_p, :), for the n x K membership matrix.
template <typename Derived>
typename Derived::PlainObject reorder_rows(const Eigen::MatrixBase<Derived>& m, const Ordering& o) {
  if (static_cast<std::size_t>(m.rows()) != o.size())
    throw DimensionMismatch("reorder_rows: row count differs from ordering size");
  typename Derived::PlainObject out(m.rows(), m.cols());
  for (Eigen::Index p = 0; p < m.rows(); ++p) out.row(p) = m.row(o.node_at(p));
  return out;
}

/// True when every entry strictly below the diagonal is zero.
template <typename Derived>
bool is_upper_triangular(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index q = 0; q < m.cols(); ++q)
    for (Eigen::Index p = q + 1; p < m.rows(); ++p)
      if (m(p, q) != 0) return false;
  return true;
}

}  // namespace dagmm
