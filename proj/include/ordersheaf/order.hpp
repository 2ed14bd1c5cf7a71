#ifndef ORDERSHEAF_ORDER_HPP
#define ORDERSHEAF_ORDER_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "ordersheaf/error.hpp"

namespace ordersheaf {

/// Dense non-negative id of an alternative (candidate). Human-readable labels
/// exist only at the IO boundary; all computation works on ids.
using AltId = std::int32_t;

/// Dense non-negative id of a vertex (voter/agent) in an interaction graph.
using VertexId = std::int32_t;

/// Largest domain all_total_orders will enumerate (10! ≈ 3.6M orders).
inline constexpr int kMaxEnumerableOrderDomain = 10;

/** A strict total order over a finite set of alternatives.
 *
 * Stored as a ranking from best to worst. Immutable after construction;
 * construction rejects empty or duplicated rankings.
 */
class TotalOrder {
 public:
  explicit TotalOrder(std::vector<AltId> best_to_worst);

  const std::vector<AltId>& ranking() const noexcept { return ranking_; }
  int size() const noexcept { return static_cast<int>(ranking_.size()); }

  /// The ranked alternatives as a sorted vector.
  std::vector<AltId> domain() const;

  bool contains(AltId a) const noexcept;

  /// 0-based rank of `a` (0 = best). Throws Lookup if `a` is not ranked.
  int position_of(AltId a) const;

  /// True iff `a` is ranked strictly above `b`. Throws Lookup on absent ids.
  bool prefers(AltId a, AltId b) const;

  /// The induced order on `subset`: same relative ranks, smaller domain.
  /// `subset` must be a nonempty, duplicate-free subset of the domain.
  TotalOrder restricted_to(std::span<const AltId> subset) const;

  friend bool operator==(const TotalOrder&, const TotalOrder&) = default;
  friend auto operator<=>(const TotalOrder&, const TotalOrder&) = default;

 private:
  std::vector<AltId> ranking_;
};

/// Number of discordant pairs between two orders on the same domain.
/// Symmetric, zero iff equal, bounded by n(n-1)/2, and obeys the triangle
/// inequality. Throws DomainViolation when the domains differ.
int kendall_tau(const TotalOrder& lhs, const TotalOrder& rhs);

/// All |domain|! total orders on `domain`, sorted lexicographically by id
/// sequence. Throws Capacity when |domain| > kMaxEnumerableOrderDomain and
/// DomainViolation on empty or duplicated input.
std::vector<TotalOrder> all_total_orders(std::span<const AltId> domain);

/// True iff `sub`'s domain is contained in `full`'s and the restriction of
/// `full` to that domain equals `sub`. Runs in O(|full| * |sub|) without
/// allocating.
bool restriction_matches(const TotalOrder& full, const TotalOrder& sub);

/// Sorted intersection of two sorted id vectors.
std::vector<AltId> id_intersection(std::span<const AltId> a, std::span<const AltId> b);

/// Sorted union of two sorted id vectors.
std::vector<AltId> id_union(std::span<const AltId> a, std::span<const AltId> b);

}  // namespace ordersheaf

#endif  // ORDERSHEAF_ORDER_HPP
