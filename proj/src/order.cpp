#include "ordersheaf/order.hpp"

#include <algorithm>
#include <string>

namespace ordersheaf {

namespace {

std::string id_list(std::span<const AltId> ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i]);
  }
  return out + "}";
}

}  // namespace

TotalOrder::TotalOrder(std::vector<AltId> best_to_worst)
    : ranking_(std::move(best_to_worst)) {
  if (ranking_.empty()) {
    throw Error(ErrorCode::DomainViolation, "total order must rank at least one alternative");
  }
  std::vector<AltId> sorted = ranking_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::Validation, "ranking contains a duplicate alternative: " + id_list(ranking_));
  }
  if (sorted.front() < 0) {
    throw Error(ErrorCode::Validation, "alternative ids must be non-negative");
  }
}

std::vector<AltId> TotalOrder::domain() const {
  std::vector<AltId> sorted = ranking_;
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

bool TotalOrder::contains(AltId a) const noexcept {
  return std::find(ranking_.begin(), ranking_.end(), a) != ranking_.end();
}

int TotalOrder::position_of(AltId a) const {
  auto it = std::find(ranking_.begin(), ranking_.end(), a);
  if (it == ranking_.end()) {
    throw Error(ErrorCode::Lookup, "alternative " + std::to_string(a) + " is not ranked");
  }
  return static_cast<int>(it - ranking_.begin());
}

bool TotalOrder::prefers(AltId a, AltId b) const {
  return position_of(a) < position_of(b);
}

TotalOrder TotalOrder::restricted_to(std::span<const AltId> subset) const {
  if (subset.empty()) {
    throw Error(ErrorCode::DomainViolation, "restriction subset must be nonempty");
  }
  std::vector<AltId> wanted(subset.begin(), subset.end());
  std::sort(wanted.begin(), wanted.end());
  if (std::adjacent_find(wanted.begin(), wanted.end()) != wanted.end()) {
    throw Error(ErrorCode::DomainViolation, "restriction subset contains duplicates: " + id_list(subset));
  }
  // Keep the ranking's relative arrangement, dropping ids outside the subset.
  std::vector<AltId> kept;
  kept.reserve(wanted.size());
  for (AltId a : ranking_) {
    if (std::binary_search(wanted.begin(), wanted.end(), a)) kept.push_back(a);
  }
  if (kept.size() != wanted.size()) {
    throw Error(ErrorCode::DomainViolation,
                "restriction subset " + id_list(subset) + " is not contained in the order's domain");
  }
  return TotalOrder(std::move(kept));
}

int kendall_tau(const TotalOrder& lhs, const TotalOrder& rhs) {
  if (lhs.domain() != rhs.domain()) {
    throw Error(ErrorCode::DomainViolation, "kendall_tau requires orders over the same domain");
  }
  // Count pairs ranked one way by lhs and the other way by rhs. O(n^2) with a
  // position table; fine for the small domains this library works with.
  const auto& a = lhs.ranking();
  int discordant = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (rhs.prefers(a[j], a[i])) ++discordant;
    }
  }
  return discordant;
}

std::vector<TotalOrder> all_total_orders(std::span<const AltId> domain) {
  if (domain.empty()) {
    throw Error(ErrorCode::DomainViolation, "cannot enumerate orders over an empty domain");
  }
  std::vector<AltId> ids(domain.begin(), domain.end());
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorCode::DomainViolation, "enumeration domain contains duplicates: " + id_list(domain));
  }
  if (static_cast<int>(ids.size()) > kMaxEnumerableOrderDomain) {
    throw Error(ErrorCode::Capacity,
                "refusing to enumerate " + std::to_string(ids.size()) +
                    "! orders (cap is " + std::to_string(kMaxEnumerableOrderDomain) + ")");
  }
  std::vector<TotalOrder> out;
  do {
    out.emplace_back(ids);
  } while (std::next_permutation(ids.begin(), ids.end()));
  return out;
}

bool restriction_matches(const TotalOrder& full, const TotalOrder& sub) {
  // Walk `full` best-to-worst; the ids that belong to `sub`'s domain must
  // appear exactly in `sub`'s ranking sequence.
  std::size_t next = 0;
  const auto& want = sub.ranking();
  for (AltId a : full.ranking()) {
    if (!sub.contains(a)) continue;
    if (next == want.size() || want[next] != a) return false;
    ++next;
  }
  return next == want.size();
}

std::vector<AltId> id_intersection(std::span<const AltId> a, std::span<const AltId> b) {
  std::vector<AltId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<AltId> id_union(std::span<const AltId> a, std::span<const AltId> b) {
  std::vector<AltId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace ordersheaf
