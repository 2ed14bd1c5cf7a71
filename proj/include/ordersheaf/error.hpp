#ifndef ORDERSHEAF_ERROR_HPP
#define ORDERSHEAF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ordersheaf {

/// Machine-readable failure categories. Every ordersheaf::Error carries one,
/// so callers (and the CLI) can branch without parsing message text.
enum class ErrorCode {
  DomainViolation,      // value outside the set an operation is defined on
  Capacity,             // enumeration/size cap exceeded
  Lookup,               // id not present in a container that was queried
  Validation,           // structurally invalid object (duplicate edge, bad map, ...)
  ParseSyntax,          // document is not well-formed JSON
  UnknownLabel,         // document references an undeclared alternative/voter
  DuplicateVoter,       // document declares the same voter name twice
  OrderNotPermutation,  // a voter's order is not a permutation of its visibility
  DanglingEdge,         // document edge references an undeclared voter
  InvalidQuotient,      // quotient map is not total over the declared voters
  Io,                   // file/stream failure
};

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainViolation: return "domain_violation";
    case ErrorCode::Capacity: return "capacity";
    case ErrorCode::Lookup: return "lookup";
    case ErrorCode::Validation: return "validation";
    case ErrorCode::ParseSyntax: return "parse_syntax";
    case ErrorCode::UnknownLabel: return "unknown_label";
    case ErrorCode::DuplicateVoter: return "duplicate_voter";
    case ErrorCode::OrderNotPermutation: return "order_not_permutation";
    case ErrorCode::DanglingEdge: return "dangling_edge";
    case ErrorCode::InvalidQuotient: return "invalid_quotient";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ordersheaf

#endif  // ORDERSHEAF_ERROR_HPP
