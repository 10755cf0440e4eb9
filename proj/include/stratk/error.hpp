#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stratk {

/// Every failure carries a machine-readable kind and the id of the entity
/// that caused it (a cell id, a matrix, a file path...).
class Error : public std::runtime_error {
 public:
  enum class Kind {
    parse,
    composability,
    domain,
    precondition,
    map,
    unsupported_category,
    naturality,
    not_stratum_preserving,
    ambiguous,
    not_a_bundle,
    construction,
    integrity,
    budget,
    base_mismatch,
    usage,
  };

  Error(Kind kind, std::string entity, const std::string& message)
      : std::runtime_error(message + (entity.empty() ? "" : " [" + entity + "]")),
        kind_(kind),
        entity_(std::move(entity)) {}

  Kind kind() const { return kind_; }
  const std::string& entity() const { return entity_; }

 private:
  Kind kind_;
  std::string entity_;
};

const char* to_string(Error::Kind kind);

struct Issue {
  std::string code;
  std::string entity;
  std::string message;
};

/// Collects every violated invariant instead of stopping at the first.
struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const { return issues.empty(); }
  void add(std::string code, std::string entity, std::string message) {
    issues.push_back({std::move(code), std::move(entity), std::move(message)});
  }
  bool has(const std::string& code) const {
    for (const auto& i : issues)
      if (i.code == code) return true;
    return false;
  }
  bool has(const std::string& code, const std::string& entity) const {
    for (const auto& i : issues)
      if (i.code == code && i.entity == entity) return true;
    return false;
  }
};

}  // namespace stratk
