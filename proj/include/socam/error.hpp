#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace socam {

enum class Errc {
  // rdf-model
  InvalidTerm,
  InvalidLiteral,
  GroundednessViolation,
  UndeclaredPredicate,
  ClassificationUpgrade,
  // turtle / rule / trace syntax
  SyntaxError,
  UnknownPrefix,
  UnterminatedLiteral,
  // ontology
  CyclicHierarchy,
  DanglingDependsOn,
  MissingClassification,
  DuplicateModule,
  DuplicateDeclaration,
  DependencyViolation,
  UnresolvedReference,
  UnknownModule,
  UnknownClass,
  UnknownProperty,
  // qoc
  MalformedMetric,
  OutOfRange,
  UnknownParameter,
  // reasoner
  UnsafeRule,
  UnstratifiableNegation,
  NonDeducedHead,
  FixpointBudgetExceeded,
  UnknownPredicate,
  // runtime
  DuplicateServiceId,
  UnsortedTrace,
  InvalidConfig,
};

std::string_view errcName(Errc code);

struct SourceLocation {
  std::size_t line = 0;    // 1-based
  std::size_t column = 0;  // 1-based
};

// All failures surface as socam::Error; `code()` identifies the failure kind.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::optional<SourceLocation> where = std::nullopt);

  Errc code() const noexcept { return code_; }
  const std::optional<SourceLocation>& where() const noexcept { return where_; }
  // Message without the location/code decoration.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::optional<SourceLocation> where_;
  std::string detail_;
};

}  // namespace socam
