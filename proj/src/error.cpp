#include "socam/error.hpp"

namespace socam {

std::string_view errcName(Errc code) {
  switch (code) {
    case Errc::InvalidTerm: return "InvalidTerm";
    case Errc::InvalidLiteral: return "InvalidLiteral";
    case Errc::GroundednessViolation: return "GroundednessViolation";
    case Errc::UndeclaredPredicate: return "UndeclaredPredicate";
    case Errc::ClassificationUpgrade: return "ClassificationUpgrade";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownPrefix: return "UnknownPrefix";
    case Errc::UnterminatedLiteral: return "UnterminatedLiteral";
    case Errc::CyclicHierarchy: return "CyclicHierarchy";
    case Errc::DanglingDependsOn: return "DanglingDependsOn";
    case Errc::MissingClassification: return "MissingClassification";
    case Errc::DuplicateModule: return "DuplicateModule";
    case Errc::DuplicateDeclaration: return "DuplicateDeclaration";
    case Errc::DependencyViolation: return "DependencyViolation";
    case Errc::UnresolvedReference: return "UnresolvedReference";
    case Errc::UnknownModule: return "UnknownModule";
    case Errc::UnknownClass: return "UnknownClass";
    case Errc::UnknownProperty: return "UnknownProperty";
    case Errc::MalformedMetric: return "MalformedMetric";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UnknownParameter: return "UnknownParameter";
    case Errc::UnsafeRule: return "UnsafeRule";
    case Errc::UnstratifiableNegation: return "UnstratifiableNegation";
    case Errc::NonDeducedHead: return "NonDeducedHead";
    case Errc::FixpointBudgetExceeded: return "FixpointBudgetExceeded";
    case Errc::UnknownPredicate: return "UnknownPredicate";
    case Errc::DuplicateServiceId: return "DuplicateServiceId";
    case Errc::UnsortedTrace: return "UnsortedTrace";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message,
                     const std::optional<SourceLocation>& where) {
  std::string out;
  if (where) {
    out += std::to_string(where->line) + ":" + std::to_string(where->column) + ": ";
  }
  out += errcName(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, std::string message, std::optional<SourceLocation> where)
    : std::runtime_error(decorate(code, message, where)),
      code_(code),
      where_(where),
      detail_(std::move(message)) {}

}  // namespace socam
