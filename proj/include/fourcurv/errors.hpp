#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace fourcurv {

/// Base class for every error raised by the library. The CLI maps these to
/// exit code 2 and a JSON error document on stderr.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

enum class SymmetryIdentity { antisymmetry, pair_symmetry, first_bianchi };

const char* to_string(SymmetryIdentity id);

class SymmetryViolation : public Error {
public:
  SymmetryViolation(SymmetryIdentity which, std::array<int, 4> index, double magnitude);
  SymmetryIdentity which() const noexcept { return which_; }
  /// 0-based index of the worst offending component.
  const std::array<int, 4>& index() const noexcept { return index_; }
  double magnitude() const noexcept { return magnitude_; }

private:
  SymmetryIdentity which_;
  std::array<int, 4> index_;
  double magnitude_;
};

#define FOURCURV_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                        \
  public:                                                            \
    explicit Name(const std::string& what) : Error(#Name, what) {}   \
  }

FOURCURV_DEFINE_ERROR(InvalidInput);
FOURCURV_DEFINE_ERROR(ConflictingEntry);
FOURCURV_DEFINE_ERROR(NonOrthonormalFrame);
FOURCURV_DEFINE_ERROR(NotPairSymmetric);
FOURCURV_DEFINE_ERROR(NotEinstein);
FOURCURV_DEFINE_ERROR(FrameRecoveryFailure);
FOURCURV_DEFINE_ERROR(DegeneratePlane);
FOURCURV_DEFINE_ERROR(BadK);
FOURCURV_DEFINE_ERROR(BadSpec);
FOURCURV_DEFINE_ERROR(NotTraceFree);
FOURCURV_DEFINE_ERROR(TracelessResidualTooLarge);
FOURCURV_DEFINE_ERROR(StencilOutOfDomain);
FOURCURV_DEFINE_ERROR(SingularMetric);
FOURCURV_DEFINE_ERROR(NotEinsteinChart);
FOURCURV_DEFINE_ERROR(InvalidStructure);
FOURCURV_DEFINE_ERROR(ParseError);

#undef FOURCURV_DEFINE_ERROR

}  // namespace fourcurv
