#ifndef LANE_EMDEN_ERRORS_HPP
#define LANE_EMDEN_ERRORS_HPP

#include <cstdio>
#include <stdexcept>
#include <string>

namespace lane_emden {

/// Root of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LANE_EMDEN_ERROR(Name)            \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

// geometry
LANE_EMDEN_ERROR(BadDomain);
LANE_EMDEN_ERROR(BadSpacing);
LANE_EMDEN_ERROR(EmptyGrid);
LANE_EMDEN_ERROR(GridMismatch);

// elliptic / solver
LANE_EMDEN_ERROR(LostPositivity);
LANE_EMDEN_ERROR(SingularJacobian);

// green
LANE_EMDEN_ERROR(OutsideDomain);
LANE_EMDEN_ERROR(CoincidentPoints);
LANE_EMDEN_ERROR(CoincidentPeaks);

// asymptotics
LANE_EMDEN_ERROR(NoPeaks);
LANE_EMDEN_ERROR(BubbleClipped);
LANE_EMDEN_ERROR(BallClipped);
LANE_EMDEN_ERROR(SamplesTooClose);
LANE_EMDEN_ERROR(InsufficientSamples);
LANE_EMDEN_ERROR(IdentityViolated);

// io / cli
LANE_EMDEN_ERROR(ConfigError);
LANE_EMDEN_ERROR(CorruptCheckpoint);

#undef LANE_EMDEN_ERROR

/// Iterative method hit its iteration cap.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double residual)
      : Error(what + " (iterations " + std::to_string(iterations) + ", residual " +
              format_residual(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  static std::string format_residual(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", r);
    return buf;
  }

  int iterations_;
  double residual_;
};

}  // namespace lane_emden

#endif  // LANE_EMDEN_ERRORS_HPP
