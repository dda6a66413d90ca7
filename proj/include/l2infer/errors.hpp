#ifndef L2INFER_ERRORS_HPP
#define L2INFER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace l2 {

/// All-zero or otherwise unusable covariance/scale estimate.
struct DegenerateCovariance : std::runtime_error {
    explicit DegenerateCovariance(const std::string& what) : std::runtime_error(what) {}
};

/// CF inversion declined the law (too few nonzero weights); caller should
/// fall back to Monte Carlo.
struct CfInversionUnavailable : std::runtime_error {
    explicit CfInversionUnavailable(const std::string& what) : std::runtime_error(what) {}
};

/// CF inversion quadrature failed to reach its target tolerance.
struct CfInversionNoConvergence : std::runtime_error {
    CfInversionNoConvergence(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

}  // namespace l2

#endif
