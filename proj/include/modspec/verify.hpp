#pragma once

#include <string>
#include <vector>

namespace modspec {

struct OracleCheck {
    std::string name;
    double margin = 0.0;     // observed error
    double tolerance = 0.0;  // pass iff margin < tolerance
    bool passed = false;
};

/// Independent numerical oracles: trigonometric power sums against brute
/// force, the mixture-density L2 error against quadrature, the differenced
/// Jacobian against central finite differences, and the leading-order gram
/// convergence. inject_fault corrupts one check for CI self-testing.
std::vector<OracleCheck> run_oracle_suite(bool inject_fault = false);

}  // namespace modspec
