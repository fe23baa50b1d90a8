#pragma once

namespace kycvar {

/// Inverse of the standard normal CDF for p in (0, 1).
/// Throws DomainError outside the open interval.
double normal_quantile(double p);

}  // namespace kycvar
