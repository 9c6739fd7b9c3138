#pragma once

// Elementary random draws used by the Gibbs engine: univariate truncated
// normal, multivariate normal, inverse-Wishart.  All draws are reproducible:
// identical (seed, stream_id, draw index) yields identical output.

#include <cstdint>

#include "ineq/types.hpp"

namespace ineq {

// xoshiro256++ keyed by (seed, stream_id) through SplitMix64.  Explicit
// sub-streams let callers assign one independent generator per purpose
// (per household, per chain) so results do not depend on scheduling.
// Single-owner: parallel callers must hold distinct streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  double uniform();          // strictly inside (0,1)
  double standard_normal();  // inverse-CDF transform of uniform()
  double gamma(double shape);  // unit scale, shape > 0

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t s_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

// Scalar Gaussian helpers, accurate over the whole double range.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);      // 1 - cdf, no cancellation in the upper tail
double log_normal_sf(double x);  // log(normal_sf(x)), finite far beyond x~38
double normal_quantile(double p);  // inverse cdf, p in (0,1)

// One exact draw from N(mu, sigma^2) restricted to [lo, hi] (ends may be
// infinite, lo < hi).  Inverse-CDF when the interval mass is >= 1e-10 and the
// interval is not deep in one tail; one-sided exponential rejection for far
// tails; uniform-band rejection for narrow far intervals.  Throws
// internal_error("numerically empty truncation") when the mass is below
// 1e-300.  The returned value lies in [lo, hi] exactly.
double draw_truncated_normal(RngStream& rng, double mu, double sigma,
                             double lo, double hi);

// mean + L z with L the lower Cholesky factor of cov and z iid N(0,1).
VecX draw_mvn(RngStream& rng, const VecX& mean, const MatX& cov);

// Inverse-Wishart(nu, S): Bartlett draw of Wishart(nu, S^-1), then inversion.
// Requires nu > p - 1.
MatX draw_inverse_wishart(RngStream& rng, double nu, const MatX& scale);

}  // namespace ineq
