#include "ineq/random.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

namespace ineq {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
constexpr double kSqrt1_2 = 0.70710678118654752440;

// Inverse-CDF is used only when the truncation interval holds at least this
// much probability mass; below it the relative error of the CDF difference
// is no longer controlled and we switch to rejection.
constexpr double kMinInverseMass = 1e-10;
// One-sided intervals starting this many sigmas into the tail go straight to
// exponential rejection, which stays exact arbitrarily far out.
constexpr double kTailStart = 5.0;
// Interval mass below this is indistinguishable from an empty region.
constexpr double kLogEmptyMass = -690.77552789821368;  // log(1e-300)

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Key the SplitMix64 expander on both ids so distinct streams share no
  // state-derivation path; the odd multiplier decorrelates adjacent ids.
  std::uint64_t x = seed ^ (stream_id * 0xD2B74407B1CE6E93ULL + 0x632BE59BD9B4E019ULL);
  for (auto& s : s_) s = splitmix64(x);
  // All-zero state is invalid for xoshiro; the expander makes it
  // astronomically unlikely, but guard anyway.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  // (k + 0.5) / 2^53 with k uniform on [0, 2^53): strictly inside (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::standard_normal() { return normal_quantile(uniform()); }

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw internal_error("gamma draw: shape must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang small-shape trick).
    const double u = uniform();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x - 0.5 * kLog2Pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double normal_sf(double x) { return 0.5 * std::erfc(x * kSqrt1_2); }

double log_normal_sf(double x) {
  if (x < 30.0) {
    const double s = normal_sf(x);
    if (s > 0.0) return std::log(s);
  }
  // Asymptotic expansion of the Mills ratio: log(phi(x)/x) + log-series.
  const double x2 = x * x;
  const double series =
      1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - 0.5 * kLog2Pi - std::log(x) + std::log(series);
}

// Wichura's AS 241 (PPND16): relative error below 1e-15 over (0,1).
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw internal_error("normal quantile: p must lie strictly in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

namespace {

// Draw from N(0,1) on [a, inf), a > 0, optionally rejecting above b:
// shifted-exponential proposal with the optimal rate (Robert 1995).
double tail_rejection(RngStream& rng, double a, double b) {
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a - std::log(rng.uniform()) / lambda;
    if (x > b) continue;
    const double diff = x - lambda;
    if (std::log(rng.uniform()) <= -0.5 * diff * diff) return x;
  }
}

// Uniform proposal on [a, b] with the Gaussian kernel as acceptance weight,
// normalised at the interval point closest to the mode.
double band_rejection(RngStream& rng, double a, double b) {
  const double c = std::max(a, 0.0);  // b > 0 is guaranteed by the caller
  for (;;) {
    const double x = a + (b - a) * rng.uniform();
    if (std::log(rng.uniform()) <= 0.5 * (c * c - x * x)) return x;
  }
}

// Standardised truncated draw on [a, b] with b > 0 ensured by reflection.
double truncated_standard_normal(RngStream& rng, double a, double b) {
  if (b <= 0.0) return -truncated_standard_normal(rng, -b, -a);

  // Interval mass, computed without cancellation on either side of zero.
  double mass;
  if (a <= 0.0) {
    const double eb = (b == kInf) ? 1.0 : std::erf(b * kSqrt1_2);
    const double ea = (a == -kInf) ? -1.0 : std::erf(a * kSqrt1_2);
    mass = 0.5 * (eb - ea);
  } else {
    mass = normal_sf(a) - ((b == kInf) ? 0.0 : normal_sf(b));
  }

  if (mass >= kMinInverseMass && a < kTailStart) {
    const double u = rng.uniform();
    if (a <= 0.0) {
      const double pa = (a == -kInf) ? 0.0 : normal_cdf(a);
      return normal_quantile(pa + u * mass);
    }
    // Work on the survival scale so the far tail keeps full precision.
    const double qb = (b == kInf) ? 0.0 : normal_sf(b);
    return -normal_quantile(qb + u * mass);
  }

  // Rejection regimes.  First make sure the region is representable at all.
  const double log_mass_bound =
      (b == kInf) ? log_normal_sf(a)
                  : std::log(b - a) - 0.5 * std::max(a, 0.0) * std::max(a, 0.0) -
                        0.5 * kLog2Pi;
  if (log_mass_bound < kLogEmptyMass)
    throw internal_error("numerically empty truncation");

  if (b == kInf) return tail_rejection(rng, a, b);
  if (a > 0.0) {
    const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
    if ((b - a) * lambda >= 1.0) return tail_rejection(rng, a, b);
  }
  return band_rejection(rng, a, b);
}

}  // namespace

double draw_truncated_normal(RngStream& rng, double mu, double sigma,
                             double lo, double hi) {
  if (!(sigma > 0.0))
    throw internal_error("truncated normal: sigma must be positive");
  if (!(lo < hi)) {
    std::ostringstream msg;
    msg << "truncated normal: empty interval [" << lo << ", " << hi << "]";
    throw internal_error(msg.str());
  }
  const double a = (lo == -kInf) ? -kInf : (lo - mu) / sigma;
  const double b = (hi == kInf) ? kInf : (hi - mu) / sigma;
  const double z = truncated_standard_normal(rng, a, b);
  double x = mu + sigma * z;
  // Standardisation can round a boundary draw just outside; clamp back so
  // the in-interval guarantee is exact.
  if (x < lo) x = lo;
  if (x > hi) x = hi;
  return x;
}

VecX draw_mvn(RngStream& rng, const VecX& mean, const MatX& cov) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size())
    throw internal_error("mvn draw: dimension mismatch");
  Eigen::LLT<MatX> llt(cov);
  if (llt.info() != Eigen::Success)
    throw internal_error("covariance not SPD");
  VecX z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.standard_normal();
  return mean + llt.matrixL() * z;
}

MatX draw_inverse_wishart(RngStream& rng, double nu, const MatX& scale) {
  const Eigen::Index p = scale.rows();
  if (scale.cols() != p) throw internal_error("inverse-Wishart: scale not square");
  if (!(nu > static_cast<double>(p) - 1.0))
    throw internal_error("inverse-Wishart: nu must exceed p-1");

  Eigen::LLT<MatX> llt_scale(scale);
  if (llt_scale.info() != Eigen::Success)
    throw internal_error("inverse-Wishart: scale not SPD");

  // Wishart(nu, scale^-1) via Bartlett: W = L A A' L', scale^-1 = L L'.
  const MatX scale_inv =
      llt_scale.solve(MatX::Identity(p, p));
  Eigen::LLT<MatX> llt_inv(scale_inv);
  if (llt_inv.info() != Eigen::Success)
    throw internal_error("inverse-Wishart: scale not SPD");

  MatX a = MatX::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double chi2 = 2.0 * rng.gamma(0.5 * (nu - static_cast<double>(i)));
    a(i, i) = std::sqrt(chi2);
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = rng.standard_normal();
  }
  const MatX la = MatX(llt_inv.matrixL()) * a;
  const MatX w = la * la.transpose();

  Eigen::LLT<MatX> llt_w(w);
  if (llt_w.info() != Eigen::Success)
    throw internal_error("inverse-Wishart: degenerate Bartlett draw");
  MatX x = llt_w.solve(MatX::Identity(p, p));
  return 0.5 * (x + x.transpose());  // keep the draw exactly symmetric
}

}  // namespace ineq
