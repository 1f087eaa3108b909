#include "pdm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdm/metrics.hpp"
#include "pdm/power_alloc.hpp"

namespace pdm {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t state = seed;
  std::seed_seq seq{splitmix64(state), splitmix64(state), splitmix64(state), splitmix64(state)};
  engine_.seed(seq);
}

Rng Rng::shard(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master ^ (index * 0xd1342543de82ef95ULL);
  splitmix64(state);
  return Rng(splitmix64(state));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform_left() { return 1.0 - uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  has_spare_ = true;
  return u * factor;
}

namespace {

/// Running mean and variance (Welford).
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double standard_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

McResult mc_af_mse(const NetworkParams& net, const Eigen::VectorXd& p, const McConfig& cfg) {
  net.check();
  const auto terms = af_terms(net, p);
  const Eigen::Index m = net.size();
  const double ey2 = terms.received_power();
  const double k_source = terms.a / ey2;
  const Eigen::VectorXd k_field = (terms.c + net.beta * terms.a) / ey2;

  Rng rng(cfg.seed);
  Moments sr;
  std::vector<Moments> fr(static_cast<std::size_t>(m));
  Eigen::VectorXd u(m);
  for (std::size_t i = 0; i < cfg.n_samples; ++i) {
    const double s = rng.normal();
    for (Eigen::Index k = 0; k < m; ++k) u(k) = net.beta(k) * s + rng.normal();
    const double y = rng.normal() + terms.c.dot(u);
    const double es = s - k_source * y;
    sr.push(es * es);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double eu = u(k) - k_field(k) * y;
      fr[static_cast<std::size_t>(k)].push(eu * eu);
    }
  }

  McResult out;
  out.sr_mse = sr.mean;
  out.sr_se = sr.standard_error();
  out.fr_mse.resize(m);
  out.fr_se.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    out.fr_mse(k) = fr[static_cast<std::size_t>(k)].mean;
    out.fr_se(k) = fr[static_cast<std::size_t>(k)].standard_error();
  }
  return out;
}

BruteForceResult brute_force_power(const BoundFn& bound, const Eigen::VectorXd& r, double total_power,
                                   double resolution) {
  const Eigen::Index m = r.size();
  if (m < 1) throw Error(ErrorCode::InvalidInput, "need at least one sensor");
  if (m > 3) throw Error(ErrorCode::DimensionTooLarge, "exhaustive power search supports M <= 3");
  if (!(resolution > 0.0 && resolution <= 1.0)) throw Error(ErrorCode::InvalidInput, "resolution must lie in (0, 1]");

  const long n = std::lround(1.0 / resolution);
  BruteForceResult best{std::numeric_limits<double>::infinity(), Eigen::VectorXd::Zero(m)};
  Eigen::VectorXd p(m);
  auto consider = [&](const Eigen::VectorXd& shares) {
    p = (shares * total_power).cwiseQuotient(r);
    const double v = bound(p);
    if (v < best.value) {
      best.value = v;
      best.allocation = p;
    }
  };

  Eigen::VectorXd shares(m);
  if (m == 1) {
    shares(0) = 1.0;
    consider(shares);
  } else if (m == 2) {
    for (long i = 0; i <= n; ++i) {
      shares(0) = static_cast<double>(i) / static_cast<double>(n);
      shares(1) = static_cast<double>(n - i) / static_cast<double>(n);
      consider(shares);
    }
  } else {
    for (long i = 0; i <= n; ++i)
      for (long j = 0; i + j <= n; ++j) {
        shares(0) = static_cast<double>(i) / static_cast<double>(n);
        shares(1) = static_cast<double>(j) / static_cast<double>(n);
        shares(2) = static_cast<double>(n - i - j) / static_cast<double>(n);
        consider(shares);
      }
  }
  return best;
}

double brute_force_waterfill(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& gamma_prime,
                             double rate_bits, double resolution) {
  const Eigen::Index m = lambdas.size();
  if (m < 1 || gamma_prime.size() != m) throw Error(ErrorCode::InvalidInput, "lambdas and gamma' must match");
  if (m > 3) throw Error(ErrorCode::DimensionTooLarge, "exhaustive rate search supports M <= 3");
  if (!(rate_bits >= 0.0)) throw Error(ErrorCode::DomainError, "rate must be non-negative");
  if (!(resolution > 0.0)) throw Error(ErrorCode::InvalidInput, "resolution must be positive");

  const Eigen::VectorXd w = lambdas.cwiseProduct(gamma_prime);
  auto cost = [&](double r0, double r1, double r2) {
    const double rates[3] = {r0, r1, r2};
    double d = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) d += w(k) * std::exp2(-2.0 * rates[k]);
    return d;
  };

  if (m == 1) return cost(rate_bits, 0.0, 0.0);
  const long n = static_cast<long>(std::floor(rate_bits / resolution));
  double best = std::numeric_limits<double>::infinity();
  if (m == 2) {
    for (long i = 0; i <= n; ++i) {
      const double r0 = static_cast<double>(i) * resolution;
      best = std::min(best, cost(r0, std::max(0.0, rate_bits - r0), 0.0));
      best = std::min(best, cost(std::max(0.0, rate_bits - r0), r0, 0.0));
    }
    return best;
  }
  for (long i = 0; i <= n; ++i)
    for (long j = 0; i + j <= n; ++j) {
      const double r0 = static_cast<double>(i) * resolution;
      const double r1 = static_cast<double>(j) * resolution;
      const double r2 = std::max(0.0, rate_bits - r0 - r1);
      // The remainder absorbs the off-grid part; rotate it through every slot.
      best = std::min({best, cost(r0, r1, r2), cost(r2, r0, r1), cost(r1, r2, r0)});
    }
  return best;
}

std::vector<double> decade_grid(int lo, int hi, int per_decade) {
  std::vector<double> out;
  for (int k = lo * per_decade; k <= hi * per_decade; ++k)
    out.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
  return out;
}

namespace {

struct Sums {
  Eigen::VectorXd sr_upper, sr_lower, fr_upper, fr_lower;
  explicit Sums(Eigen::Index n)
      : sr_upper(Eigen::VectorXd::Zero(n)), sr_lower(Eigen::VectorXd::Zero(n)),
        fr_upper(Eigen::VectorXd::Zero(n)), fr_lower(Eigen::VectorXd::Zero(n)) {}

  BoundMeans mean(double trials) const {
    return {sr_upper / trials, sr_lower / trials, fr_upper / trials, fr_lower / trials};
  }
};

void accumulate(Sums& sums, Eigen::Index k, const NetworkParams& net, double per_sensor, PowerMode mode,
                FrLowerMode fr_mode) {
  if (mode == PowerMode::Fixed) {
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(net.size(), per_sensor);
    sums.sr_upper(k) += sr_upper(net, p).distortion;
    sums.sr_lower(k) += sr_lower(net, p).distortion;
    sums.fr_upper(k) += fr_upper(net, p).distortion;
    sums.fr_lower(k) += fr_lower(net, p, fr_mode).distortion;
    return;
  }
  const double budget = per_sensor * net.r.sum();
  sums.sr_upper(k) += sr_upper_opt(net, budget).value;
  sums.sr_lower(k) += sr_lower_opt(net, budget).value;
  sums.fr_upper(k) += fr_upper_opt(net, budget).value;
  sums.fr_lower(k) += fr_lower_opt(net, budget, fr_mode).value;
}

}  // namespace

GapExperiment matched_mismatched_experiment(int sensors, std::size_t trials, std::uint64_t seed,
                                            PowerMode mode, const std::vector<double>& sweep,
                                            FrLowerMode fr_mode) {
  if (sensors < 1) throw Error(ErrorCode::InvalidInput, "need at least one sensor");
  if (trials < 1) throw Error(ErrorCode::InvalidInput, "need at least one trial");
  const Eigen::Index m = sensors;
  const auto points = static_cast<Eigen::Index>(sweep.size());
  Sums matched(points), mismatched(points);

  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = Rng::shard(seed, t);
    Eigen::VectorXd alpha(m), beta(m);
    for (Eigen::Index i = 0; i < m; ++i) alpha(i) = rng.uniform_left();
    for (Eigen::Index i = 0; i < m; ++i) beta(i) = rng.uniform_left();
    std::sort(alpha.begin(), alpha.end());
    std::sort(beta.begin(), beta.end());
    const NetworkParams same = NetworkParams::unit_weights(alpha, beta);
    const NetworkParams reverse = NetworkParams::unit_weights(alpha, beta.reverse());
    for (Eigen::Index k = 0; k < points; ++k) {
      const double x = sweep[static_cast<std::size_t>(k)];
      accumulate(matched, k, same, x, mode, fr_mode);
      accumulate(mismatched, k, reverse, x, mode, fr_mode);
    }
  }

  GapExperiment out;
  out.sweep = sweep;
  out.mode = mode;
  out.fr_lower_mode = fr_mode;
  out.trials = trials;
  out.matched = matched.mean(static_cast<double>(trials));
  out.mismatched = mismatched.mean(static_cast<double>(trials));
  return out;
}

}  // namespace pdm
