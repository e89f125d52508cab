#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pmrig/metric.hpp"

namespace pmrig {

/// A sequence n -> lambda_n of pseudometrics. Zero paths default to the
/// declared zeros of each member.
struct MetricSequence {
  std::string description;
  std::function<Pseudometric(int)> generator;
  std::function<std::vector<ZeroRecord>(int)> declared_zero_paths;

  Pseudometric at(int n) const { return generator(n); }
  std::vector<ZeroRecord> zeros_at(int n) const;
};

/// Geometric ladder n = 2^k_min, ..., 2^k_max.
std::vector<int> geometric_ladder(int k_min = 1, int k_max = 6);

/// e^{s_n} lambda_D with s_n = -1 - 1/n! + (|z|^2 + 1/n!)^{1/n}; exact
/// curvature. Throws for n < 1 or n > 170 (1/n! underflows).
Pseudometric example_4_1(int n);

/// Pullback of mu_max(alpha) under z -> (z_n - z)/(1 - conj(z_n) z): curvature
/// -4, zero of order alpha at z_n. Requires 0 < alpha < 1 and 0 < |z_n| < 1.
Pseudometric example_4_2(int n, double alpha, Complex z_n);

namespace sequences {
/// example_4_1(n).
MetricSequence smoothed_weights();
/// example_4_2(n, 1/n, 1/n): zeros of order 1/n fading into 0.
MetricSequence fading_zeros();
/// lambda_n = mu for every n.
MetricSequence constant(const Pseudometric& mu);
/// scale(1 - 1/n, mu).
MetricSequence scaled(const Pseudometric& mu);
/// mu_max(beta + 1/n).
MetricSequence mu_max_ladder(double beta);
}  // namespace sequences

/// Extrapolated limit of a sequence sampled on a ladder: least-squares fit
/// x_n = limit + slope/n over the second half of the samples.
struct LimitEstimate {
  double limit = 0.0;
  double slope = 0.0;
  double last = 0.0;
  /// |x| nonincreasing over the second half of the samples.
  bool monotone = false;
};
LimitEstimate estimate_limit(const std::vector<int>& ns, const std::vector<double>& xs);

enum class DichotomyVerdict { UniformConvergence, FadingZeros, Inconclusive };
std::string to_string(DichotomyVerdict v);

struct ZeroPathPoint {
  int n;
  Complex location;
  double order;
};

struct DichotomyOptions {
  std::vector<int> ladder = geometric_ladder();
  /// Compact set for "locally uniformly": |z| <= compact_radius.
  double compact_radius = 0.8;
  int grid_n_r = 8;
  int grid_n_t = 16;
  double tol = 1e-3;
  double tol_order = 1e-2;
  /// Largest step between consecutive zero locations at the end of the ladder.
  double tol_location = 0.05;
  /// Interior hypothesis: |q_n(z_n) - 1| at the largest n.
  double tol_hypothesis = 0.05;
};

struct DichotomyReport {
  DichotomyVerdict verdict = DichotomyVerdict::Inconclusive;
  int largest_n = 0;
  bool boundary_case = false;
  bool hypothesis_holds = false;
  std::vector<double> hypothesis_values;  // q_n(z_n) - 1
  std::optional<RateReport> hypothesis_rate;
  std::vector<double> sup_errors;  // sup over the compact set of |q_n - 1|
  LimitEstimate sup_limit;
  std::vector<ZeroPathPoint> zero_path;
  LimitEstimate order_limit;
};

/// Classifies lambda_n / mu on the ladder. The hypothesis sequence z_n is
/// the interior case when every |z_n| <= 0.99 (then q_n(z_n) -> 1 is
/// required), otherwise the boundary case (q_n(z_n) - 1 = o((1-|z_n|)^{c/2})
/// tested with fit_boundary_rate). Verdicts:
///   UNIFORM_CONVERGENCE  sup |q_n - 1| over the compact set (declared zeros
///                        included) is monotone with extrapolated limit <= tol;
///   FADING_ZEROS         otherwise, when the lowest-order zero in the compact
///                        set has orders decreasing to <= tol_order and
///                        locations whose steps shrink below tol_location;
///   INCONCLUSIVE         in every other case, including a failed hypothesis.
/// Throws DomainError naming n when lambda_n is not dominated by mu on the
/// compact sample.
DichotomyReport dichotomy_scan(const MetricSequence& seq, const Pseudometric& mu, double c,
                               const std::function<Complex(int)>& z_seq, const DichotomyOptions& options = {});

enum class LimitClass { AutomorphismLike, ConstantLike, Undetermined, NotAsserted };
std::string to_string(LimitClass c);

struct SchwarzPickSequenceReport {
  bool hypothesis_holds = false;
  RateReport hypothesis_rate;
  std::vector<double> sup_deviation;  // sup over the grid of |f_n^h - 1|
  LimitEstimate deviation_limit;
  std::vector<double> min_gap;  // max over the grid of 1 - |f_n|
  LimitEstimate gap_limit;
  LimitClass limit_class = LimitClass::NotAsserted;
  int largest_n = 0;
};

/// Hypothesis f_n^h(z_n) = 1 + o((1-|z_n|)^2) via fit_boundary_rate (|z_n| must
/// increase toward 1); when it holds, checks sup |f_n^h - 1| -> 0 on
/// |z| <= 0.8 and classifies the limit: constant-like when 1 - |f_n| -> 0
/// uniformly there, otherwise automorphism-like when f_n^h -> 1. Throws
/// DomainError when some f_n is not a certified self-map.
SchwarzPickSequenceReport sequential_schwarz_pick(const std::function<HoloMap(int)>& f_seq,
                                                  const std::function<Complex(int)>& z_seq,
                                                  const std::vector<int>& ladder = geometric_ladder(2, 12),
                                                  double tol = 1e-3);

struct ZeroTrackReport {
  std::vector<int> ns;
  std::vector<double> quotients;  // q_n(z_n)
  Complex xi;
  double beta = 0.0;
  std::vector<double> beta_n;            // declared orders of lambda_n at xi
  std::vector<double> beta_n_estimated;  // log-log slope estimates
  LimitEstimate beta_limit;
  bool part_a = false;
  std::vector<ZeroPathPoint> approaching;  // zeros xi_n != xi nearest to xi
  LimitEstimate alpha_limit;
  /// True when no zeros approach xi (nothing to verify) or their orders tend to 0.
  bool part_b = false;
};

struct ZeroTrackOptions {
  std::vector<int> ladder = geometric_ladder();
  double tol_order = 1e-2;
  double tol_hypothesis = 0.05;
};

/// Tracks the orders at xi and of zeros approaching xi. Limits are the
/// extrapolated LimitEstimate values compared with tol_order. Throws
/// DomainError when q_n(z_n) does not approach 1 (monotone over the second
/// half and within tol_hypothesis at the largest n) or domination fails.
ZeroTrackReport zero_rigidity_track(const MetricSequence& seq, const Pseudometric& mu,
                                    const std::function<Complex(int)>& z_seq, Complex xi,
                                    const ZeroTrackOptions& options = {});

struct WitnessReport {
  Complex z;
  double a = 0.0;
  double target = 0.0;  // lambda_D(z)
  std::vector<int> ns;
  std::vector<double> values;
  std::vector<double> running_max;
  /// Every member has curvature -4 and lambda(0) <= a.
  bool members_admissible = true;
  /// Every value is <= lambda_D(z) (within 1e-12 relative).
  bool ahlfors_bound = true;
};

/// Members T_n^* mu_max(1/n) with the zero moved to z_n = (a / (2(1 + 1/n)))^n
/// so that lambda_n(0) <= a, evaluated at z. Throws for z = 0 or a outside (0, 1].
WitnessReport prop_5_7_witness(double a, Complex z, const std::vector<int>& ladder = geometric_ladder());

}  // namespace pmrig
