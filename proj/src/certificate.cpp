#include "rjd/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "rjd/errors.hpp"

namespace rjd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLambdaTol = 1e-6;
constexpr int kScanPoints = 257;

struct Bracket {
  double lo;
  double hi;
};

double golden_section_maximize(const std::function<double(double)>& f, Bracket b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = b.lo;
  double d = b.hi;
  double x1 = d - inv_phi * (d - a);
  double x2 = a + inv_phi * (d - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (d - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (d - a);
      f2 = f(x2);
    } else {
      d = x2;
      x2 = x1;
      f2 = f1;
      x1 = d - inv_phi * (d - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + d);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double RateCertificate::V(double x) const { return std::exp(lambda * x); }

double RateCertificate::calculus_constant() const { return std::pow(p * std::numbers::e / lambda, p); }

double RateCertificate::C() const { return std::numbers::e * p / lambda; }

// ---------------------------------------------------------------------------

double eval_c(const ProcessSpec& spec, double x, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("lambda must be nonnegative");
  if (lambda >= mgf_domain(spec.jumps)) throw NumericError("MGF divergence");
  double c = lambda * drift_value(spec.drift, x) + 0.5 * lambda * lambda * spec.sigma * spec.sigma;
  if (const auto* levy = std::get_if<LevyUpward>(&spec.jumps))
    c += levy->intensity * (displacement_mgf(levy->displacement, lambda) - 1.0);
  else if (std::holds_alternative<StateCatalog>(spec.jumps))
    throw ConfigError("state-dependent jump catalogs are not supported");
  return c;
}

std::string sup_method(const DriftSpec& drift) {
  if (std::holds_alternative<ConstantDrift>(drift)) return "sup over x exact: c(x, lambda) is constant in x";
  if (const auto* a = std::get_if<AffineDrift>(&drift)) {
    if (a->slope <= 0.0) return "sup over x exact: c(x, lambda) is nonincreasing in x, attained as x -> 0+";
    return "sup over x is +inf: drift slope is positive";
  }
  return "sup over x taken over the tabulated knots, x = 0 and the probe grid {2^j : j = -4..20}";
}

double k_of_lambda(const ProcessSpec& spec, double lambda) {
  return std::visit(
      [&](const auto& d) -> double {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, ConstantDrift>) {
          return -eval_c(spec, 0.0, lambda);
        } else if constexpr (std::is_same_v<D, AffineDrift>) {
          const double c0 = eval_c(spec, 0.0, lambda);
          if (d.slope > 0.0 && lambda > 0.0) return -kInf;
          return -c0;
        } else {
          std::vector<double> xs = probe_grid();
          for (const auto& knot : d.knots)
            if (knot.first >= 0.0) xs.push_back(knot.first);
          double sup = -kInf;
          for (double x : xs) sup = std::max(sup, eval_c(spec, x, lambda));
          return -sup;
        }
      },
      spec.drift);
}

LambdaOptimum optimize_lambda(const ProcessSpec& spec) {
  const double lambda_max = mgf_domain(spec.jumps);
  Bracket range{};
  if (std::isfinite(lambda_max)) {
    const double eps = 1e-6 * lambda_max;
    range = {eps, lambda_max - eps};
  } else {
    range = {1e-6, 50.0};
  }

  LambdaOptimum out;
  auto k = [&](double lambda) { return k_of_lambda(spec, lambda); };
  out.lambda = golden_section_maximize(k, range, kLambdaTol);
  out.k = k(out.lambda);
  out.notes.push_back("lambda search: golden-section on [" + format_double(range.lo) + ", " +
                      format_double(range.hi) + "], tolerance 1e-6");

  // k is concave for every implemented drift, so the scan only guards
  // against a bracket that misses the maximizer.
  const double step = (range.hi - range.lo) / (kScanPoints - 1);
  int best = -1;
  double best_k = out.k;
  for (int i = 0; i < kScanPoints; ++i) {
    const double kv = k(range.lo + i * step);
    if (kv > best_k + 1e-9 * (1.0 + std::abs(best_k))) {
      best_k = kv;
      best = i;
    }
  }
  if (best >= 0) {
    const Bracket local{range.lo + std::max(0, best - 1) * step,
                        range.lo + std::min(kScanPoints - 1, best + 1) * step};
    out.lambda = golden_section_maximize(k, local, kLambdaTol);
    out.k = k(out.lambda);
    if (best_k > out.k) {
      out.lambda = range.lo + best * step;
      out.k = best_k;
    }
    out.notes.emplace_back("k(lambda) not unimodal on the bracket: refined around the best grid-scan point");
  }
  if (!std::isfinite(out.k)) out.notes.emplace_back("k(lambda) = -inf on the whole bracket");
  return out;
}

RateCertificate make_certificate(const ProcessSpec& spec, double p) {
  if (!(p >= 1.0)) throw ConfigError("Wasserstein order p must be >= 1");
  validate(spec);

  const AssumptionReport report = check_assumptions(spec);
  LambdaOptimum opt = optimize_lambda(spec);

  RateCertificate cert;
  cert.lambda = opt.lambda;
  cert.k = opt.k;
  cert.G = report.a4_G;
  cert.lambda_max = mgf_domain(spec.jumps);
  cert.p = p;
  cert.a3_holds = cert.k > 0.0;
  if (cert.G) {
    cert.K = cert.k / p - *cert.G;
    cert.thm2_applicable = cert.a3_holds && cert.k > p * *cert.G;
  } else {
    cert.notes.emplace_back("Assumption 4 constant G unavailable: contraction bounds disabled");
  }
  cert.notes.push_back(sup_method(spec.drift));
  for (auto& n : opt.notes) cert.notes.push_back(std::move(n));
  for (const auto& n : report.notes) cert.notes.push_back(n);
  if (!cert.a3_holds) cert.notes.emplace_back("k* <= 0: no exponential rate certified");
  return cert;
}

// ---------------------------------------------------------------------------

namespace {

void require_certificate(const RateCertificate& cert) {
  if (!cert.a3_holds) throw NumericError("no valid certificate");
}

void require_contraction(const RateCertificate& cert) {
  if (!cert.K) throw NumericError("Assumption 4 constant unavailable");
  if (!cert.thm2_applicable) throw NumericError("contraction bound requires k > p G and k > 0");
}

}  // namespace

double bound_thm1(const RateCertificate& cert, double x1, double x2, double t) {
  require_certificate(cert);
  return cert.C() * std::exp(cert.lambda * std::max(x1, x2) / cert.p) * std::exp(-cert.k * t / cert.p);
}

double bound_thm1_measures(const RateCertificate& cert, double rho1_V, double rho2_V, double t) {
  require_certificate(cert);
  if (rho1_V < 1.0 || rho2_V < 1.0) throw std::invalid_argument("(rho, V) must be >= 1");
  return cert.C() * std::pow(rho1_V + rho2_V, 1.0 / cert.p) * std::exp(-cert.k * t / cert.p);
}

double bound_thm2(const RateCertificate& cert, double x1, double x2, double t) {
  require_contraction(cert);
  return std::exp(cert.lambda * std::max(x1, x2) / cert.p) * std::abs(x1 - x2) * std::exp(-*cert.K * t);
}

double bound_thm2_stationary(const RateCertificate& cert, double pi_V, double x, double t) {
  require_contraction(cert);
  if (pi_V < 1.0) throw std::invalid_argument("(pi, V) must be >= 1");
  return std::pow(pi_V + cert.V(x), 1.0 / cert.p) * std::exp(-*cert.K * t);
}

}  // namespace rjd
