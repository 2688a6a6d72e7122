#include <cmath>
#include <limits>

#include "tmlab/error.hpp"
#include "tmlab/thermo.hpp"

namespace tmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTail = 1e-10;
constexpr long kMaxJ = 50'000'000;

// sum_{j >= j0} exp(-g/(1-a) ((2^k (1 + j/2))^{1-a} - shift) - (j - jz) 2^{k-1} z)
double innerSum(double a, double gamma, double z, int k, long j0, double shift, long jz, bool& ok) {
  const double p = std::ldexp(1.0, k);
  const double c = gamma / (1.0 - a);
  double s = 0.0;
  for (long j = j0; j < kMaxJ; ++j) {
    double e = -c * (std::pow(p * (1.0 + 0.5 * j), 1.0 - a) - shift) - static_cast<double>(j - jz) * 0.5 * p * z;
    double t = std::exp(e);
    s += t;
    if (t <= kRelTail * s) return s;
  }
  ok = false;
  return s;
}

}  // namespace

ExcursionBounds excursionBounds(double a, double gamma, double z) {
  if (!(a > 0 && a < 1)) throw Error(Errc::OutOfRange, "excursion bounds need 0 < a < 1");
  if (!(gamma > 0)) throw Error(Errc::OutOfRange, "excursion bounds need gamma > 0");
  ExcursionBounds r;
  bool ok = true;
  for (int k = 4; k < 1000; ++k) {
    const double base = std::pow(2.0, k * (1.0 - a));
    double bk = innerSum(a, gamma, z, k, 1, base, 0, ok);
    double ck = innerSum(a, gamma, z, k, 5, std::pow(3.0, 1.0 - a) * base, 4, ok);
    r.B0 += bk;
    r.C0 += ck;
    if (bk + ck <= kRelTail * (r.B0 + r.C0)) break;
    if (k == 999) ok = false;
  }
  r.converged = ok;

  const double p4 = gamma * std::pow(2.0, 4 * (1.0 - a));
  if (p4 > 1.0) {
    r.closedValid = true;
    for (int k = 4; k < 1000; ++k) {
      const double pk = gamma * std::pow(2.0, k * (1.0 - a));
      double t = (1.0 + 3.0 / (pk - 1.0)) * std::pow(2.0 / 3.0, pk);
      r.closedB += t;
      if (t <= kRelTail * r.closedB) break;
    }
  } else {
    r.closedB = kInf;  // divergence guard: p_k <= 1
  }
  return r;
}

double certificateMajorant(double a, double gamma, const CertificateOptions& opt) {
  const double g = gamma * (1.0 - opt.epsilon0);
  const double eps = std::pow(static_cast<double>(opt.freePathLevel), -a);
  const double q = 2.0 * std::exp(-eps * g);
  if (q >= 1.0) return kInf;
  ExcursionBounds eb = excursionBounds(a, g);
  if (!eb.converged) return kInf;
  const double S = eb.B0 + eb.C0;
  if (S >= 1.0) return kInf;
  const double r = q / (1.0 - q) * S / (1.0 - S);
  if (r >= 1.0) return kInf;
  return 32.0 * std::exp(-5.0 * eps * g) / (1.0 - q) / (1.0 - r);
}

GammaCertificate gammaCertificate(double a, const CertificateOptions& opt) {
  if (!(a > 0 && a < 1)) throw Error(Errc::OutOfRange, "certificate needs 0 < a < 1");
  GammaCertificate c;
  c.epsilon = std::pow(static_cast<double>(opt.freePathLevel), -a);
  double prev = kInf;
  const long steps = std::lround((opt.gammaMax - opt.gammaMin) / opt.gammaStep);
  for (long i = 0; i <= steps; ++i) {
    double g = opt.gammaMin + static_cast<double>(i) * opt.gammaStep;
    double m = certificateMajorant(a, g, opt);
    if (m < 1.0) {
      c.gamma0 = g;
      c.majorant = m;
      c.majorantBefore = prev;
      return c;
    }
    prev = m;
  }
  throw Error(Errc::GridExhausted, "no grid gamma with majorant < 1");
}

}  // namespace tmlab
