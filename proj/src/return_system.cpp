#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "tmlab/error.hpp"
#include "tmlab/thermo.hpp"

namespace tmlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void logAdd(double& acc, double v) {
  if (v == kNegInf) return;
  if (acc == kNegInf) {
    acc = v;
    return;
  }
  double hi = std::max(acc, v), lo = std::min(acc, v);
  acc = hi + std::log1p(std::exp(lo - hi));
}

std::vector<std::array<int, 2>> buildKmp(const FiniteWord& J) {
  const int m = static_cast<int>(J.size());
  std::vector<int> fail(m + 1, 0);
  for (int i = 1, k = 0; i < m; ++i) {
    while (k > 0 && J[i] != J[k]) k = fail[k];
    if (J[i] == J[k]) ++k;
    fail[i + 1] = k;
  }
  std::vector<std::array<int, 2>> t(m + 1);
  for (int s = 0; s <= m; ++s)
    for (int d = 0; d < 2; ++d) {
      int k = s == m ? fail[m] : s;
      while (k > 0 && J[k] != d) k = fail[k];
      t[s][d] = J[k] == d ? k + 1 : 0;
    }
  return t;
}

// J occurs in no concatenation of tau_1 blocks, in either phase.
bool breaksHBlocks(const FiniteWord& J) {
  bool phase[2] = {false, false};
  for (std::size_t i = 0; i + 1 < J.size(); ++i)
    if (J[i] == J[i + 1]) phase[i & 1] = true;
  return phase[0] && phase[1];
}

}  // namespace

ReturnSystem buildReturnSystem(const FiniteWord& J, int NMax, int nmaxBound) {
  if (J.empty()) throw Error(Errc::InvalidArgument, "empty J");
  if (NMax < 4 || NMax > nmaxBound) throw Error(Errc::OutOfRange, "NMax outside [4, " + std::to_string(nmaxBound) + "]");
  ReturnSystem rs;
  rs.J = J;
  rs.NMax = NMax;
  rs.lang = Language::get(static_cast<std::size_t>(NMax) + J.size() + 2);
  if (J.size() <= rs.lang->maxLen() && rs.lang->contains(J))
    throw Error(Errc::IsAFactor, "J = " + J.str() + " is a K-factor");
  rs.deltaJ = rs.lang->prefixLevel(J.view(), static_cast<int>(J.size()));
  rs.kmp = buildKmp(J);
  return rs;
}

std::vector<double> returnLogCoefficients(const ReturnSystem& rs, const Potential& V, double gamma) {
  const int N = rs.NMax;
  const int m = static_cast<int>(rs.J.size());
  std::vector<double> out(N, kNegInf);

  if (const auto* dp = std::get_if<DistancePower>(&V)) {
    const Language& lang = *rs.lang;
    const int Lmax = N + m + 2;
    // cum[l] = gamma * sum_{i <= l} V(i)
    std::vector<double> cum(Lmax + 2, 0.0);
    for (int l = 1; l <= Lmax + 1; ++l) cum[l] = cum[l - 1] + gamma * dp->atLevel(l);
    auto runCost = [&](int lo, int hi) { return lo > hi ? 0.0 : cum[hi] - cum[lo - 1]; };

    // Key: SAM state, suffix length, J-match state.
    auto key = [](std::int32_t s, int l, int k) {
      return (static_cast<std::uint64_t>(s) << 24) | (static_cast<std::uint64_t>(l) << 8) | static_cast<std::uint64_t>(k);
    };
    struct Entry {
      std::int32_t s;
      int l, k;
      double logw;
    };
    std::vector<std::vector<Entry>> forward(N);
    std::vector<Entry> cur{{0, 0, 0, 0.0}};
    for (int e = 0; e < N; ++e) {
      std::unordered_map<std::uint64_t, std::size_t> idx;
      std::vector<Entry> nxt;
      for (const auto& en : cur)
        for (int d = 0; d < 2; ++d) {
          if (e < m && d != rs.J[e]) continue;
          std::int32_t s = en.s, l = en.l;
          lang.step(s, l, d);
          int k = rs.kmp[en.k][d];
          if (k == m && e - m + 1 >= 1) continue;  // earlier return
          double w = en.logw - runCost(l, en.l);   // levels l..l_old finalize at e
          auto kk = key(s, l, k);
          auto it = idx.find(kk);
          if (it == idx.end()) {
            idx.emplace(kk, nxt.size());
            nxt.push_back({s, l, k, w});
          } else {
            logAdd(nxt[it->second].logw, w);
          }
        }
      cur = std::move(nxt);
      forward[e] = cur;
    }
    for (int n = 1; n <= N; ++n) {
      double acc = kNegInf;
      for (const auto& en : forward[n - 1]) {
        std::int32_t s = en.s, l = en.l;
        int k = en.k;
        double w = en.logw;
        bool ok = true;
        for (int i = 0; i < m && ok; ++i) {
          const int e = n + i, d = rs.J[i];
          if (e < m && d != rs.J[e]) {
            ok = false;
            break;
          }
          int lold = l;
          lang.step(s, l, d);
          k = rs.kmp[k][d];
          int start = e - m + 1;
          if (k == m && start >= 1 && start <= n - 1) ok = false;
          // positions j = e - level < n only
          w -= runCost(std::max(l, e - n + 1), lold);
        }
        if (!ok) continue;
        // Every run starting before n must have terminated inside J.
        if (l > m) throw Error(Errc::InvalidArgument, "J does not terminate admissible runs");
        logAdd(acc, w);
      }
      out[n - 1] = acc;
    }
    return out;
  }

  if (const auto* vu = std::get_if<UnboundedVu>(&V)) {
    // Depth >= 1 at j means sigma^{j+1} x lies in H(Sigma), which J never
    // meets again; every point of a return loop has depth 0.
    if (!breaksHBlocks(rs.J))
      throw Error(Errc::Unsupported, "V_u coefficients need J outside every H(Sigma) word");
    auto count = returnLogCoefficients(rs, DistancePower{}, 0.0);
    const double step = -gamma * vu->atDepth(0);
    for (int n = 1; n <= N; ++n) out[n - 1] = count[n - 1] + step * n;
    return out;
  }
  throw Error(Errc::Unsupported, "return coefficients need a distance or V_u potential");
}

std::vector<double> returnCoefficients(const ReturnSystem& rs, const Potential& V, double gamma) {
  auto lg = returnLogCoefficients(rs, V, gamma);
  for (double& v : lg) v = std::exp(v);
  return lg;
}

std::vector<std::vector<double>> bruteForceBirkhoffSums(const ReturnSystem& rs, const Potential& V, int nLimit) {
  if (nLimit < 1 || nLimit > 20) throw Error(Errc::OutOfRange, "brute force limited to n <= 20");
  const std::size_t m = rs.J.size();
  const std::size_t maxWord = static_cast<std::size_t>(nLimit) + m;
  // Independent factor oracle: every window of a long rho_0 prefix.
  std::unordered_set<std::string> factors;
  if (std::holds_alternative<DistancePower>(V)) {
    std::string r = fixedPointPrefix(0, 64 * maxWord).str();
    for (std::size_t L = 1; L <= maxWord; ++L)
      for (std::size_t i = 0; i + L <= r.size(); ++i) factors.insert(r.substr(i, L));
  }
  const auto* dp = std::get_if<DistancePower>(&V);
  const auto* vu = std::get_if<UnboundedVu>(&V);
  if (!dp && !vu) throw Error(Errc::Unsupported, "brute force needs a distance or V_u potential");
  const std::string J = rs.J.str();

  std::vector<std::vector<double>> sums(nLimit);
  for (int n = 1; n <= nLimit; ++n) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      std::string y;
      for (int b = n - 1; b >= 0; --b) y.push_back(static_cast<char>('0' + ((code >> b) & 1)));
      y += J;
      if (y.compare(0, m, J) != 0) continue;
      bool early = false;
      for (int s = 1; s <= n - 1 && !early; ++s) early = y.compare(static_cast<std::size_t>(s), m, J) == 0;
      if (early) continue;
      std::vector<double> terms;
      for (int j = 0; j < n; ++j) {
        if (dp) {
          std::size_t L = 0;
          while (static_cast<std::size_t>(j) + L < y.size() && factors.count(y.substr(j, L + 1))) ++L;
          if (static_cast<std::size_t>(j) + L >= y.size()) throw Error(Errc::InsufficientPrefix, "level not resolved");
          terms.push_back(dp->atLevel(static_cast<int>(L)));
        } else {
          // The periodic point (y_0..y_{n-1})^inf returns to J after exactly n steps.
          Point x = Point::periodic(FiniteWord(), FiniteWord(y.substr(0, static_cast<std::size_t>(n))));
          int k = vuDepth(x.shift(static_cast<std::uint64_t>(j)), vu->kMax);
          terms.push_back(vu->atDepth(k));
        }
      }
      sums[n - 1].push_back(pairwiseSum(terms));
    }
  }
  return sums;
}

std::vector<double> bruteForceCoefficients(const ReturnSystem& rs, const Potential& V, double gamma, int nLimit) {
  auto sums = bruteForceBirkhoffSums(rs, V, nLimit);
  std::vector<double> out;
  for (const auto& s : sums) {
    std::vector<double> t;
    for (double v : s) t.push_back(std::exp(-gamma * v));
    out.push_back(pairwiseSum(t));
  }
  return out;
}

}  // namespace tmlab
