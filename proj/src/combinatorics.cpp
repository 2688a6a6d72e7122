#include "tmlab/combinatorics.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "tmlab/error.hpp"

namespace tmlab {

std::size_t factorComplexity(const Language& lang, std::size_t n) { return lang.count(n); }

std::size_t complexityFormula(std::size_t n) {
  if (n == 0) return 1;
  if (n == 1) return 2;
  if (n == 2) return 4;
  std::size_t m = 0;
  while ((std::size_t{2} << m) + 1 <= n) ++m;  // largest m with 2^m + 1 <= n
  std::size_t p = std::size_t{1} << m;
  std::size_t r = n - p - 1;
  if (r < p / 2) return 3 * p + 4 * r;
  return 4 * p + 2 * r;
}

SpecialWords specialWords(const Language& lang, std::size_t n) {
  if (n + 1 > lang.maxLen()) throw Error(Errc::OutOfRange, "n + 1 exceeds language cap");
  SpecialWords out;
  for (const auto& w : lang.factors(n)) {
    bool l = lang.contains("0" + w.str()) && lang.contains("1" + w.str());
    bool r = lang.contains(w.str() + "0") && lang.contains(w.str() + "1");
    if (l) out.left.push_back(w);
    if (r) out.right.push_back(w);
    if (l && r) out.bi.push_back(w);
  }
  return out;
}

bool isTauShape(const FiniteWord& w) {
  std::size_t n = w.size();
  if (n == 0) return false;
  auto pow2 = [](std::size_t v) { return v && !(v & (v - 1)); };
  if (pow2(n)) {
    int k = __builtin_ctzll(n);
    return w == tau(k) || w == tau(k, true);
  }
  if (n % 3 == 0 && pow2(n / 3)) {
    int k = __builtin_ctzll(n / 3);
    FiniteWord t = tau(k), tb = tau(k, true);
    return w == t + tb + t || w == tb + t + tb;
  }
  return false;
}

std::vector<AccidentRecord> accidentsFromLevels(const std::vector<int>& lv) {
  std::vector<AccidentRecord> out;
  std::size_t prev = 0;
  for (std::size_t j = 1; j < lv.size(); ++j) {
    if (lv[j] == kLevelInfinity || lv[j - 1] == kLevelInfinity) continue;
    if (lv[j] >= lv[j - 1]) {
      out.push_back({j, static_cast<int>(j - prev), lv[prev], lv[j]});
      prev = j;
    }
  }
  return out;
}

std::vector<AccidentRecord> accidents(const Point& x, int horizon, int cap) {
  if (horizon < 0) throw Error(Errc::InvalidArgument, "negative horizon");
  auto lang = Language::get(static_cast<std::size_t>(cap));
  int d = lang->prefixLevel(x, cap);
  if (d == kLevelInfinity) return {};
  std::string text = x.take(static_cast<std::size_t>(horizon) + cap + 2).str();
  auto lv = lang->levels(text, static_cast<std::size_t>(horizon) + 1, cap);
  // Scanning stops at the first saturated level (the orbit entered K to
  // within the cap).
  auto it = std::find(lv.begin(), lv.end(), kLevelInfinity);
  lv.erase(it, lv.end());
  return accidentsFromLevels(lv);
}

AccidentShape accidentShape(const Point& x, const AccidentRecord& r) {
  AccidentShape s;
  const int d = r.dBefore, b = r.b;
  if (b < 1 || b > d) return s;
  Point y = x.shift(r.time - static_cast<std::uint64_t>(b));
  FiniteWord whole = y.take(static_cast<std::size_t>(d));
  FiniteWord mid = whole.substr(static_cast<std::size_t>(b));
  auto lang = Language::get(static_cast<std::size_t>(d) + 2);
  auto bis = [&](const FiniteWord& w) {
    return lang->contains("0" + w.str()) && lang->contains("1" + w.str()) && lang->contains(w.str() + "0") &&
           lang->contains(w.str() + "1");
  };
  s.bispecial = lang->contains(mid) && bis(mid);
  const std::size_t g = static_cast<std::size_t>(d - b);
  bool three = false;
  std::size_t p = g;
  if (p % 3 == 0) {
    p /= 3;
    three = true;
  }
  s.gapForm = p && !(p & (p - 1));
  if (s.gapForm) {
    std::size_t bound = three ? 2 * p : p;
    s.bBound = static_cast<std::size_t>(b) >= bound;
  }
  bool l = lang->contains("0" + whole.str()) && lang->contains("1" + whole.str());
  bool rs = lang->contains(whole.str() + "0") && lang->contains(whole.str() + "1");
  s.notSpecial = !l && !rs;
  return s;
}

bool disjointDecompositionCheck(int k, std::size_t sampleDepth, bool fullShift) {
  if (k < 1 || k > 6) throw Error(Errc::OutOfRange, "k outside [1,6]");
  const std::size_t P = std::size_t{1} << k;
  const Substitution H = Substitution::thueMorse();
  std::vector<std::unordered_set<std::string>> images(P);
  std::vector<FiniteWord> targets;
  auto lang = Language::get(sampleDepth + 1);
  if (fullShift) {
    if (sampleDepth > 16) throw Error(Errc::OutOfRange, "full-shift check limited to depth 16");
    for (std::uint64_t i = 0; i < (std::uint64_t{1} << sampleDepth); ++i) {
      FiniteWord w;
      for (std::size_t b = 0; b < sampleDepth; ++b) w.push_back(static_cast<int>((i >> (sampleDepth - 1 - b)) & 1));
      targets.push_back(w);
    }
  } else {
    targets = lang->factors(sampleDepth);
  }
  for (std::size_t j = 0; j < P; ++j) {
    std::size_t need = (j + sampleDepth + P - 1) / P;
    std::vector<FiniteWord> pre;
    if (fullShift) {
      for (std::uint64_t i = 0; i < (std::uint64_t{1} << need); ++i) {
        FiniteWord w;
        for (std::size_t b = 0; b < need; ++b) w.push_back(static_cast<int>((i >> (need - 1 - b)) & 1));
        pre.push_back(w);
      }
    } else {
      pre = lang->factors(need);
    }
    for (const auto& v : pre) images[j].insert(substitutionApply(H, v, k).str().substr(j, sampleDepth));
  }
  for (const auto& w : targets) {
    int hits = 0;
    for (std::size_t j = 0; j < P; ++j) hits += images[j].count(w.str()) ? 1 : 0;
    if (hits != 1) return false;
  }
  // Images of factors are factors, so nothing outside the target set can
  // appear; for the full shift, targets are all words anyway.
  return true;
}

int overlapBound(int k, std::size_t scanLength) {
  if (k < 2 || k > 8) throw Error(Errc::OutOfRange, "k outside [2,8]");
  const std::size_t L = std::size_t{1} << k;
  std::string s = fixedPointPrefix(0, scanLength).str();
  std::string t = tau(k).str(), tb = tau(k, true).str();
  std::vector<std::size_t> pt, pb;
  for (std::size_t i = 0; i + L <= s.size(); ++i) {
    if (s.compare(i, L, t) == 0) pt.push_back(i);
    if (s.compare(i, L, tb) == 0) pb.push_back(i);
  }
  int best = 0;
  for (std::size_t p : pt) {
    auto lo = std::lower_bound(pb.begin(), pb.end(), p >= L ? p - L + 1 : 0);
    for (auto it = lo; it != pb.end() && *it < p + L; ++it) {
      std::size_t q = *it;
      std::size_t a = std::max(p, q), e = std::min(p, q) + L;
      best = std::max(best, static_cast<int>(e - a));
    }
  }
  return best;
}

std::size_t sigmaHAgreement(const Point& x, int n, std::size_t window) {
  const Substitution H = Substitution::thueMorse();
  int a = x.digit(0), b = x.digit(1);
  Point y = x;
  for (int i = 0; i < n; ++i) y = y.substitute(H, 1).shift(1);
  int lead = (n % 2 == 0) ? a : 1 - a;
  Point target = Point::thueMorse(FiniteWord(lead ? "1" : "0"), b);
  std::size_t agree = 0;
  while (agree < window && y.digit(agree) == target.digit(agree)) ++agree;
  return agree;
}

}  // namespace tmlab
