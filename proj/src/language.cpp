#include "tmlab/language.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "tmlab/error.hpp"

namespace tmlab {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Language::Language(std::size_t maxLen) : maxLen_(maxLen) {
  if (maxLen < 1) throw Error(Errc::InvalidArgument, "maxLen must be >= 1");
  if (maxLen > (std::size_t{1} << 20)) throw Error(Errc::CapExceeded, "maxLen too large");
  const std::size_t n = 32 * maxLen;
  generator_ = fixedPointPrefix(0, n).str();
  st_.reserve(2 * n + 2);
  st_.push_back({{-1, -1}, -1, 0});
  for (char c : generator_) extend(c - '0');

  // Distinct substrings of length L: states whose length interval
  // (len(link), len] contains L.
  std::vector<std::int64_t> diff(maxLen_ + 2, 0);
  for (std::size_t v = 1; v < st_.size(); ++v) {
    std::size_t lo = static_cast<std::size_t>(st_[st_[v].link].len) + 1;
    std::size_t hi = static_cast<std::size_t>(st_[v].len);
    if (lo > maxLen_) continue;
    diff[lo] += 1;
    diff[std::min(hi, maxLen_) + 1] -= 1;
  }
  counts_.assign(maxLen_ + 1, 0);
  std::int64_t run = 0;
  for (std::size_t L = 1; L <= maxLen_; ++L) {
    run += diff[L];
    counts_[L] = static_cast<std::size_t>(run);
  }

  // Doubling certificate: every maxLen-window of the doubled prefix must
  // already be a factor of the generator.
  std::int32_t s = 0, l = 0;
  for (std::size_t e = 0; e < 2 * n; ++e) {
    step(s, l, thueMorseDigit(e));
    if (static_cast<std::size_t>(l) < std::min(e + 1, maxLen_))
      throw Error(Errc::Instability, "doubling the generating prefix adds new factors");
  }

  std::string blob = "lang " + std::to_string(maxLen_) + '\0';
  std::uint64_t h = fnv1a(1469598103934665603ull, blob);
  for (std::size_t L = 1; L <= maxLen_; ++L) h = fnv1a(h, std::to_string(counts_[L]) + ",");
  hash_ = fnv1a(h, generator_.substr(0, std::min<std::size_t>(generator_.size(), 4096)));
}

void Language::extend(int c) {
  std::int32_t cur = static_cast<std::int32_t>(st_.size());
  st_.push_back({{-1, -1}, -1, st_[last_].len + 1});
  std::int32_t p = last_;
  while (p != -1 && st_[p].next[c] == -1) {
    st_[p].next[c] = cur;
    p = st_[p].link;
  }
  if (p == -1) {
    st_[cur].link = 0;
  } else {
    std::int32_t q = st_[p].next[c];
    if (st_[p].len + 1 == st_[q].len) {
      st_[cur].link = q;
    } else {
      std::int32_t clone = static_cast<std::int32_t>(st_.size());
      st_.push_back({{st_[q].next[0], st_[q].next[1]}, st_[q].link, st_[p].len + 1});
      while (p != -1 && st_[p].next[c] == q) {
        st_[p].next[c] = clone;
        p = st_[p].link;
      }
      st_[q].link = clone;
      st_[cur].link = clone;
    }
  }
  last_ = cur;
}

std::shared_ptr<const Language> Language::get(std::size_t minLen) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const Language>> cache;
  std::size_t m = 64;
  while (m < minLen) m <<= 1;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.lower_bound(m);
  if (it != cache.end()) return it->second;
  auto lang = std::make_shared<const Language>(m);
  cache[m] = lang;
  return lang;
}

bool Language::contains(std::string_view w) const {
  if (w.size() > maxLen_) throw Error(Errc::OutOfRange, "word longer than language cap");
  std::int32_t v = 0;
  for (char c : w) {
    v = st_[v].next[c - '0'];
    if (v < 0) return false;
  }
  return true;
}

std::size_t Language::count(std::size_t n) const {
  if (n < 1 || n > maxLen_) throw Error(Errc::OutOfRange, "length outside [1, maxLen]");
  return counts_[n];
}

std::vector<FiniteWord> Language::factors(std::size_t n) const {
  if (n > maxLen_) throw Error(Errc::OutOfRange, "length outside [0, maxLen]");
  std::vector<FiniteWord> out;
  std::string buf;
  // Iterative DFS in lexicographic order.
  std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto& [v, nextDigit] = stack.back();
    if (buf.size() == n) {
      out.emplace_back(buf);
      stack.pop_back();
      if (!buf.empty()) buf.pop_back();
      continue;
    }
    if (nextDigit == 2) {
      stack.pop_back();
      if (!buf.empty()) buf.pop_back();
      continue;
    }
    int d = nextDigit++;
    std::int32_t w = st_[v].next[d];
    if (w < 0) continue;
    buf.push_back(static_cast<char>('0' + d));
    stack.push_back({w, 0});
  }
  return out;
}

void Language::step(std::int32_t& state, std::int32_t& len, int digit) const {
  while (state != 0 && st_[state].next[digit] < 0) {
    state = st_[state].link;
    len = st_[state].len;
  }
  std::int32_t nx = st_[state].next[digit];
  if (nx >= 0) {
    state = nx;
    ++len;
  } else {
    len = 0;
  }
}

int Language::prefixLevel(const Point& x, int cap) const {
  if (cap < 1 || static_cast<std::size_t>(cap) > maxLen_) throw Error(Errc::OutOfRange, "cap exceeds language");
  std::int32_t v = 0;
  for (int i = 0; i < cap; ++i) {
    v = st_[v].next[x.digit(i)];
    if (v < 0) return i;
  }
  return kLevelInfinity;
}

int Language::prefixLevel(std::string_view w, int cap) const {
  if (cap < 1 || static_cast<std::size_t>(cap) > maxLen_) throw Error(Errc::OutOfRange, "cap exceeds language");
  std::int32_t v = 0;
  for (int i = 0; i < cap; ++i) {
    if (static_cast<std::size_t>(i) >= w.size())
      throw Error(Errc::InsufficientPrefix, "word ends before its level is resolved");
    v = st_[v].next[w[i] - '0'];
    if (v < 0) return i;
  }
  return kLevelInfinity;
}

std::vector<int> Language::levels(std::string_view text, std::size_t count, int cap) const {
  if (cap < 1 || static_cast<std::size_t>(cap) > maxLen_) throw Error(Errc::OutOfRange, "cap exceeds language");
  if (count > text.size()) throw Error(Errc::InsufficientPrefix, "count exceeds text length");
  std::vector<int> out(count, -1);
  std::int32_t s = 0, l = 0;
  std::size_t j = 0;
  for (std::size_t e = 0; e < text.size() && j < count; ++e) {
    step(s, l, text[e] - '0');
    // start(e) = e + 1 - l is nondecreasing; every j below it has its
    // admissible run ending at e - 1.
    std::size_t start = e + 1 - static_cast<std::size_t>(l);
    while (j < count && j < start) {
      std::size_t lev = e - j;
      out[j] = lev >= static_cast<std::size_t>(cap) ? kLevelInfinity : static_cast<int>(lev);
      ++j;
    }
  }
  for (; j < count; ++j) {
    if (text.size() - j >= static_cast<std::size_t>(cap))
      out[j] = kLevelInfinity;
    else
      throw Error(Errc::InsufficientPrefix, "admissible run reaches the end of the available digits");
  }
  return out;
}

int admissibleLevel(const Point& x, int cap) { return Language::get(static_cast<std::size_t>(cap))->prefixLevel(x, cap); }

}  // namespace tmlab
