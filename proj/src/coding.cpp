#include "tmlab/coding.hpp"

#include "tmlab/error.hpp"

namespace tmlab {

FiniteWord slidingBlockPi(const FiniteWord& w) {
  if (w.size() < 2) throw Error(Errc::InsufficientPrefix, "pi needs at least two digits");
  FiniteWord out;
  out.reserve(w.size() - 1);
  for (std::size_t k = 0; k + 1 < w.size(); ++k) out.push_back(w[k] != w[k + 1]);
  return out;
}

Point slidingBlockPi(const Point& x) {
  if (x.tailKind() != Point::TailKind::Periodic) throw Error(Errc::Unsupported, "pi of a Thue-Morse tail");
  const std::size_t p = x.prefix().size(), t = x.tail().size();
  FiniteWord all = x.take(p + t + 1);
  FiniteWord img = slidingBlockPi(all);
  return Point::periodic(img.substr(0, p), img.substr(p, t));
}

namespace {

std::size_t firstDiff(const FiniteWord& x, const FiniteWord& y) {
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] != y[i]) return i;
  throw Error(Errc::PrefixComparable, "one word is a prefix of the other");
}

}  // namespace

std::strong_ordering lexCompare(const FiniteWord& x, const FiniteWord& y) {
  std::size_t i = firstDiff(x, y);
  return x[i] < y[i] ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::strong_ordering parityLexCompare(const FiniteWord& x, const FiniteWord& y) {
  std::size_t i = firstDiff(x, y);
  int ones = x.substr(0, i).ones();
  bool less = (x[i] < y[i]) != (ones % 2 == 1);
  return less ? std::strong_ordering::less : std::strong_ordering::greater;
}

}  // namespace tmlab
