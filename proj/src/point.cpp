#include "tmlab/point.hpp"

#include "tmlab/error.hpp"

namespace tmlab {

Point::Point() : tail_("0") {}

Point Point::periodic(FiniteWord prefix, FiniteWord tail) {
  if (tail.empty()) throw Error(Errc::InvalidArgument, "periodic tail must be nonempty");
  Point p;
  p.prefix_ = std::move(prefix);
  p.kind_ = TailKind::Periodic;
  p.tail_ = std::move(tail);
  return p;
}

Point Point::thueMorse(FiniteWord prefix, int seed, std::uint64_t offset) {
  Point p;
  p.prefix_ = std::move(prefix);
  p.kind_ = TailKind::ThueMorse;
  p.tail_ = FiniteWord();
  p.seed_ = seed & 1;
  p.offset_ = offset;
  return p;
}

int Point::digit(std::uint64_t i) const {
  if (i < prefix_.size()) return prefix_[i];
  std::uint64_t t = i - prefix_.size();
  if (kind_ == TailKind::Periodic) return tail_[t % tail_.size()];
  return thueMorseDigit(t + offset_, seed_);
}

FiniteWord Point::take(std::size_t n) const {
  FiniteWord w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.push_back(digit(i));
  return w;
}

Point Point::shift(std::uint64_t j) const {
  if (j <= prefix_.size()) {
    Point p = *this;
    p.prefix_ = prefix_.substr(j);
    return p;
  }
  std::uint64_t t = j - prefix_.size();
  if (kind_ == TailKind::Periodic) {
    std::size_t r = t % tail_.size();
    return periodic(FiniteWord(), tail_.substr(r) + tail_.substr(0, r));
  }
  return thueMorse(FiniteWord(), seed_, offset_ + t);
}

Point Point::flipped() const {
  Point p = *this;
  p.prefix_ = prefix_.flipped();
  if (kind_ == TailKind::Periodic)
    p.tail_ = tail_.flipped();
  else
    p.seed_ ^= 1;
  return p;
}

Point Point::substitute(const Substitution& s, int n) const {
  if (kind_ == TailKind::ThueMorse) {
    if (!s.isThueMorse()) throw Error(Errc::Unsupported, "substitution of a Thue-Morse tail other than H");
    if (n > 40) throw Error(Errc::CapExceeded, "too many iterations");
    return thueMorse(substitutionApply(s, prefix_, n), seed_, offset_ << n);
  }
  return periodic(substitutionApply(s, prefix_, n), substitutionApply(s, tail_, n));
}

std::string Point::describe() const {
  if (kind_ == TailKind::Periodic) return prefix_.str() + "(" + tail_.str() + ")^inf";
  return prefix_.str() + "+sigma^" + std::to_string(offset_) + "(rho_" + std::to_string(seed_) + ")";
}

}  // namespace tmlab
