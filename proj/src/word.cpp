#include "tmlab/word.hpp"

#include <algorithm>

#include "tmlab/error.hpp"

namespace tmlab {

const char* errcName(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::CapExceeded: return "cap-exceeded";
    case Errc::InsufficientPrefix: return "insufficient-prefix";
    case Errc::OutOfRange: return "out-of-range";
    case Errc::Instability: return "instability";
    case Errc::UndefinedPoint: return "undefined-point";
    case Errc::IsAFactor: return "is-a-factor";
    case Errc::PrefixComparable: return "prefix-comparable";
    case Errc::Unsupported: return "unsupported";
    case Errc::GridExhausted: return "grid-exhausted";
  }
  return "error";
}

FiniteWord::FiniteWord(std::string_view bits) : bits_(bits) {
  for (char c : bits_)
    if (c != '0' && c != '1') throw Error(Errc::InvalidArgument, "non-binary symbol in word");
}

FiniteWord FiniteWord::substr(std::size_t pos, std::size_t len) const {
  FiniteWord w;
  w.bits_ = bits_.substr(pos, len);
  return w;
}

FiniteWord FiniteWord::flipped() const {
  FiniteWord w = *this;
  for (char& c : w.bits_) c = c == '0' ? '1' : '0';
  return w;
}

bool FiniteWord::isPrefixOf(const FiniteWord& other) const {
  return size() <= other.size() && std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

int FiniteWord::ones() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), '1')); }

Substitution::Substitution(FiniteWord i0, FiniteWord i1) : image0(std::move(i0)), image1(std::move(i1)) {
  if (image0.empty() || image1.empty()) throw Error(Errc::InvalidArgument, "empty substitution image");
}

bool Substitution::isThueMorse() const { return image0.str() == "01" && image1.str() == "10"; }

Substitution Substitution::thueMorse() { return {FiniteWord("01"), FiniteWord("10")}; }
Substitution Substitution::feigenbaum() { return {FiniteWord("11"), FiniteWord("10")}; }

FiniteWord substitutionApply(const Substitution& s, const FiniteWord& w, int iterations, std::size_t cap) {
  if (iterations < 0) throw Error(Errc::InvalidArgument, "negative iteration count");
  FiniteWord cur = w;
  for (int it = 0; it < iterations; ++it) {
    std::size_t len = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) len += s.image(cur[i]).size();
    if (len > cap)
      throw Error(Errc::CapExceeded, "image length " + std::to_string(len) + " exceeds cap " + std::to_string(cap));
    FiniteWord next;
    next.reserve(len);
    for (std::size_t i = 0; i < cur.size(); ++i) next += s.image(cur[i]);
    cur = std::move(next);
  }
  return cur;
}

FiniteWord fixedPointPrefix(int seed, std::size_t length) {
  if (length < 1) throw Error(Errc::InvalidArgument, "length must be >= 1");
  FiniteWord w;
  w.reserve(length);
  for (std::size_t i = 0; i < length; ++i) w.push_back(thueMorseDigit(i, seed));
  return w;
}

FiniteWord tau(int k, bool bar) {
  if (k < 0 || k > 40) throw Error(Errc::OutOfRange, "tau index");
  return fixedPointPrefix(bar ? 1 : 0, std::size_t{1} << k);
}

}  // namespace tmlab
