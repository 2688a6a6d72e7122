#pragma once

#include <cstdint>
#include <vector>

#include "tmlab/language.hpp"

namespace tmlab {

std::size_t factorComplexity(const Language& lang, std::size_t n);
// Closed form with n = 2^m + r + 1 (n >= 3); small n by table.
std::size_t complexityFormula(std::size_t n);

struct SpecialWords {
  std::vector<FiniteWord> left;
  std::vector<FiniteWord> right;
  std::vector<FiniteWord> bi;
};
SpecialWords specialWords(const Language& lang, std::size_t n);

// w is one of tau_k, bar tau_k, tau_k bar tau_k tau_k, bar tau_k tau_k bar tau_k.
bool isTauShape(const FiniteWord& w);

struct AccidentRecord {
  std::uint64_t time = 0;  // absolute shift index along the orbit
  int b = 0;               // shift since the previous accident (or start)
  int dBefore = 0;         // level at the previous accident (or start)
  int dAfter = 0;          // level at this accident
};

std::vector<AccidentRecord> accidentsFromLevels(const std::vector<int>& levels);
std::vector<AccidentRecord> accidents(const Point& x, int horizon, int cap = kDefaultLevelCap);

struct AccidentShape {
  bool bispecial = false;  // x_b..x_{d-1} is bispecial
  bool gapForm = false;    // d - b = 2^k or 3*2^k
  bool notSpecial = false; // x_0..x_{d-1} neither left- nor right-special
  bool bBound = false;     // b >= 2^k, resp. 2^{k+1}
  bool all() const { return bispecial && gapForm && notSpecial && bBound; }
};
// Checks one record against the orbit point it refers to (x is the start of
// the scanned orbit).
AccidentShape accidentShape(const Point& x, const AccidentRecord& r);

bool disjointDecompositionCheck(int k, std::size_t sampleDepth, bool fullShift = false);
int overlapBound(int k, std::size_t scanLength = std::size_t{1} << 14);

// For the map sigma o H: the prefix length on which (sigma H)^n(x)
// agrees with a rho_b (n even) or bar a rho_b (n odd), for x in [ab].
std::size_t sigmaHAgreement(const Point& x, int n, std::size_t window);

}  // namespace tmlab
