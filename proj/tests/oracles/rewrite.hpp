#pragma once

// Normal ordering by repeated single-step rewriting of generator words,
// independent of the closed-form product in the library.
//   D M -> M D - i      (same variable)
//   a b -> b a          (commuting generators out of order)

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Poly1 = std::map<std::array<int, 2>, cplx>;  // (m, h) -> coeff of M^m D^h

// Word over {'M','D'} in one variable.
inline Poly1 normal_form_1d(const std::string& word) {
  static std::map<std::string, Poly1> memo;
  auto hit = memo.find(word);
  if (hit != memo.end()) return hit->second;
  Poly1 out;
  std::size_t pos = word.find("DM");
  if (pos == std::string::npos) {
    int m = 0, h = 0;
    for (char c : word) (c == 'M' ? m : h)++;
    out[{m, h}] = 1.0;
  } else {
    std::string swapped = word;
    swapped[pos] = 'M';
    swapped[pos + 1] = 'D';
    std::string dropped = word.substr(0, pos) + word.substr(pos + 2);
    for (const auto& [k, c] : normal_form_1d(swapped)) out[k] += c;
    for (const auto& [k, c] : normal_form_1d(dropped)) out[k] += cplx(0.0, -1.0) * c;
    for (auto it = out.begin(); it != out.end();)
      it = it->second == cplx(0.0) ? out.erase(it) : std::next(it);
  }
  memo[word] = out;
  return out;
}

inline std::string word_of(int m1, int h1, int m2, int h2) {
  return std::string(m1, 'M') + std::string(h1, 'D') + std::string(m2, 'M') +
         std::string(h2, 'D');
}

// (M1^a M2^b D1^c D2^d)(M1^m M2^n D1^h D2^k). Generators of different
// variables commute, so swaps first separate the word by variable; each
// variable is then rewritten on its own and D1 is swapped past M2 at the end.
inline std::map<std::array<int, 4>, cplx> product(const std::array<int, 4>& l,
                                                  const std::array<int, 4>& r) {
  Poly1 v1 = normal_form_1d(word_of(l[0], l[2], r[0], r[2]));
  Poly1 v2 = normal_form_1d(word_of(l[1], l[3], r[1], r[3]));
  std::map<std::array<int, 4>, cplx> out;
  for (const auto& [k1, c1] : v1)
    for (const auto& [k2, c2] : v2) out[{k1[0], k2[0], k1[1], k2[1]}] += c1 * c2;
  for (auto it = out.begin(); it != out.end();)
    it = it->second == cplx(0.0) ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace oracle
