#pragma once

// Brute-force reference implementations used as test oracles. They work on
// plain strings and long doubles and share no code with the library.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include <gmpxx.h>

namespace oracle {

inline std::map<std::string, std::uint64_t> count_blocks(const std::string& x, std::size_t ell, bool sliding) {
  std::map<std::string, std::uint64_t> out;
  if (sliding) {
    for (std::size_t i = 0; i + ell <= x.size(); ++i) ++out[x.substr(i, ell)];
  } else {
    for (std::size_t i = 0; (i + 1) * ell <= x.size(); ++i) ++out[x.substr(i * ell, ell)];
  }
  return out;
}

// Plug-in entropy in natural logs, normalized by ℓ·ln σ.
inline double entropy(const std::map<std::string, std::uint64_t>& counts, std::size_t ell, std::size_t sigma) {
  long double total = 0;
  for (const auto& [_, c] : counts) total += c;
  long double h = 0;
  for (const auto& [_, c] : counts) {
    const long double p = c / total;
    h -= p * std::log(p);
  }
  return static_cast<double>(h / (ell * std::log(static_cast<long double>(sigma))));
}

inline double binary_entropy(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

inline std::string thue_morse(std::size_t n) {
  std::string out;
  for (std::uint64_t i = 0; i < n; ++i) out += (std::popcount(i) % 2) ? '1' : '0';
  return out;
}

inline std::string champernowne2(std::size_t n) {
  std::string out;
  for (std::uint64_t v = 0; out.size() < n; ++v) {
    std::string bits;
    std::uint64_t u = v;
    do {
      bits.insert(bits.begin(), char('0' + (u & 1)));
      u >>= 1;
    } while (u);
    out += bits;
  }
  out.resize(n);
  return out;
}

// Martingale part of the gale induced by a gambler given in its JSON interchange
// form: c0·Π_steps Π_rows σ·β_row(state)[symbol].
inline mpq_class json_mantissa(const nlohmann::json& spec, const std::string& x) {
  const auto glyphs = spec.at("alphabet").get<std::vector<std::string>>();
  const auto sigma = static_cast<long>(glyphs.size());
  auto rational = [](const nlohmann::json& v) {
    mpq_class q(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>()));
    q.canonicalize();
    return q;
  };
  mpq_class m = rational(spec.at("c0"));
  std::string state = spec.at("q0").get<std::string>();
  for (char c : x) {
    std::size_t a = 0;
    while (glyphs[a] != std::string(1, c)) ++a;
    for (const auto& row : spec.at("beta").at(state)) m *= sigma * rational(row.at(a));
    state = spec.at("delta").at(state + "," + c).get<std::string>();
  }
  return m;
}

}  // namespace oracle
