#pragma once

// Exact-rational water-filling, written independently of the library's
// single-pass sort: repeatedly satisfy every demand at or below the equal
// share of what is left, then split the rest evenly.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
  friend Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator<=(Rational a, Rational b) { return a.num * b.den <= b.num * a.den; }
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::vector<Rational> water_fill(const std::vector<Rational>& demands, Rational capacity) {
  std::vector<Rational> alloc(demands.size());
  std::vector<bool> done(demands.size(), false);
  Rational left = capacity;
  std::size_t open = demands.size();
  while (open > 0) {
    const Rational share = left / Rational(static_cast<std::int64_t>(open));
    bool progressed = false;
    for (std::size_t i = 0; i < demands.size(); ++i) {
      if (!done[i] && demands[i] <= share) {
        alloc[i] = demands[i];
        left = left - demands[i];
        done[i] = true;
        --open;
        progressed = true;
      }
    }
    if (!progressed) {
      for (std::size_t i = 0; i < demands.size(); ++i) {
        if (!done[i]) alloc[i] = share;
      }
      break;
    }
  }
  return alloc;
}

// Aggregates take their demand first, shrunk by a common factor when they
// alone exceed capacity; the remaining entries water-fill what is left.
inline std::vector<Rational> aggregates_first(const std::vector<Rational>& demands,
                                              const std::vector<bool>& aggregate, Rational capacity) {
  Rational pooled(0);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (aggregate[i]) pooled = pooled + demands[i];
  }
  const Rational scale = (pooled <= capacity || pooled == Rational(0)) ? Rational(1) : capacity / pooled;
  std::vector<Rational> rest;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (!aggregate[i]) rest.push_back(demands[i]);
  }
  const auto filled = water_fill(rest, capacity - pooled * scale);
  std::vector<Rational> alloc(demands.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < demands.size(); ++i) alloc[i] = aggregate[i] ? demands[i] * scale : filled[next++];
  return alloc;
}

}  // namespace oracle
