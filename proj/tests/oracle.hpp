#pragma once

// Brute-force reference implementations over dense probability vectors.
// Deliberately naive: loops over every index, no shared code with the library.

#include <cmath>
#include <vector>

#include "winnower/distribution.hpp"
#include "winnower/rng.hpp"

namespace oracle {

using Dense = std::vector<double>;

inline double kld(const Dense& p, const Dense& q) {
  double sum = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0) sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

// Additive smoothing of q over V = support(q) ∪ support(ref).
inline Dense smooth(const Dense& q, const Dense& ref, double mass, double eps) {
  std::size_t v = 0;
  bool covered = true;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0 || ref[i] > 0) ++v;
    if (ref[i] > 0 && q[i] == 0) covered = false;
  }
  if (covered) return q;
  Dense out(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] > 0 || ref[i] > 0) out[i] = (mass * q[i] + eps) / (mass + eps * v);
  }
  return out;
}

inline double symmetric_kld(const Dense& p, const Dense& q, double eps) {
  return kld(p, smooth(q, p, 1.0, eps)) + kld(q, smooth(p, q, 1.0, eps));
}

inline double jsd(const Dense& p, const Dense& q) {
  double a = 0, b = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) a += p[i] * std::log(p[i] / m);
    if (q[i] > 0) b += q[i] * std::log(q[i] / m);
  }
  return 0.5 * a + 0.5 * b;
}

// Random sparse distribution over `v` words, at least one entry non-zero.
inline Dense random_dense(std::size_t v, winnower::Xoshiro256& rng, double keep = 0.6) {
  Dense d(v, 0.0);
  double total = 0;
  while (total == 0) {
    for (std::size_t i = 0; i < v; ++i) {
      d[i] = rng.uniform() < keep ? 0.05 + rng.uniform() : 0.0;
      total += d[i];
    }
  }
  for (auto& x : d) x /= total;
  return d;
}

inline winnower::WordDistribution to_distribution(const Dense& d) {
  std::vector<winnower::WordDistribution::Entry> entries;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0) entries.emplace_back(static_cast<winnower::WordId>(i), d[i]);
  }
  return winnower::WordDistribution::from_probabilities(entries);
}

}  // namespace oracle
