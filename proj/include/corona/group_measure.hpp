#pragma once

// Finitely supported probability measures on PSL(2,Z) with exact weights.
//
// A measure is stored as integer counts over a common denominator:
// weight(h) = count(h) / total, with the counts summing to total. This keeps
// the l1 distance a single integer sum over a merged support.

#include "corona/integer.hpp"
#include "corona/modular_group.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace corona {

template <class Int, class Count = BigInt>
class basic_group_measure {
 public:
  using element_type = basic_psl_class<Int>;
  using atom = std::pair<element_type, Count>;

  /// The point mass at the identity.
  basic_group_measure() : atoms_{{element_type::identity(), Count(1)}}, total_(1) {}

  static basic_group_measure dirac(const element_type& g) {
    basic_group_measure m;
    m.atoms_.front().first = g;
    return m;
  }

  /// Counts may repeat an element; repeats are merged. Nonpositive counts throw.
  static basic_group_measure from_counts(std::vector<atom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("measure needs a nonempty support");
    std::sort(atoms.begin(), atoms.end(), [](const atom& x, const atom& y) { return x.first < y.first; });
    basic_group_measure m;
    m.atoms_.clear();
    m.total_ = Count(0);
    for (auto& [g, c] : atoms) {
      if (c <= Count(0)) throw std::invalid_argument("measure counts must be positive");
      m.total_ += c;
      if (!m.atoms_.empty() && m.atoms_.back().first == g)
        m.atoms_.back().second += c;
      else
        m.atoms_.emplace_back(std::move(g), std::move(c));
    }
    return m;
  }

  /// Uniform weight on a list of elements, multiplicities summed.
  static basic_group_measure uniform(const std::vector<element_type>& elements) {
    std::vector<atom> atoms;
    atoms.reserve(elements.size());
    for (const auto& g : elements) atoms.emplace_back(g, Count(1));
    return from_counts(std::move(atoms));
  }

  /// Exact rational weights; zero weights are dropped. Throws unless the
  /// weights are nonnegative and sum to exactly 1.
  static basic_group_measure from_weights(const std::vector<std::pair<element_type, Rational>>& weights) {
    BigInt den(1);
    Rational sum(0);
    for (const auto& [g, w] : weights) {
      if (w < 0) throw std::invalid_argument("negative weight");
      sum += w;
      den = boost::multiprecision::lcm(den, denominator(w));
    }
    if (sum != 1) throw std::invalid_argument("weights must sum to 1");
    std::vector<atom> atoms;
    for (const auto& [g, w] : weights) {
      if (w == 0) continue;
      atoms.emplace_back(g, from_big<Count>(numerator(w) * (den / denominator(w))));
    }
    return from_counts(std::move(atoms));
  }

  [[nodiscard]] const std::vector<atom>& atoms() const { return atoms_; }
  [[nodiscard]] const Count& total() const { return total_; }
  [[nodiscard]] std::size_t support_size() const { return atoms_.size(); }

  [[nodiscard]] Rational weight(const element_type& g) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), g,
                               [](const atom& a, const element_type& key) { return a.first < key; });
    if (it == atoms_.end() || it->first != g) return Rational(0);
    return make_rational(it->second, total_);
  }

  [[nodiscard]] Rational mass() const {
    Count sum(0);
    for (const auto& a : atoms_) sum += a.second;
    return make_rational(sum, total_);
  }

  /// (matrix text, "p/q") pairs sorted by canonical matrix form.
  [[nodiscard]] std::vector<std::pair<std::string, std::string>> entries() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(atoms_.size());
    for (const auto& [g, c] : atoms_) out.emplace_back(g.text(), rational_text(make_rational(c, total_)));
    return out;
  }

  [[nodiscard]] std::string text() const {
    std::string s = "{";
    for (const auto& [g, w] : entries()) {
      if (s.size() > 1) s += ", ";
      s += g + ": " + w;
    }
    return s + "}";
  }

  friend bool operator==(const basic_group_measure& x, const basic_group_measure& y) {
    if (x.atoms_.size() != y.atoms_.size()) return false;
    for (std::size_t i = 0; i < x.atoms_.size(); ++i) {
      if (x.atoms_[i].first != y.atoms_[i].first) return false;
      if (x.atoms_[i].second * y.total_ != y.atoms_[i].second * x.total_) return false;
    }
    return true;
  }

 private:
  std::vector<atom> atoms_;
  Count total_;
};

using GroupMeasure = basic_group_measure<BigInt>;

/// Left translation: (g mu)(h) = mu(g^-1 h).
template <class Int, class Count>
basic_group_measure<Int, Count> translate(const basic_group_element<Int>& g,
                                          const basic_group_measure<Int, Count>& mu) {
  std::vector<typename basic_group_measure<Int, Count>::atom> atoms;
  atoms.reserve(mu.support_size());
  for (const auto& [h, c] : mu.atoms()) atoms.emplace_back(basic_psl_class<Int>(g * h.element()), c);
  return basic_group_measure<Int, Count>::from_counts(std::move(atoms));
}

template <class Int, class Count>
basic_group_measure<Int, Count> translate(const basic_psl_class<Int>& g, const basic_group_measure<Int, Count>& mu) {
  return translate(g.element(), mu);
}

/// Numerator of the l1 distance over the denominator x.total() * y.total().
template <class Int, class Count>
Count l1_numerator(const basic_group_measure<Int, Count>& x, const basic_group_measure<Int, Count>& y) {
  const auto& a = x.atoms();
  const auto& b = y.atoms();
  const Count& dx = x.total();
  const Count& dy = y.total();
  Count sum(0);
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      sum += a[i++].second * dy;
    } else if (i == a.size() || b[j].first < a[i].first) {
      sum += b[j++].second * dx;
    } else {
      Count d = a[i++].second * dy - b[j++].second * dx;
      sum += d < Count(0) ? -d : d;
    }
  }
  return sum;
}

template <class Int, class Count>
Rational l1_distance(const basic_group_measure<Int, Count>& x, const basic_group_measure<Int, Count>& y) {
  return make_rational(l1_numerator(x, y), Count(x.total() * y.total()));
}

/// Uniform convex combination. Throws std::invalid_argument on an empty list.
template <class Int, class Count>
basic_group_measure<Int, Count> average(const std::vector<basic_group_measure<Int, Count>>& measures) {
  if (measures.empty()) throw std::invalid_argument("average of an empty list of measures");
  BigInt den(1);
  for (const auto& m : measures) den = boost::multiprecision::lcm(den, to_big(m.total()));
  std::vector<typename basic_group_measure<Int, Count>::atom> atoms;
  for (const auto& m : measures) {
    Count scale = from_big<Count>(den / to_big(m.total()));
    for (const auto& [g, c] : m.atoms()) atoms.emplace_back(g, c * scale);
  }
  return basic_group_measure<Int, Count>::from_counts(std::move(atoms));
}

}  // namespace corona
