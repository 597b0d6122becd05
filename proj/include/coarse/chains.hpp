#pragma once

#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "coarse/metric_space.hpp"
#include "coarse/rings.hpp"

namespace coarse {

/// Finitely supported chain on vertex tuples (the X^{n+1} chain model).
/// Tuples may repeat vertices; simplicial chains are the sorted special case.
template <class T>
struct Chain {
  int degree = -1;
  std::unordered_map<Tuple, T, TupleHash> terms;

  Chain() = default;
  explicit Chain(int deg) : degree(deg) {}

  bool zero() const { return terms.empty(); }

  void add(const Tuple& t, const T& v) {
    if (v == T(0)) return;
    auto [it, fresh] = terms.emplace(t, v);
    if (!fresh) {
      it->second += v;
      if (it->second == T(0)) terms.erase(it);
    }
  }

  void add_chain(const Chain& other, const T& scale) {
    for (const auto& [t, v] : other.terms) add(t, scale * v);
  }

  friend bool operator==(const Chain& a, const Chain& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (const auto& [t, v] : a.terms) {
      auto it = b.terms.find(t);
      if (it == b.terms.end() || !(it->second == v)) return false;
    }
    return true;
  }

  std::vector<PointId> support_points() const {
    std::unordered_set<PointId> s;
    for (const auto& [t, v] : terms) s.insert(t.begin(), t.end());
    std::vector<PointId> out(s.begin(), s.end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

template <class T>
Chain<T> single_tuple_chain(const Tuple& t) {
  Chain<T> c(static_cast<int>(t.size()) - 1);
  c.add(t, T(1));
  return c;
}

/// Alternating-sum boundary on tuple chains.
template <class T>
Chain<T> chain_boundary(const Chain<T>& c) {
  Chain<T> out(c.degree - 1);
  if (c.degree <= 0) return out;
  for (const auto& [t, v] : c.terms)
    for (std::size_t i = 0; i < t.size(); ++i) {
      Tuple f = t;
      f.erase(f.begin() + i);
      out.add(f, ring_sign<T>(static_cast<int>(i)) * v);
    }
  return out;
}

inline std::vector<Tuple> tuple_faces(const Tuple& t) {
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    Tuple f = t;
    f.erase(f.begin() + i);
    out.push_back(std::move(f));
  }
  return out;
}

/// Cone operator T_v: prepends the vertex v to every tuple.
template <class T>
Chain<T> cone(PointId v, const Chain<T>& c) {
  Chain<T> out(c.degree + 1);
  for (const auto& [t, coeff] : c.terms) {
    Tuple w;
    w.reserve(t.size() + 1);
    w.push_back(v);
    w.insert(w.end(), t.begin(), t.end());
    out.add(w, coeff);
  }
  return out;
}

/// Sum of coefficients (the augmentation of a 0-chain).
template <class T>
T augmentation(const Chain<T>& c) {
  T s(0);
  for (const auto& [t, v] : c.terms) s += v;
  return s;
}

/// Every support point lies within r of the tuple's vertex set.
template <class T>
bool chain_within(const FiniteMetricSpace& X, const Chain<T>& c, const Tuple& around, double r) {
  for (PointId p : c.support_points()) {
    double best = std::numeric_limits<double>::infinity();
    for (PointId q : around) best = std::min(best, X.dist(p, q));
    if (!approx_le(best, r)) return false;
  }
  return true;
}

/// Sort a tuple, tracking the permutation sign; nullopt for repeated vertices.
inline std::optional<std::pair<Tuple, int>> sort_with_sign(const Tuple& t) {
  Tuple s = t;
  int sign = 1;
  for (std::size_t i = 1; i < s.size(); ++i)
    for (std::size_t j = i; j > 0 && s[j] < s[j - 1]; --j) {
      std::swap(s[j], s[j - 1]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1]) return std::nullopt;
  return std::make_pair(std::move(s), sign);
}

}  // namespace coarse
