#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "niklab/errors.hpp"

namespace niklab {

/// Multi-index n in N^r.
struct MultiIndex {
  std::vector<int> parts;

  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> p) : parts(std::move(p)) { validate(); }
  MultiIndex(std::initializer_list<int> p) : parts(p) { validate(); }

  int r() const { return static_cast<int>(parts.size()); }
  int total() const { return std::accumulate(parts.begin(), parts.end(), 0); }

  bool same_parity() const {
    for (int p : parts)
      if ((p & 1) != (parts.front() & 1)) return false;
    return true;
  }
  bool all_odd() const {
    for (int p : parts)
      if (!(p & 1)) return false;
    return true;
  }
  bool all_even() const {
    for (int p : parts)
      if (p & 1) return false;
    return true;
  }
  bool nonincreasing() const {
    for (std::size_t j = 1; j < parts.size(); ++j)
      if (parts[j] > parts[j - 1]) return false;
    return true;
  }

  /// n_j >= max(n_{j+1},...,n_r) - 1 for every j < r.
  bool almost_nonincreasing() const {
    int suffix_max = 0;
    for (std::size_t j = parts.size(); j-- > 1;) {
      suffix_max = std::max(suffix_max, parts[j]);
      if (parts[j - 1] < suffix_max - 1) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      if (j) s += '|';
      s += std::to_string(parts[j]);
    }
    return s;
  }

  static MultiIndex parse(const std::string& text);

  bool operator==(const MultiIndex& o) const { return parts == o.parts; }
  bool operator<(const MultiIndex& o) const { return parts < o.parts; }

 private:
  void validate() const {
    if (parts.empty()) raise(ErrorCode::WrongArity, "multi-index needs r >= 1");
    for (int p : parts)
      if (p < 0) raise(ErrorCode::WrongArity, "multi-index parts must be >= 0");
  }
};

/// All indices with 1 <= |n| <= max_total, ordered lexicographically.
std::vector<MultiIndex> index_grid(int r, int max_total);

}  // namespace niklab
