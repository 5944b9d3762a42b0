#ifndef ERGLAB_INDEXING_HPP
#define ERGLAB_INDEXING_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace erglab {

/// Which powers enter an average at horizon n/N and what divides the sum:
///   from_zero   (1/n) * sum_{k=0}^{n-1}   (Cesaro)
///   half_open   (1/N) * sum_{k=1}^{N-1}   (weighted one-parameter)
///   inclusive   (1/|n|) * sum_{k=1}^{n}   (multiparameter boxes)
enum class Convention { from_zero, half_open, inclusive };

/// Box horizon n = (n_1, ..., n_d), every component >= 1.
struct MultiIndex {
  std::vector<std::int64_t> n;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<std::int64_t> c) : n(c) { check(); }
  explicit MultiIndex(std::vector<std::int64_t> c) : n(std::move(c)) {
    check();
  }

  int dim() const { return static_cast<int>(n.size()); }

  std::int64_t volume() const {
    std::int64_t v = 1;
    for (std::int64_t c : n) v *= c;
    return v;
  }

  std::int64_t min_component() const {
    return *std::min_element(n.begin(), n.end());
  }

  bool operator==(const MultiIndex& o) const { return n == o.n; }

 private:
  void check() const {
    if (n.empty()) throw std::invalid_argument("MultiIndex: empty");
    for (std::int64_t c : n)
      if (c < 1)
        throw std::invalid_argument("MultiIndex: component " +
                                    std::to_string(c) + " < 1");
  }
};

}  // namespace erglab

#endif
