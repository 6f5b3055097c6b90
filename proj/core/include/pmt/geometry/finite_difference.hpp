#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "pmt/geometry/domain.hpp"

namespace pmt {

enum class Stencil { central, forward, backward };

struct FdOptions {
  double h = 1.0 / 16.0;
  int accuracy = 2;  // 2 or 4 (4 only for central stencils)
};

namespace detail {

struct Tap {
  int offset;
  double weight;
};

std::vector<Tap> first_taps(Stencil s, int accuracy);
std::vector<Tap> second_taps(Stencil s, int accuracy);

using Offset = std::array<std::int8_t, kMaxDim>;

template <class T, class F>
class OffsetCache {
 public:
  OffsetCache(F& f, const Vec& x, double h) : f_(f), x_(x), h_(h) {}

  const T& at(const Offset& o) {
    for (auto& e : items_)
      if (e.first == o) return e.second;
    Vec y = x_;
    for (int a = 0; a < x_.size(); ++a) y(a) += h_ * o[a];
    items_.emplace_back(o, f_(y));
    return items_.back().second;
  }

 private:
  F& f_;
  Vec x_;
  double h_;
  std::vector<std::pair<Offset, T>> items_;
};

}  // namespace detail

// finite-difference jet of f at x; order 0, 1 or 2
template <class T, class F>
Jet<T> fd_jet(F&& f, const Vec& x, int order, const std::vector<Stencil>& kinds,
              const FdOptions& opt) {
  const int n = static_cast<int>(x.size());
  detail::OffsetCache<T, std::remove_reference_t<F>> cache(f, x, opt.h);
  detail::Offset zero{};
  Jet<T> j;
  j.n = n;
  j.order = order;
  j.v = cache.at(zero);
  if (order < 1) return j;
  const double h = opt.h;
  std::vector<std::vector<detail::Tap>> t1(n);
  for (int a = 0; a < n; ++a) {
    int acc = kinds[a] == Stencil::central ? opt.accuracy : 2;
    t1[a] = detail::first_taps(kinds[a], acc);
  }
  j.d.resize(n);
  for (int a = 0; a < n; ++a) {
    T acc = j.v * 0.0;
    for (const auto& tp : t1[a]) {
      detail::Offset o{};
      o[a] = static_cast<std::int8_t>(tp.offset);
      acc += tp.weight * cache.at(o);
    }
    j.d[a] = acc / h;
  }
  if (order < 2) return j;
  j.dd.assign(n * n, j.v * 0.0);
  for (int a = 0; a < n; ++a) {
    int acc_order = kinds[a] == Stencil::central ? opt.accuracy : 2;
    T acc = j.v * 0.0;
    for (const auto& tp : detail::second_taps(kinds[a], acc_order)) {
      detail::Offset o{};
      o[a] = static_cast<std::int8_t>(tp.offset);
      acc += tp.weight * cache.at(o);
    }
    j.d2(a, a) = acc / (h * h);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      T acc = j.v * 0.0;
      for (const auto& ta : t1[a])
        for (const auto& tb : t1[b]) {
          detail::Offset o{};
          o[a] = static_cast<std::int8_t>(ta.offset);
          o[b] = static_cast<std::int8_t>(tb.offset);
          acc += (ta.weight * tb.weight) * cache.at(o);
        }
      j.d2(a, b) = acc / (h * h);
      j.d2(b, a) = j.d2(a, b);
    }
  return j;
}

// forward stencils on axes whose face is within reach of the stencil
std::vector<Stencil> face_aware_stencils(DomainKind kind, const Vec& x, double h, int order,
                                         int accuracy = 2);

std::vector<Stencil> central_stencils(int n);

}  // namespace pmt
