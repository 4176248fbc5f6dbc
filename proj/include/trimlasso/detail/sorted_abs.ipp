#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

namespace trimlasso {

template <typename Derived>
SortedMagnitudes sorted_abs(const Eigen::MatrixBase<Derived>& beta)
{
    const Index p = beta.size();
    SortedMagnitudes out;
    out.permutation.resize(static_cast<std::size_t>(p));
    std::iota(out.permutation.begin(), out.permutation.end(), Index{0});
    const auto mag = [&](Index i) { return std::abs(static_cast<double>(beta(i))); };
    std::stable_sort(out.permutation.begin(), out.permutation.end(),
                     [&](Index a, Index b) { return mag(a) > mag(b); });
    out.values.resize(p);
    for (Index i = 0; i < p; ++i) {
        out.values(i) = mag(out.permutation[static_cast<std::size_t>(i)]);
    }
    return out;
}

}  // namespace trimlasso
