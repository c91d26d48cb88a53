#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace coalitiond::detail {

// Heap's algorithm, iterative form. `visit` sees every permutation of `a` once.
template <typename T, typename Visit>
void for_each_permutation(std::vector<T>& a, Visit&& visit)
{
    const std::size_t n = a.size();
    std::vector<std::size_t> c(n, 0);
    visit(static_cast<const std::vector<T>&>(a));
    std::size_t i = 1;
    while (i < n) {
        if (c[i] < i) {
            if (i % 2 == 0)
                std::swap(a[0], a[i]);
            else
                std::swap(a[c[i]], a[i]);
            visit(static_cast<const std::vector<T>&>(a));
            ++c[i];
            i = 1;
        } else {
            c[i] = 0;
            ++i;
        }
    }
}

inline double factorial(std::size_t n)
{
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i)
        f *= static_cast<double>(i);
    return f;
}

} // namespace coalitiond::detail
