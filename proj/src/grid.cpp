#include "navsim/grid.hpp"

#include <algorithm>

#include "navsim/errors.hpp"

namespace navsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Felzenszwalb & Huttenlocher lower envelope of parabolas over one line.
void squared_edt_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v, std::vector<double>& z)
{
    const int n = static_cast<int>(f.size());
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf)
            continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = 0.0;
        while (true) {
            const int p = v[k];
            s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
            if (s <= z[k] && k > 0) {
                --k;
                continue;
            }
            break;
        }
        if (s <= z[k]) {
            // k == 0 and the new parabola dominates everywhere.
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), kInf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q)
            ++j;
        const double diff = q - v[j];
        d[q] = diff * diff + f[v[j]];
    }
}

}  // namespace

std::vector<double> distance_transform(const GridGeometry& g, std::span<const std::uint8_t> sites)
{
    if (sites.size() != g.size())
        throw ContractError("distance_transform: site mask does not match grid size");
    const auto w = static_cast<std::size_t>(g.width);
    const auto h = static_cast<std::size_t>(g.height);
    const std::size_t n = std::max(w, h);
    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    std::vector<double> grid(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        grid[i] = sites[i] ? 0.0 : kInf;

    // Columns first, then rows.
    for (std::size_t c = 0; c < w; ++c) {
        for (std::size_t r = 0; r < h; ++r)
            f[r] = grid[r * w + c];
        squared_edt_1d(std::span(f).first(h), std::span(d).first(h), v, z);
        for (std::size_t r = 0; r < h; ++r)
            grid[r * w + c] = d[r];
    }
    for (std::size_t r = 0; r < h; ++r) {
        std::copy_n(grid.begin() + static_cast<std::ptrdiff_t>(r * w), w, f.begin());
        squared_edt_1d(std::span(f).first(w), std::span(d).first(w), v, z);
        for (std::size_t c = 0; c < w; ++c)
            grid[r * w + c] = std::sqrt(d[c]) * g.resolution;
    }
    return grid;
}

}  // namespace navsim
