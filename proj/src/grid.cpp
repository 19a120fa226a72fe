#include "vfb/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace vfb {

RadialGrid::RadialGrid(int n_points) : n(n_points)
{
    if (n < 8)
        throw std::invalid_argument("RadialGrid: need at least 8 points");
    h = 1.0 / double(n - 1);
    r.resize(n);
    for (int j = 0; j < n; ++j) r[j] = double(j) * h;
    r.back() = 1.0;
}

namespace {

// Ghost value f(-k*h) from the parity of f about r=0.
inline double ghost(const std::vector<double>& f, int k, Parity p)
{
    return p == Parity::Odd ? -f[k] : f[k];
}

} // namespace

std::vector<double> d1(const std::vector<double>& f, double h, Parity p)
{
    const int n = int(f.size());
    std::vector<double> out(n);
    out[0] = (f[1] - ghost(f, 1, p)) / (2.0 * h);
    for (int j = 1; j + 1 < n; ++j)
        out[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return out;
}

std::vector<double> d2(const std::vector<double>& f, double h, Parity p)
{
    const int n = int(f.size());
    const double h2 = h * h;
    std::vector<double> out(n);
    out[0] = (f[1] - 2.0 * f[0] + ghost(f, 1, p)) / h2;
    for (int j = 1; j + 1 < n; ++j)
        out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return out;
}

std::vector<double> d3(const std::vector<double>& f, double h, Parity p)
{
    const int n = int(f.size());
    if (n < 6)
        throw std::invalid_argument("d3: need at least 6 points");
    const double h3 = h * h * h;
    std::vector<double> out(n);
    // centered 5-point: (-f[j-2] + 2 f[j-1] - 2 f[j+1] + f[j+2]) / (2h^3)
    out[0] = (-ghost(f, 2, p) + 2.0 * ghost(f, 1, p) - 2.0 * f[1] + f[2]) / (2.0 * h3);
    out[1] = (-ghost(f, 1, p) + 2.0 * f[0] - 2.0 * f[2] + f[3]) / (2.0 * h3);
    for (int j = 2; j + 2 < n; ++j)
        out[j] = (-f[j - 2] + 2.0 * f[j - 1] - 2.0 * f[j + 1] + f[j + 2]) / (2.0 * h3);
    // one-sided 5-point stencils, O(h^2)
    for (int j = n - 2; j < n; ++j) {
        out[j] = (5.0 * f[j] - 18.0 * f[j - 1] + 24.0 * f[j - 2]
                  - 14.0 * f[j - 3] + 3.0 * f[j - 4]) / (2.0 * h3);
    }
    return out;
}

std::vector<double> over_r(const std::vector<double>& f, const RadialGrid& g)
{
    std::vector<double> out(g.n);
    out[0] = (f[1] - (-f[1])) / (2.0 * g.h); // f'(0) for odd f
    for (int j = 1; j < g.n; ++j) out[j] = f[j] / g.r[j];
    return out;
}

double integrate_ball(const std::vector<double>& f, const RadialGrid& g)
{
    double sum = 0.0;
    for (int j = 0; j < g.n; ++j) {
        double wq = (j == 0 || j == g.n - 1) ? 0.5 : 1.0;
        sum += wq * f[j] * g.r[j] * g.r[j];
    }
    return 4.0 * M_PI * g.h * sum;
}

} // namespace vfb
