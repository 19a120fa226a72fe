#pragma once

#include <vector>

namespace vfb {

// Uniform radial grid on [0,1], r_j = j*h, h = 1/(n-1).
struct RadialGrid {
    int n = 0;
    double h = 0.0;
    std::vector<double> r;

    explicit RadialGrid(int n_points);
};

// Parity of a radial profile about r=0, used for the ghost values in the
// centered stencils at the first nodes. Radial components of vector fields
// (phi, nu, theta) are odd; scalars like phi/r or phi_r are even.
enum class Parity { Odd, Even };

// All derivatives are second-order accurate: centered stencils inside,
// parity ghosts across r=0, one-sided stencils at r=1.
std::vector<double> d1(const std::vector<double>& f, double h, Parity p);
std::vector<double> d2(const std::vector<double>& f, double h, Parity p);
std::vector<double> d3(const std::vector<double>& f, double h, Parity p);

// f/r with the symmetric limit f'(0) at the origin (valid for odd f).
std::vector<double> over_r(const std::vector<double>& f, const RadialGrid& g);

// Trapezoid rule of f against the solid-angle measure 4*pi*r^2 dr on [0,1].
double integrate_ball(const std::vector<double>& f, const RadialGrid& g);

} // namespace vfb
