#pragma once

#include <complex>

#include <Eigen/Dense>

#include "jcw/fock_field.hpp"

namespace jcw {

// Square sampling window in the alpha plane.
struct GridSpec {
    Complex center{0.0, 0.0};
    double half_width = 4.0;
    double step = 0.05;

    int points_per_axis() const;
    void validate() const;
};

// Default window sized to the state's phase-space footprint.
GridSpec default_grid(const FieldSpec& spec);

struct WignerGrid {
    GridSpec spec;
    Eigen::MatrixXd values;  // values(i, j) = W(alpha_at(i, j))
    int nmax_used = 0;

    Complex alpha_at(int i, int j) const {
        double lo = -spec.half_width;
        return spec.center + Complex(lo + i * spec.step, lo + j * spec.step);
    }
};

// Associated Laguerre L_n^k(x) by the three-term upward recurrence.
double laguerre_assoc(int n, int k, double x);

// Laguerre-series Wigner transform of a truncated density matrix.
double wigner_point(const Eigen::MatrixXcd& rho, Complex alpha);

WignerGrid wigner_grid(const Eigen::MatrixXcd& rho, const GridSpec& spec,
                       bool serial = false);

// Midpoint rule, sum W * step^2.
double grid_integral(const WignerGrid& grid);

// Integral of the negative part, sum max(0, -W) * step^2.
double negativity_volume(const WignerGrid& grid);

// (2/pi) exp(-2|alpha - alpha0|^2)
double analytic_coherent_wigner(Complex alpha0, Complex alpha);

// (2/(pi(1+2nbar))) exp(-2|alpha|^2/(1+2nbar)), the closed form of the
// stationary thermal Laguerre sum.
double analytic_thermal_wigner(double nbar, Complex alpha);

struct CatSignature {
    double peak_plus = 0.0;   // max W within radius 1 of +alpha0
    double peak_minus = 0.0;  // max W within radius 1 of -alpha0
    Complex loc_plus{};
    Complex loc_minus{};
    double fringe_extremum = 0.0;  // extremal W within radius 0.5 of the origin
    int fringe_sign = 0;
};

CatSignature cat_signature(const WignerGrid& grid, Complex alpha0);

}  // namespace jcw
