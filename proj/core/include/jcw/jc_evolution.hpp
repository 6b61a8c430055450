#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "jcw/fock_field.hpp"

namespace jcw {

// Dimensionless units: time is gt, detuning enters as Delta/g, g stored as 1.
struct ModelParams {
    double g = 1.0;
    double delta_over_g = 0.0;
    double gt = 0.0;

    void validate() const {
        if (!(g > 0.0)) throw InvalidParameterError("g must be > 0");
        if (!(gt >= 0.0) || !std::isfinite(gt)) {
            throw InvalidParameterError("gt must be finite and >= 0");
        }
    }
};

struct AtomPrep {
    Complex Ca0{1.0, 0.0};
    Complex Cb0{0.0, 0.0};

    void validate() const {
        double s = std::norm(Ca0) + std::norm(Cb0);
        if (std::abs(s - 1.0) > 1e-12) {
            throw InvalidParameterError("|C_a(0)|^2 + |C_b(0)|^2 must equal 1");
        }
    }
};

// r_n, q_n, Omega_n for the {|a,n>, |b,n+1>} doublet.
struct RabiCoeffs {
    int n;
    Complex r;
    double q;
    double omega;
};

// Branch blocks <n|rho_ss|m> and their sum, all on the field basis.
struct EvolvedField {
    Eigen::MatrixXcd rho_aa;
    Eigen::MatrixXcd rho_bb;
    Eigen::MatrixXcd rho_f;
    double gt = 0.0;
};

// n = -1 is the boundary sentinel: returns r = 1, q = 0.
RabiCoeffs rabi_coefficients(int n, const ModelParams& params);

EvolvedField evolve_branches(const FieldState& rho0, const AtomPrep& atom,
                             const ModelParams& params);

// Fast path for strictly diagonal initial fields: diagonal plus the
// delta_{n,m-1} coherence band.
EvolvedField evolve_field_diagonal(const FieldState& p0, const AtomPrep& atom,
                                   const ModelParams& params);

double inversion(const FieldState& rho0, const AtomPrep& atom,
                 const ModelParams& params);

std::vector<std::pair<double, double>> inversion_series(
    const FieldState& rho0, const AtomPrep& atom, const ModelParams& params,
    const std::vector<double>& times);

}  // namespace jcw
