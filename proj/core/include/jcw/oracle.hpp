#pragma once

#include <complex>

#include <Eigen/Dense>

#include "jcw/fock_field.hpp"
#include "jcw/jc_evolution.hpp"

namespace jcw {
namespace oracle {

// Joint atom-field density matrix over {|a,n>} (first block) then {|b,n>},
// dimension 2(nmax+1).
struct JointState {
    Eigen::MatrixXcd rho;
    int nmax = 0;
};

struct EvolveResult {
    JointState joint;
    Eigen::MatrixXcd rho_aa;  // truncated back to the input field basis
    Eigen::MatrixXcd rho_bb;
    Eigen::MatrixXcd rho_f;
    double inversion = 0.0;
};

// exp(-i H t) for one {|a,n>, |b,n+1>} doublet, H = [[delta/2, g sqrt(n+1)],
// [g sqrt(n+1), -delta/2]], via eigen-decomposition.
Eigen::Matrix2cd block_propagator(int n, double g, double delta, double t);

// Brute-force evolution by exact per-block diagonalization of the
// {|a,n>, |b,n+1>} doublets; shares no code with the closed-form path.
EvolveResult evolve(const FieldState& rho0, const AtomPrep& atom,
                    const ModelParams& params, int headroom = 10);

// Displacement operator exp(alpha a^dag - alpha* a) on a dim-dimensional
// truncated basis, by scaling-and-squaring with a Taylor core.
Eigen::MatrixXcd displacement_operator(Complex alpha, int dim);

// W(alpha) = (2/pi) Tr[D(-alpha) rho D(alpha) Pi].  Refuses without
// nmax headroom >= |alpha|^2 + 6|alpha| + 10 beyond the state's support.
double wigner(const Eigen::MatrixXcd& rho, Complex alpha);

// Smallest basis size wigner() accepts for this state support and alpha.
int wigner_required_dim(int support_dim, Complex alpha);

}  // namespace oracle
}  // namespace jcw
