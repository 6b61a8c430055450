#pragma once

#include <complex>
#include <variant>

#include <Eigen/Dense>

#include "jcw/errors.hpp"

namespace jcw {

using Complex = std::complex<double>;

enum class FieldKind { pure, mixed };

// Parameter sets for the supported initial fields.
struct CoherentSpec {
    Complex alpha0;
};
struct CatSpec {
    Complex alpha0;
    double phi = 0.0;  // relative phase of the second branch
    int sign = +1;     // +1 even-type cat, -1 odd-type
};
struct ThermalSpec {
    double nbar;
};
struct FockSpec {
    int n;
};
using FieldSpec = std::variant<CoherentSpec, CatSpec, ThermalSpec, FockSpec>;

constexpr double kDefaultEpsTail = 1e-10;

// Field state on the truncated Fock basis {|0>,...,|nmax>}.
// Pure states carry the amplitude vector f; mixed states the density matrix.
class FieldState {
public:
    static FieldState pure(Eigen::VectorXcd f, FieldSpec origin);
    static FieldState mixed(Eigen::MatrixXcd rho, FieldSpec origin);

    FieldKind kind() const { return kind_; }
    int nmax() const { return nmax_; }
    int dim() const { return nmax_ + 1; }
    bool is_pure() const { return kind_ == FieldKind::pure; }

    // Amplitudes; pure states only.
    const Eigen::VectorXcd& amplitudes() const;

    // Density matrix; materialized as f f^dagger for pure states.
    const Eigen::MatrixXcd& matrix() const;

    bool is_diagonal(double tol = 0.0) const;
    double trace() const;

    const FieldSpec& origin() const { return origin_; }

private:
    FieldState(FieldKind kind, int nmax, Eigen::VectorXcd f, Eigen::MatrixXcd rho,
               FieldSpec origin);

    FieldKind kind_;
    int nmax_;
    Eigen::VectorXcd f_;
    mutable Eigen::MatrixXcd rho_;  // lazy for pure states
    FieldSpec origin_;
};

// Smallest cutoff whose discarded probability tail is below eps_tail, plus a
// +2 pad so the evolution's n+1/m+1 reads land on exact zeros.
int choose_truncation(const FieldSpec& spec, double eps_tail);

FieldState make_coherent(Complex alpha0, int nmax, double eps_tail = kDefaultEpsTail);
FieldState make_cat(Complex alpha0, double phi, int sign, int nmax,
                    double eps_tail = kDefaultEpsTail);
FieldState make_thermal(double nbar, int nmax);
FieldState make_fock(int n, int nmax);

FieldState make_field(const FieldSpec& spec, int nmax, double eps_tail = kDefaultEpsTail);

// rho_nm = f_n conj(f_m); identity on already-mixed states.
FieldState to_density(const FieldState& state);

// Cat normalization N = 1/sqrt(2(1 + s e^{-2|a0|^2} cos phi)).
double cat_normalization(Complex alpha0, double phi, int sign);

}  // namespace jcw
