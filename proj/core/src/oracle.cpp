#include "jcw/oracle.hpp"

#include <cmath>
#include <sstream>

namespace jcw {
namespace oracle {

namespace {
constexpr double kSupportTol = 1e-12;
}  // namespace

Eigen::Matrix2cd block_propagator(int n, double g, double delta, double t) {
    Eigen::Matrix2d h;
    double coupling = g * std::sqrt(n + 1.0);
    h << 0.5 * delta, coupling, coupling, -0.5 * delta;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    const auto& v = es.eigenvectors();
    const auto& lam = es.eigenvalues();
    Eigen::Matrix2cd u = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 2; ++i) {
        Complex ph = std::polar(1.0, -lam(i) * t);
        u += ph * (v.col(i) * v.col(i).transpose()).cast<Complex>();
    }
    return u;
}

EvolveResult evolve(const FieldState& rho0, const AtomPrep& atom,
                    const ModelParams& params, int headroom) {
    params.validate();
    atom.validate();
    if (headroom < 0) throw InvalidParameterError("headroom must be >= 0");

    const int nfield = rho0.nmax();
    const int nbig = nfield + headroom;
    const int dimf = nbig + 1;
    const int dim = 2 * dimf;
    const double g = params.g;
    const double delta = params.delta_over_g * g;
    const double t = params.gt / g;

    // joint rho(0) = rho_atom (x) rho_field, a-block first
    Eigen::MatrixXcd rf0 = Eigen::MatrixXcd::Zero(dimf, dimf);
    rf0.topLeftCorner(nfield + 1, nfield + 1) = rho0.matrix();
    Eigen::MatrixXcd joint0 = Eigen::MatrixXcd::Zero(dim, dim);
    Complex ca = atom.Ca0, cb = atom.Cb0;
    joint0.topLeftCorner(dimf, dimf) = std::norm(ca) * rf0;
    joint0.bottomRightCorner(dimf, dimf) = std::norm(cb) * rf0;
    joint0.topRightCorner(dimf, dimf) = ca * std::conj(cb) * rf0;
    joint0.bottomLeftCorner(dimf, dimf) = cb * std::conj(ca) * rf0;

    // blockwise unitary; |b,0> and the unpaired |a,nbig> keep the frame
    // convention of the closed form (identity)
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    for (int n = 0; n < nbig; ++n) {
        Eigen::Matrix2cd ub = block_propagator(n, g, delta, t);
        int ia = n;             // |a,n>
        int ib = dimf + n + 1;  // |b,n+1>
        u(ia, ia) = ub(0, 0);
        u(ia, ib) = ub(0, 1);
        u(ib, ia) = ub(1, 0);
        u(ib, ib) = ub(1, 1);
    }

    EvolveResult out;
    out.joint.rho = u * joint0 * u.adjoint();
    out.joint.nmax = nbig;

    Eigen::MatrixXcd aa = out.joint.rho.topLeftCorner(dimf, dimf);
    Eigen::MatrixXcd bb = out.joint.rho.bottomRightCorner(dimf, dimf);
    out.inversion = aa.trace().real() - bb.trace().real();
    out.rho_aa = aa.topLeftCorner(nfield + 1, nfield + 1);
    out.rho_bb = bb.topLeftCorner(nfield + 1, nfield + 1);
    out.rho_f = out.rho_aa + out.rho_bb;
    return out;
}

Eigen::MatrixXcd displacement_operator(Complex alpha, int dim) {
    if (dim < 1) throw InvalidParameterError("dim must be >= 1");
    // M = alpha a^dag - alpha* a (anti-hermitian, tridiagonal)
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        double s = std::sqrt(n + 1.0);
        m(n + 1, n) = alpha * s;
        m(n, n + 1) = -std::conj(alpha) * s;
    }

    // scaling and squaring with a fixed-order Taylor core
    double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    int squarings = 0;
    while (norm > 0.5 && squarings < 60) {
        norm *= 0.5;
        ++squarings;
    }
    Eigen::MatrixXcd ms = m / std::pow(2.0, squarings);
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
    constexpr int kTaylorOrder = 18;
    for (int k = 1; k <= kTaylorOrder; ++k) {
        term = (term * ms) / static_cast<double>(k);
        result += term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

int wigner_required_dim(int support_dim, Complex alpha) {
    double aa = std::abs(alpha);
    return support_dim + static_cast<int>(std::ceil(aa * aa + 6.0 * aa + 10.0));
}

double wigner(const Eigen::MatrixXcd& rho, Complex alpha) {
    const int dim = static_cast<int>(rho.rows());
    int support = 1;
    for (int n = dim - 1; n >= 0; --n) {
        if (std::abs(rho(n, n)) > kSupportTol) {
            support = n + 1;
            break;
        }
    }
    int required = wigner_required_dim(support, alpha);
    if (dim < required) {
        std::ostringstream msg;
        msg << "oracle wigner needs basis dim >= " << required << " (support " << support
            << ", |alpha| = " << std::abs(alpha) << "), got " << dim;
        throw HeadroomError(msg.str(), required - 1);
    }

    Eigen::MatrixXcd d_plus = displacement_operator(alpha, dim);
    Eigen::MatrixXcd d_minus = displacement_operator(-alpha, dim);
    Eigen::MatrixXcd displaced = d_minus * rho * d_plus;
    // Tr[displaced * Pi], Pi = diag((-1)^n)
    Complex tr{};
    for (int n = 0; n < dim; ++n) {
        double parity = (n % 2 == 0) ? 1.0 : -1.0;
        tr += displaced(n, n) * parity;
    }
    if (std::abs(tr.imag()) > 1e-10) {
        throw NumericalOverflowError("oracle wigner trace has imaginary residue > 1e-10");
    }
    return (2.0 / M_PI) * tr.real();
}

}  // namespace oracle
}  // namespace jcw
