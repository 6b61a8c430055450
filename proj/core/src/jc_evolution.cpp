#include "jcw/jc_evolution.hpp"

#include <cmath>
#include <sstream>

namespace jcw {

namespace {

// Coefficient table indexed by n+1 so the n = -1 sentinel sits at slot 0.
struct CoeffTable {
    std::vector<Complex> r;
    std::vector<double> q;

    CoeffTable(int nmax, const ModelParams& params) : r(nmax + 2), q(nmax + 2) {
        for (int n = -1; n <= nmax; ++n) {
            auto c = rabi_coefficients(n, params);
            r[n + 1] = c.r;
            q[n + 1] = c.q;
        }
    }
    Complex rr(int n) const { return r[n + 1]; }
    double qq(int n) const { return q[n + 1]; }
};

// rho0(n, m) with out-of-range indices reading as exact zeros
class Rho0 {
public:
    explicit Rho0(const Eigen::MatrixXcd& rho) : rho_(rho), nmax_(static_cast<int>(rho.rows()) - 1) {}
    Complex operator()(int n, int m) const {
        if (n < 0 || m < 0 || n > nmax_ || m > nmax_) return {};
        return rho_(n, m);
    }

private:
    const Eigen::MatrixXcd& rho_;
    int nmax_;
};

void check_trace(const FieldState& rho0, const EvolvedField& out) {
    double drift = std::abs(out.rho_f.trace().real() - rho0.trace());
    if (drift > 1e-8) {
        std::ostringstream msg;
        msg << "trace drift " << drift << " after evolution; increase nmax beyond "
            << rho0.nmax();
        throw TruncationLeakError(msg.str(), drift);
    }
}

}  // namespace

RabiCoeffs rabi_coefficients(int n, const ModelParams& params) {
    params.validate();
    if (n < -1) throw InvalidParameterError("n must be >= -1");
    if (n == -1) return {n, Complex{1.0, 0.0}, 0.0, 0.0};

    double g = params.g;
    double delta = params.delta_over_g * g;
    double t = params.gt / g;
    double omega = std::sqrt(delta * delta + 4.0 * g * g * (n + 1.0));
    double half = 0.5 * omega * t;
    Complex r{std::cos(half), -(delta / omega) * std::sin(half)};
    double q = (2.0 * g * std::sqrt(n + 1.0) / omega) * std::sin(half);
    return {n, r, q, omega};
}

EvolvedField evolve_branches(const FieldState& rho0, const AtomPrep& atom,
                             const ModelParams& params) {
    params.validate();
    atom.validate();
    int nmax = rho0.nmax();
    if (nmax < 2) throw InvalidParameterError("nmax must be >= 2");

    const Eigen::MatrixXcd& rho_mat = rho0.matrix();
    Rho0 p0(rho_mat);
    CoeffTable c(nmax, params);

    Complex ca = atom.Ca0, cb = atom.Cb0;
    double wa = std::norm(ca), wb = std::norm(cb);
    Complex cab = Complex{0, 1} * ca * std::conj(cb);  // i C_a C_b*
    Complex cba = Complex{0, 1} * cb * std::conj(ca);  // i C_b C_a*

    EvolvedField out;
    out.gt = params.gt;
    out.rho_aa.resize(nmax + 1, nmax + 1);
    out.rho_bb.resize(nmax + 1, nmax + 1);

    // upper triangle, then mirror: hermiticity exact by construction
    for (int n = 0; n <= nmax; ++n) {
        for (int m = n; m <= nmax; ++m) {
            Complex aa = wa * c.rr(n) * std::conj(c.rr(m)) * p0(n, m) +
                         wb * c.qq(n) * c.qq(m) * p0(n + 1, m + 1) +
                         cab * c.rr(n) * c.qq(m) * p0(n, m + 1) -
                         cba * c.qq(n) * std::conj(c.rr(m)) * p0(n + 1, m);

            Complex bb = wb * std::conj(c.rr(n - 1)) * c.rr(m - 1) * p0(n, m) +
                         wa * c.qq(n - 1) * c.qq(m - 1) * p0(n - 1, m - 1) -
                         cab * c.qq(n - 1) * c.rr(m - 1) * p0(n - 1, m) +
                         cba * std::conj(c.rr(n - 1)) * c.qq(m - 1) * p0(n, m - 1);

            out.rho_aa(n, m) = aa;
            out.rho_bb(n, m) = bb;
            if (m != n) {
                out.rho_aa(m, n) = std::conj(aa);
                out.rho_bb(m, n) = std::conj(bb);
            } else {
                out.rho_aa(n, n) = Complex(aa.real(), 0.0);
                out.rho_bb(n, n) = Complex(bb.real(), 0.0);
            }
        }
    }
    out.rho_f = out.rho_aa + out.rho_bb;
    check_trace(rho0, out);
    return out;
}

EvolvedField evolve_field_diagonal(const FieldState& p0state, const AtomPrep& atom,
                                   const ModelParams& params) {
    params.validate();
    atom.validate();
    if (!p0state.is_diagonal()) {
        throw InvalidParameterError("evolve_field_diagonal requires a diagonal field");
    }
    int nmax = p0state.nmax();
    if (nmax < 2) throw InvalidParameterError("nmax must be >= 2");

    const Eigen::MatrixXcd& rho_mat = p0state.matrix();
    auto p = [&](int n) -> double {
        if (n < 0 || n > nmax) return 0.0;
        return rho_mat(n, n).real();
    };
    CoeffTable c(nmax, params);

    Complex ca = atom.Ca0, cb = atom.Cb0;
    double wa = std::norm(ca), wb = std::norm(cb);
    Complex cba = Complex{0, 1} * cb * std::conj(ca);

    EvolvedField out;
    out.gt = params.gt;
    out.rho_aa = Eigen::MatrixXcd::Zero(nmax + 1, nmax + 1);
    out.rho_bb = Eigen::MatrixXcd::Zero(nmax + 1, nmax + 1);

    for (int m = 0; m <= nmax; ++m) {
        // aa diagonal: |r_m|^2 |Ca|^2 p_m + q_m^2 |Cb|^2 p_{m+1}
        out.rho_aa(m, m) = wa * std::norm(c.rr(m)) * p(m) +
                           wb * c.qq(m) * c.qq(m) * p(m + 1);
        // bb diagonal: |r_{m-1}|^2 |Cb|^2 p_m + q_{m-1}^2 |Ca|^2 p_{m-1}
        out.rho_bb(m, m) = wb * std::norm(c.rr(m - 1)) * p(m) +
                           wa * c.qq(m - 1) * c.qq(m - 1) * p(m - 1);
        // single coherence band at n = m-1
        if (m >= 1) {
            int n = m - 1;
            Complex aa_band = -cba * c.qq(n) * std::conj(c.rr(m)) * p(m);
            Complex bb_band = cba * std::conj(c.rr(n - 1)) * c.qq(m - 1) * p(m - 1);
            out.rho_aa(n, m) = aa_band;
            out.rho_aa(m, n) = std::conj(aa_band);
            out.rho_bb(n, m) = bb_band;
            out.rho_bb(m, n) = std::conj(bb_band);
        }
    }
    out.rho_f = out.rho_aa + out.rho_bb;
    check_trace(p0state, out);
    return out;
}

double inversion(const FieldState& rho0, const AtomPrep& atom,
                 const ModelParams& params) {
    EvolvedField ev = rho0.is_diagonal() ? evolve_field_diagonal(rho0, atom, params)
                                         : evolve_branches(rho0, atom, params);
    return ev.rho_aa.trace().real() - ev.rho_bb.trace().real();
}

std::vector<std::pair<double, double>> inversion_series(
    const FieldState& rho0, const AtomPrep& atom, const ModelParams& params,
    const std::vector<double>& times) {
    for (size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] >= times[i - 1])) {
            throw InvalidParameterError("time samples must be monotone nondecreasing");
        }
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    for (double t : times) {
        ModelParams p = params;
        p.gt = t;
        out.emplace_back(t, inversion(rho0, atom, p));
    }
    return out;
}

}  // namespace jcw
