#include "jcw/fock_field.hpp"

#include <cmath>
#include <sstream>

namespace jcw {

namespace {

constexpr double kVacuumCutoff = 1e-14;  // |alpha0| below this is exact vacuum

void require_finite(Complex z, const char* name) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw InvalidParameterError(std::string(name) + " must be finite");
    }
}

// log of Poisson p_n with mean mu, n >= 0
double log_poisson(double mu, int n) {
    return -mu + n * std::log(mu) - std::lgamma(n + 1.0);
}

int poisson_cutoff(double mean, double eps_tail) {
    if (mean < kVacuumCutoff) return 0;
    double cum = 0.0;
    for (int n = 0; n < 100000; ++n) {
        cum += std::exp(log_poisson(mean, n));
        if (1.0 - cum < eps_tail) return n;
    }
    throw InvalidParameterError("Poisson tail did not converge");
}

int geometric_cutoff(double nbar, double eps_tail) {
    if (nbar < kVacuumCutoff) return 0;
    // tail past n is (nbar/(1+nbar))^{n+1}
    double lr = std::log(nbar / (1.0 + nbar));
    int n = static_cast<int>(std::ceil(std::log(eps_tail) / lr)) - 1;
    while ((n + 1) * lr >= std::log(eps_tail)) ++n;
    return std::max(n, 0);
}

}  // namespace

FieldState::FieldState(FieldKind kind, int nmax, Eigen::VectorXcd f,
                       Eigen::MatrixXcd rho, FieldSpec origin)
    : kind_(kind), nmax_(nmax), f_(std::move(f)), rho_(std::move(rho)),
      origin_(std::move(origin)) {}

FieldState FieldState::pure(Eigen::VectorXcd f, FieldSpec origin) {
    int nmax = static_cast<int>(f.size()) - 1;
    return FieldState(FieldKind::pure, nmax, std::move(f), {}, std::move(origin));
}

FieldState FieldState::mixed(Eigen::MatrixXcd rho, FieldSpec origin) {
    int nmax = static_cast<int>(rho.rows()) - 1;
    return FieldState(FieldKind::mixed, nmax, {}, std::move(rho), std::move(origin));
}

const Eigen::VectorXcd& FieldState::amplitudes() const {
    if (kind_ != FieldKind::pure) {
        throw InvalidParameterError("amplitudes() requires a pure state");
    }
    return f_;
}

const Eigen::MatrixXcd& FieldState::matrix() const {
    if (rho_.size() == 0) {
        rho_ = f_ * f_.adjoint();
        // force exact hermiticity of the stored matrix
        for (int n = 0; n < rho_.rows(); ++n) {
            rho_(n, n) = Complex(rho_(n, n).real(), 0.0);
            for (int m = n + 1; m < rho_.cols(); ++m) {
                rho_(m, n) = std::conj(rho_(n, m));
            }
        }
    }
    return rho_;
}

bool FieldState::is_diagonal(double tol) const {
    const auto& r = matrix();
    for (int n = 0; n < r.rows(); ++n) {
        for (int m = 0; m < r.cols(); ++m) {
            if (n != m && std::abs(r(n, m)) > tol) return false;
        }
    }
    return true;
}

double FieldState::trace() const {
    if (is_pure()) return f_.squaredNorm();
    return matrix().trace().real();
}

int choose_truncation(const FieldSpec& spec, double eps_tail) {
    if (!(eps_tail > 0.0) || eps_tail > 1e-3) {
        throw InvalidParameterError("eps_tail must lie in (0, 1e-3]");
    }
    int base = std::visit(
        [&](const auto& s) -> int {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CoherentSpec>) {
                require_finite(s.alpha0, "alpha0");
                return poisson_cutoff(std::norm(s.alpha0), eps_tail);
            } else if constexpr (std::is_same_v<T, CatSpec>) {
                require_finite(s.alpha0, "alpha0");
                // both branches share the Poisson envelope of |alpha0|^2
                return poisson_cutoff(std::norm(s.alpha0), eps_tail);
            } else if constexpr (std::is_same_v<T, ThermalSpec>) {
                if (!(s.nbar >= 0.0) || !std::isfinite(s.nbar)) {
                    throw InvalidParameterError("nbar must be finite and >= 0");
                }
                return geometric_cutoff(s.nbar, eps_tail);
            } else {
                if (s.n < 0) throw InvalidParameterError("Fock index must be >= 0");
                return s.n;
            }
        },
        spec);
    return base + 2;
}

FieldState make_coherent(Complex alpha0, int nmax, double eps_tail) {
    require_finite(alpha0, "alpha0");
    if (nmax < 0) throw InvalidParameterError("nmax must be >= 0");

    Eigen::VectorXcd f(nmax + 1);
    double r = std::abs(alpha0);
    if (r < kVacuumCutoff) {
        f.setZero();
        f(0) = 1.0;
        return FieldState::pure(std::move(f), CoherentSpec{alpha0});
    }
    double theta = std::arg(alpha0);
    for (int n = 0; n <= nmax; ++n) {
        // log-magnitude + phase, exponentiated once
        double lm = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
        f(n) = std::polar(std::exp(lm), n * theta);
    }
    double norm2 = f.squaredNorm();
    double tail = 1.0 - norm2;
    if (tail > eps_tail) {
        int need = choose_truncation(CoherentSpec{alpha0}, eps_tail);
        std::ostringstream msg;
        msg << "coherent state tail " << tail << " exceeds eps_tail " << eps_tail
            << " at nmax=" << nmax << "; need nmax>=" << need;
        throw TruncationError(msg.str(), need);
    }
    f /= std::sqrt(norm2);
    return FieldState::pure(std::move(f), CoherentSpec{alpha0});
}

double cat_normalization(Complex alpha0, double phi, int sign) {
    double a2 = std::norm(alpha0);
    if (std::abs(alpha0) < kVacuumCutoff) a2 = 0.0;
    double denom = 2.0 * (1.0 + sign * std::exp(-2.0 * a2) * std::cos(phi));
    if (!(denom > 0.0)) {
        throw InvalidParameterError("cat state norm is singular for these parameters");
    }
    return 1.0 / std::sqrt(denom);
}

FieldState make_cat(Complex alpha0, double phi, int sign, int nmax, double eps_tail) {
    require_finite(alpha0, "alpha0");
    if (sign != +1 && sign != -1) throw InvalidParameterError("cat sign must be +-1");
    if (nmax < 0) throw InvalidParameterError("nmax must be >= 0");
    double normalization = cat_normalization(alpha0, phi, sign);  // throws if singular

    double r = std::abs(alpha0);
    double theta = std::arg(alpha0);
    Eigen::VectorXcd f(nmax + 1);
    if (r < kVacuumCutoff) {
        // both branches are vacuum; normalization already validated
        f.setZero();
        f(0) = 1.0;
        return FieldState::pure(std::move(f), CatSpec{alpha0, phi, sign});
    }
    Complex rel = std::polar(1.0, phi) * static_cast<double>(sign);
    for (int n = 0; n <= nmax; ++n) {
        double lm = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
        // (-alpha0)^n = alpha0^n (-1)^n, taken exactly so parity zeros are exact
        double parity = (n % 2 == 0) ? 1.0 : -1.0;
        Complex branch = std::polar(1.0, n * theta) * (1.0 + rel * parity);
        f(n) = normalization * std::exp(lm) * branch;
    }
    double norm2 = f.squaredNorm();
    double tail = 1.0 - norm2;
    if (tail > eps_tail) {
        int need = choose_truncation(CatSpec{alpha0, phi, sign}, eps_tail);
        std::ostringstream msg;
        msg << "cat state tail " << tail << " exceeds eps_tail " << eps_tail
            << " at nmax=" << nmax << "; need nmax>=" << need;
        throw TruncationError(msg.str(), need);
    }
    f /= std::sqrt(norm2);
    return FieldState::pure(std::move(f), CatSpec{alpha0, phi, sign});
}

FieldState make_thermal(double nbar, int nmax) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw InvalidParameterError("nbar must be finite and >= 0");
    }
    if (nmax < 0) throw InvalidParameterError("nmax must be >= 0");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(nmax + 1, nmax + 1);
    if (nbar < kVacuumCutoff) {
        rho(0, 0) = 1.0;
    } else {
        double lr = std::log(nbar / (1.0 + nbar));
        double l0 = -std::log(1.0 + nbar);
        for (int n = 0; n <= nmax; ++n) {
            rho(n, n) = std::exp(l0 + n * lr);  // tails left as-is
        }
    }
    return FieldState::mixed(std::move(rho), ThermalSpec{nbar});
}

FieldState make_fock(int n, int nmax) {
    if (n < 0 || n > nmax - 2) {
        throw InvalidParameterError("Fock index must satisfy 0 <= n <= nmax-2");
    }
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(nmax + 1);
    f(n) = 1.0;
    return FieldState::pure(std::move(f), FockSpec{n});
}

FieldState make_field(const FieldSpec& spec, int nmax, double eps_tail) {
    return std::visit(
        [&](const auto& s) -> FieldState {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CoherentSpec>) {
                return make_coherent(s.alpha0, nmax, eps_tail);
            } else if constexpr (std::is_same_v<T, CatSpec>) {
                return make_cat(s.alpha0, s.phi, s.sign, nmax, eps_tail);
            } else if constexpr (std::is_same_v<T, ThermalSpec>) {
                return make_thermal(s.nbar, nmax);
            } else {
                return make_fock(s.n, nmax);
            }
        },
        spec);
}

FieldState to_density(const FieldState& state) {
    return FieldState::mixed(state.matrix(), state.origin());
}

}  // namespace jcw
